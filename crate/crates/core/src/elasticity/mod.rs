//! Elasticity patterns: a one-line rule language for varying a resource's
//! baseline usage over the calendar, and the evaluator that turns a baseline
//! plus patterns into daily values and monthly billable quantities.
//!
//! ```text
//! perm: every month +10
//! temp: every jun-aug on weekends /2
//! temp: every dec on 25-30 * 2
//! ```
//!
//! `perm` patterns mutate the running level and persist; `temp` patterns
//! transform only the days they match. A `perm` pattern without a day clause
//! fires once at the start of each matching month after the first simulated
//! month; one with a day clause fires at the start of each matching day.

mod eval;
mod parse;

use std::fmt;

use chrono::{Datelike, NaiveDate, Weekday};
use serde::Serialize;

pub use eval::{evaluate_day, monthly_quantity, ClampEvent, EvalError, MonthlySeries, ResourceClass, UsageSchedule};
pub use parse::{parse_pattern, parse_patterns, PatternError, PatternErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Temp,
    Perm,
}

/// Month of the year, January = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonthOfYear(u8);

impl MonthOfYear {
    pub const NAMES: [&'static str; 12] = [
        "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
    ];

    pub fn new(number: u32) -> Option<Self> {
        (1..=12).contains(&number).then_some(Self(number as u8))
    }

    pub fn number(self) -> u32 {
        self.0 as u32
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self.0 as usize - 1]
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::NAMES
            .iter()
            .position(|n| n.eq_ignore_ascii_case(name))
            .map(|i| Self(i as u8 + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonthSelector {
    EveryMonth,
    Single(MonthOfYear),
    /// Inclusive; wraps across the year end when `start > end`.
    Range(MonthOfYear, MonthOfYear),
}

impl MonthSelector {
    pub fn contains(self, month: u32) -> bool {
        match self {
            MonthSelector::EveryMonth => true,
            MonthSelector::Single(m) => m.number() == month,
            MonthSelector::Range(start, end) if start <= end => {
                (start.number()..=end.number()).contains(&month)
            }
            MonthSelector::Range(start, end) => month >= start.number() || month <= end.number(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DaySelector {
    /// No `on` clause.
    Empty,
    Everyday,
    Weekdays,
    Weekends,
    DayOfMonth(u32),
    DayOfMonthRange(u32, u32),
    DayOfWeek(#[serde(serialize_with = "ser_weekday")] Weekday),
    DayOfWeekRange(
        #[serde(serialize_with = "ser_weekday")] Weekday,
        #[serde(serialize_with = "ser_weekday")] Weekday,
    ),
}

fn ser_weekday<S: serde::Serializer>(day: &Weekday, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(weekday_name(*day))
}

pub(crate) const WEEKDAY_NAMES: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];

fn weekday_name(day: Weekday) -> &'static str {
    WEEKDAY_NAMES[day.num_days_from_monday() as usize]
}

impl DaySelector {
    /// Whether `date` is selected. `Empty` selects every day here; the
    /// mode-specific meaning of an empty clause is applied by
    /// [`PatternSpec::matches`].
    pub fn contains(self, date: NaiveDate) -> bool {
        let weekday = date.weekday().num_days_from_monday();
        match self {
            DaySelector::Empty | DaySelector::Everyday => true,
            DaySelector::Weekdays => weekday < 5,
            DaySelector::Weekends => weekday >= 5,
            DaySelector::DayOfMonth(d) => date.day() == d,
            DaySelector::DayOfMonthRange(a, b) => (a..=b).contains(&date.day()),
            DaySelector::DayOfWeek(d) => weekday == d.num_days_from_monday(),
            DaySelector::DayOfWeekRange(a, b) => {
                (a.num_days_from_monday()..=b.num_days_from_monday()).contains(&weekday)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Op {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
    #[serde(rename = "^")]
    Pow,
}

impl Op {
    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
            Op::Pow => '^',
        }
    }

    pub fn apply(self, value: f64, operand: f64) -> f64 {
        match self {
            Op::Add => value + operand,
            Op::Sub => value - operand,
            Op::Mul => value * operand,
            Op::Div => value / operand,
            // powf(0, 0) is 1
            Op::Pow => value.powf(operand),
        }
    }
}

/// One parsed elasticity pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternSpec {
    pub mode: Mode,
    pub months: MonthSelector,
    pub days: DaySelector,
    pub op: Op,
    pub operand: f64,
}

impl PatternSpec {
    /// Whether the pattern applies on `date`. An empty day clause selects
    /// only the first day of a matching month for `perm` (the month-boundary
    /// firing) and every day of a matching month for `temp`.
    pub fn matches(&self, date: NaiveDate) -> bool {
        if !self.months.contains(date.month()) {
            return false;
        }
        match (self.mode, self.days) {
            (Mode::Perm, DaySelector::Empty) => date.day() == 1,
            (_, days) => days.contains(date),
        }
    }

    pub fn apply(&self, value: f64) -> f64 {
        self.op.apply(value, self.operand)
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Temp => "temp",
            Mode::Perm => "perm",
        };
        write!(f, "{mode}: every ")?;
        match self.months {
            MonthSelector::EveryMonth => write!(f, "month")?,
            MonthSelector::Single(m) => write!(f, "{}", m.name())?,
            MonthSelector::Range(a, b) => write!(f, "{}-{}", a.name(), b.name())?,
        }
        match self.days {
            DaySelector::Empty => {}
            DaySelector::Everyday => write!(f, " on everyday")?,
            DaySelector::Weekdays => write!(f, " on weekdays")?,
            DaySelector::Weekends => write!(f, " on weekends")?,
            DaySelector::DayOfMonth(d) => write!(f, " on {d:02}")?,
            DaySelector::DayOfMonthRange(a, b) => write!(f, " on {a:02}-{b:02}")?,
            DaySelector::DayOfWeek(d) => write!(f, " on {}", weekday_name(d))?,
            DaySelector::DayOfWeekRange(a, b) => {
                write!(f, " on {}-{}", weekday_name(a), weekday_name(b))?
            }
        }
        // `{:?}` on f64 prints the shortest string that round-trips.
        write!(f, " {}{:?}", self.op.symbol(), self.operand)
    }
}
