use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{parse_pattern, DaySelector, Mode, PatternError, PatternSpec};
use crate::calendar::{month_range, YearMonth};

/// How a resource is billed: stocks by their time-averaged level
/// (GB-month), flows by the monthly sum of daily consumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceClass {
    Stock,
    Flow,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("pattern {pattern} produced a non-finite value on {date}")]
    NotFinite { date: NaiveDate, pattern: usize },
    #[error("{date} is before the simulation start {start}")]
    BeforeStart { date: NaiveDate, start: YearMonth },
}

/// A pattern result that went negative and was clamped to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClampEvent {
    pub date: NaiveDate,
    /// Index of the pattern in declaration order.
    pub pattern: usize,
}

/// Baseline usage plus ordered elasticity patterns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UsageSchedule {
    pub class: ResourceClass,
    pub baseline: f64,
    pub patterns: Vec<PatternSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonthlySeries {
    pub months: Vec<(YearMonth, f64)>,
    pub clamps: Vec<ClampEvent>,
}

impl UsageSchedule {
    pub fn new(class: ResourceClass, baseline: f64, patterns: Vec<PatternSpec>) -> Self {
        Self {
            class,
            baseline,
            patterns,
        }
    }

    /// Parses each text as one pattern; the error carries the index of the
    /// failing entry.
    pub fn from_texts<S: AsRef<str>>(
        class: ResourceClass,
        baseline: f64,
        texts: &[S],
    ) -> Result<Self, (usize, PatternError)> {
        let patterns = texts
            .iter()
            .enumerate()
            .map(|(i, t)| parse_pattern(t.as_ref()).map_err(|e| (i, e)))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(class, baseline, patterns))
    }

    /// Value on `date`: the persistent level (a GB level for stocks, or the
    /// level spread evenly over the month's days for flows) after all
    /// matching temporary patterns.
    pub fn evaluate_day(&self, date: NaiveDate, sim_start: YearMonth) -> Result<f64, EvalError> {
        let target = YearMonth::of(date);
        if target < sim_start {
            return Err(EvalError::BeforeStart {
                date,
                start: sim_start,
            });
        }
        let mut replay = Replay::new(self, sim_start);
        for month in month_range(sim_start, target) {
            for day in month.days() {
                let value = replay.step(day, month)?;
                if day == date {
                    return Ok(value.value);
                }
            }
        }
        unreachable!("date lies inside the replayed range")
    }

    pub fn monthly_quantity(&self, month: YearMonth, sim_start: YearMonth) -> Result<f64, EvalError> {
        let series = self.series(sim_start, month, month)?;
        Ok(series.months[0].1)
    }

    /// Billable quantity for each month in `from..=to`, replaying patterns
    /// from `sim_start`. Months before `from` are simulated but not reported.
    ///
    /// Within a month, consecutive days at one unchanged level with no
    /// temporary pattern form a run contributing `level × (run/days)`; each
    /// day touched by a temporary pattern contributes its own value
    /// (`value × (1/days)` for stocks). Contributions add in day order.
    pub fn series(
        &self,
        sim_start: YearMonth,
        from: YearMonth,
        to: YearMonth,
    ) -> Result<MonthlySeries, EvalError> {
        if from < sim_start {
            return Err(EvalError::BeforeStart {
                date: from.first_day(),
                start: sim_start,
            });
        }
        let mut replay = Replay::new(self, sim_start);
        let mut months = Vec::new();
        for month in month_range(sim_start, to) {
            let total = replay.month_total(month)?;
            if month >= from {
                months.push((month, total));
            }
        }
        Ok(MonthlySeries {
            months,
            clamps: replay.clamps,
        })
    }
}

pub fn evaluate_day(
    schedule: &UsageSchedule,
    date: NaiveDate,
    sim_start: YearMonth,
) -> Result<f64, EvalError> {
    schedule.evaluate_day(date, sim_start)
}

pub fn monthly_quantity(
    schedule: &UsageSchedule,
    month: YearMonth,
    sim_start: YearMonth,
) -> Result<f64, EvalError> {
    schedule.monthly_quantity(month, sim_start)
}

struct DayValue {
    value: f64,
    touched: bool,
}

struct Replay<'a> {
    schedule: &'a UsageSchedule,
    sim_start: YearMonth,
    level: f64,
    clamps: Vec<ClampEvent>,
}

impl<'a> Replay<'a> {
    fn new(schedule: &'a UsageSchedule, sim_start: YearMonth) -> Self {
        Self {
            schedule,
            sim_start,
            level: schedule.baseline,
            clamps: Vec::new(),
        }
    }

    fn apply(&mut self, index: usize, pattern: &PatternSpec, value: f64, date: NaiveDate) -> Result<f64, EvalError> {
        let out = pattern.apply(value);
        if !out.is_finite() {
            return Err(EvalError::NotFinite {
                date,
                pattern: index,
            });
        }
        if out < 0.0 {
            self.clamps.push(ClampEvent {
                date,
                pattern: index,
            });
        }
        // also folds -0.0 into +0.0
        Ok(if out <= 0.0 { 0.0 } else { out })
    }

    fn step(&mut self, date: NaiveDate, month: YearMonth) -> Result<DayValue, EvalError> {
        let first_month = month == self.sim_start;
        let schedule = self.schedule;
        let patterns = &schedule.patterns;
        for (i, p) in patterns.iter().enumerate() {
            if p.mode != Mode::Perm {
                continue;
            }
            let fires = match p.days {
                DaySelector::Empty => !first_month && p.matches(date),
                _ => p.matches(date),
            };
            if fires {
                self.level = self.apply(i, p, self.level, date)?;
            }
        }

        let days = month.days_in_month() as f64;
        let mut value = match self.schedule.class {
            ResourceClass::Stock => self.level,
            ResourceClass::Flow => self.level / days,
        };
        let mut touched = false;
        for (i, p) in patterns.iter().enumerate() {
            if p.mode == Mode::Temp && p.matches(date) {
                touched = true;
                value = self.apply(i, p, value, date)?;
            }
        }
        debug_assert_eq!(date.month(), month.month());
        Ok(DayValue { value, touched })
    }

    fn month_total(&mut self, month: YearMonth) -> Result<f64, EvalError> {
        let days = month.days_in_month() as f64;
        let mut total = 0.0;
        let mut run_level = self.level;
        let mut run_len = 0u32;
        for date in month.days() {
            let day = self.step(date, month)?;
            if run_len > 0 && (day.touched || self.level != run_level) {
                total += run_level * (run_len as f64 / days);
                run_len = 0;
            }
            if day.touched {
                total += match self.schedule.class {
                    ResourceClass::Stock => day.value * (1.0 / days),
                    ResourceClass::Flow => day.value,
                };
            } else {
                if run_len == 0 {
                    run_level = self.level;
                }
                run_len += 1;
            }
        }
        if run_len > 0 {
            total += run_level * (run_len as f64 / days);
        }
        Ok(total)
    }
}
