use std::fmt;

use chrono::Weekday;

use super::{DaySelector, Mode, MonthOfYear, MonthSelector, Op, PatternSpec, WEEKDAY_NAMES};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PatternErrorKind {
    #[error("empty pattern")]
    Empty,
    #[error("unknown mode `{0}`, expected `temp` or `perm`")]
    UnknownMode(String),
    #[error("expected `:` after the mode")]
    ExpectedColon,
    #[error("expected `every`")]
    ExpectedEvery,
    #[error("expected a month selector")]
    MissingMonths,
    #[error("unknown month `{0}`")]
    UnknownMonth(String),
    #[error("expected a day selector after `on`")]
    MissingDays,
    #[error("unknown day `{0}`")]
    UnknownDay(String),
    #[error("day of month {0} is outside 01-31")]
    DayOutOfRange(u32),
    #[error("day range {0}-{1} is descending")]
    DescendingDayRange(u32, u32),
    #[error("weekday range {0}-{1} wraps past sunday")]
    WrappingWeekdayRange(String, String),
    #[error("missing operator, expected one of + - * / ^")]
    MissingOperator,
    #[error("unknown operator `{0}`, expected one of + - * / ^")]
    UnknownOperator(char),
    #[error("missing number after the operator")]
    MissingOperand,
    #[error("`{0}` is not a number")]
    InvalidOperand(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent")]
    NegativeExponent,
    #[error("unexpected trailing input `{0}`")]
    TrailingInput(String),
}

/// A rejected pattern. `offset` is the byte offset of the offending token in
/// the text handed to the parser.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct PatternError {
    pub offset: usize,
    pub kind: PatternErrorKind,
}

impl PatternError {
    /// 1-based column.
    pub fn column(&self) -> usize {
        self.offset + 1
    }
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column(), self.kind)
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn word(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        (start, self.take_while(|c| c.is_ascii_alphanumeric()))
    }

    fn err<T>(&self, offset: usize, kind: PatternErrorKind) -> Result<T, PatternError> {
        Err(PatternError { offset, kind })
    }

    /// Consumes `-` when it sits directly between two tokens, as in `jun-aug`
    /// or `25-30`, and the following character satisfies `next`.
    fn range_dash(&mut self, next: impl Fn(char) -> bool) -> bool {
        let rest = &self.text[self.pos..];
        let mut chars = rest.chars();
        if chars.next() == Some('-') && chars.next().is_some_and(next) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

/// Parses one pattern, e.g. `temp: every jun-aug on weekends /2`.
///
/// Keywords are case-insensitive and whitespace is free between tokens,
/// except that range dashes (`jun-aug`, `25-30`, `mon-fri`) must touch both
/// bounds. The `on <days>` clause is optional.
pub fn parse_pattern(text: &str) -> Result<PatternSpec, PatternError> {
    let mut cur = Cursor { text, pos: 0 };

    let (at, mode_word) = cur.word();
    let mode = if mode_word.eq_ignore_ascii_case("temp") {
        Mode::Temp
    } else if mode_word.eq_ignore_ascii_case("perm") {
        Mode::Perm
    } else if mode_word.is_empty() && cur.peek().is_none() {
        return cur.err(at, PatternErrorKind::Empty);
    } else {
        let shown = if mode_word.is_empty() {
            cur.peek().map(String::from).unwrap_or_default()
        } else {
            mode_word.to_string()
        };
        return cur.err(at, PatternErrorKind::UnknownMode(shown));
    };

    cur.skip_ws();
    if cur.peek() != Some(':') {
        return cur.err(cur.pos, PatternErrorKind::ExpectedColon);
    }
    cur.pos += 1;

    let (at, every) = cur.word();
    if !every.eq_ignore_ascii_case("every") {
        return cur.err(at, PatternErrorKind::ExpectedEvery);
    }

    let months = parse_months(&mut cur)?;

    let save = cur.pos;
    let (_, on) = cur.word();
    let days = if on.eq_ignore_ascii_case("on") {
        parse_days(&mut cur)?
    } else {
        cur.pos = save;
        DaySelector::Empty
    };

    cur.skip_ws();
    let op_at = cur.pos;
    let op = match cur.peek() {
        Some('+') => Op::Add,
        Some('-') => Op::Sub,
        Some('*') => Op::Mul,
        Some('/') => Op::Div,
        Some('^') => Op::Pow,
        None => return cur.err(op_at, PatternErrorKind::MissingOperator),
        Some(c) if c.is_ascii_digit() || c == '.' => {
            return cur.err(op_at, PatternErrorKind::MissingOperator)
        }
        Some(c) => return cur.err(op_at, PatternErrorKind::UnknownOperator(c)),
    };
    cur.pos += 1;

    cur.skip_ws();
    let num_at = cur.pos;
    let literal = cur.take_while(|c| !c.is_whitespace());
    if literal.is_empty() {
        return cur.err(num_at, PatternErrorKind::MissingOperand);
    }
    let operand = parse_number(literal)
        .ok_or_else(|| PatternError {
            offset: num_at,
            kind: PatternErrorKind::InvalidOperand(literal.to_string()),
        })?;
    match op {
        Op::Div if operand == 0.0 => return cur.err(num_at, PatternErrorKind::DivisionByZero),
        Op::Pow if operand < 0.0 => return cur.err(num_at, PatternErrorKind::NegativeExponent),
        _ => {}
    }

    cur.skip_ws();
    if cur.pos < text.len() {
        return cur.err(cur.pos, PatternErrorKind::TrailingInput(text[cur.pos..].to_string()));
    }

    Ok(PatternSpec {
        mode,
        months,
        days,
        op,
        operand,
    })
}

/// Signed decimal literal: `10`, `2.5`, `.5`, `-3`. No exponent notation.
fn parse_number(literal: &str) -> Option<f64> {
    let digits = literal.strip_prefix(['+', '-']).unwrap_or(literal);
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let well_formed = !(int.is_empty() && frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit());
    well_formed
        .then(|| literal.parse::<f64>().ok())
        .flatten()
        .filter(|v| v.is_finite())
}

fn parse_months(cur: &mut Cursor<'_>) -> Result<MonthSelector, PatternError> {
    let (at, word) = cur.word();
    if word.is_empty() {
        return cur.err(at, PatternErrorKind::MissingMonths);
    }
    if word.eq_ignore_ascii_case("month") {
        return Ok(MonthSelector::EveryMonth);
    }
    let month = |at: usize, w: &str| {
        MonthOfYear::from_name(w).ok_or_else(|| PatternError {
            offset: at,
            kind: PatternErrorKind::UnknownMonth(w.to_string()),
        })
    };
    let start = month(at, word)?;
    if cur.range_dash(|c| c.is_ascii_alphabetic()) {
        let (at, word) = cur.word();
        let end = month(at, word)?;
        Ok(MonthSelector::Range(start, end))
    } else {
        Ok(MonthSelector::Single(start))
    }
}

fn weekday(word: &str) -> Option<Weekday> {
    const DAYS: [Weekday; 7] = [
        Weekday::Mon,
        Weekday::Tue,
        Weekday::Wed,
        Weekday::Thu,
        Weekday::Fri,
        Weekday::Sat,
        Weekday::Sun,
    ];
    WEEKDAY_NAMES
        .iter()
        .position(|n| n.eq_ignore_ascii_case(word))
        .map(|i| DAYS[i])
}

fn parse_days(cur: &mut Cursor<'_>) -> Result<DaySelector, PatternError> {
    let (at, word) = cur.word();
    if word.is_empty() {
        return cur.err(at, PatternErrorKind::MissingDays);
    }
    if word.bytes().all(|b| b.is_ascii_digit()) {
        let first = day_of_month(cur, at, word)?;
        if cur.range_dash(|c| c.is_ascii_digit()) {
            let (at2, word2) = cur.word();
            let last = day_of_month(cur, at2, word2)?;
            if last < first {
                return cur.err(at, PatternErrorKind::DescendingDayRange(first, last));
            }
            return Ok(DaySelector::DayOfMonthRange(first, last));
        }
        return Ok(DaySelector::DayOfMonth(first));
    }
    let lower = word.to_ascii_lowercase();
    match lower.as_str() {
        "everyday" => return Ok(DaySelector::Everyday),
        "weekdays" => return Ok(DaySelector::Weekdays),
        "weekends" => return Ok(DaySelector::Weekends),
        _ => {}
    }
    let Some(first) = weekday(word) else {
        return cur.err(at, PatternErrorKind::UnknownDay(word.to_string()));
    };
    if cur.range_dash(|c| c.is_ascii_alphabetic()) {
        let (at2, word2) = cur.word();
        let Some(last) = weekday(word2) else {
            return cur.err(at2, PatternErrorKind::UnknownDay(word2.to_string()));
        };
        if last.num_days_from_monday() < first.num_days_from_monday() {
            return cur.err(
                at,
                PatternErrorKind::WrappingWeekdayRange(word.to_string(), word2.to_string()),
            );
        }
        return Ok(DaySelector::DayOfWeekRange(first, last));
    }
    Ok(DaySelector::DayOfWeek(first))
}

fn day_of_month(cur: &Cursor<'_>, at: usize, word: &str) -> Result<u32, PatternError> {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_digit()) {
        return cur.err(at, PatternErrorKind::UnknownDay(word.to_string()));
    }
    match word.parse::<u32>() {
        Ok(d) if (1..=31).contains(&d) && word.len() <= 2 => Ok(d),
        Ok(d) => cur.err(at, PatternErrorKind::DayOutOfRange(d)),
        Err(_) => cur.err(at, PatternErrorKind::DayOutOfRange(u32::MAX)),
    }
}

/// Parses a comma- or newline-separated block of patterns. Blank entries
/// are skipped; error offsets are relative to the whole block.
pub fn parse_patterns(block: &str) -> Result<Vec<PatternSpec>, PatternError> {
    let mut specs = Vec::new();
    let mut start = 0;
    for piece in block.split([',', '\n']) {
        if !piece.trim().is_empty() {
            let spec = parse_pattern(piece).map_err(|e| PatternError {
                offset: e.offset + start,
                kind: e.kind,
            })?;
            specs.push(spec);
        }
        start += piece.len() + 1;
    }
    Ok(specs)
}
