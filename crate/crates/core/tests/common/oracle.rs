//! Day-by-day replay of elasticity schedules on a self-contained calendar.

use cloudcost_core::calendar::YearMonth;
use cloudcost_core::elasticity::{ResourceClass, UsageSchedule};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MONTHS: [&str; 12] = ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"];
pub const WEEKDAYS: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];

pub fn leap(y: i32) -> bool {
    (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
}

pub fn month_len(y: i32, m: u32) -> u32 {
    match m {
        2 if leap(y) => 29,
        2 => 28,
        4 | 6 | 9 | 11 => 30,
        _ => 31,
    }
}

/// Sakamoto's method; 0 = Monday.
pub fn weekday(y: i32, m: u32, d: u32) -> u32 {
    const T: [i32; 12] = [0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4];
    let y = if m < 3 { y - 1 } else { y };
    let sunday_based = (y + y / 4 - y / 100 + y / 400 + T[m as usize - 1] + d as i32).rem_euclid(7);
    ((sunday_based + 6) % 7) as u32
}

#[derive(Debug, Clone, Copy)]
pub enum Months {
    Every,
    One(u32),
    Span(u32, u32),
}

#[derive(Debug, Clone, Copy)]
pub enum Days {
    Empty,
    Everyday,
    Weekdays,
    Weekends,
    Dom(u32),
    DomSpan(u32, u32),
    Dow(u32),
    DowSpan(u32, u32),
}

#[derive(Debug, Clone, Copy)]
pub struct Pat {
    pub perm: bool,
    pub months: Months,
    pub days: Days,
    pub op: char,
    pub operand: f64,
    pub text_operand: &'static str,
}

impl Pat {
    pub fn text(&self, rng: &mut ChaCha8Rng) -> String {
        let mode = if self.perm { "perm" } else { "temp" };
        let months = match self.months {
            Months::Every => "month".to_string(),
            Months::One(m) => MONTHS[m as usize - 1].to_string(),
            Months::Span(a, b) => format!("{}-{}", MONTHS[a as usize - 1], MONTHS[b as usize - 1]),
        };
        let pad = |d: u32, rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { format!("{d:02}") } else { d.to_string() };
        let days = match self.days {
            Days::Empty => String::new(),
            Days::Everyday => " on everyday".into(),
            Days::Weekdays => " on weekdays".into(),
            Days::Weekends => " on weekends".into(),
            Days::Dom(d) => format!(" on {}", pad(d, rng)),
            Days::DomSpan(a, b) => format!(" on {}-{}", pad(a, rng), pad(b, rng)),
            Days::Dow(d) => format!(" on {}", WEEKDAYS[d as usize]),
            Days::DowSpan(a, b) => format!(" on {}-{}", WEEKDAYS[a as usize], WEEKDAYS[b as usize]),
        };
        let gap = if rng.gen_bool(0.5) { " " } else { "" };
        let text = format!("{mode}: every {months}{days} {}{gap}{}", self.op, self.text_operand);
        if rng.gen_bool(0.2) {
            text.to_uppercase()
        } else {
            text
        }
    }

    pub fn month_matches(&self, m: u32) -> bool {
        match self.months {
            Months::Every => true,
            Months::One(x) => x == m,
            Months::Span(a, b) if a <= b => a <= m && m <= b,
            Months::Span(a, b) => m >= a || m <= b,
        }
    }

    pub fn day_matches(&self, y: i32, m: u32, d: u32) -> bool {
        let wd = weekday(y, m, d);
        match self.days {
            Days::Empty => !self.perm || d == 1,
            Days::Everyday => true,
            Days::Weekdays => wd <= 4,
            Days::Weekends => wd >= 5,
            Days::Dom(x) => d == x,
            Days::DomSpan(a, b) => a <= d && d <= b,
            Days::Dow(x) => wd == x,
            Days::DowSpan(a, b) => a <= wd && wd <= b,
        }
    }

    pub fn apply(&self, v: f64) -> f64 {
        match self.op {
            '+' => v + self.operand,
            '-' => v - self.operand,
            '*' => v * self.operand,
            '/' => v / self.operand,
            _ => v.powf(self.operand),
        }
    }
}

const OPERANDS: [(&str, f64); 10] = [
    ("0", 0.0),
    ("1", 1.0),
    ("2", 2.0),
    ("0.5", 0.5),
    ("10", 10.0),
    ("17", 17.0),
    ("1.25", 1.25),
    ("3", 3.0),
    ("250", 250.0),
    ("0.1", 0.1),
];

pub fn random_pattern(rng: &mut ChaCha8Rng) -> Pat {
    let months = match rng.gen_range(0..3) {
        0 => Months::Every,
        1 => Months::One(rng.gen_range(1..=12)),
        _ => Months::Span(rng.gen_range(1..=12), rng.gen_range(1..=12)),
    };
    let days = match rng.gen_range(0..8) {
        0 => Days::Empty,
        1 => Days::Everyday,
        2 => Days::Weekdays,
        3 => Days::Weekends,
        4 => Days::Dom(rng.gen_range(1..=31)),
        5 => {
            let a = rng.gen_range(1..=31);
            Days::DomSpan(a, rng.gen_range(a..=31))
        }
        6 => Days::Dow(rng.gen_range(0..7)),
        _ => {
            let a = rng.gen_range(0..7);
            Days::DowSpan(a, rng.gen_range(a..7))
        }
    };
    let op = *['+', '-', '*', '/', '^'].choose(rng).unwrap();
    let (text_operand, operand) = loop {
        let candidate = *OPERANDS.choose(rng).unwrap();
        if !(op == '/' && candidate.1 == 0.0) {
            break candidate;
        }
    };
    Pat {
        perm: rng.gen_bool(0.5),
        months,
        days,
        op,
        operand,
        text_operand,
    }
}

pub fn clamp(v: f64) -> Option<f64> {
    if !v.is_finite() {
        return None;
    }
    Some(if v <= 0.0 { 0.0 } else { v })
}

/// Monthly quantities by replaying every day from the first month.
/// `None` when any step leaves the finite range.
pub fn oracle(flow: bool, baseline: f64, patterns: &[Pat], start: (i32, u32), months: u32) -> Option<Vec<f64>> {
    let mut level = baseline;
    let mut out = Vec::new();
    let (mut y, mut m) = start;
    for k in 0..months {
        let n = month_len(y, m);
        let days = n as f64;
        // (level after perms, touched by a temp pattern, day value)
        let mut cells = Vec::new();
        for d in 1..=n {
            for p in patterns.iter().filter(|p| p.perm) {
                let boundary_only = matches!(p.days, Days::Empty);
                if p.month_matches(m) && p.day_matches(y, m, d) && !(boundary_only && k == 0) {
                    level = clamp(p.apply(level))?;
                }
            }
            let mut value = if flow { level / days } else { level };
            let mut touched = false;
            for p in patterns.iter().filter(|p| !p.perm) {
                if p.month_matches(m) && p.day_matches(y, m, d) {
                    touched = true;
                    value = clamp(p.apply(value))?;
                }
            }
            cells.push((level, touched, value));
        }
        let mut total = 0.0;
        let mut run: Option<(f64, u32)> = None;
        for (lvl, touched, value) in cells {
            if let Some((run_level, len)) = run {
                if touched || lvl != run_level {
                    total += run_level * (len as f64 / days);
                    run = None;
                }
            }
            if touched {
                total += if flow { value } else { value * (1.0 / days) };
            } else {
                run = Some(match run {
                    Some((l, len)) => (l, len + 1),
                    None => (lvl, 1),
                });
            }
        }
        if let Some((run_level, len)) = run {
            total += run_level * (len as f64 / days);
        }
        out.push(total);
        (y, m) = if m == 12 { (y + 1, 1) } else { (y, m + 1) };
    }
    Some(out)
}


/// Compares `count` random schedules from `seed` against [`oracle`].
/// Returns the number of finite months compared.
pub fn check_random_schedules(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared_months = 0usize;
    for case in 0..count {
        let flow = rng.gen_bool(0.5);
        let baseline = [0.0, 1.0, 100.0, 720.0, 2000.0, 37.5][rng.gen_range(0..6)];
        let patterns: Vec<Pat> = (0..rng.gen_range(0..=4)).map(|_| random_pattern(&mut rng)).collect();
        let texts: Vec<String> = patterns.iter().map(|p| p.text(&mut rng)).collect();
        let start = (rng.gen_range(1999..=2013), rng.gen_range(1..=12));
        let months = rng.gen_range(1..=24);

        let class = if flow { ResourceClass::Flow } else { ResourceClass::Stock };
        let schedule = UsageSchedule::from_texts(class, baseline, &texts).map_err(|(i, e)| format!("{}: {e}", texts[i]))?;
        let first = YearMonth::new(start.0, start.1).unwrap();
        let last = first.plus_months(months - 1);
        let actual = schedule.series(first, first, last).ok().map(|s| s.months.into_iter().map(|(_, v)| v).collect::<Vec<_>>());
        let expected = oracle(flow, baseline, &patterns, start, months);
        if actual != expected {
            return Err(format!(
                "case {case}: {texts:?} from {first} for {months} months, baseline {baseline}, flow {flow}: {actual:?} != {expected:?}"
            ));
        }
        compared_months += expected.map_or(0, |e| e.len());

        if let Some(v) = &actual {
            let k = rng.gen_range(0..months);
            let single = schedule.monthly_quantity(first.plus_months(k), first).map_err(|e| e.to_string())?;
            if single != v[k as usize] {
                return Err(format!("case {case}: monthly_quantity {single} disagrees with series {}", v[k as usize]));
            }
        }
    }
    Ok(compared_months)
}
