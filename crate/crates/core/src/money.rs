//! Fixed-point decimals with six fractional digits.
//!
//! [`Money`] holds currency amounts and [`Quantity`] holds billable usage in
//! catalog units. Both store an `i128` count of millionths, so sums are exact
//! and independent of summation order. Multiplication and division round
//! half-to-even back to six digits; rendering rounds half-to-even to two.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const SCALE: i128 = 1_000_000;
const FRACTION_DIGITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecimalError {
    #[error("`{0}` is not a decimal number")]
    Syntax(String),
    #[error("`{0}` has more than 6 fractional digits")]
    TooPrecise(String),
    #[error("`{0}` is out of range")]
    Overflow(String),
}

/// Divides with ties going to the even quotient. `den` must be positive.
pub(crate) fn div_half_even(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = num.div_euclid(den);
    let r = num.rem_euclid(den);
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => q + (q & 1),
    }
}

fn parse_micros(text: &str) -> Result<i128, DecimalError> {
    let s = text.trim();
    let syntax = || DecimalError::Syntax(text.to_string());
    let (negative, digits) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
        || (digits.contains('.') && frac_part.is_empty() && int_part.is_empty())
    {
        return Err(syntax());
    }
    let trimmed_frac = frac_part.trim_end_matches('0');
    if trimmed_frac.len() > FRACTION_DIGITS {
        return Err(DecimalError::TooPrecise(text.to_string()));
    }
    let overflow = || DecimalError::Overflow(text.to_string());
    let whole: i128 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| overflow())?
    };
    let mut frac: i128 = 0;
    for (i, b) in trimmed_frac.bytes().enumerate() {
        frac += (b - b'0') as i128 * 10i128.pow((FRACTION_DIGITS - 1 - i) as u32);
    }
    let magnitude = whole
        .checked_mul(SCALE)
        .and_then(|w| w.checked_add(frac))
        .ok_or_else(overflow)?;
    Ok(if negative { -magnitude } else { magnitude })
}

fn write_exact(micros: i128, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let sign = if micros < 0 { "-" } else { "" };
    let abs = micros.unsigned_abs();
    let whole = abs / SCALE as u128;
    let frac = abs % SCALE as u128;
    if frac == 0 {
        write!(f, "{sign}{whole}")
    } else {
        let digits = format!("{frac:06}");
        write!(f, "{sign}{whole}.{}", digits.trim_end_matches('0'))
    }
}

fn cents_string(micros: i128, grouped: bool) -> String {
    let cents = div_half_even(micros, SCALE / 100);
    let sign = if cents < 0 { "-" } else { "" };
    let abs = cents.unsigned_abs();
    let whole = (abs / 100).to_string();
    let whole = if grouped { group_thousands(&whole) } else { whole };
    format!("{sign}{whole}.{:02}", abs % 100)
}

fn group_thousands(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// An exact currency amount. `Display` renders two decimals, rounded
/// half-to-even; serde uses the exact decimal string.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Money(i128);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_micros(micros: i128) -> Self {
        Money(micros)
    }

    pub fn from_units(units: i64) -> Self {
        Money(units as i128 * SCALE)
    }

    pub fn micros(self) -> i128 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `quantity × self`, rounded half-to-even to six digits.
    pub fn times(self, quantity: Quantity) -> Money {
        Money(div_half_even(self.0 * quantity.0, SCALE))
    }

    pub fn times_int(self, n: i64) -> Money {
        Money(self.0 * n as i128)
    }

    /// Division by a positive integer, rounded half-to-even to six digits.
    pub fn div_int(self, n: u64) -> Money {
        assert!(n > 0, "division by zero");
        Money(div_half_even(self.0, n as i128))
    }

    /// `self / other` rounded half-to-even to the nearest integer, or `None`
    /// when `other` is not positive.
    pub fn ratio_rounded(self, other: Money) -> Option<i128> {
        (other.0 > 0).then(|| div_half_even(self.0, other.0))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    /// The amount `Display` shows, half-to-even at two decimals.
    pub fn round_to_cents(self) -> Money {
        const CENT: i128 = SCALE / 100;
        Money(div_half_even(self.0, CENT) * CENT)
    }

    /// Two decimals with thousands separators, e.g. `18,980.00`.
    pub fn to_grouped_string(self) -> String {
        cents_string(self.0, true)
    }

    /// Every stored digit, e.g. `1913.428571`.
    pub fn to_exact_string(self) -> String {
        struct Exact(i128);
        impl fmt::Display for Exact {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_exact(self.0, f)
            }
        }
        Exact(self.0).to_string()
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&cents_string(self.0, false))
    }
}

impl FromStr for Money {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_micros(s).map(Money)
    }
}

impl TryFrom<String> for Money {
    type Error = DecimalError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Money> for String {
    fn from(value: Money) -> Self {
        value.to_exact_string()
    }
}

impl Add for Money {
    type Output = Money;

    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;

    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        self.0 -= rhs.0;
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

/// A nonnegative usage amount in catalog units (hours, GB-months, requests).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Quantity(i128);

impl Quantity {
    pub const ZERO: Quantity = Quantity(0);

    pub const fn from_micros(micros: i128) -> Self {
        Quantity(micros)
    }

    pub fn from_units(units: i64) -> Self {
        Quantity(units as i128 * SCALE)
    }

    /// Rounds a simulated usage value to six digits, half-to-even.
    /// Non-finite or negative input yields `None`.
    pub fn from_f64(value: f64) -> Option<Self> {
        if !value.is_finite() || value < 0.0 {
            return None;
        }
        let scaled = (value * SCALE as f64).round_ties_even();
        (scaled < i128::MAX as f64).then_some(Quantity(scaled as i128))
    }

    pub fn micros(self) -> i128 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn min(self, other: Quantity) -> Quantity {
        Quantity(self.0.min(other.0))
    }

    pub fn saturating_sub(self, other: Quantity) -> Quantity {
        Quantity((self.0 - other.0).max(0))
    }
}

impl Add for Quantity {
    type Output = Quantity;

    fn add(self, rhs: Quantity) -> Quantity {
        Quantity(self.0 + rhs.0)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_exact(self.0, f)
    }
}

impl FromStr for Quantity {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_micros(s).map(Quantity)
    }
}

impl TryFrom<String> for Quantity {
    type Error = DecimalError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Quantity> for String {
    fn from(value: Quantity) -> Self {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> Money {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(m("72").to_string(), "72.00");
        assert_eq!(m("0.125").to_string(), "0.12");
        assert_eq!(m("0.135").to_string(), "0.14");
        assert_eq!(m("-1.005").to_string(), "-1.00");
        assert_eq!(m(".5").micros(), 500_000);
        assert_eq!(m("1913.428571").to_exact_string(), "1913.428571");
        assert_eq!(m("1.500000000").micros(), 1_500_000);
        assert_eq!(m("1234567.891").to_grouped_string(), "1,234,567.89");
        assert_eq!(m("999.999").to_grouped_string(), "1,000.00");
        assert!(matches!("1.0000001".parse::<Money>(), Err(DecimalError::TooPrecise(_))));
        for bad in ["", ".", "-", "1.2.3", "abc", "1e3", "1,000"] {
            assert!(bad.parse::<Money>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(div_half_even(5, 2), 2);
        assert_eq!(div_half_even(7, 2), 4);
        assert_eq!(div_half_even(-5, 2), -2);
        assert_eq!(div_half_even(-7, 2), -4);
        assert_eq!(div_half_even(66_970 * SCALE, 35), 1_913_428_571);
        assert_eq!(m("0.10").times(Quantity::from_units(720)), m("72"));
        assert_eq!(m("1").div_int(3).to_exact_string(), "0.333333");
    }

    #[test]
    fn quantity_from_f64() {
        assert_eq!(Quantity::from_f64(380.0), Some(Quantity::from_units(380)));
        assert_eq!(Quantity::from_f64(0.1).unwrap().micros(), 100_000);
        assert_eq!(Quantity::from_f64(-1.0), None);
        assert_eq!(Quantity::from_f64(f64::NAN), None);
    }

    proptest! {
        #[test]
        fn exact_string_round_trips(micros in -10i128.pow(20)..10i128.pow(20)) {
            let money = Money::from_micros(micros);
            prop_assert_eq!(money.to_exact_string().parse::<Money>().unwrap(), money);
        }

        #[test]
        fn cents_match_display(micros in -10i128.pow(15)..10i128.pow(15)) {
            let money = Money::from_micros(micros);
            prop_assert_eq!(money.round_to_cents().to_exact_string().parse::<Money>().unwrap().to_string(), money.to_string());
            prop_assert_eq!(money.round_to_cents().micros() % 10_000, 0);
        }

        #[test]
        fn sums_are_order_independent(mut values in prop::collection::vec(-10i128.pow(15)..10i128.pow(15), 0..40)) {
            let forward: Money = values.iter().map(|&v| Money::from_micros(v)).sum();
            values.reverse();
            let backward: Money = values.iter().map(|&v| Money::from_micros(v)).sum();
            prop_assert_eq!(forward, backward);
        }
    }
}
