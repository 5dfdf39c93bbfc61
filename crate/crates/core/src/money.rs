//! Exact money amounts.
//!
//! Amounts are whole cents. Per-item prices keep six decimal places so that
//! sub-cent unit costs survive until the final rounding step.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoneyError {
    #[error("{0:?} is not a decimal amount")]
    Syntax(String),
    #[error("{input:?} has more than {max} decimal places")]
    Precision { input: String, max: u32 },
    #[error("{0:?} must not be negative")]
    Negative(String),
    #[error("{0:?} must be greater than zero")]
    NotPositive(String),
    #[error("{0:?} is too large")]
    Overflow(String),
}

/// Parses an unsigned decimal into an integer scaled by `10^scale`.
fn parse_scaled(input: &str, scale: u32) -> Result<i64, MoneyError> {
    let s = input.trim();
    if s.starts_with('-') {
        return Err(MoneyError::Negative(input.to_string()));
    }
    let s = s.strip_prefix('+').unwrap_or(s);
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if (whole.is_empty() && frac.is_empty()) || !digits_ok(whole) || !digits_ok(frac) {
        return Err(MoneyError::Syntax(input.to_string()));
    }
    if frac.len() > scale as usize {
        return Err(MoneyError::Precision {
            input: input.to_string(),
            max: scale,
        });
    }
    let overflow = || MoneyError::Overflow(input.to_string());
    let whole: i64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| overflow())? };
    let padded = format!("{frac:0<width$}", width = scale as usize);
    let frac: i64 = if padded.is_empty() { 0 } else { padded.parse().map_err(|_| overflow())? };
    whole
        .checked_mul(10i64.pow(scale))
        .and_then(|w| w.checked_add(frac))
        .ok_or_else(overflow)
}

/// An amount in cents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i64) -> Self {
        Money(cents)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    /// Value in whole currency units, for ratios only.
    pub fn as_units(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl std::ops::Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl FromStr for Money {
    type Err = MoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scaled(s, 2).map(Money)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

/// Price of annotating one item, in millionths of a currency unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct UnitCost(i64);

impl UnitCost {
    pub const SCALE: i64 = 1_000_000;

    pub fn from_micros(micros: i64) -> Option<Self> {
        (micros > 0).then_some(UnitCost(micros))
    }

    pub fn from_cents(cents: i64) -> Option<Self> {
        Self::from_micros(cents.checked_mul(10_000)?)
    }

    pub fn micros(self) -> i64 {
        self.0
    }

    /// Cost of `items` items, rounded half-up to the cent.
    pub fn total_for(self, items: u64) -> Money {
        Money::from_cents(round_half_up(self.0 as u128 * items as u128, 10_000) as i64)
    }
}

impl FromStr for UnitCost {
    type Err = MoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let micros = parse_scaled(s, 6)?;
        UnitCost::from_micros(micros).ok_or_else(|| MoneyError::NotPositive(s.to_string()))
    }
}

impl fmt::Display for UnitCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / Self::SCALE;
        let frac = format!("{:06}", self.0 % Self::SCALE);
        let trimmed = frac.trim_end_matches('0');
        let shown = if trimmed.len() < 2 { &frac[..2] } else { trimmed };
        write!(f, "{whole}.{shown}")
    }
}

/// `num / den` rounded half-up, for non-negative operands.
pub fn round_half_up(num: u128, den: u128) -> u128 {
    (2 * num + den) / (2 * den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_money() {
        assert_eq!("16.73".parse::<Money>(), Ok(Money::from_cents(1673)));
        assert_eq!("16".parse::<Money>(), Ok(Money::from_cents(1600)));
        assert_eq!("0.5".parse::<Money>(), Ok(Money::from_cents(50)));
        assert_eq!(".5".parse::<Money>(), Ok(Money::from_cents(50)));
        assert_eq!(Money::from_cents(1673).to_string(), "16.73");
        assert_eq!(Money::from_cents(5).to_string(), "0.05");
        assert_eq!(Money::from_cents(-5).to_string(), "-0.05");
        assert!(matches!("16.735".parse::<Money>(), Err(MoneyError::Precision { .. })));
        assert!(matches!("-1".parse::<Money>(), Err(MoneyError::Negative(_))));
        assert!(matches!("1e3".parse::<Money>(), Err(MoneyError::Syntax(_))));
        assert!(matches!(".".parse::<Money>(), Err(MoneyError::Syntax(_))));
    }

    #[test]
    fn parses_unit_cost() {
        let c: UnitCost = "0.04".parse().unwrap();
        assert_eq!(c.micros(), 40_000);
        assert_eq!(c.to_string(), "0.04");
        assert_eq!("0.0375".parse::<UnitCost>().unwrap().to_string(), "0.0375");
        assert_eq!("2".parse::<UnitCost>().unwrap().to_string(), "2.00");
        assert!(matches!("0".parse::<UnitCost>(), Err(MoneyError::NotPositive(_))));
        assert!(matches!("0.0000001".parse::<UnitCost>(), Err(MoneyError::Precision { .. })));
    }

    #[test]
    fn totals_round_half_up() {
        let c: UnitCost = "0.04".parse().unwrap();
        assert_eq!(c.total_for(2091), Money::from_cents(8364));
        let half: UnitCost = "0.005".parse().unwrap();
        assert_eq!(half.total_for(1), Money::from_cents(1));
        assert_eq!(half.total_for(3), Money::from_cents(2));
    }
}
