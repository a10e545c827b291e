//! Scalar abstraction shared by every dimension formula.
//!
//! All region and dimension math is written against [`Scalar`], so the same
//! code runs on exact rationals (the default, [`crate::Rational`]), on
//! arbitrary-precision rationals, and on `f64` for quick approximate work.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedMul, Num, Signed, ToPrimitive};

/// Ordered field element usable by the interval, scenario and region code.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Parses `"p/q"`, an integer, or a decimal literal (`"-0.25"`, `"1e-3"`).
    fn parse_literal(text: &str) -> Option<Self>;

    /// Builds `numer / denom`; `denom` must be nonzero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Scalar for f64 {
    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().ok()?;
                let q: f64 = q.trim().parse().ok()?;
                (q != 0.0).then(|| p / q)
            }
            None => text.parse().ok().filter(|v: &f64| v.is_finite()),
        }
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + CheckedMul
        + FromStr
        + From<i64>
        + ToPrimitive
        + Display
        + Debug
        + Send
        + Sync
        + 'static,
{
    fn parse_literal(text: &str) -> Option<Self> {
        parse_exact(text)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(T::from(numer), T::from(denom))
    }

    fn to_f64(&self) -> f64 {
        let numer = self.numer().to_f64().unwrap_or(f64::NAN);
        let denom = self.denom().to_f64().unwrap_or(f64::NAN);
        numer / denom
    }
}

// Largest decimal exponent accepted by the literal parser.
const MAX_EXPONENT: i32 = 30;

fn parse_exact<T>(text: &str) -> Option<Ratio<T>>
where
    T: Clone + Integer + Signed + CheckedMul + FromStr + From<i64>,
{
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: T = p.trim().parse().ok()?;
        let q: T = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Ratio::new(p, q));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(at) => (&text[..at], text[at + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_digits, frac_digits) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_digits.is_empty() && frac_digits.is_empty() {
        return None;
    }
    if !int_digits
        .chars()
        .chain(frac_digits.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_digits}{frac_digits}");
    let mut numer: T = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let shift = exponent.checked_sub(i32::try_from(frac_digits.len()).ok()?)?;
    if shift.abs() > MAX_EXPONENT {
        return None;
    }
    let ten = T::from(10);
    let mut scale = T::one();
    for _ in 0..shift.unsigned_abs() {
        scale = scale.checked_mul(&ten)?;
    }
    if shift >= 0 {
        Some(Ratio::from_integer(numer.checked_mul(&scale)?))
    } else {
        Some(Ratio::new(numer, scale))
    }
}

pub fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

pub fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

/// `(x)⁺ = max(x, 0)`.
pub fn positive_part<S: Scalar>(x: S) -> S {
    max_of(x, S::zero())
}
