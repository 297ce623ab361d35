//! Exact scalar abstraction.
//!
//! Every algorithm in this crate is written against [`Scalar`], an ordered
//! field with exact arithmetic. The blanket implementation covers
//! `num_rational::Ratio<T>` for any signed integer type, so both
//! `Ratio<i64>` (fast, overflow-prone) and `BigRational` (unbounded) work.

use std::fmt;
use std::ops::{AddAssign, MulAssign, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, NumAssign, Signed};

/// An exact ordered field element.
pub trait Scalar:
    Clone
    + Ord
    + Signed
    + FromPrimitive
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Parses `"p/q"`, a plain integer, or a terminating decimal such as
    /// `"-0.125"`. Returns `None` on anything else (including a zero
    /// denominator).
    fn parse_exact(s: &str) -> Option<Self>;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every i64 is representable")
    }

    fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_int(num) / Self::from_int(den)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    /// Whether the value is an integer.
    fn is_integral(&self) -> bool;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + NumAssign
        + FromStr
        + FromPrimitive
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static,
    Ratio<T>: FromPrimitive,
{
    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_integer::<T>(num)?;
            let den = parse_integer::<T>(den)?;
            if den.is_zero() {
                return None;
            }
            return Some(Ratio::new(num, den));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (negative, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            if int_digits.is_empty() && frac_part.is_empty() {
                return None;
            }
            if !int_digits.bytes().all(|b| b.is_ascii_digit())
                || !frac_part.bytes().all(|b| b.is_ascii_digit())
            {
                return None;
            }
            let digits = format!("{int_digits}{frac_part}");
            let mut num: T = digits.parse().ok()?;
            if negative {
                num = -num;
            }
            let ten = T::from_u8(10)?;
            let mut den = T::one();
            for _ in 0..frac_part.len() {
                den *= ten.clone();
            }
            return Some(Ratio::new(num, den));
        }
        parse_integer::<T>(s).map(Ratio::from_integer)
    }

    fn is_integral(&self) -> bool {
        Ratio::is_integer(self)
    }
}

fn parse_integer<T: FromStr>(s: &str) -> Option<T> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Formats a scalar as `"p/q"` (or `"p"` for integers).
pub fn format_exact<S: Scalar>(v: &S) -> String {
    v.to_string()
}
