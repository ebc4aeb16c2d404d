//! Scalar abstractions.
//!
//! Two families of numbers appear in this crate. Quantum dimensions live in a
//! [`Scalar`], which is either an exact rational (finite groups, Temperley–Lieb
//! at rational parameter) or a float with a comparison tolerance. The
//! numerical realization works over `f64` complex matrices throughout.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Number type used for quantum dimensions.
pub trait Scalar:
    Num + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Whether equality comparisons are exact.
    const EXACT: bool;

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count fits the scalar type")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Equality up to `tol`; exact types ignore the tolerance.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// Parses a decimal (`2.5`) or, for exact types, a fraction (`5/2`).
    fn parse_scalar(s: &str) -> Option<Self>;

    /// Text form that [`Scalar::parse_scalar`] reads back.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol * (1.0 + self.abs().max(other.abs()))
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            return (d != 0.0).then(|| n / d);
        }
        s.parse().ok()
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let tol = tol.max(f32::EPSILON as f64 * 16.0) as f32;
        (self - other).abs() <= tol * (1.0 + self.abs().max(other.abs()))
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        f64::parse_scalar(s).map(|x| x as f32)
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            return (d != 0).then(|| Ratio::new(n, d));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Some(Ratio::from_integer(n));
        }
        // Terminating decimals only: "2.5" -> 5/2.
        let (int, frac) = s.split_once('.')?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let neg = int.starts_with('-');
        let int_abs: i64 = int.trim_start_matches('-').parse().unwrap_or(0);
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let num = int_abs.checked_mul(den)?.checked_add(frac.parse::<i64>().ok()?)?;
        Some(Ratio::new(if neg { -num } else { num }, den))
    }

    fn render(&self) -> String {
        if self.is_integer() {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}
