//! Comparison records produced by every identity check.

use crate::precision::Truncation;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// A parameter value as it appears in a report.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => f.write_str(&format_real(*v)),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}
impl From<u32> for ParamValue {
    fn from(v: u32) -> Self {
        ParamValue::Int(v as i64)
    }
}
impl From<u64> for ParamValue {
    fn from(v: u64) -> Self {
        ParamValue::Int(v as i64)
    }
}
impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Real(v)
    }
}
impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

/// Ordered parameter list; order is the identity's declared schema order.
pub type Params = Vec<(String, ParamValue)>;

/// One side of a comparison: a float, or an exact rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Real(f64),
    Exact(BigRational),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Real(v) => *v,
            Quantity::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Real(v) => f.write_str(&format_real(*v)),
            Quantity::Exact(r) => write!(f, "{r}"),
        }
    }
}

/// Floats in reports use 17 significant digits.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Pass rule: `rel_err <= rel`, or `abs_err <= abs` when `|reference| < floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub floor: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            rel,
            abs: 0.0,
            floor: 0.0,
        }
    }

    pub fn absolute(abs: f64) -> Self {
        Self {
            rel: 0.0,
            abs,
            floor: f64::INFINITY,
        }
    }

    pub fn with_abs(mut self, abs: f64, floor: f64) -> Self {
        self.abs = abs;
        self.floor = floor;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub params: Params,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub abs_err: f64,
    pub rel_err: f64,
    pub truncation: Truncation,
    pub pass: bool,
}

impl IdentityReport {
    /// Floating comparison; the relative error is taken against `|rhs|`.
    pub fn compare(
        identity: &str,
        params: Params,
        lhs: f64,
        rhs: f64,
        tol: Tolerance,
        truncation: Truncation,
    ) -> Self {
        Self::compare_scaled(identity, params, lhs, rhs, rhs.abs(), tol, truncation)
    }

    /// Floating comparison with the relative error taken against `scale`,
    /// for sums whose terms cancel heavily.
    pub fn compare_scaled(
        identity: &str,
        params: Params,
        lhs: f64,
        rhs: f64,
        scale: f64,
        tol: Tolerance,
        truncation: Truncation,
    ) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else if abs_err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let pass = lhs.is_finite()
            && rhs.is_finite()
            && (rel_err <= tol.rel || (scale < tol.floor && abs_err <= tol.abs));
        Self {
            identity: identity.to_string(),
            params,
            lhs: Quantity::Real(lhs),
            rhs: Quantity::Real(rhs),
            abs_err,
            rel_err,
            truncation,
            pass,
        }
    }

    /// Exact comparison: passes iff the two rationals are equal.
    pub fn exact(identity: &str, params: Params, lhs: BigRational, rhs: BigRational) -> Self {
        let diff = (&lhs - &rhs).abs();
        let abs_err = diff.to_f64().unwrap_or(f64::INFINITY);
        let rel_err = if rhs.is_zero() {
            if diff.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (&diff / rhs.abs()).to_f64().unwrap_or(f64::INFINITY)
        };
        Self {
            identity: identity.to_string(),
            params,
            pass: diff.is_zero(),
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            abs_err,
            rel_err,
            truncation: Truncation::exact(0),
        }
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn param(&self, key: &str) -> Option<&ParamValue> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// Builds a [`Params`] list from `key => value` pairs.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {
        vec![$(($k.to_string(), $crate::report::ParamValue::from($v))),*]
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn relative_and_floor_rules() {
        let r = IdentityReport::compare("t", vec![], 1.0 + 1e-10, 1.0, Tolerance::relative(1e-9), Truncation::default());
        assert!(r.pass);
        let r = IdentityReport::compare("t", vec![], 1e-20, 0.0, Tolerance::relative(1e-9), Truncation::default());
        assert!(!r.pass);
        let tol = Tolerance::relative(1e-9).with_abs(1e-15, 1e-12);
        let r = IdentityReport::compare("t", vec![], 1e-20, 0.0, tol, Truncation::default());
        assert!(r.pass);
        let r = IdentityReport::compare("t", vec![], f64::NAN, 0.0, tol, Truncation::default());
        assert!(!r.pass);
    }

    #[test]
    fn exact_rule() {
        let a = BigRational::new(BigInt::from(1), BigInt::from(3));
        let r = IdentityReport::exact("t", crate::params!("n" => 3i64), a.clone(), a.clone());
        assert!(r.pass);
        assert_eq!(r.abs_err, 0.0);
        let b = BigRational::new(BigInt::from(1), BigInt::from(2));
        let r = IdentityReport::exact("t", vec![], a, b);
        assert!(!r.pass);
        assert_eq!(r.param("n"), None);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(f64::INFINITY), "inf");
    }
}
