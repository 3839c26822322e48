//! Dense polynomials with arbitrary-size integer coefficients.

use crate::error::{domain, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// `Σ c_k z^k`, stored lowest degree first with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn from_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut p = Self {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    /// `c z^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    /// `Σ_{j<count} z^{j·step}`.
    pub fn geometric(step: usize, count: usize) -> Self {
        if count == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); step * (count - 1) + 1];
        for j in 0..count {
            coeffs[j * step] = BigInt::one();
        }
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let dd = divisor
            .degree()
            .ok_or_else(|| domain("IntPoly::div_exact", "division by zero polynomial"))?;
        let Some(nd) = self.degree() else {
            return Ok(Self::zero());
        };
        if nd < dd {
            return Err(domain("IntPoly::div_exact", "non-zero remainder"));
        }
        let lead = &divisor.coeffs[dd];
        let support: Vec<(usize, &BigInt)> = divisor
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for q in (0..=nd - dd).rev() {
            let top = &rem[q + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(domain("IntPoly::div_exact", "non-integral quotient"));
            }
            for &(k, dk) in &support {
                rem[q + k] -= &c * dk;
            }
            quot[q] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(domain("IntPoly::div_exact", "non-zero remainder"));
        }
        Ok(Self::from_coeffs(quot))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)))
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)))
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        let sparse: Vec<(usize, &BigInt)> = rhs
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &sparse {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.abs();
            match (k, m.is_one()) {
                (0, _) => write!(f, "{m}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{m}z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{m}z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&(&a * &a) - &p(&[0, 2]), p(&[1, 0, 1]));
        assert_eq!(&a - &a, IntPoly::zero());
        assert_eq!(IntPoly::geometric(2, 3), p(&[1, 0, 1, 0, 1]));
        assert_eq!(p(&[3, 0, 0]).degree(), Some(0));
        assert_eq!(p(&[-1, 0, 2]).to_string(), "-1 + 2z^2");
        assert_eq!(p(&[0, 1, -3]).to_string(), "z - 3z^2");
    }

    #[test]
    fn exact_division() {
        // (1 - z^8) / (1 - z) = 1 + z + ... + z^7
        let q = p(&[1, 0, 0, 0, 0, 0, 0, 0, -1]).div_exact(&p(&[1, -1])).unwrap();
        assert_eq!(q, IntPoly::geometric(1, 8));
        assert!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])).is_err());
        assert!(p(&[1, 2]).div_exact(&p(&[0, 2])).is_err());
        assert!(p(&[1]).div_exact(&IntPoly::zero()).is_err());
    }

    proptest! {
        #[test]
        fn product_divides_back(a in prop::collection::vec(-50i64..50, 1..12),
                                b in prop::collection::vec(-50i64..50, 1..8)) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.div_exact(&b).unwrap(), a.clone());
            let z = 0.37;
            prop_assert!((prod.eval_f64(z) - a.eval_f64(z) * b.eval_f64(z)).abs() < 1e-9 * (1.0 + prod.eval_f64(z).abs()));
        }
    }
}
