//! Integer digit statistics: digit sums, digit counts, 2-adic valuations and
//! the Thue-Morse sign.
//!
//! The `u64` functions are the workhorses. [`big`] repeats the core
//! operations on `BigUint` for arguments beyond 64 bits.

use crate::error::{domain, Result};

/// A numeral base, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base(u32);

impl Base {
    pub const BINARY: Base = Base(2);
    pub const DECIMAL: Base = Base(10);

    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(domain("Base", format!("base {b} < 2")));
        }
        Ok(Base(b))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_u64(self) -> u64 {
        self.0 as u64
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `b^k`, or `None` on overflow.
    pub fn checked_pow(self, k: u32) -> Option<u64> {
        self.as_u64().checked_pow(k)
    }
}

impl TryFrom<u32> for Base {
    type Error = crate::error::Error;
    fn try_from(b: u32) -> Result<Self> {
        Base::new(b)
    }
}

/// Sum of the base-`b` digits of `n`.
pub fn digit_sum(n: u64, b: Base) -> u64 {
    if b.0 == 2 {
        return n.count_ones() as u64;
    }
    let b = b.as_u64();
    let mut n = n;
    let mut s = 0;
    while n > 0 {
        s += n % b;
        n /= b;
    }
    s
}

/// Number of base-`b` digits of `n > 0`, by repeated division.
pub fn digit_count(n: u64, b: Base) -> Result<u32> {
    if n == 0 {
        return Err(domain("digit_count", "n = 0 has no digits"));
    }
    let b = b.as_u64();
    let mut n = n;
    let mut d = 0;
    while n > 0 {
        n /= b;
        d += 1;
    }
    Ok(d)
}

/// The digit of `n` at rank `rank` (rank 0 is the units digit).
pub fn digit_at(n: u64, b: Base, rank: u32) -> u64 {
    let b = b.as_u64();
    let mut n = n;
    for _ in 0..rank {
        if n == 0 {
            return 0;
        }
        n /= b;
    }
    n % b
}

/// Exponent of the largest power of two dividing `n > 0`.
pub fn valuation2(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(domain("valuation2", "n = 0"));
    }
    Ok(n.trailing_zeros())
}

/// `s_b(n+1) - s_b(n)`.
pub fn delta_digit_sum(n: u64, b: Base) -> i64 {
    digit_sum(n + 1, b) as i64 - digit_sum(n, b) as i64
}

/// `(-1)^{s_2(n)}`.
pub fn thue_morse_sign(n: u64) -> i8 {
    if n.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// 1 if `n > 0` is a power of two, else 0.
pub fn power2_indicator(n: u64) -> Result<u8> {
    if n == 0 {
        return Err(domain("power2_indicator", "n = 0"));
    }
    Ok(n.is_power_of_two() as u8)
}

/// Left-hand sides of the two 2-adic identities at one `n >= 1`.
///
/// `lhs_valuation_identity = Δs_2(n-1) + ν_2(n)` should be 1 and
/// `lhs_factorial_identity = ν_2(n!) + s_2(n)` should be `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LegendreCheck {
    pub n: u64,
    pub lhs_valuation_identity: i64,
    pub lhs_factorial_identity: u64,
}

impl LegendreCheck {
    pub fn holds(&self) -> bool {
        self.lhs_valuation_identity == 1 && self.lhs_factorial_identity == self.n
    }
}

/// Evaluates both 2-adic identities at `n`, with `ν_2(n!)` summed as `Σ_{k≤n} ν_2(k)`.
pub fn legendre_checks(n: u64) -> Result<LegendreCheck> {
    if n == 0 {
        return Err(domain("legendre_checks", "n = 0"));
    }
    let mut nu_fact = 0u64;
    for k in 1..=n {
        nu_fact += k.trailing_zeros() as u64;
    }
    Ok(LegendreCheck {
        n,
        lhs_valuation_identity: delta_digit_sum(n - 1, Base::BINARY) + valuation2(n)? as i64,
        lhs_factorial_identity: nu_fact + digit_sum(n, Base::BINARY),
    })
}

/// [`legendre_checks`] for every `n` in `1..=n_max`, sharing the running factorial valuation.
pub fn legendre_scan(n_max: u64) -> impl Iterator<Item = LegendreCheck> {
    let mut nu_fact = 0u64;
    (1..=n_max).map(move |n| {
        nu_fact += n.trailing_zeros() as u64;
        LegendreCheck {
            n,
            lhs_valuation_identity: delta_digit_sum(n - 1, Base::BINARY)
                + n.trailing_zeros() as i64,
            lhs_factorial_identity: nu_fact + digit_sum(n, Base::BINARY),
        }
    })
}

/// Yields `s_b(0), s_b(1), ...` with amortised constant work per step.
#[derive(Debug, Clone)]
pub struct DigitSums {
    base: u64,
    digits: Vec<u64>,
    sum: u64,
    started: bool,
}

impl DigitSums {
    pub fn new(b: Base) -> Self {
        Self {
            base: b.as_u64(),
            digits: Vec::new(),
            sum: 0,
            started: false,
        }
    }
}

impl Iterator for DigitSums {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        if !self.started {
            self.started = true;
            return Some(0);
        }
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.digits.push(0);
            }
            if self.digits[i] + 1 < self.base {
                self.digits[i] += 1;
                self.sum += 1;
                break;
            }
            self.sum -= self.base - 1;
            self.digits[i] = 0;
            i += 1;
        }
        Some(self.sum)
    }
}

/// Arbitrary-size versions of the core sequence operations.
pub mod big {
    use super::Base;
    use crate::error::{domain, Result};
    use num_bigint::BigUint;
    use num_integer::Integer;
    use num_traits::Zero;

    pub fn digit_sum(n: &BigUint, b: Base) -> BigUint {
        if b.get() == 2 {
            return BigUint::from(n.count_ones());
        }
        let base = BigUint::from(b.get());
        let mut n = n.clone();
        let mut s = BigUint::zero();
        while !n.is_zero() {
            let (q, r) = n.div_rem(&base);
            s += r;
            n = q;
        }
        s
    }

    pub fn digit_count(n: &BigUint, b: Base) -> Result<u64> {
        if n.is_zero() {
            return Err(domain("digit_count", "n = 0 has no digits"));
        }
        let base = BigUint::from(b.get());
        let mut n = n.clone();
        let mut d = 0;
        while !n.is_zero() {
            n /= &base;
            d += 1;
        }
        Ok(d)
    }

    pub fn valuation2(n: &BigUint) -> Result<u64> {
        n.trailing_zeros()
            .ok_or_else(|| domain("valuation2", "n = 0"))
    }

    pub fn thue_morse_sign(n: &BigUint) -> i8 {
        if n.count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}
