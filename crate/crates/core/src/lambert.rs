//! Generating functions of `s_b(n)`, the Dirichlet-side sequences built from
//! `Δs_2`, and partition counts.

use crate::digitseq::{delta_digit_sum, digit_sum, power2_indicator, Base, DigitSums};
use crate::error::{domain, Error, Result};
use crate::params;
use crate::poly::IntPoly;
use crate::precision::{Approx, PrecisionContext, Truncation};
use crate::report::{IdentityReport, Tolerance};
use crate::specfun::dirichlet_eta;
use crate::sum::CompensatedSum;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Largest polynomial degree the exact finite generating functions will build.
pub const MAX_POLY_DEGREE: u64 = 1 << 22;
/// Largest `n` accepted by the partition tables.
pub const MAX_PARTITION_N: usize = 400;

/// The first `M+1` coefficients of `Σ s_b(n) z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesWindow {
    pub coefficients: Vec<f64>,
}

impl PowerSeriesWindow {
    pub fn digit_sums(b: Base, degree: usize) -> Self {
        Self {
            coefficients: DigitSums::new(b).take(degree + 1).map(|s| s as f64).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }
}

fn check_disc(what: &'static str, z: f64) -> Result<()> {
    if !(z.is_finite() && z.abs() < 1.0) {
        return Err(domain(what, format!("|z| = {} must be < 1", z.abs())));
    }
    Ok(())
}

/// `Σ_{k<b} k t^k / Σ_{k<b} t^k`.
fn rank_ratio(b: u32, t: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut pw = 1.0;
    for k in 0..b {
        num += k as f64 * pw;
        den += pw;
        pw *= t;
    }
    num / den
}

/// `Σ_{n≥1} s_b(n) z^n` for `|z| < 1`, from the Lambert-type series over digit ranks.
pub fn lambert_gf(b: u32, z: f64, ctx: &PrecisionContext) -> Result<Approx> {
    Base::new(b)?;
    ctx.validate()?;
    check_disc("lambert_gf", z)?;
    if z == 0.0 {
        return Ok(Approx {
            value: 0.0,
            truncation: Truncation::exact(0),
        });
    }
    let bf = b as f64;
    let mut s = 0.0f64;
    let mut t = z;
    let mut terms = 0;
    // z^{b^l} shrinks doubly exponentially; stop once it is negligible
    while t != 0.0 && t.abs() > ctx.rel_tol * 1e-6 * s.abs() {
        s += rank_ratio(b, t);
        t = t.powi(b as i32);
        terms += 1;
    }
    let scale = 1.0 / (1.0 - z);
    let tail = (bf - 1.0) * t.abs() / (1.0 - t.abs()) * 2.0;
    Ok(Approx {
        value: s * scale,
        truncation: Truncation {
            terms,
            tail_bound: tail * scale.abs(),
        },
    })
}

/// `Σ_{1≤n<N} s_b(n) z^n` with a bound on the omitted tail, for `|z| < 1`.
pub fn lambert_gf_direct(b: u32, z: f64, terms: u64) -> Result<Approx> {
    let base = Base::new(b)?;
    check_disc("lambert_gf_direct", z)?;
    let mut s = CompensatedSum::new();
    let mut pw = 1.0;
    for sn in DigitSums::new(base).take(terms as usize) {
        s.add(sn as f64 * pw);
        pw *= z;
    }
    // s_b(n) <= (b-1)(log_b n + 1) and log_b n <= log_b N + (n-N)/(N ln b)
    let nf = (terms.max(1)) as f64;
    let bf = b as f64;
    let q = z.abs();
    let head = (bf - 1.0) * q.powf(nf);
    let tail = head * ((nf.ln() / bf.ln() + 1.0) / (1.0 - q) + q / (nf * bf.ln() * (1.0 - q) * (1.0 - q)));
    Ok(Approx {
        value: s.value(),
        truncation: Truncation {
            terms,
            tail_bound: tail,
        },
    })
}

/// `Σ_{n=1}^{b^p-1} s_b(n) z^n` from the finite Lambert form, for any real `z`.
///
/// Near the removable points (`z = 1`, or a rank denominator vanishing) it
/// evaluates the polynomial directly instead.
pub fn lambert_gf_finite(b: u32, p: u32, z: f64, ctx: &PrecisionContext) -> Result<f64> {
    let base = Base::new(b)?;
    ctx.validate()?;
    if p == 0 {
        return Ok(0.0);
    }
    if !z.is_finite() {
        return Err(domain("lambert_gf_finite", format!("z = {z}")));
    }
    let top = base
        .checked_pow(p)
        .ok_or(Error::BudgetExceeded {
            what: "lambert_gf_finite",
            requested: (b as u128).saturating_pow(p),
            limit: u64::MAX as u128,
        })?;
    const NEAR: f64 = 1e-6;
    let mut s = 0.0;
    let mut t = z;
    let mut regular = (1.0 - z).abs() > NEAR;
    for _ in 0..p {
        if !regular {
            break;
        }
        let den: f64 = (0..b).map(|k| t.powi(k as i32)).sum();
        if den.abs() < NEAR {
            regular = false;
            break;
        }
        s += rank_ratio(b, t);
        t = t.powi(b as i32);
    }
    if regular {
        // t is now z^{b^p}
        return Ok((1.0 - t) / (1.0 - z) * s);
    }
    if top > ctx.max_terms {
        return Err(Error::BudgetExceeded {
            what: "lambert_gf_finite",
            requested: top as u128,
            limit: ctx.max_terms as u128,
        });
    }
    let mut acc = 0.0;
    let sums: Vec<u64> = DigitSums::new(base).take(top as usize).collect();
    for sn in sums.iter().rev() {
        acc = acc * z + *sn as f64;
    }
    Ok(acc)
}

fn poly_budget(what: &'static str, b: Base, p: u32) -> Result<usize> {
    match b.checked_pow(p) {
        Some(n) if n <= MAX_POLY_DEGREE => Ok(n as usize),
        _ => Err(Error::BudgetExceeded {
            what,
            requested: (b.get() as u128).saturating_pow(p),
            limit: MAX_POLY_DEGREE as u128,
        }),
    }
}

/// The finite generating polynomial, obtained by exact division of each
/// rank term `(1 - z^{b^p}) Σ_k k z^{k b^l}` by `(1 - z) Σ_k z^{k b^l}`.
pub fn lambert_finite_polynomial(b: u32, p: u32) -> Result<IntPoly> {
    let base = Base::new(b)?;
    let top = poly_budget("lambert_finite_polynomial", base, p)?;
    let one_minus_top = &IntPoly::one() - &IntPoly::monomial(1, top);
    let one_minus_z = IntPoly::from_coeffs([1, -1]);
    let mut out = IntPoly::zero();
    let mut step = 1usize;
    for _ in 0..p {
        let weighted = IntPoly::from_coeffs((0..b as usize * step).map(|n| {
            if n % step == 0 {
                BigInt::from(n / step)
            } else {
                BigInt::from(0)
            }
        }));
        let num = &one_minus_top * &weighted;
        let den = &one_minus_z * &IntPoly::geometric(step, b as usize);
        out = &out + &num.div_exact(&den)?;
        step *= b as usize;
    }
    Ok(out)
}

/// One polynomial per digit rank `l < p`: the coefficient of `z^n` is the rank-`l` digit of `n`.
pub fn rankwise_coefficients(b: u32, p: u32) -> Result<Vec<IntPoly>> {
    let base = Base::new(b)?;
    if p == 0 {
        return Err(domain("rankwise_coefficients", "p = 0"));
    }
    let top = poly_budget("rankwise_coefficients", base, p)?;
    let b = b as usize;
    let mut out = Vec::with_capacity(p as usize);
    let mut step = 1usize;
    for _ in 0..p {
        // n = j b^{l+1} + k b^l + m with digit k at rank l
        let digits = IntPoly::from_coeffs((0..b * step).map(|n| {
            if n % step == 0 {
                BigInt::from(n / step)
            } else {
                BigInt::from(0)
            }
        }));
        let low = IntPoly::geometric(1, step);
        let high = IntPoly::geometric(step * b, top / (step * b));
        out.push(&(&digits * &low) * &high);
        step *= b;
    }
    Ok(out)
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(domain("mobius", "n = 0"));
    }
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Dirichlet coefficients of `1/η(s)`: `μ(n)` for odd `n`, `2^{ν-1} μ(n/2^ν)` otherwise.
pub fn c_sequence(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(domain("c_sequence", "n = 0"));
    }
    let nu = n.trailing_zeros();
    let m = mobius(n >> nu)? as i64;
    Ok(if nu == 0 { m } else { m << (nu - 1) })
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn alt_sign(k: u64) -> i64 {
    if k % 2 == 1 {
        1
    } else {
        -1
    }
}

/// `Σ_{d|n} (-1)^{n/d+1} δ_d` with `δ` the indicator of powers of two.
pub fn delta_from_divisors(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(domain("delta_from_divisors", "n = 0"));
    }
    let mut s = 0;
    for d in divisors(n) {
        s += alt_sign(n / d) * power2_indicator(d)? as i64;
    }
    Ok(s)
}

/// [`delta_from_divisors`] for every `n ≤ n_max` (index 0 unused), by a multiples sieve.
pub fn delta_from_divisors_table(n_max: usize) -> Vec<i64> {
    let mut t = vec![0i64; n_max + 1];
    for d in 1..=n_max {
        if !d.is_power_of_two() {
            continue;
        }
        for (q, m) in (d..=n_max).step_by(d).enumerate() {
            t[m] += alt_sign(q as u64 + 1);
        }
    }
    t
}

/// Whether `Σ_{d|n} c_{n/d} Δs_2(d-1)` reproduces the power-of-two indicator at `n`.
pub fn mobius_inverse_check(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(domain("mobius_inverse_check", "n = 0"));
    }
    let mut s = 0i64;
    for d in divisors(n) {
        s += c_sequence(n / d)? * delta_digit_sum(d - 1, Base::BINARY);
    }
    Ok(s == power2_indicator(n)? as i64)
}

/// Partition statistics at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionCounts {
    pub n: usize,
    /// Partitions of `n` into an even number of parts.
    pub p_even: u128,
    /// Partitions of `n` into an odd number of parts.
    pub p_odd: u128,
    /// Total number of power-of-two parts over all partitions of `n` into distinct parts.
    pub p2: u128,
}

impl PartitionCounts {
    pub fn parity_difference(&self) -> i128 {
        self.p_even as i128 - self.p_odd as i128
    }
}

/// [`PartitionCounts`] for every `n ≤ n_max`.
pub fn partition_table(n_max: usize) -> Result<Vec<PartitionCounts>> {
    if n_max > MAX_PARTITION_N {
        return Err(Error::BudgetExceeded {
            what: "partition_table",
            requested: n_max as u128,
            limit: MAX_PARTITION_N as u128,
        });
    }
    let len = n_max + 1;
    let mut even = vec![0u128; len];
    let mut odd = vec![0u128; len];
    even[0] = 1;
    for k in 1..len {
        for m in k..len {
            even[m] += odd[m - k];
            odd[m] += even[m - k];
        }
    }
    // distinct parts: (number of partitions, number of power-of-two parts in them)
    let mut distinct = vec![0u128; len];
    let mut pow2 = vec![0u128; len];
    distinct[0] = 1;
    for k in 1..len {
        let is_pow2 = k.is_power_of_two() as u128;
        for m in (k..len).rev() {
            pow2[m] += pow2[m - k] + is_pow2 * distinct[m - k];
            distinct[m] += distinct[m - k];
        }
    }
    Ok((0..len)
        .map(|n| PartitionCounts {
            n,
            p_even: even[n],
            p_odd: odd[n],
            p2: pow2[n],
        })
        .collect())
}

pub fn partition_counts(n: usize) -> Result<PartitionCounts> {
    Ok(partition_table(n)?[n])
}

/// `Σ_{k=1}^{n} P_2(k) (p_e - p_o)(n-k)` for every `n ≤ n_max` (index 0 is 0).
pub fn partition_convolution(n_max: usize) -> Result<Vec<i128>> {
    let t = partition_table(n_max)?;
    Ok((0..=n_max)
        .map(|n| {
            (1..=n)
                .map(|k| t[k].p2 as i128 * t[n - k].parity_difference())
                .sum()
        })
        .collect())
}

fn rational(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// The partition convolution against the Lambert coefficient `Δs_2(n-1)` it generates,
/// for every `n` in `1..=n_max`. Each report also records `δ_n`.
pub fn partition_convolution_check(n_max: usize) -> Result<Vec<IdentityReport>> {
    let conv = partition_convolution(n_max)?;
    (1..=n_max)
        .map(|n| {
            let target = delta_digit_sum(n as u64 - 1, Base::BINARY) as i128;
            let delta = power2_indicator(n as u64)? as i64;
            Ok(IdentityReport::exact(
                "partition-convolution",
                params!("n" => n as u64, "delta" => delta),
                rational(conv[n]),
                rational(target),
            ))
        })
        .collect()
}

/// Partial sum `Σ_{n≤M} Δs_2(n-1)/n^s` and a bound on its tail.
///
/// Partial sums of `Δs_2(n-1)` are `s_2(M) ≤ log_2 M + 1`, so summation by parts bounds
/// the tail by `(2 log_2 M + 2 + 1/(s ln 2)) M^{-s}`.
pub fn delta_dirichlet_series(s: f64, terms: u64) -> Result<Approx> {
    if !(s.is_finite() && s > 1.0) {
        return Err(domain("delta_dirichlet_series", format!("s = {s} must exceed 1")));
    }
    if terms == 0 {
        return Err(domain("delta_dirichlet_series", "terms = 0"));
    }
    let mut acc = CompensatedSum::new();
    for n in 1..=terms {
        let a = 1 - n.trailing_zeros() as i64;
        if a != 0 {
            acc.add(a as f64 * (n as f64).powf(-s));
        }
    }
    let m = terms as f64;
    let bound = (2.0 * m.log2() + 2.0 + 1.0 / (s * std::f64::consts::LN_2)) * m.powf(-s);
    Ok(Approx {
        value: acc.value(),
        truncation: Truncation {
            terms,
            tail_bound: bound,
        },
    })
}

/// `Σ_l 2^{-ls} = 1/(1 - 2^{-s})` against `η(s)^{-1} Σ Δs_2(n-1)/n^s`, one report per `s`.
pub fn eta_dirichlet_bridge_check(
    s_grid: &[f64],
    terms: u64,
    tol: Tolerance,
    ctx: &PrecisionContext,
) -> Result<Vec<IdentityReport>> {
    s_grid
        .iter()
        .map(|&s| {
            let series = delta_dirichlet_series(s, terms)?;
            let eta = dirichlet_eta(s, ctx)?;
            let lhs = 1.0 / (1.0 - (-s).exp2());
            let rhs = series.value / eta;
            let trunc = Truncation {
                terms,
                tail_bound: series.truncation.tail_bound / eta,
            };
            Ok(IdentityReport::compare("eta-bridge", params!("s" => s), lhs, rhs, tol, trunc))
        })
        .collect()
}

/// Counts coefficients of [`lambert_finite_polynomial`] equal to `s_b(n)`, against `b^p`.
pub fn finite_polynomial_check(b: u32, p: u32) -> Result<IdentityReport> {
    let poly = lambert_finite_polynomial(b, p)?;
    coefficient_report("lambert-polynomial", b, p, &poly)
}

/// Same count for the sum of [`rankwise_coefficients`].
pub fn rankwise_check(b: u32, p: u32) -> Result<IdentityReport> {
    let total = rankwise_coefficients(b, p)?
        .iter()
        .fold(IntPoly::zero(), |acc, q| &acc + q);
    coefficient_report("rankwise", b, p, &total)
}

fn coefficient_report(id: &str, b: u32, p: u32, poly: &IntPoly) -> Result<IdentityReport> {
    let base = Base::new(b)?;
    let top = poly_budget("coefficient_report", base, p)?;
    let beyond = poly.degree().is_some_and(|d| d >= top);
    let agree = DigitSums::new(base)
        .take(top)
        .enumerate()
        .filter(|&(n, s)| poly.coeff(n) == BigInt::from(s))
        .count();
    let agree = if beyond { 0 } else { agree };
    Ok(IdentityReport::exact(
        id,
        params!("b" => b, "p" => p),
        rational(agree as i128),
        rational(top as i128),
    ))
}

/// Number of `n ≤ n_max` at which `delta_from_divisors(n) = Δs_2(n-1) = 1 - ν_2(n)`, against `n_max`.
pub fn two_adic_divisor_check(n_max: u64) -> Result<IdentityReport> {
    let table = delta_from_divisors_table(n_max as usize);
    let agree = (1..=n_max)
        .filter(|&n| {
            let d = delta_digit_sum(n - 1, Base::BINARY);
            table[n as usize] == d && d == 1 - n.trailing_zeros() as i64
        })
        .count();
    Ok(IdentityReport::exact(
        "two-adic-divisors",
        params!("n_max" => n_max),
        rational(agree as i128),
        rational(n_max as i128),
    ))
}

/// Number of `n ≤ n_max` passing [`mobius_inverse_check`], against `n_max`.
pub fn mobius_inverse_report(n_max: u64) -> Result<IdentityReport> {
    let mut agree = 0i128;
    for n in 1..=n_max {
        agree += mobius_inverse_check(n)? as i128;
    }
    Ok(IdentityReport::exact(
        "mobius-inverse",
        params!("n_max" => n_max),
        rational(agree),
        rational(n_max as i128),
    ))
}

/// `s_b(n)` as an exact value, for callers that build polynomials by hand.
pub fn digit_sum_coefficient(n: u64, b: Base) -> BigInt {
    BigInt::from(digit_sum(n, b))
}
