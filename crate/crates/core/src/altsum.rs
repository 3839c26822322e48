//! Thue-Morse alternating sums `S_N(x) = Σ_{n<2^N} (-1)^{s_2(n)} f(x+n)`, their
//! weight tables, and the distribution of `Z_N = W_1 + ... + W_N` with `W_k`
//! uniform on `{0, ..., 2^k - 1}`.

use crate::digitseq::thue_morse_sign;
use crate::error::{domain, Error, Result};
use crate::params;
use crate::precision::Truncation;
use crate::report::{IdentityReport, ParamValue, Tolerance};
use crate::scalar::{signed, Scalar};
use crate::specfun::bernoulli_even;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use std::f64::consts::LN_2;

pub const MAX_DIRECT_N: u32 = 30;
pub const MAX_PRODUCT_N: u32 = 20;
pub const MAX_WEIGHT_N: u32 = 22;
pub const MAX_ORACLE_N: u32 = 12;
pub const MAX_PMF_N: u32 = 18;
pub const MAX_CUMULANT_ORDER: u32 = 16;

fn budget(what: &'static str, n: u32, limit: u32) -> Result<()> {
    if n > limit {
        return Err(Error::BudgetExceeded {
            what,
            requested: n as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn shifted<T: Scalar>(x: &T, k: i64) -> T {
    x.clone() + T::from_i64(k)
}

/// `S_N(x)` summed term by term.
pub fn alternating_sum_direct<T: Scalar>(f: impl Fn(&T) -> T, x: &T, n: u32) -> Result<T> {
    budget("alternating_sum_direct", n, MAX_DIRECT_N)?;
    let mut s = T::zero();
    for k in 0..1u64 << n {
        let v = f(&shifted(x, k as i64));
        s = signed(v, thue_morse_sign(k) < 0) + s;
    }
    Ok(s)
}

/// `Σ_{n<2^N} |f(x+n)|`, the scale floating comparisons of `S_N` are measured against.
pub fn alternating_sum_magnitude(f: impl Fn(f64) -> f64, x: f64, n: u32) -> Result<f64> {
    budget("alternating_sum_magnitude", n, MAX_DIRECT_N)?;
    Ok((0..1u64 << n).map(|k| f(x + k as f64).abs()).sum())
}

/// `C(N, l)` for `l = 0..=N`.
pub fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    for l in 0..=n {
        row.push(c.clone());
        c = c * BigInt::from(n - l) / BigInt::from(l + 1);
    }
    row
}

fn difference_with_row<T: Scalar>(row: &[BigInt], f: &impl Fn(&T) -> T, x: &T) -> T {
    let n = row.len() - 1;
    let mut s = T::zero();
    for (l, c) in row.iter().enumerate() {
        let term = T::from_bigint(c) * f(&shifted(x, l as i64));
        s = s + signed(term, (n - l) % 2 == 1);
    }
    s
}

/// `Δ^N f(x) = Σ_l C(N,l) (-1)^{N-l} f(x+l)`.
pub fn forward_difference<T: Scalar>(f: impl Fn(&T) -> T, x: &T, n: u32) -> T {
    difference_with_row(&binomial_row(n), &f, x)
}

fn stepped<T: Scalar>(f: &impl Fn(&T) -> T, x: &T, j: u32) -> T {
    if j == 0 {
        return f(x);
    }
    let step = 1i64 << (j - 1);
    stepped(f, &shifted(x, step), j - 1) - stepped(f, x, j - 1)
}

/// `(-1)^N Δ_1 Δ_2 Δ_4 ... Δ_{2^{N-1}} f(x)` with `Δ_k g(x) = g(x+k) - g(x)`.
pub fn delta_product_form<T: Scalar>(f: impl Fn(&T) -> T, x: &T, n: u32) -> Result<T> {
    budget("delta_product_form", n, MAX_PRODUCT_N)?;
    Ok(signed(stepped(&f, x, n), n % 2 == 1))
}

/// Exact coefficients `α_k^{(N)}` of `Π_{i<N} (1 + x^{2^i})^{N-i}`, `k = 0 ..= 2^{N+1} - N - 2`.
///
/// Stored as fixed-width little-endian `u64` limbs so that large tables stay compact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    n: u32,
    limbs: usize,
    data: Vec<u64>,
}

impl WeightTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.limbs
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn last_index(&self) -> usize {
        self.len() - 1
    }

    fn slot(&self, k: usize) -> &[u64] {
        &self.data[k * self.limbs..(k + 1) * self.limbs]
    }

    pub fn get(&self, k: usize) -> BigUint {
        let digits: Vec<u32> = self
            .slot(k)
            .iter()
            .flat_map(|&l| [l as u32, (l >> 32) as u32])
            .collect();
        BigUint::new(digits)
    }

    pub fn to_vec(&self) -> Vec<BigUint> {
        (0..self.len()).map(|k| self.get(k)).collect()
    }

    /// `Σ_k α_k`, which should be `2^{N(N+1)/2}`.
    pub fn total(&self) -> BigUint {
        (0..self.len()).fold(BigUint::zero(), |acc, k| acc + self.get(k))
    }

    pub fn is_symmetric(&self) -> bool {
        let last = self.last_index();
        (0..self.len() / 2).all(|k| self.slot(k) == self.slot(last - k))
    }

    /// `p_k^{(N)} = α_k^{(N)} / 2^{N(N+1)/2}`.
    pub fn probabilities(&self) -> Vec<BigRational> {
        let denom = BigInt::one() << triangular(self.n);
        (0..self.len())
            .map(|k| BigRational::new(BigInt::from(self.get(k)), denom.clone()))
            .collect()
    }
}

fn triangular(n: u32) -> usize {
    (n as usize * (n as usize + 1)) / 2
}

/// Builds the weight table by multiplying in one factor `1 + x^{2^i}` at a time, smallest `i` first.
pub fn alpha_weights(n: u32) -> Result<WeightTable> {
    budget("alpha_weights", n, MAX_WEIGHT_N)?;
    let len = (1usize << (n + 1)) - n as usize - 1;
    let limbs = (triangular(n) + 1).div_ceil(64);
    let mut data = vec![0u64; len * limbs];
    data[0] = 1;
    let mut deg = 0usize;
    for i in 0..n {
        let s = 1usize << i;
        for _ in 0..n - i {
            deg += s;
            for k in (s..=deg).rev() {
                let (lo, hi) = data.split_at_mut(k * limbs);
                let src = &lo[(k - s) * limbs..(k - s + 1) * limbs];
                let dst = &mut hi[..limbs];
                let mut carry = false;
                for (d, &a) in dst.iter_mut().zip(src) {
                    let (v, c1) = d.overflowing_add(a);
                    let (v, c2) = v.overflowing_add(carry as u64);
                    *d = v;
                    carry = c1 || c2;
                }
            }
        }
    }
    debug_assert_eq!(deg + 1, len);
    Ok(WeightTable { n, limbs, data })
}

/// `α_k^{(N)}` as the number of `(k_1, ..., k_N)` with `0 ≤ k_i ≤ 2^i - 1` summing to `k`.
pub fn alpha_weights_oracle(n: u32) -> Result<Vec<BigUint>> {
    budget("alpha_weights_oracle", n, MAX_ORACLE_N)?;
    let mut counts = vec![1u128];
    for i in 1..=n {
        let width = 1usize << i;
        let len = counts.len() + width - 1;
        let mut prefix = vec![0u128; len + 1];
        for k in 0..len {
            prefix[k + 1] = prefix[k] + counts.get(k).copied().unwrap_or(0);
        }
        counts = (0..len)
            .map(|k| prefix[k + 1] - prefix[(k + 1).saturating_sub(width)])
            .collect();
    }
    Ok(counts.into_iter().map(BigUint::from).collect())
}

/// `Σ_k α_k^{(N-1)} Σ_l C(N,l) |f(x+k+l)|`, the size of the terms that
/// [`alternating_sum_via_weights`] cancels; about `2^{N(N+1)/2} |f|`.
pub fn via_weights_magnitude(f: impl Fn(f64) -> f64, x: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(domain("via_weights_magnitude", "N = 0"));
    }
    budget("via_weights_magnitude", n, MAX_PRODUCT_N)?;
    let table = alpha_weights(n - 1)?;
    let row: Vec<f64> = binomial_row(n).iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let mut s = 0.0;
    for k in 0..table.len() {
        let inner: f64 = row
            .iter()
            .enumerate()
            .map(|(l, c)| c * f(x + (k + l) as f64).abs())
            .sum();
        s += table.get(k).to_f64().unwrap_or(f64::INFINITY) * inner;
    }
    Ok(s)
}

/// `(-1)^N Σ_{k=0}^{2^N-N-1} α_k^{(N-1)} Δ^N f(x+k)`.
pub fn alternating_sum_via_weights<T: Scalar>(f: impl Fn(&T) -> T, x: &T, n: u32) -> Result<T> {
    if n == 0 {
        return Err(domain("alternating_sum_via_weights", "N = 0"));
    }
    budget("alternating_sum_via_weights", n, MAX_PRODUCT_N)?;
    let table = alpha_weights(n - 1)?;
    let row = binomial_row(n);
    let mut s = T::zero();
    for k in 0..table.len() {
        let d = difference_with_row(&row, &f, &shifted(x, k as i64));
        s = s + T::from_bigint(&BigInt::from(table.get(k))) * d;
    }
    Ok(signed(s, n % 2 == 1))
}

fn power<T: Scalar>(x: &T, e: u32) -> T {
    let mut r = T::from_i64(1);
    for _ in 0..e {
        r = r * x.clone();
    }
    r
}

fn poly_eval<T: Scalar>(coeffs: &[T], x: &T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Floating test of `Σ (-1)^{s_2(n)} P(x+n) = 0`, relative to `Σ_n Σ_j |c_j| |x+n|^j`.
pub fn polynomial_annihilation_check(coeffs: &[f64], n: u32, x: f64, tol: f64) -> Result<bool> {
    let sum = alternating_sum_direct(|t: &f64| poly_eval(coeffs, t), &x, n)?;
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
    let scale = alternating_sum_magnitude(|t| poly_eval(&abs_coeffs, &t.abs()), x, n)?;
    Ok(sum.abs() <= tol * scale.max(f64::MIN_POSITIVE))
}

/// Exact version of [`polynomial_annihilation_check`]: the sum must vanish.
pub fn polynomial_annihilation_exact(coeffs: &[BigRational], n: u32, x: &BigRational) -> Result<bool> {
    Ok(alternating_sum_direct(|t: &BigRational| poly_eval(coeffs, t), x, n)?.is_zero())
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(-1)^N 2^{N(N-1)/2} N!`, the value of `S_N` at `f(x) = x^N`.
pub fn monomial_sum_closed(n: u32) -> BigRational {
    let v = factorial(n) << (triangular(n) - n as usize);
    signed(int(v), n % 2 == 1)
}

/// `(-1)^N (N+1)! 2^{N(N-1)/2} (x + (2^N - 1)/2)`, the value at `f(x) = x^{N+1}`.
pub fn next_monomial_sum_closed(n: u32, x: &BigRational) -> BigRational {
    let v = int(factorial(n + 1) << (triangular(n) - n as usize));
    let shift = BigRational::new((BigInt::one() << n) - 1, BigInt::from(2));
    signed(v * (x.clone() + shift), n % 2 == 1)
}

fn text(x: &BigRational) -> ParamValue {
    ParamValue::Text(x.to_string())
}

/// `S_N(x^N)` summed exactly against its closed form.
pub fn monomial_report(n: u32, x: &BigRational) -> Result<IdentityReport> {
    let lhs = alternating_sum_direct(|t: &BigRational| power(t, n), x, n)?;
    let mut params = params!("N" => n);
    params.push(("x".into(), text(x)));
    Ok(IdentityReport::exact("monomial-sum", params, lhs, monomial_sum_closed(n)))
}

/// `S_N(x^{N+1})` summed exactly against its closed form.
pub fn next_monomial_report(n: u32, x: &BigRational) -> Result<IdentityReport> {
    let lhs = alternating_sum_direct(|t: &BigRational| power(t, n + 1), x, n)?;
    let mut params = params!("N" => n);
    params.push(("x".into(), text(x)));
    Ok(IdentityReport::exact(
        "next-monomial-sum",
        params,
        lhs,
        next_monomial_sum_closed(n, x),
    ))
}

/// `S_N` of a polynomial of degree `N - 1` with coefficients `1, 2, ..., N`, exactly.
pub fn prouhet_report(n: u32, x: &BigRational) -> Result<IdentityReport> {
    let coeffs: Vec<BigRational> = (1..=n as i64).map(|c| int(c)).collect();
    let lhs = alternating_sum_direct(|t: &BigRational| poly_eval(&coeffs, t), x, n)?;
    let mut params = params!("N" => n);
    params.push(("x".into(), text(x)));
    Ok(IdentityReport::exact("prouhet", params, lhs, BigRational::zero()))
}

/// Smooth functions used to exercise the weight identity numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// `e^{x/4}`
    ExpQuarter,
    /// `e^{-x}`
    ExpNeg,
    Sin,
    /// `1/(x+1)`
    Reciprocal,
    /// `x^3 - 2x + 1`
    Cubic,
}

impl TestFunction {
    pub const ALL: [TestFunction; 5] = [
        TestFunction::ExpQuarter,
        TestFunction::ExpNeg,
        TestFunction::Sin,
        TestFunction::Reciprocal,
        TestFunction::Cubic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::ExpQuarter => "exp-quarter",
            TestFunction::ExpNeg => "exp-neg",
            TestFunction::Sin => "sin",
            TestFunction::Reciprocal => "reciprocal",
            TestFunction::Cubic => "cubic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            TestFunction::ExpQuarter => (x / 4.0).exp(),
            TestFunction::ExpNeg => (-x).exp(),
            TestFunction::Sin => x.sin(),
            TestFunction::Reciprocal => 1.0 / (x + 1.0),
            TestFunction::Cubic => x * x * x - 2.0 * x + 1.0,
        }
    }
}

/// The weight identity and the `Δ`-product form, each against the direct sum,
/// with errors measured relative to the magnitude of the terms each route cancels.
pub fn weights_identity_reports(f: TestFunction, x: f64, n: u32, tol: Tolerance) -> Result<[IdentityReport; 2]> {
    let g = |t: &f64| f.eval(*t);
    let direct = alternating_sum_direct(g, &x, n)?;
    let scale = alternating_sum_magnitude(|t| f.eval(t), x, n)?;
    let via_scale = via_weights_magnitude(|t| f.eval(t), x, n)?;
    let via = alternating_sum_via_weights(g, &x, n)?;
    let product = delta_product_form(g, &x, n)?;
    let p = || params!("f" => f.name(), "x" => x, "N" => n);
    let t = Truncation::exact(1 << n);
    Ok([
        IdentityReport::compare_scaled("alternating-weights", p(), via, direct, via_scale, tol, t),
        IdentityReport::compare_scaled("delta-product", p(), product, direct, scale, tol, t),
    ])
}

/// `alpha_weights(N)` against the composition-count oracle: agreeing entries against table length.
pub fn weights_report(n: u32) -> Result<IdentityReport> {
    let table = alpha_weights(n)?.to_vec();
    let oracle = alpha_weights_oracle(n)?;
    let agree = if table.len() == oracle.len() {
        table.iter().zip(&oracle).filter(|(a, b)| a == b).count()
    } else {
        0
    };
    Ok(IdentityReport::exact(
        "weights",
        params!("N" => n),
        int(agree as u64),
        int(oracle.len() as u64),
    ))
}

/// `Σ_k α_k^{(N)}` against `2^{N(N+1)/2}`.
pub fn weights_total_report(n: u32) -> Result<IdentityReport> {
    let t = alpha_weights(n)?;
    Ok(IdentityReport::exact(
        "weights-total",
        params!("N" => n),
        int(BigInt::from(t.total())),
        int(BigInt::one() << triangular(n)),
    ))
}

/// Exact law of `Z_N`, stored as integer counts over a common denominator `2^{N(N+1)/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretePmf {
    n: u32,
    counts: Vec<BigUint>,
}

impl DiscretePmf {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    fn denominator(&self) -> BigInt {
        BigInt::one() << triangular(self.n)
    }

    pub fn mass(&self, k: usize) -> BigRational {
        BigRational::new(BigInt::from(self.counts[k].clone()), self.denominator())
    }

    pub fn masses(&self) -> Vec<BigRational> {
        (0..self.len()).map(|k| self.mass(k)).collect()
    }

    pub fn total_mass(&self) -> BigRational {
        let s = self.counts.iter().fold(BigUint::zero(), |a, c| a + c);
        BigRational::new(BigInt::from(s), self.denominator())
    }

    pub fn mean(&self) -> BigRational {
        let s = self
            .counts
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |a, (k, c)| a + BigInt::from(c.clone()) * BigInt::from(k));
        BigRational::new(s, self.denominator())
    }

    /// `E[(Z - E Z)^j]` for `j = 0..=max_order`.
    ///
    /// The law is symmetric about `L/2` with `L` the largest value, so moments of
    /// the integer variable `2Z - L` are summed and rescaled.
    pub fn central_moments(&self, max_order: u32) -> Vec<BigRational> {
        let top = BigInt::from(self.len() as u64 - 1);
        let mut sums = vec![BigInt::zero(); max_order as usize + 1];
        for (k, c) in self.counts.iter().enumerate() {
            let y = BigInt::from(2 * k as u64) - &top;
            let c = BigInt::from(c.clone());
            let mut pw = c;
            for s in sums.iter_mut() {
                *s += &pw;
                pw *= &y;
            }
        }
        let d = self.denominator();
        sums.into_iter()
            .enumerate()
            .map(|(j, s)| BigRational::new(s, &d << j))
            .collect()
    }

    pub fn variance(&self) -> BigRational {
        self.central_moments(2)[2].clone()
    }

    /// Cumulants `κ_j` for `j = 0..=max_order` of the centred law (`κ_0 = κ_1 = 0`).
    pub fn cumulants(&self, max_order: u32) -> Vec<BigRational> {
        let m = self.central_moments(max_order);
        let mut kappa = vec![BigRational::zero(); max_order as usize + 1];
        for order in 2..=max_order as usize {
            let row = binomial_row(order as u32 - 1);
            let mut k = m[order].clone();
            for j in 2..order {
                k -= int(row[j - 1].clone()) * &kappa[j] * &m[order - j];
            }
            kappa[order] = k;
        }
        kappa
    }

    /// `κ_{2n} / κ_2^n` exactly; odd orders must vanish, which they do by symmetry.
    pub fn standardized_cumulant(&self, order: u32) -> Result<BigRational> {
        if order < 2 {
            return Err(domain("DiscretePmf::standardized_cumulant", format!("order {order} < 2")));
        }
        let kappa = self.cumulants(order);
        let k = &kappa[order as usize];
        if order % 2 == 1 {
            if k.is_zero() {
                return Ok(BigRational::zero());
            }
            return Err(domain("DiscretePmf::standardized_cumulant", "non-zero odd cumulant"));
        }
        Ok(k / Pow::pow(&kappa[2], order / 2))
    }

    /// `ln E[e^{zZ}]` by log-sum-exp over the support.
    pub fn log_mgf(&self, z: f64) -> f64 {
        let logs: Vec<f64> = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::INFINITY).ln() + k as f64 * z)
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
        m + s.ln() - triangular(self.n) as f64 * LN_2
    }
}

/// The law of `Z_N` by convolving the uniform laws of `W_1, ..., W_N`.
pub fn zn_pmf(n: u32) -> Result<DiscretePmf> {
    budget("zn_pmf", n, MAX_PMF_N)?;
    let mut counts = vec![BigUint::one()];
    for k in 1..=n {
        let width = 1usize << k;
        let len = counts.len() + width - 1;
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(BigUint::zero());
        for j in 0..len {
            let next = counts.get(j).map_or_else(|| prefix[j].clone(), |c| &prefix[j] + c);
            prefix.push(next);
        }
        counts = (0..len)
            .map(|j| &prefix[j + 1] - &prefix[(j + 1).saturating_sub(width)])
            .collect();
    }
    Ok(DiscretePmf { n, counts })
}

/// Closed forms `μ_N = 2^N - N/2 - 1` and `σ_N^2 = (4^N - 3N/4 - 1)/9`, exactly.
pub fn zn_mean_variance_exact(n: u32) -> Result<(BigRational, BigRational)> {
    if n == 0 {
        return Err(domain("zn_mean_variance", "N = 0"));
    }
    let nn = int(n);
    let two_n = int(BigInt::one() << n);
    let mean = two_n.clone() - nn.clone() / int(2) - int(1);
    let var = (two_n.clone() * two_n - nn * BigRational::new(3.into(), 4.into()) - int(1)) / int(9);
    Ok((mean, var))
}

pub fn zn_mean_variance(n: u32) -> Result<(f64, f64)> {
    let (m, v) = zn_mean_variance_exact(n)?;
    Ok((m.as_f64(), v.as_f64()))
}

/// Which product formula for the moment generating function to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgfForm {
    /// `Π_{i<N} (1/2 + e^{2^i z}/2)^{N-i}`
    ProductOverI,
    /// `Π_{k=1}^{N} 2^{-k} (1 - e^{2^k z}) / (1 - e^z)`
    ProductOverK,
}

impl MgfForm {
    pub fn name(self) -> &'static str {
        match self {
            MgfForm::ProductOverI => "product-over-i",
            MgfForm::ProductOverK => "product-over-k",
        }
    }
}

/// `ln (e^u - 1)` for `u > 0`, or `ln (1 - e^u)` for `u < 0`.
fn ln_abs_expm1(u: f64) -> f64 {
    if u > 0.0 {
        u + (-(-u).exp_m1()).ln()
    } else {
        (-u.exp_m1()).ln()
    }
}

/// `ln E[e^{zZ_N}]` from either product formula.
pub fn zn_log_mgf(z: f64, n: u32, form: MgfForm) -> Result<f64> {
    if !z.is_finite() {
        return Err(domain("zn_log_mgf", format!("z = {z}")));
    }
    if n > 62 {
        return Err(Error::BudgetExceeded {
            what: "zn_log_mgf",
            requested: n as u128,
            limit: 62,
        });
    }
    let mut s = 0.0;
    match form {
        MgfForm::ProductOverI => {
            for i in 0..n {
                let t = z * (1u64 << i) as f64;
                // ln((1 + e^t)/2)
                let softplus = t.max(0.0) + (-t.abs()).exp().ln_1p();
                s += (n - i) as f64 * (softplus - LN_2);
            }
        }
        MgfForm::ProductOverK => {
            if z == 0.0 {
                return Ok(0.0);
            }
            let base = ln_abs_expm1(z);
            for k in 1..=n {
                s += ln_abs_expm1(z * (1u64 << k) as f64) - base - k as f64 * LN_2;
            }
        }
    }
    Ok(s)
}

/// `E[e^{zZ_N}]`; fails if the value overflows.
pub fn zn_mgf(z: f64, n: u32, form: MgfForm) -> Result<f64> {
    let l = zn_log_mgf(z, n, form)?;
    let v = l.exp();
    if !v.is_finite() {
        return Err(domain("zn_mgf", format!("log value {l} overflows; use zn_log_mgf")));
    }
    Ok(v)
}

/// Both product forms against each other and the second against the exact law.
pub fn mgf_reports(z: f64, n: u32, tol: Tolerance) -> Result<[IdentityReport; 2]> {
    let a = zn_log_mgf(z, n, MgfForm::ProductOverI)?;
    let b = zn_log_mgf(z, n, MgfForm::ProductOverK)?;
    let c = zn_pmf(n)?.log_mgf(z);
    let t = Truncation::exact(0);
    // logs are compared with an absolute floor since ln M(0) = 0
    let tol = tol.with_abs(tol.rel, 1.0);
    Ok([
        IdentityReport::compare("mgf-forms", params!("N" => n, "z" => z), a, b, tol, t),
        IdentityReport::compare("mgf-law", params!("N" => n, "z" => z), b, c, tol, t),
    ])
}

fn check_order(what: &'static str, order: u32) -> Result<()> {
    if !(2..=MAX_CUMULANT_ORDER).contains(&order) {
        return Err(domain(what, format!("order {order} outside 2..={MAX_CUMULANT_ORDER}")));
    }
    Ok(())
}

/// `B_{2n} / (2n)`.
fn bernoulli_ratio(order: u32) -> Result<BigRational> {
    Ok(bernoulli_even(order as usize)? / int(order))
}

/// Closed-form standardized cumulant `κ_{2n}^{(N)} / σ_N^{2n}`, exactly. Odd orders are zero.
pub fn standardized_cumulant_exact(n: u32, order: u32) -> Result<BigRational> {
    check_order("standardized_cumulant", order)?;
    if n == 0 {
        return Err(domain("standardized_cumulant", "N = 0"));
    }
    if order % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let half = order / 2;
    let four_half = BigInt::one() << (2 * half);
    let four_nn = BigInt::one() << (2 * half as usize * n as usize);
    let nn = BigInt::from(n);
    let (_, var) = zn_mean_variance_exact(n)?;
    // 9^n / (4^N - 3N/4 - 1)^n = σ_N^{-2n}
    let scale = Pow::pow(var, half).recip();
    let tail = BigRational::new(
        &four_half * (four_nn - &nn - 1) + nn,
        four_half - 1,
    );
    Ok(scale * bernoulli_ratio(order)? * tail)
}

pub fn standardized_cumulant(n: u32, order: u32) -> Result<f64> {
    Ok(standardized_cumulant_exact(n, order)?.as_f64())
}

/// `lim_N κ_{2n}^{(N)} = (B_{2n}/2n) 6^{2n} / (2^{2n} - 1)`, exactly.
pub fn limit_cumulant_exact(order: u32) -> Result<BigRational> {
    check_order("limit_cumulant", order)?;
    if order % 2 == 1 {
        return Ok(BigRational::zero());
    }
    let six = int(Pow::pow(BigInt::from(6), order));
    let den = int((BigInt::one() << order) - 1);
    Ok(bernoulli_ratio(order)? * six / den)
}

pub fn limit_cumulant(order: u32) -> Result<f64> {
    Ok(limit_cumulant_exact(order)?.as_f64())
}

/// Closed-form standardized cumulant against the one extracted from the exact law.
pub fn cumulant_report(n: u32, order: u32) -> Result<IdentityReport> {
    let closed = standardized_cumulant_exact(n, order)?;
    let oracle = zn_pmf(n)?.standardized_cumulant(order)?;
    Ok(IdentityReport::exact(
        "zn-cumulants",
        params!("N" => n, "order" => order),
        closed,
        oracle,
    ))
}

/// Mean and variance closed forms against the exact law.
pub fn moment_reports(n: u32) -> Result<[IdentityReport; 2]> {
    let (mean, var) = zn_mean_variance_exact(n)?;
    let pmf = zn_pmf(n)?;
    Ok([
        IdentityReport::exact("zn-mean", params!("N" => n), mean, pmf.mean()),
        IdentityReport::exact("zn-variance", params!("N" => n), var, pmf.variance()),
    ])
}

/// `Σ_k k α_k^{(N-1)}`.
pub fn weights_first_moment_unnormalized(n: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(domain("weights_first_moment", "N = 0"));
    }
    let t = alpha_weights(n - 1)?;
    Ok((0..t.len()).fold(BigInt::zero(), |acc, k| acc + BigInt::from(t.get(k)) * BigInt::from(k)))
}

/// `Σ_k k p_k^{(N-1)}`, which equals `(2^N - N - 1)/2`.
pub fn weights_first_moment(n: u32) -> Result<BigRational> {
    let m = weights_first_moment_unnormalized(n)?;
    Ok(BigRational::new(m, BigInt::one() << triangular(n - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn small_alternating_sums() {
        assert_eq!(alternating_sum_direct(|t: &f64| *t, &0.0, 1).unwrap(), -1.0);
        for n in 1..6 {
            assert_eq!(alternating_sum_direct(|_: &f64| 3.5, &1.7, n).unwrap(), 0.0);
        }
        // e^x at N = 3: Π_{i<3} (1 - e^{2^i})
        let want = (1.0 - 1f64.exp()) * (1.0 - 2f64.exp()) * (1.0 - 4f64.exp());
        let got = alternating_sum_direct(|t: &f64| t.exp(), &0.0, 3).unwrap();
        assert!((got - want).abs() < 1e-12 * want.abs());
        assert!(alternating_sum_direct(|t: &f64| *t, &0.0, 31).is_err());
    }

    #[test]
    fn forward_differences() {
        for n in 0..8u32 {
            let d = forward_difference(|t: &BigRational| power(t, n), &q(3, 7), n);
            assert_eq!(d, int(factorial(n)));
        }
        for n in 1..8u32 {
            let lower = forward_difference(|t: &BigRational| power(t, n) - t.clone(), &q(-1, 2), n + 1);
            assert!(lower.is_zero());
        }
        let e = 1f64.exp();
        let d = forward_difference(|t: &f64| t.exp(), &0.0, 2);
        assert!((d - (e - 1.0) * (e - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn delta_product_small_cases() {
        let f = |t: &BigRational| power(t, 3) * q(2, 3) + t.clone() * q(-5, 1) + power(t, 5);
        let x = q(1, 3);
        let two = f(&x) - f(&shifted(&x, 1)) - f(&shifted(&x, 2)) + f(&shifted(&x, 3));
        assert_eq!(delta_product_form(f, &x, 2).unwrap(), two);
        assert_eq!(delta_product_form(|_: &f64| 2.0, &0.4, 5).unwrap(), 0.0);
        let s = delta_product_form(|t: &f64| t.sin(), &0.3, 4).unwrap();
        let d = alternating_sum_direct(|t: &f64| t.sin(), &0.3, 4).unwrap();
        assert!((s - d).abs() < 1e-14);
    }

    #[test]
    fn weight_tables() {
        assert_eq!(alpha_weights(0).unwrap().to_vec(), ints(&[1]));
        assert_eq!(alpha_weights(1).unwrap().to_vec(), ints(&[1, 1]));
        assert_eq!(alpha_weights(2).unwrap().to_vec(), ints(&[1, 2, 2, 2, 1]));
        assert_eq!(
            alpha_weights(3).unwrap().to_vec(),
            ints(&[1, 3, 5, 7, 8, 8, 8, 8, 7, 5, 3, 1])
        );
        for n in 0..=10 {
            let t = alpha_weights(n).unwrap();
            assert_eq!(t.to_vec(), alpha_weights_oracle(n).unwrap(), "{n}");
            assert!(t.is_symmetric());
            assert_eq!(t.len(), (1 << (n + 1)) - n as usize - 1);
            assert!(weights_report(n).unwrap().pass);
        }
        for n in [14, 18, 20] {
            assert!(weights_total_report(n).unwrap().pass, "{n}");
        }
        assert!(alpha_weights(MAX_WEIGHT_N + 1).is_err());
    }

    #[test]
    fn multi_limb_entries_match_oracle() {
        // N = 12 needs two limbs per entry
        let t = alpha_weights(12).unwrap();
        assert_eq!(t.to_vec(), alpha_weights_oracle(12).unwrap());
        let p = t.probabilities();
        assert_eq!(p.iter().fold(BigRational::zero(), |a, b| a + b), int(1));
    }

    #[test]
    fn weight_identity_numeric() {
        let tol = Tolerance::relative(1e-9);
        for f in TestFunction::ALL {
            for x in [0.0, 0.3, 2.0] {
                for n in 1..=10 {
                    for r in weights_identity_reports(f, x, n, tol).unwrap() {
                        assert!(r.pass, "{r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn weights_identity_exact_reciprocal() {
        // exact arithmetic leaves no rounding to hide behind
        let f = |t: &BigRational| (t.clone() + q(1, 1)).recip();
        for n in 1..=10 {
            let x = q(3, 10);
            let d = alternating_sum_direct(f, &x, n).unwrap();
            assert_eq!(alternating_sum_via_weights(f, &x, n).unwrap(), d, "{n}");
            if n <= 8 {
                assert_eq!(delta_product_form(f, &x, n).unwrap(), d, "{n}");
            }
        }
    }

    #[test]
    fn via_weights_magnitude_growth() {
        let m = via_weights_magnitude(|_| 1.0, 0.0, 6).unwrap();
        assert_eq!(m, 2f64.powi(21));
    }

    #[test]
    fn monomial_closed_forms() {
        for n in 1..=10 {
            for x in [q(0, 1), q(1, 1), q(-3, 2)] {
                assert!(monomial_report(n, &x).unwrap().pass, "{n} {x}");
                assert!(next_monomial_report(n, &x).unwrap().pass, "{n} {x}");
                let via = alternating_sum_via_weights(|t: &BigRational| power(t, n + 1), &x, n).unwrap();
                assert_eq!(via, next_monomial_sum_closed(n, &x));
            }
        }
        assert_eq!(monomial_sum_closed(3), int(-48));
    }

    #[test]
    fn weights_identity_exact_polynomials() {
        let f = |t: &BigRational| power(t, 7) - power(t, 4) * q(3, 5) + q(2, 9);
        for n in 1..=7 {
            let x = q(7, 3);
            let d = alternating_sum_direct(f, &x, n).unwrap();
            assert_eq!(alternating_sum_via_weights(f, &x, n).unwrap(), d);
            assert_eq!(delta_product_form(f, &x, n).unwrap(), d);
        }
    }

    #[test]
    fn shifted_index_variant() {
        // Σ_{n<2^{N+1}} (-1)^{s(n)} f(x+n) = (-1)^{N+1} 2^{N(N+1)/2} Σ_k p_k^{(N)} Δ^{N+1} f(x+k)
        let f = |t: &BigRational| power(t, 6) + t.clone();
        let x = q(-1, 4);
        for n in 0..6u32 {
            let lhs = alternating_sum_direct(f, &x, n + 1).unwrap();
            let p = alpha_weights(n).unwrap().probabilities();
            let row = binomial_row(n + 1);
            let mut s = BigRational::zero();
            for (k, pk) in p.iter().enumerate() {
                s += pk * difference_with_row(&row, &f, &shifted(&x, k as i64));
            }
            let rhs = signed(int(BigInt::one() << triangular(n)) * s, (n + 1) % 2 == 1);
            assert_eq!(lhs, rhs, "{n}");
        }
    }

    #[test]
    fn prouhet() {
        assert!(polynomial_annihilation_check(&[1.0], 1, 0.0, 1e-14).unwrap());
        assert!(polynomial_annihilation_check(&[1.0, 3.0, 1.0], 3, 0.7, 1e-13).unwrap());
        assert!(!polynomial_annihilation_check(&[0.0, 0.0, 0.0, 1.0], 3, 0.0, 1e-13).unwrap());
        let c = [int(1), int(3), int(1)];
        assert!(polynomial_annihilation_exact(&c, 3, &q(7, 10)).unwrap());
        let cube = [int(0), int(0), int(0), int(1)];
        assert!(!polynomial_annihilation_exact(&cube, 3, &q(7, 10)).unwrap());
        for n in 1..=8 {
            assert!(prouhet_report(n, &q(-5, 3)).unwrap().pass);
        }
    }

    #[test]
    fn pmf_basics() {
        let p1 = zn_pmf(1).unwrap();
        assert_eq!(p1.masses(), vec![q(1, 2), q(1, 2)]);
        let p2 = zn_pmf(2).unwrap();
        assert_eq!(p2.masses(), vec![q(1, 8), q(2, 8), q(2, 8), q(2, 8), q(1, 8)]);
        for n in 0..=12 {
            let p = zn_pmf(n).unwrap();
            assert_eq!(p.total_mass(), int(1));
            assert_eq!(p.masses(), alpha_weights(n).unwrap().probabilities(), "{n}");
        }
    }

    #[test]
    fn mean_and_variance() {
        assert_eq!(zn_mean_variance(1).unwrap(), (0.5, 0.25));
        assert_eq!(zn_mean_variance(2).unwrap(), (2.0, 1.5));
        for n in 1..=12 {
            for r in moment_reports(n).unwrap() {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn mgf_forms() {
        for n in 0..6 {
            assert_eq!(zn_mgf(0.0, n, MgfForm::ProductOverI).unwrap(), 1.0);
            assert_eq!(zn_mgf(0.0, n, MgfForm::ProductOverK).unwrap(), 1.0);
        }
        let a = zn_mgf(0.1, 3, MgfForm::ProductOverI).unwrap();
        let b = zn_mgf(0.1, 3, MgfForm::ProductOverK).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        let pmf = zn_pmf(2).unwrap();
        let direct: f64 = pmf.masses().iter().enumerate().map(|(k, p)| p.as_f64() * (-(k as f64)).exp()).sum();
        assert!((zn_mgf(-1.0, 2, MgfForm::ProductOverK).unwrap() - direct).abs() < 1e-15);
        for n in [1, 4, 9] {
            for z in [-3.0, -0.5, -1e-9, 1e-9, 0.01, 0.2] {
                for r in mgf_reports(z, n, Tolerance::relative(1e-12)).unwrap() {
                    assert!(r.pass, "{r:?}");
                }
            }
        }
        // large arguments stay finite in log space
        let l = zn_log_mgf(50.0, 20, MgfForm::ProductOverI).unwrap();
        assert!(l.is_finite() && l > 700.0);
        assert!(zn_mgf(50.0, 20, MgfForm::ProductOverI).is_err());
    }

    #[test]
    fn cumulants() {
        for n in 1..=20 {
            assert_eq!(standardized_cumulant_exact(n, 2).unwrap(), int(1));
        }
        assert_eq!(limit_cumulant_exact(2).unwrap(), int(1));
        assert_eq!(limit_cumulant_exact(4).unwrap(), q(-18, 25));
        assert_eq!(limit_cumulant(4).unwrap(), -0.72);
        for n in 1..=8 {
            for order in 2..=8 {
                assert!(cumulant_report(n, order).unwrap().pass, "{n} {order}");
            }
        }
        let k14 = standardized_cumulant(14, 4).unwrap();
        assert!((k14 + 0.72).abs() < 1e-3);
        let k12 = zn_pmf(12).unwrap().standardized_cumulant(4).unwrap().as_f64();
        assert!((standardized_cumulant(12, 4).unwrap() - k12).abs() < 1e-15);
        assert!(standardized_cumulant(3, 18).is_err());
        assert!(limit_cumulant(1).is_err());
    }

    #[test]
    fn limit_approaches_uniform_cumulants() {
        // (B_{2n}/2n) 3^{2n} are the cumulants of a uniform law of width 3
        for order in [10u32, 12, 14, 16] {
            let uni = bernoulli_ratio(order).unwrap() * int(Pow::pow(BigInt::from(3), order));
            let r = (limit_cumulant_exact(order).unwrap() / uni).as_f64();
            assert!((r - 1.0).abs() < 2.0 * 0.25f64.powi(order as i32 / 2), "{order}: {r}");
        }
    }

    #[test]
    fn first_moment() {
        assert_eq!(weights_first_moment(2).unwrap(), q(1, 2));
        assert_eq!(weights_first_moment(3).unwrap(), int(2));
        assert_eq!(weights_first_moment(4).unwrap(), q(11, 2));
        for n in 1..=14u32 {
            let want = q((1i64 << n) - n as i64 - 1, 2);
            assert_eq!(weights_first_moment(n).unwrap(), want);
            // the unnormalized reading: (1/2) 2^{N(N-1)/2} (2^N - N - 1)
            let un = int(BigInt::one() << triangular(n - 1)) * want;
            assert_eq!(int(weights_first_moment_unnormalized(n).unwrap()), un);
        }
    }

    proptest! {
        #[test]
        fn delta_product_matches_direct(x in -3.0f64..3.0, n in 1u32..9, c in 0.5f64..4.0) {
            let f = |t: &f64| 1.0 / (t.abs() + c);
            let d = alternating_sum_direct(f, &x, n).unwrap();
            let p = delta_product_form(f, &x, n).unwrap();
            let scale = alternating_sum_magnitude(|t| f(&t), x, n).unwrap();
            prop_assert!((d - p).abs() <= 1e-13 * scale);
        }

        #[test]
        fn thue_morse_sign_flips_on_low_bit(n in 0u64..1 << 40) {
            prop_assert_eq!(thue_morse_sign(2 * n), -thue_morse_sign(2 * n + 1));
        }
    }
}
