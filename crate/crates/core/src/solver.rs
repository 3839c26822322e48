//! Inversion of `g(n) = f(n) - Σ_{j<b} f(bn+j)` and the digit-sum series it unlocks:
//! `Σ_{n≥1} s_b(n) g(n) = Σ_{j=1}^{b-1} j Σ_{n≥0} f(bn+j)`.

use crate::digitseq::{digit_count, digit_sum, Base};
use crate::error::{domain, Error, Result};
use crate::params;
use crate::precision::{Approx, PrecisionContext, Truncation};
use crate::report::{IdentityReport, Tolerance};
use crate::sum::CompensatedSum;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Sub};

/// Declared bound on `|g(n)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `|g(n)| ≤ c n^{-beta}` with `beta > 1`.
    Power { c: f64, beta: f64 },
    /// `|g(n)| ≤ c ratio^n` with `0 ≤ ratio < 1`.
    Geometric { c: f64, ratio: f64 },
}

type EvalFn<'a> = Box<dyn Fn(u64) -> f64 + Send + Sync + 'a>;
type RangeFn<'a> = Box<dyn Fn(u64, u64) -> f64 + Send + Sync + 'a>;

/// A real sequence `n ↦ g(n)` together with what the solvers may assume about it.
pub struct SequenceFn<'a> {
    eval: EvalFn<'a>,
    range_sum: Option<RangeFn<'a>>,
    support_bound: Option<u64>,
    decay: Option<Decay>,
}

impl fmt::Debug for SequenceFn<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceFn")
            .field("range_sum", &self.range_sum.is_some())
            .field("support_bound", &self.support_bound)
            .field("decay", &self.decay)
            .finish()
    }
}

impl<'a> SequenceFn<'a> {
    pub fn new(eval: impl Fn(u64) -> f64 + Send + Sync + 'a) -> Self {
        Self {
            eval: Box::new(eval),
            range_sum: None,
            support_bound: None,
            decay: None,
        }
    }

    /// `g(n) = 0` for every `n ≥ bound`.
    pub fn with_support(mut self, bound: u64) -> Self {
        self.support_bound = Some(bound);
        self
    }

    pub fn with_decay(mut self, decay: Decay) -> Result<Self> {
        match decay {
            Decay::Power { c, beta } if c >= 0.0 && beta > 1.0 => {}
            Decay::Geometric { c, ratio } if c >= 0.0 && (0.0..1.0).contains(&ratio) => {}
            _ => return Err(domain("SequenceFn::with_decay", format!("{decay:?}"))),
        }
        self.decay = Some(decay);
        Ok(self)
    }

    /// A closed form for `Σ_{m=start}^{start+len-1} g(m)`, used for the inner block sums.
    pub fn with_range_sum(mut self, range_sum: impl Fn(u64, u64) -> f64 + Send + Sync + 'a) -> Self {
        self.range_sum = Some(Box::new(range_sum));
        self
    }

    pub fn eval(&self, n: u64) -> f64 {
        match self.support_bound {
            Some(b) if n >= b => 0.0,
            _ => (self.eval)(n),
        }
    }

    pub fn support_bound(&self) -> Option<u64> {
        self.support_bound
    }

    pub fn decay(&self) -> Option<Decay> {
        self.decay
    }

    fn block_sum(&self, start: u64, len: u64) -> f64 {
        let len = match self.support_bound {
            Some(b) if start >= b => return 0.0,
            Some(b) => len.min(b - start),
            None => len,
        };
        match &self.range_sum {
            Some(r) => r(start, len),
            None => {
                let mut s = CompensatedSum::new();
                for m in start..start + len {
                    s.add((self.eval)(m));
                }
                s.value()
            }
        }
    }

    /// Bound on `Σ_{k≥k0} |Σ_{l<b^k} g(b^k n + l)|`.
    fn block_tail(&self, b: u64, n: u64, k0: u32) -> f64 {
        let bf = b as f64;
        let start = n as f64 * bf.powi(k0 as i32);
        match self.decay {
            Some(Decay::Power { c, beta }) => {
                c * bf.powi(k0 as i32) * start.powf(-beta) / (1.0 - bf.powf(1.0 - beta))
            }
            Some(Decay::Geometric { c, ratio }) => {
                if ratio == 0.0 {
                    return 0.0;
                }
                2.0 * c * (start * ratio.ln()).exp() / (1.0 - ratio)
            }
            None => f64::INFINITY,
        }
    }
}

/// How far the solvers may go and how small a dropped tail must be.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub k_max: u32,
    /// Relative size below which a bounded tail is dropped.
    pub tol: f64,
    /// First block length of the outer sum before extrapolation.
    pub outer_block: u64,
    /// Largest number of `g` evaluations a single block sum may use.
    pub max_terms: u64,
}

impl TruncationPolicy {
    pub fn from_ctx(ctx: &PrecisionContext) -> Self {
        Self {
            k_max: 62,
            tol: ctx.rel_tol,
            outer_block: 4096,
            max_terms: ctx.max_terms,
        }
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self::from_ctx(&PrecisionContext::default())
    }
}

fn check_base(b: u32) -> Result<u64> {
    Ok(Base::new(b)?.as_u64())
}

/// `f(n) = Σ_{k≥0} Σ_{l<b^k} g(b^k n + l)`, truncated by the support bound or the declared decay.
pub fn solve_implicit(b: u32, g: &SequenceFn, n: u64, policy: &TruncationPolicy) -> Result<Approx> {
    let b = check_base(b)?;
    if n == 0 {
        return Err(domain("solve_implicit", "n = 0"));
    }
    if g.support_bound.is_none() && g.decay.is_none() {
        return Err(Error::UndeclaredDecay { what: "solve_implicit" });
    }
    let mut s = CompensatedSum::new();
    let mut width = 1u64;
    let mut start = n;
    let mut terms = 0u64;
    for k in 0..=policy.k_max {
        if let Some(bound) = g.support_bound {
            if start >= bound {
                return Ok(Approx {
                    value: s.value(),
                    truncation: Truncation::exact(terms),
                });
            }
        }
        if g.decay.is_some() && k > 0 {
            let tail = g.block_tail(b, n, k);
            if tail <= policy.tol * s.value().abs() || tail == 0.0 {
                return Ok(Approx {
                    value: s.value(),
                    truncation: Truncation {
                        terms,
                        tail_bound: tail,
                    },
                });
            }
        }
        if g.range_sum.is_none() && width > policy.max_terms {
            break;
        }
        s.add(g.block_sum(start, width));
        terms += if g.range_sum.is_some() { 1 } else { width };
        match (start.checked_mul(b), width.checked_mul(b)) {
            (Some(st), Some(w)) => {
                start = st;
                width = w;
            }
            _ => break,
        }
    }
    Err(Error::TruncationBudget {
        what: "solve_implicit",
        terms,
        tail_estimate: g.block_tail(b, n, policy.k_max),
    })
}

/// Richardson extrapolation of values at `M, 2M, 4M, ...` whose error expands in
/// `M^{-e}` for the given exponents. Returns the estimate and the last correction.
fn richardson(values: &[f64], exponents: &[f64]) -> (f64, f64) {
    let mut row = values.to_vec();
    let mut last = f64::INFINITY;
    for &e in exponents.iter().take(values.len() - 1) {
        let w = 2f64.powf(e);
        let next: Vec<f64> = row.windows(2).map(|p| (w * p[1] - p[0]) / (w - 1.0)).collect();
        last = (next[next.len() - 1] - row[row.len() - 1]).abs();
        row = next;
    }
    (row[row.len() - 1], last)
}

/// `Σ_{n≥1} s_b(n) g(n)` evaluated as `Σ_{j=1}^{b-1} j Σ_{n≥0} f(bn+j)` through [`solve_implicit`].
///
/// With a support bound the outer sum is finite. With power decay the outer partial sums
/// at `M, 2M, ..., 16M` are extrapolated; with geometric decay the outer sum runs until its
/// bounded tail is negligible.
pub fn weighted_digit_sum(b: u32, g: &SequenceFn, policy: &TruncationPolicy) -> Result<Approx> {
    let bb = check_base(b)?;
    let f = |m: u64| solve_implicit(b, g, m, policy);
    let mut total = 0.0;
    let mut trunc = Truncation::default();
    if let Some(bound) = g.support_bound {
        for j in 1..bb {
            let mut s = CompensatedSum::new();
            let mut n = 0u64;
            while bb * n + j < bound {
                let a = f(bb * n + j)?;
                s.add(a.value);
                trunc = trunc.combine(a.truncation);
                n += 1;
            }
            total += j as f64 * s.value();
        }
        return Ok(Approx {
            value: total,
            truncation: trunc,
        });
    }
    match g.decay {
        None => Err(Error::UndeclaredDecay { what: "weighted_digit_sum" }),
        Some(Decay::Power { beta, .. }) => {
            const LEVELS: usize = 5;
            let m0 = policy.outer_block.max(1);
            let exps: Vec<f64> = (0..LEVELS).map(|i| beta - 1.0 + i as f64).collect();
            let mut err = 0.0;
            for j in 1..bb {
                let mut partial = Vec::with_capacity(LEVELS);
                let mut s = CompensatedSum::new();
                let mut n = 0u64;
                for level in 0..LEVELS {
                    let upto = m0 << level;
                    while n < upto {
                        let a = f(bb * n + j)?;
                        s.add(a.value);
                        trunc.terms += a.truncation.terms;
                        trunc.tail_bound += a.truncation.tail_bound;
                        n += 1;
                    }
                    partial.push(s.value());
                }
                let (v, e) = richardson(&partial, &exps);
                total += j as f64 * v;
                err += j as f64 * e;
            }
            trunc.tail_bound += err;
            Ok(Approx {
                value: total,
                truncation: trunc,
            })
        }
        Some(Decay::Geometric { c, ratio }) => {
            for j in 1..bb {
                let mut s = CompensatedSum::new();
                let mut n = 0u64;
                loop {
                    let m = bb * n + j;
                    // Σ_{n'≥n} |f(bn'+j)| ≤ Σ_{m'≥m} c r^{m'} / (1-r)^2 summed over digit blocks
                    let tail = 2.0 * c * (m as f64 * ratio.ln()).exp() / ((1.0 - ratio) * (1.0 - ratio.powi(bb as i32)));
                    if tail <= policy.tol * s.value().abs() || ratio == 0.0 && n > 0 {
                        trunc.tail_bound += j as f64 * tail;
                        break;
                    }
                    if n > policy.max_terms {
                        return Err(Error::TruncationBudget {
                            what: "weighted_digit_sum",
                            terms: n,
                            tail_estimate: tail,
                        });
                    }
                    let a = f(m)?;
                    s.add(a.value);
                    trunc = trunc.combine(a.truncation);
                    n += 1;
                }
                total += j as f64 * s.value();
            }
            Ok(Approx {
                value: total,
                truncation: trunc,
            })
        }
    }
}

/// `g(n) = 1/(n(n+1))`, whose block sums telescope to `1/m - 1/(m+L)`.
pub fn putnam_sequence() -> SequenceFn<'static> {
    SequenceFn::new(|n| {
        let n = n as f64;
        1.0 / (n * (n + 1.0))
    })
    .with_range_sum(|m, len| {
        let (m, e) = (m as f64, (m + len) as f64);
        len as f64 / (m * e)
    })
    .with_decay(Decay::Power { c: 1.0, beta: 2.0 })
    .expect("valid decay")
}

/// [`weighted_digit_sum`] of [`putnam_sequence`] against `(b/(b-1)) ln b`.
pub fn putnam_check(b: u32, tol: Tolerance, policy: &TruncationPolicy) -> Result<IdentityReport> {
    let got = weighted_digit_sum(b, &putnam_sequence(), policy)?;
    let bf = b as f64;
    let want = bf / (bf - 1.0) * bf.ln();
    Ok(IdentityReport::compare(
        "putnam",
        params!("b" => b),
        got.value,
        want,
        tol,
        got.truncation,
    ))
}

/// Both sides of `Σ s_b(n)(f(n) - Σ_j f(bn+j)) = Σ_{j≥1} j Σ_n f(bn+j)` for `f` vanishing from `support` on.
pub fn base_relation_sides<T>(b: u32, f: impl Fn(u64) -> T, support: u64) -> Result<(T, T)>
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T> + MulByInt,
{
    let base = Base::new(b)?;
    let bb = base.as_u64();
    let fz = |m: u64| if m < support { f(m) } else { T::zero() };
    let mut lhs = T::zero();
    for n in 1..support {
        let mut inner = fz(n);
        for j in 0..bb {
            inner = inner - fz(bb * n + j);
        }
        lhs = lhs + inner.mul_int(digit_sum(n, base) as i64);
    }
    let mut rhs = T::zero();
    for j in 1..bb {
        let mut s = T::zero();
        let mut n = 0;
        while bb * n + j < support {
            s = s + fz(bb * n + j);
            n += 1;
        }
        rhs = rhs + s.mul_int(j as i64);
    }
    Ok((lhs, rhs))
}

/// Multiplication by a small integer, the only product the finite solvers need.
pub trait MulByInt {
    fn mul_int(&self, k: i64) -> Self;
}

impl MulByInt for f64 {
    fn mul_int(&self, k: i64) -> Self {
        self * k as f64
    }
}

impl MulByInt for BigRational {
    fn mul_int(&self, k: i64) -> Self {
        self * BigRational::from_integer(k.into())
    }
}

/// The base relation in floating point for a finitely supported sequence.
pub fn base_relation_check(b: u32, f: &SequenceFn, tol: Tolerance) -> Result<IdentityReport> {
    let support = f
        .support_bound
        .ok_or(Error::UndeclaredDecay { what: "base_relation_check" })?;
    let (lhs, rhs) = base_relation_sides(b, |m| f.eval(m), support)?;
    Ok(IdentityReport::compare(
        "base-relation",
        params!("b" => b, "support" => support),
        lhs,
        rhs,
        tol,
        Truncation::exact(support),
    ))
}

/// The base relation exactly, for a rational sequence.
pub fn base_relation_exact(b: u32, f: impl Fn(u64) -> BigRational, support: u64) -> Result<IdentityReport> {
    let (lhs, rhs) = base_relation_sides(b, f, support)?;
    Ok(IdentityReport::exact(
        "base-relation",
        params!("b" => b, "support" => support),
        lhs,
        rhs,
    ))
}

/// Largest `p` accepted by the finite solver.
pub const MAX_FINITE_P: u32 = 24;

/// Solution of the finite system `g(n) = f(n) - f(2n) - f(2n+1)` for `n < 2^{p-1}`,
/// `g(n) = f(n)` for `2^{p-1} ≤ n < 2^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSolution<T> {
    p: u32,
    values: Vec<T>,
}

impl<T> FiniteSolution<T> {
    pub fn p(&self) -> u32 {
        self.p
    }

    /// `f(n)` for `1 ≤ n < 2^p`.
    pub fn get(&self, n: u64) -> Result<&T> {
        if n == 0 || n >= 1 << self.p {
            return Err(domain("FiniteSolution::get", format!("n = {n} outside [1, 2^{})", self.p)));
        }
        Ok(&self.values[n as usize])
    }
}

impl<T: Clone + PartialEq + Sub<Output = T>> FiniteSolution<T> {
    /// Whether every equation of the system holds exactly for `g`.
    pub fn satisfies(&self, g: impl Fn(u64) -> T) -> bool {
        let half = 1u64 << (self.p - 1);
        (1..1u64 << self.p).all(|n| {
            let f = &self.values[n as usize];
            let want = g(n);
            if n < half {
                f.clone() - self.values[2 * n as usize].clone() - self.values[2 * n as usize + 1].clone() == want
            } else {
                *f == want
            }
        })
    }
}

fn bits(n: u64) -> u32 {
    digit_count(n, Base::BINARY).expect("n > 0")
}

fn check_p(what: &'static str, p: u32) -> Result<()> {
    if p == 0 || p > MAX_FINITE_P {
        return Err(Error::BudgetExceeded {
            what,
            requested: p as u128,
            limit: MAX_FINITE_P as u128,
        });
    }
    Ok(())
}

/// `f(n) = Σ_{k=0}^{p-L(n)} Σ_{l<2^k} g(2^k n + l)` with `L(n)` the bit length of `n`.
pub fn solve_implicit_finite<T>(p: u32, g: impl Fn(u64) -> T) -> Result<FiniteSolution<T>>
where
    T: Clone + Zero + Add<Output = T>,
{
    check_p("solve_implicit_finite", p)?;
    let mut values = vec![T::zero(); 1 << p];
    for n in 1..1u64 << p {
        let mut s = T::zero();
        for k in 0..=p - bits(n) {
            for l in 0..1u64 << k {
                s = s + g((n << k) + l);
            }
        }
        values[n as usize] = s;
    }
    Ok(FiniteSolution { p, values })
}

/// `Σ_{n=1}^{2^p-1} s_2(n) g(n)` as `Σ_{n=0}^{2^{p-1}-1} f(2n+1)`.
pub fn finite_weighted_sum<T>(p: u32, g: impl Fn(u64) -> T) -> Result<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    let sol = solve_implicit_finite(p, g)?;
    Ok((0..1u64 << (p - 1)).fold(T::zero(), |acc, n| acc + sol.values[2 * n as usize + 1].clone()))
}

/// `Σ_{n=0}^{2^{p-1}-1} Σ_{k=0}^{p-L(2n+1)} Σ_{l<2^k} g(2^{k+1} n + 2^k + l)`, expanded without solving.
pub fn finite_triple_sum<T>(p: u32, g: impl Fn(u64) -> T) -> Result<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    check_p("finite_triple_sum", p)?;
    let mut s = T::zero();
    for n in 0..1u64 << (p - 1) {
        for k in 0..=p - bits(2 * n + 1) {
            for l in 0..1u64 << k {
                s = s + g((n << (k + 1)) + (1 << k) + l);
            }
        }
    }
    Ok(s)
}

/// `Σ_{n=1}^{2^p-1} s_2(n) g(n)` summed directly.
pub fn finite_direct_sum<T>(p: u32, g: impl Fn(u64) -> T) -> Result<T>
where
    T: Clone + Zero + Add<Output = T> + MulByInt,
{
    check_p("finite_direct_sum", p)?;
    Ok((1..1u64 << p).fold(T::zero(), |acc, n| acc + g(n).mul_int(n.count_ones() as i64)))
}

/// Finite solver, triple sum and direct sum, exactly, for a rational `g`.
pub fn finite_solver_reports(p: u32, g: impl Fn(u64) -> BigRational + Copy) -> Result<[IdentityReport; 2]> {
    let direct = finite_direct_sum(p, g)?;
    let via = finite_weighted_sum(p, g)?;
    let triple = finite_triple_sum(p, g)?;
    Ok([
        IdentityReport::exact("finite-solver", params!("p" => p), via, direct.clone()),
        IdentityReport::exact("finite-triple-sum", params!("p" => p), triple, direct),
    ])
}

/// `k`-fold application of `h ↦ (x ↦ Σ_{j<b} h(bx + j))`, built by nesting.
pub fn dilation_power(b: u32, g: &dyn Fn(f64) -> f64, k: u32, x: f64) -> f64 {
    if k == 0 {
        return g(x);
    }
    let bf = b as f64;
    (0..b).map(|j| dilation_power(b, g, k - 1, bf * x + j as f64)).sum()
}

/// `Σ_{k≥0} 2^{-k-2} Σ_{n≥1} 1/((y_k+n-1/2)(y_k+n))` with `y_k = x/2^{k+1}`, against `J_∞(x)`.
///
/// Each inner series is summed to `M, 2M, ..., 16M` terms and extrapolated in powers of `1/M`.
pub fn recover_j_infinity_check(x: f64, tol: Tolerance, ctx: &PrecisionContext) -> Result<IdentityReport> {
    if !(x.is_finite() && x > 0.0) {
        return Err(domain("recover_j_infinity_check", format!("x = {x} must be positive")));
    }
    const M: u64 = 512;
    const LEVELS: usize = 5;
    let exps: Vec<f64> = (1..=LEVELS).map(|e| e as f64).collect();
    let mut total = CompensatedSum::new();
    let mut err = 0.0;
    let mut terms = 0u64;
    let mut k = 0i32;
    loop {
        let y = x / 2f64.powi(k + 1);
        let weight = 2f64.powi(-k - 2);
        let mut partial = Vec::with_capacity(LEVELS);
        let mut s = CompensatedSum::new();
        let mut n = 1u64;
        for level in 0..LEVELS {
            let upto = M << level;
            while n <= upto {
                let nf = n as f64;
                s.add(1.0 / ((y + nf - 0.5) * (y + nf)));
                n += 1;
            }
            partial.push(s.value());
        }
        terms += n - 1;
        let (v, e) = richardson(&partial, &exps);
        total.add(weight * v);
        err += weight * e;
        // inner sums are at most Σ 1/((n-1/2)n) = 2 ln 2 < 1.4
        let rest = 1.4 * weight;
        if rest < ctx.rel_tol * 1e-3 * total.value() {
            err += rest;
            break;
        }
        k += 1;
        if k > 200 {
            return Err(Error::TruncationBudget {
                what: "recover_j_infinity_check",
                terms,
                tail_estimate: rest,
            });
        }
    }
    let want = crate::identities::j_infinity(2, x, ctx)?;
    Ok(IdentityReport::compare(
        "recover-j-infinity",
        params!("x" => x),
        total.value(),
        want.value,
        tol,
        Truncation {
            terms,
            tail_bound: err,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambert::lambert_gf;
    use crate::specfun::hurwitz_zeta;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;
    use std::f64::consts::LN_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Formal linear combination of the symbols `g(m)`.
    #[derive(Debug, Clone, PartialEq, Default)]
    struct Formal(BTreeMap<u64, i64>);

    impl Formal {
        fn sym(m: u64) -> Self {
            Formal(BTreeMap::from([(m, 1)]))
        }
        fn of(ms: &[u64]) -> Self {
            ms.iter().fold(Formal::default(), |a, &m| a + Formal::sym(m))
        }
    }

    impl Add for Formal {
        type Output = Formal;
        fn add(mut self, rhs: Formal) -> Formal {
            for (k, v) in rhs.0 {
                *self.0.entry(k).or_insert(0) += v;
            }
            self.0.retain(|_, v| *v != 0);
            self
        }
    }

    impl Sub for Formal {
        type Output = Formal;
        fn sub(self, rhs: Formal) -> Formal {
            self + Formal(rhs.0.into_iter().map(|(k, v)| (k, -v)).collect())
        }
    }

    impl Zero for Formal {
        fn zero() -> Self {
            Formal::default()
        }
        fn is_zero(&self) -> bool {
            self.0.is_empty()
        }
    }

    impl MulByInt for Formal {
        fn mul_int(&self, k: i64) -> Self {
            Formal(self.0.iter().filter(|_| k != 0).map(|(&m, &v)| (m, v * k)).collect())
        }
    }

    #[test]
    fn worked_example_p4() {
        let sol = solve_implicit_finite(4, Formal::sym).unwrap();
        assert_eq!(*sol.get(7).unwrap(), Formal::of(&[7, 14, 15]));
        assert_eq!(*sol.get(4).unwrap(), Formal::of(&[4, 8, 9]));
        assert_eq!(*sol.get(3).unwrap(), Formal::of(&[3, 6, 12, 13, 7, 14, 15]));
        assert_eq!(*sol.get(2).unwrap(), Formal::of(&[2, 4, 8, 9, 5, 10, 11]));
        assert_eq!(*sol.get(1).unwrap(), Formal::of(&(1..=15).collect::<Vec<_>>()));
        for n in 8..16 {
            assert_eq!(*sol.get(n).unwrap(), Formal::sym(n));
        }
        assert!(sol.satisfies(Formal::sym));
        assert!(sol.get(0).is_err());
        assert!(sol.get(16).is_err());
        // floor(log2 n) in place of the bit length gives f(7) a third layer
        let three_layers = Formal::of(&[7, 14, 15, 28, 29, 30, 31]);
        assert_ne!(*sol.get(7).unwrap(), three_layers);
    }

    #[test]
    fn finite_triple_sum_needs_the_n0_term() {
        let via = finite_weighted_sum(4, Formal::sym).unwrap();
        let triple = finite_triple_sum(4, Formal::sym).unwrap();
        assert_eq!(via, triple);
        let direct = finite_direct_sum(4, Formal::sym).unwrap();
        assert_eq!(via, direct);
        // starting the outer index at 1 drops f(1)
        let from_one = triple.clone() - solve_implicit_finite(4, Formal::sym).unwrap().get(1).unwrap().clone();
        assert_ne!(from_one, direct);
    }

    #[test]
    fn finite_sums_small() {
        assert_eq!(finite_weighted_sum(3, |_| 1.0).unwrap(), 12.0);
        assert_eq!(finite_weighted_sum(1, |_| q(7, 3)).unwrap(), q(7, 3));
        let g = |n: u64| q(1, n as i64);
        assert_eq!(finite_weighted_sum(4, g).unwrap(), finite_direct_sum(4, g).unwrap());
    }

    #[test]
    fn finite_random_rational_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in 1..=10 {
            let table: Vec<BigRational> = (0..1u64 << p)
                .map(|_| q(rng.gen_range(-1000..1000), rng.gen_range(1..1000)))
                .collect();
            let g = |n: u64| table[n as usize].clone();
            let sol = solve_implicit_finite(p, g).unwrap();
            assert!(sol.satisfies(g), "{p}");
            let direct = finite_direct_sum(p, g).unwrap();
            assert_eq!(finite_weighted_sum(p, g).unwrap(), direct);
            assert_eq!(finite_triple_sum(p, g).unwrap(), direct);
        }
    }

    #[test]
    fn finite_matches_zeta_difference_at_alpha_one() {
        // 1/((z+n)(z+n+1)) = (z+n)^{-1} - (z+n+1)^{-1}
        let ctx = PrecisionContext::default();
        for z in [0.0, 0.5, 3.75] {
            for p in 1..=8 {
                let g = |n: u64| 1.0 / ((z + n as f64) * (z + n as f64 + 1.0));
                let via = finite_weighted_sum(p, g).unwrap();
                let fp = crate::identities::FiniteSumParams::new(2, p, 1.0, z).unwrap();
                let d = crate::identities::finite_zeta_diff_direct(&fp, &ctx).unwrap();
                assert!(rel(via, d) < 1e-13, "{z} {p}");
            }
        }
    }

    #[test]
    fn implicit_support_cases() {
        let pol = TruncationPolicy::default();
        let g = SequenceFn::new(|n| if n == 1 { 1.0 } else { 0.0 }).with_support(2);
        assert_eq!(solve_implicit(2, &g, 1, &pol).unwrap().value, 1.0);
        for n in 2..10 {
            assert_eq!(solve_implicit(2, &g, n, &pol).unwrap().value, 0.0);
        }
        let ones = SequenceFn::new(|_| 1.0).with_support(4);
        assert_eq!(weighted_digit_sum(2, &ones, &pol).unwrap().value, 4.0);
        let none = SequenceFn::new(|_| 1.0);
        assert!(matches!(solve_implicit(2, &none, 1, &pol), Err(Error::UndeclaredDecay { .. })));
        assert!(solve_implicit(2, &ones, 0, &pol).is_err());
    }

    #[test]
    fn telescoping_power_difference() {
        let ctx = PrecisionContext::default();
        let pol = TruncationPolicy::default();
        let c = 1.0 - 0.25;
        // g(n) = (1 - 2^{-2})(n^{-2} - (n+1)^{-2}) solves to f(n) = n^{-2} - (n+1)^{-2}
        let g = SequenceFn::new(move |n| {
            let n = n as f64;
            c * (n.powi(-2) - (n + 1.0).powi(-2))
        })
        .with_range_sum(move |m, len| c * ((m as f64).powi(-2) - ((m + len) as f64).powi(-2)))
        .with_decay(Decay::Power { c: 2.0, beta: 3.0 })
        .unwrap();
        for n in [1u64, 2, 7, 100] {
            let f = solve_implicit(2, &g, n, &pol).unwrap();
            let nf = n as f64;
            assert!(rel(f.value, nf.powi(-2) - (nf + 1.0).powi(-2)) < 1e-11, "{n}");
        }
        // g(n) = n^{-2} - (2n)^{-2} covers every m once from n = 1: f(1) = (3/4) ζ(2)
        let h = SequenceFn::new(|n| {
            let n = n as f64;
            n.powi(-2) - (2.0 * n).powi(-2)
        })
        .with_range_sum(move |m, len| {
            let (m, len) = (m as f64, len as f64);
            c * (hurwitz_zeta(2.0, m, &ctx).unwrap() - hurwitz_zeta(2.0, m + len, &ctx).unwrap())
        })
        .with_decay(Decay::Power { c: 1.0, beta: 2.0 })
        .unwrap();
        let f1 = solve_implicit(2, &h, 1, &pol).unwrap().value;
        assert!(rel(f1, 1.2337005501361698) < 1e-11, "{f1}");
    }

    #[test]
    fn geometric_inputs() {
        let z = 0.5f64;
        let g = SequenceFn::new(move |n| z.powi(n as i32))
            .with_decay(Decay::Geometric { c: 1.0, ratio: z })
            .unwrap();
        let pol = TruncationPolicy::default();
        // f(3) = Σ_k z^{3·2^k} (1 - z^{2^k}) / (1 - z)
        let want: f64 = (0..10).map(|k| z.powi(3 << k) * (1.0 - z.powi(1 << k)) / (1.0 - z)).sum();
        assert!(rel(solve_implicit(2, &g, 3, &pol).unwrap().value, want) < 1e-13);
        let ctx = PrecisionContext::default();
        let lam = lambert_gf(2, z, &ctx).unwrap().value;
        assert!(rel(weighted_digit_sum(2, &g, &pol).unwrap().value, lam) < 1e-12);
        let g3 = SequenceFn::new(move |n| (-0.3f64).powi(n as i32))
            .with_decay(Decay::Geometric { c: 1.0, ratio: 0.3 })
            .unwrap();
        let lam3 = lambert_gf(3, -0.3, &ctx).unwrap().value;
        assert!(rel(weighted_digit_sum(3, &g3, &pol).unwrap().value, lam3) < 1e-12);
    }

    #[test]
    fn putnam_constants() {
        let pol = TruncationPolicy::default();
        let tol = Tolerance::relative(1e-8);
        for b in [2u32, 3, 10] {
            let r = putnam_check(b, tol, &pol).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let two = weighted_digit_sum(2, &putnam_sequence(), &pol).unwrap().value;
        assert!(rel(two, 2.0 * LN_2) < 1e-10);
    }

    #[test]
    fn fixed_point_with_decay() {
        let pol = TruncationPolicy::default();
        let g = putnam_sequence();
        for b in [2u32, 3] {
            for n in [1u64, 5, 40] {
                let f = |m| solve_implicit(b, &g, m, &pol).unwrap().value;
                let rhs = f(n) - (0..b as u64).map(|j| f(b as u64 * n + j)).sum::<f64>();
                assert!((g.eval(n) - rhs).abs() < 1e-10 * f(n), "{b} {n}");
            }
        }
    }

    #[test]
    fn base_relation() {
        let ind = |m: u64| if (1..=15).contains(&m) { q(1, 1) } else { q(0, 1) };
        assert!(base_relation_exact(2, ind, 16).unwrap().pass);
        let f = SequenceFn::new(|n| 1.0 / ((n + 1) as f64).powi(2)).with_support(81);
        let r = base_relation_check(3, &f, Tolerance::relative(1e-12)).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(base_relation_exact(5, |_| q(0, 1), 30).unwrap().pass);
        let r = base_relation_exact(3, |m| q(m as i64 * m as i64 - 3, 7), 200).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn operator_powers() {
        let g = |x: f64| 1.0 / (1.0 + x).powi(2) + (0.1 * x).sin();
        for b in [2u32, 3] {
            for k in 0..=6u32 {
                for x in [1.0, 3.0, 0.25] {
                    let bk = (b as f64).powi(k as i32);
                    let want: f64 = (0..bk as u64).map(|l| g(bk * x + l as f64)).sum();
                    let got = dilation_power(b, &g, k, x);
                    assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{b} {k} {x}");
                }
            }
        }
    }

    #[test]
    fn recover_j_infinity() {
        let ctx = PrecisionContext::default();
        for x in [0.1, 1.0, 100.0] {
            let r = recover_j_infinity_check(x, Tolerance::relative(1e-9), &ctx).unwrap();
            assert!(r.pass, "{r:?}");
        }
        // the same constant through the solver: J(x) = Σ_{n≥1} f(2n-1)
        let x = 1.0;
        let g = SequenceFn::new(move |n| {
            let w = x + n as f64;
            1.0 / (w * (w + 1.0))
        })
        .with_range_sum(move |m, len| 1.0 / (x + m as f64) - 1.0 / (x + (m + len) as f64))
        .with_decay(Decay::Power { c: 1.0, beta: 2.0 })
        .unwrap();
        let via = weighted_digit_sum(2, &g, &TruncationPolicy::default()).unwrap().value;
        let j = crate::identities::j_infinity(2, x, &ctx).unwrap().value;
        assert!(rel(via, j) < 1e-9, "{via} {j}");
        assert!(recover_j_infinity_check(0.0, Tolerance::relative(1e-9), &ctx).is_err());
    }

    #[test]
    fn richardson_removes_known_powers() {
        let f = |m: f64| 3.0 + 1.0 / m + 2.0 / (m * m) - 0.5 / (m * m * m);
        let vals: Vec<f64> = (0..4).map(|i| f(100.0 * 2f64.powi(i))).collect();
        let (v, _) = richardson(&vals, &[1.0, 2.0, 3.0]);
        assert!((v - 3.0).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn finite_exact_equals_direct(p in 1u32..8, a in -20i64..20, c in 1i64..20) {
            let g = |n: u64| q(a * n as i64 + 1, c + n as i64);
            let sol = solve_implicit_finite(p, g).unwrap();
            prop_assert!(sol.satisfies(g));
            prop_assert_eq!(finite_weighted_sum(p, g).unwrap(), finite_direct_sum(p, g).unwrap());
        }
    }

}
