//! Closed forms for digit-weighted zeta sums.
//!
//! The central objects are
//!
//! * finite sums `Σ_{n<b^p} s_b(n)[(z+n)^{-α} - (z+n+1)^{-α}]` and their
//!   Hurwitz-zeta (or digamma, at `α = 1`) closed forms,
//! * the infinite limit, the kernel `J_∞(x) = Σ s_b(n)/((x+n)(x+n+1))`
//!   and the gamma product it integrates to,
//! * `Σ s_b(n)/(n+z)^α` through the Barnes double zeta, including its
//!   finite-part evaluation at `α = 2`.

use crate::digitseq::{digit_sum, Base, DigitSums};
use crate::error::{domain, Error, Result};
use crate::params;
use crate::precision::{Approx, PrecisionContext, Truncation};
use crate::report::{IdentityReport, Tolerance};
use crate::sum::CompensatedSum;
use crate::specfun::{
    barnes_psi2_2, barnes_row_sum, barnes_zeta2_detailed, digamma, digamma_diff, elliptic_k,
    hurwitz_zeta, log_gamma, polygamma, riemann_zeta, stirling_beta, alternating_hurwitz,
    BarnesParams,
};
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

/// Upper bound on the number of dyadic (or `b`-adic) levels an infinite series may use.
const MAX_LEVELS: u32 = 4000;

/// Parameters of the finite digit-sum zeta difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteSumParams {
    pub b: Base,
    pub p: u32,
    pub alpha: f64,
    pub z: f64,
}

impl FiniteSumParams {
    pub fn new(b: u32, p: u32, alpha: f64, z: f64) -> Result<Self> {
        let b = Base::new(b)?;
        if p == 0 {
            return Err(domain("FiniteSumParams", "p = 0"));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(domain("FiniteSumParams", format!("alpha = {alpha} must be positive")));
        }
        if !(z.is_finite() && z >= 0.0) {
            return Err(domain("FiniteSumParams", format!("z = {z} must be non-negative")));
        }
        Ok(Self { b, p, alpha, z })
    }

    /// `b^p`, checked against the term budget.
    pub fn block(&self, ctx: &PrecisionContext) -> Result<u64> {
        block_size(self.b, self.p, ctx, "finite digit sum")
    }
}

fn block_size(b: Base, p: u32, ctx: &PrecisionContext, what: &'static str) -> Result<u64> {
    match b.checked_pow(p) {
        Some(n) if n <= ctx.max_terms => Ok(n),
        Some(n) => Err(Error::BudgetExceeded {
            what,
            requested: n as u128,
            limit: ctx.max_terms as u128,
        }),
        None => Err(Error::BudgetExceeded {
            what,
            requested: u128::MAX,
            limit: ctx.max_terms as u128,
        }),
    }
}

/// `(z+n)^{-α} - (z+n+1)^{-α}` without cancellation.
fn power_step(alpha: f64, w: f64) -> f64 {
    -w.powf(-alpha) * (-alpha * (1.0 / w).ln_1p()).exp_m1()
}

/// `Σ_{n=1}^{b^p-1} s_b(n) [(z+n)^{-α} - (z+n+1)^{-α}]`, summed term by term.
pub fn finite_zeta_diff_direct(fp: &FiniteSumParams, ctx: &PrecisionContext) -> Result<f64> {
    let top = fp.block(ctx)?;
    let mut s = CompensatedSum::new();
    for (n, sn) in DigitSums::new(fp.b).enumerate().take(top as usize).skip(1) {
        if fp.z == 0.0 && fp.alpha == 1.0 {
            let n = n as f64;
            s.add(sn as f64 / (n * (n + 1.0)));
        } else {
            s.add(sn as f64 * power_step(fp.alpha, fp.z + n as f64));
        }
    }
    Ok(s.value())
}

/// Hurwitz-zeta closed form of [`finite_zeta_diff_direct`]; digamma form at `α = 1`.
pub fn finite_zeta_diff_closed(fp: &FiniteSumParams, ctx: &PrecisionContext) -> Result<f64> {
    let FiniteSumParams { b, p, alpha, z } = *fp;
    let top = fp.block(ctx)? as f64;
    let bf = b.as_f64();
    let mut s = 0.0;
    for l in 0..=p {
        let scale = bf.powi(l as i32);
        let lo = 1.0 + z / scale;
        let hi = 1.0 + (z + top) / scale;
        let bracket = if alpha == 1.0 {
            digamma_diff(hi, lo, ctx)?
        } else {
            hurwitz_zeta(alpha, lo, ctx)? - hurwitz_zeta(alpha, hi, ctx)?
        };
        let weight = scale.powf(-alpha);
        let mut coeff = 0.0;
        if l < p {
            coeff += weight;
        }
        if l >= 1 {
            coeff -= bf * weight;
        }
        s += coeff * bracket;
    }
    Ok(s)
}

/// Base-2 form of the finite closed form, with half-integer Hurwitz shifts.
pub fn binary_corollary_closed(p: u32, alpha: f64, z: f64, ctx: &PrecisionContext) -> Result<f64> {
    let fp = FiniteSumParams::new(2, p, alpha, z)?;
    let top = fp.block(ctx)? as f64;
    let mut s = 0.0;
    for l in 0..p {
        let scale = 2f64.powi(l as i32 + 1);
        let w = z / scale;
        let v = (z + top) / scale;
        let term = if alpha == 1.0 {
            digamma_diff(w + 1.0, w + 0.5, ctx)? - digamma_diff(v + 1.0, v + 0.5, ctx)?
        } else {
            hurwitz_zeta(alpha, 0.5 + w, ctx)? - hurwitz_zeta(alpha, 1.0 + w, ctx)?
                - hurwitz_zeta(alpha, 0.5 + v, ctx)?
                + hurwitz_zeta(alpha, 1.0 + v, ctx)?
        };
        s += scale.powf(-alpha) * term;
    }
    Ok(s)
}

/// The base-2 sum as alternating series:
/// `-Σ_{l<p} Σ_{n≥1} (-1)^n [(z + n 2^l)^{-α} - (z + 2^p + n 2^l)^{-α}]`.
pub fn double_sum_alternate(p: u32, alpha: f64, z: f64, ctx: &PrecisionContext) -> Result<f64> {
    let fp = FiniteSumParams::new(2, p, alpha, z)?;
    let top = fp.block(ctx)? as f64;
    let mut s = 0.0;
    for l in 0..p {
        let m = 2f64.powi(l as i32);
        let inner = |y: f64| -> Result<f64> { Ok(m.powf(-alpha) * alternating_hurwitz(alpha, y / m, ctx)?) };
        s -= inner(z)? - inner(z + top)?;
    }
    Ok(s)
}

/// `J_N(x) = Σ_{n=1}^{N} s_2(n)/((x+n)(x+n+1))`.
pub fn j_partial(n_max: u64, x: f64) -> f64 {
    let mut s = CompensatedSum::new();
    for n in 1..=n_max {
        let w = x + n as f64;
        s.add(digit_sum(n, Base::BINARY) as f64 / (w * (w + 1.0)));
    }
    s.value()
}

/// Checks `J_{2N+1}(x) = ½ J_N(x/2) + γ_N(x)` with `γ_N(x) = β(x+1) - β(x+2N+3)`.
pub fn j_recurrence_check(n: u64, x: f64, tol: Tolerance, ctx: &PrecisionContext) -> Result<IdentityReport> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain("j_recurrence_check", format!("x = {x} must be non-negative")));
    }
    let lhs = j_partial(2 * n + 1, x);
    let gamma = stirling_beta(x + 1.0, ctx)? - stirling_beta(x + 2.0 * n as f64 + 3.0, ctx)?;
    let rhs = 0.5 * j_partial(n, x / 2.0) + gamma;
    Ok(IdentityReport::compare(
        "j-recurrence",
        params!("N" => n, "x" => x),
        lhs,
        rhs,
        tol,
        Truncation::exact(2 * n + 1),
    ))
}

/// Checks `J_{2^p-1}(x) = Σ_{l<p} 2^{-l} [β(x/2^l + 1) - β(x/2^l + 2^{p-l} + 1)]`.
pub fn j_dyadic_check(p: u32, x: f64, tol: Tolerance, ctx: &PrecisionContext) -> Result<IdentityReport> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain("j_dyadic_check", format!("x = {x} must be non-negative")));
    }
    let top = block_size(Base::BINARY, p, ctx, "j_dyadic_check")?;
    let lhs = j_partial(top - 1, x);
    let mut rhs = 0.0;
    for l in 0..p {
        let scale = 2f64.powi(l as i32);
        let y = x / scale;
        rhs += (stirling_beta(y + 1.0, ctx)? - stirling_beta(y + 2f64.powi((p - l) as i32) + 1.0, ctx)?) / scale;
    }
    Ok(IdentityReport::compare(
        "j-dyadic",
        params!("p" => p, "x" => x),
        lhs,
        rhs,
        tol,
        Truncation::exact(top - 1),
    ))
}

/// `Σ_{n≥1} s_b(n)[(z+n)^{-α} - (z+n+1)^{-α}] = ζ(α, 1+z) + (1-b) Σ_{l≥1} b^{-lα} ζ(α, 1+z/b^l)`.
///
/// At `α = 1` this is [`j_infinity`].
pub fn infinite_zeta_diff(b: u32, alpha: f64, z: f64, ctx: &PrecisionContext) -> Result<Approx> {
    let base = Base::new(b)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(domain("infinite_zeta_diff", format!("alpha = {alpha} must be positive")));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(domain("infinite_zeta_diff", format!("z = {z} must be non-negative")));
    }
    if alpha == 1.0 {
        return j_infinity(b, z, ctx);
    }
    let bf = base.as_f64();
    let head = hurwitz_zeta(alpha, 1.0 + z, ctx)?;
    let zeta_at_one = riemann_zeta(alpha, ctx)?;
    let ratio = bf.powf(-alpha);
    let mut acc = 0.0;
    let mut weight = 1.0;
    for l in 1..=MAX_LEVELS {
        weight *= ratio;
        let scale = bf.powi(l as i32);
        let term = weight * hurwitz_zeta(alpha, 1.0 + z / scale, ctx)?;
        acc += term;
        let next_arg = 1.0 + z / (scale * bf);
        let envelope = zeta_at_one.abs().max(hurwitz_zeta(alpha, next_arg, ctx)?.abs());
        let tail = (bf - 1.0) * weight * ratio / (1.0 - ratio) * envelope * ctx.tail_safety;
        let total = head + (1.0 - bf) * acc;
        if tail <= ctx.rel_tol * total.abs() || tail < ctx.abs_floor {
            return Ok(Approx {
                value: total,
                truncation: Truncation {
                    terms: l as u64,
                    tail_bound: tail,
                },
            });
        }
    }
    Err(Error::TruncationBudget {
        what: "infinite_zeta_diff",
        terms: MAX_LEVELS as u64,
        tail_estimate: (bf - 1.0) * weight / (1.0 - ratio),
    })
}

/// Partial sum of the series in [`infinite_zeta_diff`] over `n` below the largest power of `b`
/// not exceeding `terms`, plus an estimate of the rest.
pub fn infinite_zeta_diff_direct(b: u32, alpha: f64, z: f64, terms: u64) -> Result<Approx> {
    let base = Base::new(b)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(domain("infinite_zeta_diff_direct", format!("alpha = {alpha} must be positive")));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(domain("infinite_zeta_diff_direct", format!("z = {z} must be non-negative")));
    }
    let top = block_below(base, terms);
    let mut s = CompensatedSum::new();
    for (n, sn) in DigitSums::new(base).enumerate().take(top as usize).skip(1) {
        s.add(sn as f64 * power_step(alpha, z + n as f64));
    }
    let (estimate, bound) = digit_tail(base, top, |t| (t + z).powf(-alpha), alpha);
    Ok(Approx {
        value: s.value() + estimate,
        truncation: Truncation {
            terms: top,
            tail_bound: bound,
        },
    })
}

/// `J_∞(x) = Σ_{n≥1} s_b(n)/((x+n)(x+n+1))` for `x >= 0`:
/// `(b/(b-1)) ln b + Σ_{l≥0} b^{-l} [ψ(1 + x/b^{l+1}) - ψ(1 + x/b^l)]`.
pub fn j_infinity(b: u32, x: f64, ctx: &PrecisionContext) -> Result<Approx> {
    let base = Base::new(b)?;
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain("j_infinity", format!("x = {x} must be non-negative")));
    }
    let bf = base.as_f64();
    let constant = bf / (bf - 1.0) * bf.ln();
    if x == 0.0 {
        return Ok(Approx {
            value: constant,
            truncation: Truncation::exact(0),
        });
    }
    let zeta2 = PI * PI / 6.0;
    let mut acc = 0.0;
    for l in 0..MAX_LEVELS {
        let scale = bf.powi(l as i32);
        acc += digamma_diff(1.0 + x / (scale * bf), 1.0 + x / scale, ctx)? / scale;
        // remaining terms are ≈ -ζ(2) x (b-1) b^{-2l-1}
        let next = scale * bf;
        let tail = zeta2 * x * (bf - 1.0) / (bf * next * next) / (1.0 - 1.0 / (bf * bf)) * ctx.tail_safety;
        let value = constant + acc;
        if x / next < 0.5 && (tail <= ctx.rel_tol * value.abs() || tail < ctx.abs_floor) {
            return Ok(Approx {
                value,
                truncation: Truncation {
                    terms: l as u64 + 1,
                    tail_bound: tail,
                },
            });
        }
    }
    Err(Error::TruncationBudget {
        what: "j_infinity",
        terms: MAX_LEVELS as u64,
        tail_estimate: f64::NAN,
    })
}

/// Taylor coefficient of `x^n` in `J_∞` about 0: `(-1)^n ζ(n+1) (b^{n+1} - b)/(b^{n+1} - 1)`.
pub fn j_infinity_taylor_coeff(b: u32, n: u32, ctx: &PrecisionContext) -> Result<f64> {
    let base = Base::new(b)?;
    if n == 0 {
        return Err(domain("j_infinity_taylor_coeff", "n = 0; the constant term is (b/(b-1)) ln b"));
    }
    let bf = base.as_f64();
    let top = bf.powi(n as i32 + 1);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * riemann_zeta(n as f64 + 1.0, ctx)? * (top - bf) / (top - 1.0))
}

/// `ln Π_{n≥1} ((1+z/n)/(1+z/(n+1)))^{s_b(n)}` via
/// `(zb/(b-1)) ln b + Σ_{l≥0} [b lnΓ(1+z/b^{l+1}) - lnΓ(1+z/b^l)]`.
pub fn log_infinite_product(b: u32, z: f64, ctx: &PrecisionContext) -> Result<Approx> {
    let base = Base::new(b)?;
    if !(z.is_finite() && z >= 0.0) {
        return Err(domain("infinite_product", format!("z = {z} must be non-negative")));
    }
    let bf = base.as_f64();
    let constant = z * bf / (bf - 1.0) * bf.ln();
    if z == 0.0 {
        return Ok(Approx {
            value: 0.0,
            truncation: Truncation::exact(0),
        });
    }
    let zeta2 = PI * PI / 6.0;
    let mut acc = 0.0;
    for l in 0..MAX_LEVELS {
        let scale = bf.powi(l as i32);
        let inner = z / scale;
        acc += bf * log_gamma(1.0 + inner / bf, ctx)? - log_gamma(1.0 + inner, ctx)?;
        // remaining terms are ≈ -(ζ(2)/2) z² (1 - 1/b) b^{-2l}
        let next = scale * bf;
        let tail = 0.5 * zeta2 * z * z / (next * next) / (1.0 - 1.0 / (bf * bf)) * ctx.tail_safety;
        let value = constant + acc;
        if inner / bf < 0.5 && (tail <= ctx.rel_tol * value.abs().max(1.0) || tail < ctx.abs_floor) {
            return Ok(Approx {
                value,
                truncation: Truncation {
                    terms: l as u64 + 1,
                    tail_bound: tail,
                },
            });
        }
    }
    Err(Error::TruncationBudget {
        what: "infinite_product",
        terms: MAX_LEVELS as u64,
        tail_estimate: f64::NAN,
    })
}

/// `Π_{n≥1} ((1+z/n)/(1+z/(n+1)))^{s_b(n)}`, exponentiated once from [`log_infinite_product`].
pub fn infinite_product(b: u32, z: f64, ctx: &PrecisionContext) -> Result<Approx> {
    let log = log_infinite_product(b, z, ctx)?;
    let value = log.value.exp();
    Ok(Approx {
        value,
        truncation: Truncation {
            terms: log.truncation.terms,
            tail_bound: value * log.truncation.tail_bound.exp_m1(),
        },
    })
}

/// Log of the partial product over `n < terms`, plus an estimate of the rest.
pub fn log_infinite_product_direct(b: u32, z: f64, terms: u64) -> Result<Approx> {
    let base = Base::new(b)?;
    let mut s = CompensatedSum::new();
    for (n, sn) in DigitSums::new(base).enumerate().take(terms as usize).skip(1) {
        let n = n as f64;
        s.add(sn as f64 * ((z / n).ln_1p() - (z / (n + 1.0)).ln_1p()));
    }
    let s = s.value();
    let (estimate, bound) = digit_tail(base, terms, |t| (z / t).ln_1p(), 1.0);
    Ok(Approx {
        value: s + estimate,
        truncation: Truncation {
            terms,
            tail_bound: bound,
        },
    })
}

/// Estimate and bound for `Σ_{n≥N} s_b(n) [F(n) - F(n+1)]` with `F(t) ~ t^{-κ}` decreasing to 0.
///
/// Replaces `s_b` by its mean `(b-1)/2 log_b t` and integrates by parts. The
/// mean is exact over complete blocks, so `N` should be a power of `b`.
fn digit_tail(b: Base, n: u64, f: impl Fn(f64) -> f64, kappa: f64) -> (f64, f64) {
    let bf = b.as_f64();
    let nf = n as f64;
    let log_b = nf.ln() / bf.ln();
    let fnv = f(nf);
    let estimate = 0.5 * (bf - 1.0) * (log_b + 1.0 / (kappa * bf.ln())) * fnv;
    let bound = (bf - 1.0) * (log_b + 2.0 + 1.0 / (kappa * bf.ln())) * fnv.abs();
    (estimate, bound)
}

/// Largest power of `b` not exceeding `limit` (at least `b`).
pub fn block_below(b: Base, limit: u64) -> u64 {
    let mut n = b.as_u64();
    while let Some(next) = n.checked_mul(b.as_u64()) {
        if next > limit {
            break;
        }
        n = next;
    }
    n
}

/// The four special values of the base-2 product at dyadic arguments.
pub fn product_special_values(tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let log_p = |z: f64| -> Result<Approx> { log_infinite_product(2, z, ctx) };
    let ratio = |hi: f64, lo: f64| -> Result<(f64, Truncation)> {
        let a = log_p(hi)?;
        let b = log_p(lo)?;
        let t = a.truncation.combine(b.truncation);
        Ok(((a.value - b.value).exp(), t))
    };
    let mut out = Vec::new();

    let (r0, t0) = ratio(1.0, 0.5)?;
    out.push(IdentityReport::compare("pi-over-2", params!("p" => 0u32), r0, PI / 2.0, tol, t0));

    let (r1, t1) = ratio(0.5, 0.25)?;
    let gamma54 = log_gamma(1.25, ctx)?.exp();
    let gamma_form = 2.0 * (2.0 / PI).sqrt() * gamma54 * gamma54;
    out.push(IdentityReport::compare(
        "product-ratio",
        params!("p" => 1u32, "form" => "gamma"),
        r1,
        gamma_form,
        tol,
        t1,
    ));
    let elliptic = elliptic_k(FRAC_1_SQRT_2, ctx)? * FRAC_1_SQRT_2;
    out.push(IdentityReport::compare(
        "product-ratio",
        params!("p" => 1u32, "form" => "elliptic"),
        r1,
        elliptic,
        tol,
        t1,
    ));
    let mut tanh_prod = 1.0;
    let mut k = 1u64;
    loop {
        let t = (k as f64 * PI / 2.0).tanh();
        tanh_prod *= t * t;
        if 1.0 - t < 1e-18 {
            break;
        }
        k += 1;
    }
    out.push(IdentityReport::compare(
        "product-ratio",
        params!("p" => 1u32, "form" => "tanh"),
        r1,
        PI / 2.0 * tanh_prod,
        tol,
        t1.combine(Truncation::exact(k)),
    ));

    let (r2, t2) = ratio(0.25, 0.125)?;
    out.push(IdentityReport::compare(
        "product-ratio",
        params!("p" => 2u32, "form" => "gamma"),
        r2,
        product_ratio_closed(2, ctx)?,
        tol,
        t2,
    ));
    Ok(out)
}

/// `P(2^{-p})/P(2^{-p-1}) = 2^{2^{-p}} Γ²(1 + 2^{-p-1}) / Γ(1 + 2^{-p})` for the base-2 product `P`.
pub fn product_ratio_closed(p: u32, ctx: &PrecisionContext) -> Result<f64> {
    let h = 2f64.powi(-(p as i32));
    let lg = 2.0 * log_gamma(1.0 + h / 2.0, ctx)? - log_gamma(1.0 + h, ctx)?;
    Ok((h * LN_2 + lg).exp())
}

fn check_barnes_alpha(what: &'static str, alpha: f64, z: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(domain(what, format!("alpha = {alpha} must exceed 2")));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(domain(what, format!("z = {z} must be non-negative")));
    }
    Ok(())
}

/// `ζ_2(α, x, (1, ω))`.
fn zeta2_unit(alpha: f64, x: f64, omega: f64, ctx: &PrecisionContext) -> Result<Approx> {
    barnes_zeta2_detailed(&BarnesParams::new(alpha, x, 1.0, omega)?, ctx)
}

/// `Σ_{n<b^p} s_b(n)/(n+z)^α` summed directly.
pub fn finite_power_sum_direct(b: u32, p: u32, alpha: f64, z: f64, ctx: &PrecisionContext) -> Result<f64> {
    let base = Base::new(b)?;
    let top = block_size(base, p, ctx, "finite_power_sum_direct")?;
    let mut s = CompensatedSum::new();
    for (n, sn) in DigitSums::new(base).enumerate().take(top as usize).skip(1) {
        s.add(sn as f64 * (z + n as f64).powf(-alpha));
    }
    Ok(s.value())
}

/// Barnes-zeta closed form of `Σ_{n<b^p} s_b(n)/(n+z)^α` for `α > 2`:
/// `Σ_{l<p} D_l - b Σ_{1≤l≤p} D_l` with `D_l = ζ_2(α, z+b^l, (1,b^l)) - ζ_2(α, z+b^l+b^p, (1,b^l))`.
pub fn finite_barnes_closed(b: u32, p: u32, alpha: f64, z: f64, ctx: &PrecisionContext) -> Result<Approx> {
    let base = Base::new(b)?;
    check_barnes_alpha("finite_barnes_closed", alpha, z)?;
    if p == 0 {
        return Err(domain("finite_barnes_closed", "p = 0"));
    }
    let top = block_size(base, p, ctx, "finite_barnes_closed")? as f64;
    let bf = base.as_f64();
    let mut value = 0.0;
    let mut trunc = Truncation::default();
    for l in 0..=p {
        let omega = bf.powi(l as i32);
        let a = zeta2_unit(alpha, z + omega, omega, ctx)?;
        let c = zeta2_unit(alpha, z + omega + top, omega, ctx)?;
        trunc = trunc.combine(a.truncation).combine(c.truncation);
        let d = a.value - c.value;
        if l < p {
            value += d;
        }
        if l >= 1 {
            value -= bf * d;
        }
    }
    Ok(Approx { value, truncation: trunc })
}

/// `Σ_{n≥1} s_b(n)/(n+z)^α = -zζ(α,z+1) + ζ(α-1,z+1) + (1-b) Σ_{l≥1} ζ_2(α, z+b^l, (1,b^l))` for `α > 2`.
pub fn infinite_barnes(b: u32, alpha: f64, z: f64, ctx: &PrecisionContext) -> Result<Approx> {
    let base = Base::new(b)?;
    check_barnes_alpha("infinite_barnes", alpha, z)?;
    let bf = base.as_f64();
    let head = -z * hurwitz_zeta(alpha, z + 1.0, ctx)? + hurwitz_zeta(alpha - 1.0, z + 1.0, ctx)?;
    let ratio = bf.powf(1.0 - alpha);
    let mut acc = 0.0;
    let mut trunc = Truncation::default();
    for l in 1..=MAX_LEVELS {
        let omega = bf.powi(l as i32);
        let term = zeta2_unit(alpha, z + omega, omega, ctx)?;
        acc += term.value;
        trunc.terms += 1 + term.truncation.terms;
        let value = head + (1.0 - bf) * acc;
        let tail = (bf - 1.0) * term.value.abs() * ratio / (1.0 - ratio) * ctx.tail_safety;
        if tail <= ctx.rel_tol * value.abs() || tail < ctx.abs_floor {
            trunc.tail_bound = tail;
            return Ok(Approx { value, truncation: trunc });
        }
    }
    Err(Error::TruncationBudget {
        what: "infinite_barnes",
        terms: MAX_LEVELS as u64,
        tail_estimate: f64::NAN,
    })
}

/// Partial sum `Σ_{n<N} s_b(n)/(n+z)^α` with an estimate of the remainder, for `α > 1`.
pub fn digit_power_sum_direct(b: u32, alpha: f64, z: f64, terms: u64) -> Result<Approx> {
    let base = Base::new(b)?;
    if !(alpha > 1.0) {
        return Err(domain("digit_power_sum_direct", format!("alpha = {alpha} must exceed 1")));
    }
    let mut s = CompensatedSum::new();
    for (n, sn) in DigitSums::new(base).enumerate().take(terms as usize).skip(1) {
        s.add(sn as f64 * (z + n as f64).powf(-alpha));
    }
    let s = s.value();
    // Σ_{n≥N} s_b(n) (n+z)^{-α} = Σ_{n≥N} s_b(n) [F(n) - F(n+1)], F(t) = Σ_{k≥t} (k+z)^{-α}
    let am1 = alpha - 1.0;
    let f = |t: f64| (t + z).powf(-am1) / am1;
    let (estimate, bound) = digit_tail(base, terms, f, am1);
    Ok(Approx {
        value: s + estimate,
        truncation: Truncation {
            terms,
            tail_bound: bound,
        },
    })
}

/// Which assembly of the `α = 2` sum matched the direct oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zeta2Branch {
    /// Finite parts of the Barnes terms at the shifted arguments `z+1` and `z+b^l`.
    Assembled,
    /// `-ψ(z) + (1-z)ψ'(z) + (1-b) Σ_l [-1 - ψ(z) + b^{-2l} Σ_m ψ̃'(m b^l + z)]`.
    Unscaled,
}

impl Zeta2Branch {
    pub fn name(self) -> &'static str {
        match self {
            Zeta2Branch::Assembled => "assembled",
            Zeta2Branch::Unscaled => "unscaled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitZeta2 {
    pub value: f64,
    pub branch: Zeta2Branch,
    pub assembled: f64,
    pub unscaled: f64,
    pub oracle: Approx,
    pub truncation: Truncation,
}

/// Absolute tolerance used to calibrate [`digit_zeta_2`] against the direct sum.
pub const ZETA2_CALIBRATION_TOL: f64 = 1e-5;

/// `Σ_{n≥1} s_b(n)/(n+z)^2` for `z > 0`.
///
/// Two candidate assemblies of the Barnes finite parts are evaluated and the
/// one that agrees with a direct sum of `min(ctx.max_terms, 10^7)` terms
/// (plus tail estimate) within [`ZETA2_CALIBRATION_TOL`] is returned.
pub fn digit_zeta_2(b: u32, z: f64, ctx: &PrecisionContext) -> Result<DigitZeta2> {
    let base = Base::new(b)?;
    if !(z.is_finite() && z > 0.0) {
        return Err(domain("digit_zeta_2", format!("z = {z} must be positive")));
    }
    let bf = base.as_f64();

    let mut assembled_acc = 0.0;
    let mut levels = 0u32;
    let mut tail = f64::INFINITY;
    let head = barnes_psi2_2(z + 1.0, 1.0, 1.0, ctx)?;
    for l in 1..=MAX_LEVELS {
        let omega = bf.powi(l as i32);
        let term = barnes_psi2_2(z + omega, 1.0, omega, ctx)?;
        assembled_acc += term;
        levels = l;
        // terms shrink like b^{-l}(1 + l ln b)
        let r = (1.0 + (l + 1) as f64 * bf.ln()) / (bf * (1.0 + l as f64 * bf.ln()));
        tail = (bf - 1.0) * term.abs() * r / (1.0 - r) * ctx.tail_safety;
        if tail <= ctx.rel_tol * (head + (1.0 - bf) * assembled_acc).abs() {
            break;
        }
    }
    let assembled = head + (1.0 - bf) * assembled_acc;

    let psi = digamma(z, ctx)?;
    let mut unscaled = -psi + (1.0 - z) * polygamma(1, z, ctx)?;
    for l in 1..=levels {
        let omega = bf.powi(l as i32);
        let rows = barnes_row_sum(z, 1.0, omega, ctx)?.value;
        unscaled += (1.0 - bf) * (-1.0 - psi + rows / (omega * omega));
    }

    let oracle_terms = block_below(base, ctx.max_terms.min(10_000_000));
    let oracle = digit_power_sum_direct(b, 2.0, z, oracle_terms)?;
    let slack = ZETA2_CALIBRATION_TOL + oracle.truncation.tail_bound.min(ZETA2_CALIBRATION_TOL);
    let pick = [
        (Zeta2Branch::Assembled, assembled),
        (Zeta2Branch::Unscaled, unscaled),
    ]
    .into_iter()
    .filter(|(_, v)| v.is_finite() && (v - oracle.value).abs() <= slack)
    .min_by(|a, b| {
        (a.1 - oracle.value)
            .abs()
            .total_cmp(&(b.1 - oracle.value).abs())
    });
    match pick {
        Some((branch, value)) => Ok(DigitZeta2 {
            value,
            branch,
            assembled,
            unscaled,
            oracle,
            truncation: Truncation {
                terms: levels as u64,
                tail_bound: tail,
            },
        }),
        None => Err(Error::IdentityMismatch {
            what: "digit_zeta_2",
            detail: format!(
                "oracle {:.12e}, assembled {:.12e}, unscaled {:.12e}",
                oracle.value, assembled, unscaled
            ),
        }),
    }
}
