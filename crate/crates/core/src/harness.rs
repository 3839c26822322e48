//! Identity catalog, grid runner and report emitters.
//!
//! Every catalog entry declares a parameter schema, a compiled-in default grid
//! and a default tolerance. [`run_grids`] expands grids in schema order
//! (last parameter fastest), evaluates points in parallel and returns reports
//! in that order regardless of scheduling.

use crate::altsum::{self, TestFunction};
use crate::digitseq::{legendre_scan, Base};
use crate::error::{Error, Result};
use crate::identities::{self as ids, FiniteSumParams};
use crate::lambert;
use crate::params;
use crate::precision::{PrecisionContext, Truncation};
use crate::report::{format_real, IdentityReport, ParamValue, Params, Quantity, Tolerance};
use crate::solver::{self, TruncationPolicy};
use crate::specfun::riemann_zeta;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use std::io::{self, Write};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Real,
    Text,
}

type EvalFn = fn(&Point, Tolerance, &PrecisionContext) -> Result<Vec<IdentityReport>>;

/// A registered identity.
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub schema: &'static [(&'static str, ParamKind)],
    pub tolerance: Tolerance,
    default_grid: fn() -> Vec<Vec<ParamValue>>,
    eval: EvalFn,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("id", &self.id).finish()
    }
}

impl CatalogEntry {
    /// The compiled-in grid, one value list per schema parameter.
    pub fn default_grid(&self) -> GridSpec {
        GridSpec {
            identity_id: self.id.to_string(),
            params: self
                .schema
                .iter()
                .zip((self.default_grid)())
                .map(|((name, _), values)| (name.to_string(), values))
                .collect(),
            tolerance: None,
        }
    }
}

/// One grid point, with values in schema order.
#[derive(Debug, Clone)]
pub struct Point {
    values: Vec<(&'static str, ParamValue)>,
}

impl Point {
    fn get(&self, name: &str) -> Result<&ParamValue> {
        self.values
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::Schema {
                id: String::new(),
                detail: format!("missing parameter {name}"),
            })
    }

    pub fn int(&self, name: &str) -> Result<i64> {
        match self.get(name)? {
            ParamValue::Int(v) => Ok(*v),
            other => Err(schema_err("", format!("{name} = {other} is not an integer"))),
        }
    }

    pub fn u32(&self, name: &str) -> Result<u32> {
        u32::try_from(self.int(name)?).map_err(|_| schema_err("", format!("{name} out of range")))
    }

    pub fn u64(&self, name: &str) -> Result<u64> {
        u64::try_from(self.int(name)?).map_err(|_| schema_err("", format!("{name} out of range")))
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        match self.get(name)? {
            ParamValue::Real(v) => Ok(*v),
            ParamValue::Int(v) => Ok(*v as f64),
            other => Err(schema_err("", format!("{name} = {other} is not a number"))),
        }
    }

    pub fn text(&self, name: &str) -> Result<&str> {
        match self.get(name)? {
            ParamValue::Text(s) => Ok(s),
            other => Err(schema_err("", format!("{name} = {other} is not text"))),
        }
    }

    fn params(&self) -> Params {
        self.values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }
}

fn schema_err(id: &str, detail: impl Into<String>) -> Error {
    Error::Schema {
        id: id.to_string(),
        detail: detail.into(),
    }
}

fn ints(v: &[i64]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Int(x)).collect()
}

fn range(lo: i64, hi: i64) -> Vec<ParamValue> {
    (lo..=hi).map(ParamValue::Int).collect()
}

fn reals(v: &[f64]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Real(x)).collect()
}

fn texts(v: &[&str]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Text(x.to_string())).collect()
}

fn one(r: IdentityReport) -> Result<Vec<IdentityReport>> {
    Ok(vec![r])
}

fn exact_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

const STANDARD_ALPHAS: [f64; 5] = [0.5, 1.0, 2.0, 2.5, 3.5];
const STANDARD_ZS: [f64; 4] = [0.0, 0.5, 1.0, 3.75];
const DIRECT_TERMS: u64 = 1 << 22;

/// Exact rational from a grid value; binary floats convert without rounding.
fn rational_param(p: &Point, name: &str) -> Result<BigRational> {
    let x = p.real(name)?;
    BigRational::from_float(x).ok_or_else(|| schema_err("", format!("{name} = {x} is not finite")))
}

/// Pass when within `rel`, or when the difference is inside the oracle's own tail bound.
fn within_tail(rel: f64, bound: f64) -> Tolerance {
    Tolerance {
        rel,
        abs: bound,
        floor: f64::INFINITY,
    }
}

fn finite_zeta_diff(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let fp = FiniteSumParams::new(p.u32("b")?, p.u32("p")?, p.real("alpha")?, p.real("z")?)?;
    let closed = ids::finite_zeta_diff_closed(&fp, ctx)?;
    let direct = ids::finite_zeta_diff_direct(&fp, ctx)?;
    one(IdentityReport::compare(
        "finite-zeta-diff",
        p.params(),
        closed,
        direct,
        tol,
        Truncation::exact(fp.block(ctx)?),
    ))
}

fn binary_form(id: &str, p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (pp, alpha, z) = (p.u32("p")?, p.real("alpha")?, p.real("z")?);
    let fp = FiniteSumParams::new(2, pp, alpha, z)?;
    let lhs = if id == "binary-corollary" {
        ids::binary_corollary_closed(pp, alpha, z, ctx)?
    } else {
        ids::double_sum_alternate(pp, alpha, z, ctx)?
    };
    one(IdentityReport::compare(
        id,
        p.params(),
        lhs,
        ids::finite_zeta_diff_closed(&fp, ctx)?,
        tol,
        Truncation::exact(0),
    ))
}

fn binary_corollary(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    binary_form("binary-corollary", p, tol, ctx)
}

fn double_sum(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    binary_form("double-sum", p, tol, ctx)
}

fn binary_zeta_ratio(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let a = p.real("alpha")?;
    let v = ids::infinite_zeta_diff(2, a, 0.0, ctx)?;
    let closed = (1.0 - (1.0 - a).exp2()) / (1.0 - (-a).exp2()) * riemann_zeta(a, ctx)?;
    one(IdentityReport::compare("binary-zeta-ratio", p.params(), v.value, closed, tol, v.truncation))
}

fn infinite_zeta_diff(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, a, z) = (p.u32("b")?, p.real("alpha")?, p.real("z")?);
    let v = ids::infinite_zeta_diff(b, a, z, ctx)?;
    let d = ids::infinite_zeta_diff_direct(b, a, z, DIRECT_TERMS)?;
    let tol = within_tail(tol.rel, d.truncation.tail_bound);
    one(IdentityReport::compare(
        "infinite-zeta-diff",
        p.params(),
        v.value,
        d.value,
        tol,
        v.truncation.combine(d.truncation),
    ))
}

fn j_recurrence(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(ids::j_recurrence_check(p.u64("N")?, p.real("x")?, tol, ctx)?)
}

fn j_dyadic(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(ids::j_dyadic_check(p.u32("p")?, p.real("x")?, tol, ctx)?)
}

fn pi_over_2(_: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    Ok(ids::product_special_values(tol, ctx)?
        .into_iter()
        .filter(|r| r.identity == "pi-over-2")
        .collect())
}

fn product_ratio(_: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    Ok(ids::product_special_values(tol, ctx)?
        .into_iter()
        .filter(|r| r.identity == "product-ratio")
        .collect())
}

fn infinite_product(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, z) = (p.u32("b")?, p.real("z")?);
    let v = ids::log_infinite_product(b, z, ctx)?;
    let d = ids::log_infinite_product_direct(b, z, ids::block_below(Base::new(b)?, DIRECT_TERMS))?;
    let tol = within_tail(tol.rel, d.truncation.tail_bound);
    one(IdentityReport::compare(
        "infinite-product",
        p.params(),
        v.value,
        d.value,
        tol,
        v.truncation.combine(d.truncation),
    ))
}

fn barnes_finite(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, pp, a, z) = (p.u32("b")?, p.u32("p")?, p.real("alpha")?, p.real("z")?);
    let v = ids::finite_barnes_closed(b, pp, a, z, ctx)?;
    let d = ids::finite_power_sum_direct(b, pp, a, z, ctx)?;
    one(IdentityReport::compare("barnes-finite", p.params(), v.value, d, tol, v.truncation))
}

fn barnes_base_case(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (a, z) = (p.real("alpha")?, p.real("z")?);
    let v = ids::finite_barnes_closed(2, 1, a, z, ctx)?;
    one(IdentityReport::compare(
        "barnes-base-case",
        p.params(),
        v.value,
        (z + 1.0).powf(-a),
        tol,
        v.truncation,
    ))
}

fn barnes_infinite(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, a, z) = (p.u32("b")?, p.real("alpha")?, p.real("z")?);
    let v = ids::infinite_barnes(b, a, z, ctx)?;
    let d = ids::digit_power_sum_direct(b, a, z, ids::block_below(Base::new(b)?, DIRECT_TERMS))?;
    let tol = within_tail(tol.rel, d.truncation.tail_bound);
    one(IdentityReport::compare(
        "barnes-infinite",
        p.params(),
        v.value,
        d.value,
        tol,
        v.truncation.combine(d.truncation),
    ))
}

fn digit_zeta_2(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, z) = (p.u32("b")?, p.real("z")?);
    let r = ids::digit_zeta_2(b, z, ctx)?;
    let mut params = p.params();
    params.push(("branch".into(), r.branch.name().into()));
    one(IdentityReport::compare(
        "digit-zeta-2",
        params,
        r.value,
        r.oracle.value,
        tol,
        r.truncation.combine(r.oracle.truncation),
    ))
}

fn legendre(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let n = p.u64("n_max")?;
    let agree = legendre_scan(n).filter(|c| c.holds()).count();
    one(IdentityReport::exact("legendre", p.params(), exact_int(agree as u64), exact_int(n)))
}

fn two_adic(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(lambert::two_adic_divisor_check(p.u64("n_max")?)?)
}

fn lambert_polynomial(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(lambert::finite_polynomial_check(p.u32("b")?, p.u32("p")?)?)
}

fn rankwise(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(lambert::rankwise_check(p.u32("b")?, p.u32("p")?)?)
}

fn lambert_infinite(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, z) = (p.u32("b")?, p.real("z")?);
    let v = lambert::lambert_gf(b, z, ctx)?;
    let d = lambert::lambert_gf_direct(b, z, 1 << 14)?;
    one(IdentityReport::compare(
        "lambert-infinite",
        p.params(),
        v.value,
        d.value,
        tol,
        v.truncation.combine(d.truncation),
    ))
}

fn mobius_inverse(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(lambert::mobius_inverse_report(p.u64("n_max")?)?)
}

fn partition_convolution(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    lambert::partition_convolution_check(p.u64("n_max")? as usize)
}

fn eta_bridge(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    lambert::eta_dirichlet_bridge_check(&[p.real("s")?], 1 << 20, tol, ctx)
}

fn monomial(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(altsum::monomial_report(p.u32("N")?, &rational_param(p, "x")?)?)
}

fn next_monomial(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(altsum::next_monomial_report(p.u32("N")?, &rational_param(p, "x")?)?)
}

fn prouhet(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(altsum::prouhet_report(p.u32("N")?, &rational_param(p, "x")?)?)
}

fn alternating_weights(p: &Point, tol: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let name = p.text("f")?;
    let f = TestFunction::from_name(name).ok_or_else(|| schema_err("alternating-weights", format!("unknown f = {name}")))?;
    Ok(altsum::weights_identity_reports(f, p.real("x")?, p.u32("N")?, tol)?.to_vec())
}

fn weights(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(altsum::weights_report(p.u32("N")?)?)
}

fn weights_total(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(altsum::weights_total_report(p.u32("N")?)?)
}

fn zn_moments(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    Ok(altsum::moment_reports(p.u32("N")?)?.to_vec())
}

fn zn_cumulants(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(altsum::cumulant_report(p.u32("N")?, p.u32("order")?)?)
}

fn zn_cumulant_limit(p: &Point, tol: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (n, order) = (p.u32("N")?, p.u32("order")?);
    one(IdentityReport::compare(
        "zn-cumulant-limit",
        p.params(),
        altsum::standardized_cumulant(n, order)?,
        altsum::limit_cumulant(order)?,
        tol,
        Truncation::exact(0),
    ))
}

fn mgf_forms(p: &Point, tol: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    Ok(altsum::mgf_reports(p.real("z")?, p.u32("N")?, tol)?.to_vec())
}

fn putnam(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(solver::putnam_check(p.u32("b")?, tol, &TruncationPolicy::from_ctx(ctx))?)
}

fn implicit_fixed_point(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (b, n) = (p.u32("b")?, p.u64("n")?);
    let g = solver::putnam_sequence();
    let policy = TruncationPolicy::from_ctx(ctx);
    let f = |m| solver::solve_implicit(b, &g, m, &policy);
    let head = f(n)?;
    let mut rhs = head.value;
    let mut trunc = head.truncation;
    for j in 0..b as u64 {
        let a = f(b as u64 * n + j)?;
        rhs -= a.value;
        trunc = trunc.combine(a.truncation);
    }
    one(IdentityReport::compare_scaled(
        "implicit-fixed-point",
        p.params(),
        g.eval(n),
        rhs,
        head.value.abs(),
        tol,
        trunc,
    ))
}

fn base_relation(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let f = |n: u64| BigRational::new(BigInt::from(1), BigInt::from((n + 1) * (n + 1)));
    one(solver::base_relation_exact(p.u32("b")?, f, p.u64("support")?)?)
}

/// A fixed rational family with varied signs and small denominators.
pub fn scrambled_rational(n: u64) -> BigRational {
    let num = ((37 * n + 11) % 101) as i64 - 50;
    BigRational::new(BigInt::from(num), BigInt::from(n % 12 + 1))
}

fn finite_solver(p: &Point, _: Tolerance, _: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let pp = p.u32("p")?;
    let mut out = solver::finite_solver_reports(pp, scrambled_rational)?.to_vec();
    let sol = solver::solve_implicit_finite(pp, scrambled_rational)?;
    out.push(IdentityReport::exact(
        "finite-fixed-point",
        params!("p" => pp),
        exact_int(sol.satisfies(scrambled_rational) as u8),
        exact_int(1),
    ));
    Ok(out)
}

fn finite_zeta_solver(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    let (pp, z) = (p.u32("p")?, p.real("z")?);
    let via = solver::finite_weighted_sum(pp, |n: u64| {
        let w = z + n as f64;
        1.0 / (w * (w + 1.0))
    })?;
    let fp = FiniteSumParams::new(2, pp, 1.0, z)?;
    one(IdentityReport::compare(
        "finite-zeta-solver",
        p.params(),
        via,
        ids::finite_zeta_diff_direct(&fp, ctx)?,
        tol,
        Truncation::exact(1 << pp),
    ))
}

fn recover_j_infinity(p: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    one(solver::recover_j_infinity_check(p.real("x")?, tol, ctx)?)
}

use ParamKind::{Int, Real, Text};

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        id: "finite-zeta-diff",
        summary: "finite digit-weighted zeta difference: Hurwitz closed form vs direct sum",
        schema: &[("b", Int), ("p", Int), ("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3, 5, 10]), range(1, 5), reals(&STANDARD_ALPHAS), reals(&STANDARD_ZS)],
        eval: finite_zeta_diff,
    },
    CatalogEntry {
        id: "binary-corollary",
        summary: "base-2 half-integer Hurwitz form vs the general closed form",
        schema: &[("p", Int), ("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 5), reals(&STANDARD_ALPHAS), reals(&STANDARD_ZS)],
        eval: binary_corollary,
    },
    CatalogEntry {
        id: "double-sum",
        summary: "base-2 alternating double sum vs the general closed form",
        schema: &[("p", Int), ("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 5), reals(&STANDARD_ALPHAS), reals(&STANDARD_ZS)],
        eval: double_sum,
    },
    CatalogEntry {
        id: "binary-zeta-ratio",
        summary: "infinite base-2 difference at z = 0 vs (1-2^{1-a})/(1-2^{-a}) zeta(a)",
        schema: &[("alpha", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![reals(&[2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])],
        eval: binary_zeta_ratio,
    },
    CatalogEntry {
        id: "infinite-zeta-diff",
        summary: "infinite digit-weighted zeta difference vs partial sum with tail estimate",
        schema: &[("b", Int), ("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-6, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3, 10]), reals(&[1.0, 2.0, 3.0]), reals(&[0.0, 1.5])],
        eval: infinite_zeta_diff,
    },
    CatalogEntry {
        id: "j-recurrence",
        summary: "J_{2N+1}(x) = J_N(x/2)/2 + beta(x+1) - beta(x+2N+3)",
        schema: &[("N", Int), ("x", Real)],
        tolerance: Tolerance { rel: 1e-12, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[1, 7, 100, 1000]), reals(&[0.0, 0.5, 17.25])],
        eval: j_recurrence,
    },
    CatalogEntry {
        id: "j-dyadic",
        summary: "J_{2^p-1}(x) as a sum of Stirling beta differences",
        schema: &[("p", Int), ("x", Real)],
        tolerance: Tolerance { rel: 1e-12, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[1, 4, 8, 12]), reals(&[0.0, 1.5, 100.0])],
        eval: j_dyadic,
    },
    CatalogEntry {
        id: "pi-over-2",
        summary: "P(1)/P(1/2) = pi/2 for the base-2 gamma product P",
        schema: &[],
        tolerance: Tolerance { rel: 1e-10, abs: 0.0, floor: 0.0 },
        default_grid: Vec::new,
        eval: pi_over_2,
    },
    CatalogEntry {
        id: "product-ratio",
        summary: "dyadic product ratios in gamma, elliptic and tanh-product form",
        schema: &[],
        tolerance: Tolerance { rel: 1e-10, abs: 0.0, floor: 0.0 },
        default_grid: Vec::new,
        eval: product_ratio,
    },
    CatalogEntry {
        id: "infinite-product",
        summary: "log of the digit-weighted gamma product vs the partial product",
        schema: &[("b", Int), ("z", Real)],
        tolerance: Tolerance { rel: 1e-6, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3]), reals(&[0.5, 1.0, 2.0])],
        eval: infinite_product,
    },
    CatalogEntry {
        id: "barnes-finite",
        summary: "finite power sum via Barnes double zeta vs direct sum",
        schema: &[("b", Int), ("p", Int), ("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-8, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3]), range(1, 3), reals(&[2.5, 3.0, 4.0]), reals(&[0.0, 0.5, 1.0])],
        eval: barnes_finite,
    },
    CatalogEntry {
        id: "barnes-base-case",
        summary: "the Barnes closed form at b = 2, p = 1 reduces to (z+1)^{-alpha}",
        schema: &[("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-12, abs: 0.0, floor: 0.0 },
        default_grid: || vec![reals(&[2.5, 3.0, 4.0]), reals(&[0.0, 0.5, 1.0])],
        eval: barnes_base_case,
    },
    CatalogEntry {
        id: "barnes-infinite",
        summary: "sum of s_b(n)/(n+z)^alpha via Barnes double zeta vs partial sum",
        schema: &[("b", Int), ("alpha", Real), ("z", Real)],
        tolerance: Tolerance { rel: 1e-6, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3, 10]), reals(&[2.5, 3.0, 4.0]), reals(&[0.0, 0.5, 1.0])],
        eval: barnes_infinite,
    },
    CatalogEntry {
        id: "digit-zeta-2",
        summary: "sum of s_b(n)/(n+z)^2 from Barnes finite parts vs a 10^7-term sum",
        schema: &[("b", Int), ("z", Real)],
        tolerance: Tolerance { rel: 0.0, abs: 1e-4, floor: f64::INFINITY },
        default_grid: || vec![ints(&[2, 3]), reals(&[0.25, 1.0, 2.0])],
        eval: digit_zeta_2,
    },
    CatalogEntry {
        id: "legendre",
        summary: "count of n with ds_2(n-1) + v_2(n) = 1 and v_2(n!) + s_2(n) = n",
        schema: &[("n_max", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[1_000_000])],
        eval: legendre,
    },
    CatalogEntry {
        id: "two-adic-divisors",
        summary: "count of n where the divisor sum of the power-of-two indicator equals 1 - v_2(n)",
        schema: &[("n_max", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[1_000_000])],
        eval: two_adic,
    },
    CatalogEntry {
        id: "lambert-polynomial",
        summary: "coefficients of the finite Lambert polynomial equal s_b(n)",
        schema: &[("b", Int), ("p", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3]), range(1, 6)],
        eval: lambert_polynomial,
    },
    CatalogEntry {
        id: "rankwise",
        summary: "rank-by-rank Lambert pieces sum to the digit-sum polynomial",
        schema: &[("b", Int), ("p", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3]), range(1, 6)],
        eval: rankwise,
    },
    CatalogEntry {
        id: "lambert-infinite",
        summary: "Lambert form of sum s_b(n) z^n vs the power series",
        schema: &[("b", Int), ("z", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3]), reals(&[-0.3, 0.3, 0.5, 0.9])],
        eval: lambert_infinite,
    },
    CatalogEntry {
        id: "mobius-inverse",
        summary: "count of n where the Mobius inversion recovers the power-of-two indicator",
        schema: &[("n_max", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[10_000])],
        eval: mobius_inverse,
    },
    CatalogEntry {
        id: "partition-convolution",
        summary: "signed partition convolution vs the Lambert coefficient ds_2(n-1)",
        schema: &[("n_max", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[200])],
        eval: partition_convolution,
    },
    CatalogEntry {
        id: "eta-bridge",
        summary: "sum of ds_2(n-1)/n^s over eta(s) vs 1/(1 - 2^{-s})",
        schema: &[("s", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![reals(&[2.0, 2.5, 3.0, 4.0])],
        eval: eta_bridge,
    },
    CatalogEntry {
        id: "monomial-sum",
        summary: "Thue-Morse signed sum of (x+n)^N, exactly",
        schema: &[("N", Int), ("x", Real)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 10), reals(&[0.0, 0.5, 3.0, -2.25])],
        eval: monomial,
    },
    CatalogEntry {
        id: "next-monomial-sum",
        summary: "Thue-Morse signed sum of (x+n)^{N+1}, exactly",
        schema: &[("N", Int), ("x", Real)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 10), reals(&[0.0, 0.5, 3.0, -2.25])],
        eval: next_monomial,
    },
    CatalogEntry {
        id: "prouhet",
        summary: "Thue-Morse signed sums annihilate polynomials of degree below N",
        schema: &[("N", Int), ("x", Real)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 10), reals(&[0.0, 0.5, 3.0, -2.25])],
        eval: prouhet,
    },
    CatalogEntry {
        id: "alternating-weights",
        summary: "Thue-Morse signed sum via weights and via stepped differences vs direct",
        schema: &[("f", Text), ("N", Int), ("x", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || {
            let names: Vec<&str> = TestFunction::ALL.iter().map(|f| f.name()).collect();
            vec![texts(&names), range(1, 10), reals(&[0.0, 0.5, 1.25])]
        },
        eval: alternating_weights,
    },
    CatalogEntry {
        id: "weights",
        summary: "weight table from the product expansion vs the composition-count oracle",
        schema: &[("N", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 10)],
        eval: weights,
    },
    CatalogEntry {
        id: "weights-total",
        summary: "weights sum to 2^{N(N+1)/2}",
        schema: &[("N", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 20)],
        eval: weights_total,
    },
    CatalogEntry {
        id: "zn-moments",
        summary: "mean and variance of Z_N in closed form vs the exact law",
        schema: &[("N", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 12)],
        eval: zn_moments,
    },
    CatalogEntry {
        id: "zn-cumulants",
        summary: "standardized cumulants of Z_N in closed form vs the exact law",
        schema: &[("N", Int), ("order", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 8), range(2, 8)],
        eval: zn_cumulants,
    },
    CatalogEntry {
        id: "zn-cumulant-limit",
        summary: "standardized cumulant at finite N vs its N -> infinity limit",
        schema: &[("N", Int), ("order", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 1e-3, floor: f64::INFINITY },
        default_grid: || vec![ints(&[14]), ints(&[4, 6, 8])],
        eval: zn_cumulant_limit,
    },
    CatalogEntry {
        id: "mgf-forms",
        summary: "two product forms of the moment generating function of Z_N and the exact law",
        schema: &[("N", Int), ("z", Real)],
        tolerance: Tolerance { rel: 1e-12, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[1, 4, 8]), reals(&[-0.5, 0.1, 1.0])],
        eval: mgf_forms,
    },
    CatalogEntry {
        id: "putnam",
        summary: "sum of s_b(n)/(n(n+1)) through the implicit solver vs (b/(b-1)) ln b",
        schema: &[("b", Int)],
        tolerance: Tolerance { rel: 1e-8, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3, 10])],
        eval: putnam,
    },
    CatalogEntry {
        id: "implicit-fixed-point",
        summary: "solved f satisfies g(n) = f(n) - sum_j f(bn+j) for g = 1/(n(n+1))",
        schema: &[("b", Int), ("n", Int)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3, 10]), ints(&[1, 5, 40])],
        eval: implicit_fixed_point,
    },
    CatalogEntry {
        id: "base-relation",
        summary: "digit-sum relation for f(n) = 1/(n+1)^2 on a finite support, exactly",
        schema: &[("b", Int), ("support", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![ints(&[2, 3, 10]), ints(&[16, 81, 200])],
        eval: base_relation,
    },
    CatalogEntry {
        id: "finite-solver",
        summary: "finite implicit system solved exactly; weighted sum and triple sum vs direct",
        schema: &[("p", Int)],
        tolerance: Tolerance { rel: 0.0, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 12)],
        eval: finite_solver,
    },
    CatalogEntry {
        id: "finite-zeta-solver",
        summary: "finite solver with g = 1/((z+n)(z+n+1)) vs the finite zeta difference at alpha = 1",
        schema: &[("p", Int), ("z", Real)],
        tolerance: Tolerance { rel: 1e-12, abs: 0.0, floor: 0.0 },
        default_grid: || vec![range(1, 8), reals(&[0.0, 0.5, 3.75])],
        eval: finite_zeta_solver,
    },
    CatalogEntry {
        id: "recover-j-infinity",
        summary: "J_inf(x) rebuilt from the solver's double sum",
        schema: &[("x", Real)],
        tolerance: Tolerance { rel: 1e-9, abs: 0.0, floor: 0.0 },
        default_grid: || vec![reals(&[0.1, 1.0, 100.0])],
        eval: recover_j_infinity,
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn lookup(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Parameter values to sweep for one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub identity_id: String,
    /// Name and value list per parameter. Parameters left out take the default grid.
    pub params: Vec<(String, Vec<ParamValue>)>,
    pub tolerance: Option<Tolerance>,
}

impl GridSpec {
    pub fn new(identity_id: &str) -> Self {
        Self {
            identity_id: identity_id.to_string(),
            params: Vec::new(),
            tolerance: None,
        }
    }

    pub fn with_param(mut self, name: &str, values: Vec<ParamValue>) -> Self {
        self.params.push((name.to_string(), values));
        self
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tolerance = Some(tol);
        self
    }

    /// Parses a flat `{"name": [values...]}` document.
    pub fn from_json(identity_id: &str, text: &str) -> Result<Self> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| schema_err(identity_id, format!("grid file: {e}")))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| schema_err(identity_id, "grid file must be a JSON object"))?;
        let mut grid = GridSpec::new(identity_id);
        for (name, list) in obj {
            let list = list
                .as_array()
                .ok_or_else(|| schema_err(identity_id, format!("{name}: expected a list")))?;
            let values = list
                .iter()
                .map(|v| json_param(identity_id, name, v))
                .collect::<Result<Vec<_>>>()?;
            grid.params.push((name.clone(), values));
        }
        Ok(grid)
    }

    /// Checks names and kinds against the schema and expands the grid in schema order.
    pub fn points(&self) -> Result<Vec<Point>> {
        let entry = lookup(&self.identity_id)?;
        let id = entry.id;
        for (name, _) in &self.params {
            if !entry.schema.iter().any(|(k, _)| k == name) {
                return Err(schema_err(id, format!("unknown parameter {name}")));
            }
        }
        let defaults = (entry.default_grid)();
        let mut axes: Vec<Vec<(&'static str, ParamValue)>> = Vec::new();
        for (i, &(name, kind)) in entry.schema.iter().enumerate() {
            let values = match self.params.iter().find(|(k, _)| k == name) {
                Some((_, v)) => v.clone(),
                None => defaults[i].clone(),
            };
            let values = values
                .into_iter()
                .map(|v| coerce(id, name, kind, v).map(|v| (name, v)))
                .collect::<Result<Vec<_>>>()?;
            axes.push(values);
        }
        let mut points = vec![Point { values: Vec::new() }];
        for axis in axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |v| {
                        let mut q = p.clone();
                        q.values.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

fn json_param(id: &str, name: &str, v: &serde_json::Value) -> Result<ParamValue> {
    if let Some(i) = v.as_i64() {
        Ok(ParamValue::Int(i))
    } else if let Some(x) = v.as_f64() {
        Ok(ParamValue::Real(x))
    } else if let Some(s) = v.as_str() {
        Ok(ParamValue::Text(s.to_string()))
    } else {
        Err(schema_err(id, format!("{name}: unsupported value {v}")))
    }
}

fn coerce(id: &str, name: &str, kind: ParamKind, v: ParamValue) -> Result<ParamValue> {
    match (kind, v) {
        (ParamKind::Int, ParamValue::Int(i)) => Ok(ParamValue::Int(i)),
        (ParamKind::Int, ParamValue::Real(x)) if x.fract() == 0.0 && x.abs() < 9e15 => Ok(ParamValue::Int(x as i64)),
        (ParamKind::Real, ParamValue::Real(x)) => Ok(ParamValue::Real(x)),
        (ParamKind::Real, ParamValue::Int(i)) => Ok(ParamValue::Real(i as f64)),
        (ParamKind::Text, ParamValue::Text(s)) => Ok(ParamValue::Text(s)),
        (kind, v) => Err(schema_err(id, format!("{name} = {v} does not fit {kind:?}"))),
    }
}

/// Default grids of every catalog entry, in catalog order.
pub fn default_suite() -> Vec<GridSpec> {
    CATALOG.iter().map(|e| e.default_grid()).collect()
}

/// Pass and fail counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub reports: Vec<IdentityReport>,
    pub summary: Summary,
    pub worst_rel_err: f64,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn from_reports(reports: Vec<IdentityReport>, wall_time: Duration) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        let worst_rel_err = reports
            .iter()
            .map(|r| if r.rel_err.is_nan() { f64::INFINITY } else { r.rel_err })
            .fold(0.0, f64::max);
        Self {
            summary: Summary {
                total: reports.len(),
                passed,
                failed: reports.len() - passed,
            },
            reports,
            worst_rel_err,
            wall_time,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// A failing report standing in for a grid point whose evaluation returned an error.
fn error_report(id: &str, point: &Point, err: &Error) -> IdentityReport {
    let mut params = point.params();
    params.push(("error".into(), ParamValue::Text(err.to_string())));
    IdentityReport {
        identity: id.to_string(),
        params,
        lhs: Quantity::Real(f64::NAN),
        rhs: Quantity::Real(f64::NAN),
        abs_err: f64::INFINITY,
        rel_err: f64::INFINITY,
        truncation: Truncation::default(),
        pass: false,
    }
}

/// Evaluates one grid point. Evaluation errors become failing reports.
pub fn evaluate_point(entry: &CatalogEntry, point: &Point, tol: Tolerance, ctx: &PrecisionContext) -> Vec<IdentityReport> {
    match (entry.eval)(point, tol, ctx) {
        Ok(r) => r,
        Err(e) => vec![error_report(entry.id, point, &e)],
    }
}

/// Runs every grid, in order. Schema problems are reported before anything is evaluated.
pub fn run_grids(grids: &[GridSpec], ctx: &PrecisionContext) -> Result<RunReport> {
    ctx.validate()?;
    let start = Instant::now();
    let mut jobs = Vec::new();
    for grid in grids {
        let entry = lookup(&grid.identity_id)?;
        let tol = grid.tolerance.unwrap_or(entry.tolerance);
        for point in grid.points()? {
            jobs.push((entry, point, tol));
        }
    }
    let reports: Vec<IdentityReport> = jobs
        .par_iter()
        .map(|(entry, point, tol)| evaluate_point(entry, point, *tol, ctx))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(RunReport::from_reports(reports, start.elapsed()))
}

pub fn run_suite(grid: &GridSpec, ctx: &PrecisionContext) -> Result<RunReport> {
    run_grids(std::slice::from_ref(grid), ctx)
}

/// Output encodings for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn json_string(s: &str) -> String {
    serde_json::Value::String(s.to_string()).to_string()
}

fn json_real(v: f64) -> String {
    if v.is_finite() {
        format_real(v)
    } else {
        json_string(&format!("{v}"))
    }
}

fn json_param_value(v: &ParamValue) -> String {
    match v {
        ParamValue::Int(i) => i.to_string(),
        ParamValue::Real(x) => json_real(*x),
        ParamValue::Text(s) => json_string(s),
    }
}

fn json_quantity(q: &Quantity) -> String {
    match q {
        Quantity::Real(v) => json_real(*v),
        Quantity::Exact(r) => json_string(&r.to_string()),
    }
}

/// One report as a JSON object with fixed field order.
pub fn report_json(r: &IdentityReport) -> String {
    let params: Vec<String> = r
        .params
        .iter()
        .map(|(k, v)| format!("{}:{}", json_string(k), json_param_value(v)))
        .collect();
    format!(
        "{{\"identity\":{},\"params\":{{{}}},\"lhs\":{},\"rhs\":{},\"abs_err\":{},\"rel_err\":{},\"truncation\":{{\"terms\":{},\"tail_bound\":{}}},\"pass\":{}}}",
        json_string(&r.identity),
        params.join(","),
        json_quantity(&r.lhs),
        json_quantity(&r.rhs),
        json_real(r.abs_err),
        json_real(r.rel_err),
        r.truncation.terms,
        json_real(r.truncation.tail_bound),
        r.pass
    )
}

pub const CSV_HEADER: &str = "identity,params,lhs,rhs,abs_err,rel_err,terms,tail_bound,pass";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn report_csv(r: &IdentityReport) -> String {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    [
        csv_field(&r.identity),
        csv_field(&params.join(";")),
        csv_field(&r.lhs.to_string()),
        csv_field(&r.rhs.to_string()),
        format_real(r.abs_err),
        format_real(r.rel_err),
        r.truncation.terms.to_string(),
        format_real(r.truncation.tail_bound),
        r.pass.to_string(),
    ]
    .join(",")
}

/// Writes a run. Wall time is left out so that identical runs give identical bytes.
pub fn emit_report(run: &RunReport, format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            write!(
                out,
                "{{\"summary\":{{\"total\":{},\"passed\":{},\"failed\":{},\"worst_rel_err\":{}}},\"reports\":[",
                run.summary.total,
                run.summary.passed,
                run.summary.failed,
                json_real(run.worst_rel_err)
            )?;
            for (i, r) in run.reports.iter().enumerate() {
                let sep = if i == 0 { "\n" } else { ",\n" };
                write!(out, "{sep}{}", report_json(r))?;
            }
            writeln!(out, "\n]}}")
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in &run.reports {
                writeln!(out, "{}", report_csv(r))?;
            }
            Ok(())
        }
    }
}
