//! Hurwitz zeta, digamma, the Stirling beta and the Barnes double zeta.
use digitsum::specfun::{barnes_zeta2, digamma, hurwitz_zeta, log_gamma, riemann_zeta, stirling_beta, BarnesParams};
use digitsum::PrecisionContext;

fn main() -> digitsum::Result<()> {
    let ctx = PrecisionContext::default();
    println!("zeta(2)          = {:.16}", riemann_zeta(2.0, &ctx)?);
    println!("zeta(3, 1/2)     = {:.16}", hurwitz_zeta(3.0, 0.5, &ctx)?);
    println!("zeta(-0.5, 2)    = {:.16}", hurwitz_zeta(-0.5, 2.0, &ctx)?);
    println!("psi(1)           = {:.16}", digamma(1.0, &ctx)?);
    println!("beta(1)          = {:.16}  (ln 2)", stirling_beta(1.0, &ctx)?);
    println!("ln Gamma(0.3)    = {:.16}", log_gamma(0.3, &ctx)?);
    let p = BarnesParams::new(3.0, 1.0, 1.0, 1.0)?;
    println!("zeta_2(3; 1; 1,1) = {:.16}  (zeta(2))", barnes_zeta2(&p, &ctx)?);
    Ok(())
}
