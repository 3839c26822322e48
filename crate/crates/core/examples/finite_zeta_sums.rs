//! Finite digit-weighted zeta differences: closed form against the direct sum.
use digitsum::identities::{binary_corollary_closed, finite_zeta_diff_closed, finite_zeta_diff_direct, FiniteSumParams};
use digitsum::PrecisionContext;

fn main() -> digitsum::Result<()> {
    let ctx = PrecisionContext::default();
    println!("{:>3} {:>2} {:>5} {:>5} {:>24} {:>24}", "b", "p", "alpha", "z", "closed", "direct");
    for (b, p, alpha, z) in [(2, 5, 1.0, 0.0), (3, 4, 2.0, 0.5), (10, 3, 2.5, 3.75), (5, 2, 0.5, 1.0)] {
        let fp = FiniteSumParams::new(b, p, alpha, z)?;
        let closed = finite_zeta_diff_closed(&fp, &ctx)?;
        let direct = finite_zeta_diff_direct(&fp, &ctx)?;
        println!("{b:>3} {p:>2} {alpha:>5} {z:>5} {closed:>24.16e} {direct:>24.16e}");
    }
    println!("base-2 half-integer form at p=5, alpha=2, z=0: {:.16e}", binary_corollary_closed(5, 2.0, 0.0, &ctx)?);
    Ok(())
}
