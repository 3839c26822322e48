//! Sums of s_b(n)/(n+z)^alpha through the Barnes double zeta, and the alpha = 2 finite-part case.
use digitsum::identities::{digit_power_sum_direct, digit_zeta_2, finite_barnes_closed, finite_power_sum_direct, infinite_barnes};
use digitsum::PrecisionContext;

fn main() -> digitsum::Result<()> {
    let ctx = PrecisionContext::default();
    let closed = finite_barnes_closed(3, 3, 2.5, 0.5, &ctx)?.value;
    let direct = finite_power_sum_direct(3, 3, 2.5, 0.5, &ctx)?;
    println!("finite b=3 p=3 alpha=2.5 z=0.5: {closed:.16e} vs {direct:.16e}");
    let inf = infinite_barnes(2, 3.0, 0.0, &ctx)?;
    let partial = digit_power_sum_direct(2, 3.0, 0.0, 1 << 20)?;
    println!(
        "infinite b=2 alpha=3: {:.16e}; partial sum {:.16e} +/- {:.1e}",
        inf.value, partial.value, partial.truncation.tail_bound
    );
    let z2 = digit_zeta_2(2, 1.0, &ctx)?;
    println!(
        "alpha=2, b=2, z=1: {:.12} ({} branch), unscaled form {:.12}, direct {:.12}",
        z2.value,
        z2.branch.name(),
        z2.unscaled,
        z2.oracle.value
    );
    Ok(())
}
