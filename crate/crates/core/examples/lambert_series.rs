//! Generating functions of s_b(n), Mobius inversion and the partition convolution.
use digitsum::lambert::{lambert_finite_polynomial, lambert_gf, lambert_gf_direct, mobius_inverse_report, partition_convolution};
use digitsum::PrecisionContext;

fn main() -> digitsum::Result<()> {
    let ctx = PrecisionContext::default();
    println!("sum_(n<8) s_2(n) z^n = {}", lambert_finite_polynomial(2, 3)?);
    for z in [-0.3, 0.5, 0.9] {
        let a = lambert_gf(2, z, &ctx)?.value;
        let d = lambert_gf_direct(2, z, 4096)?.value;
        println!("z = {z:>4}: Lambert form {a:.16e}, power series {d:.16e}");
    }
    let r = mobius_inverse_report(10_000)?;
    println!("Mobius inversion holds for {} of {} integers", r.lhs, r.rhs);
    let conv = partition_convolution(16)?;
    println!("partition convolution, n = 1..16: {:?}", &conv[1..]);
    Ok(())
}
