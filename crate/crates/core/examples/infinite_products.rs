//! The kernel J_inf, the digit-weighted gamma product and its dyadic special values.
use digitsum::identities::{infinite_product, infinite_zeta_diff, j_infinity, product_special_values};
use digitsum::report::Tolerance;
use digitsum::PrecisionContext;

fn main() -> digitsum::Result<()> {
    let ctx = PrecisionContext::default();
    for b in [2, 3, 10] {
        println!("J_inf(0) for b = {b}: {:.16}", j_infinity(b, 0.0, &ctx)?.value);
    }
    println!("sum s_2(n)(1/n^2 - 1/(n+1)^2) = {:.16}  (2 zeta(2)/3)", infinite_zeta_diff(2, 2.0, 0.0, &ctx)?.value);
    println!("P_2(1) = {:.16}", infinite_product(2, 1.0, &ctx)?.value);
    for r in product_special_values(Tolerance::relative(1e-12), &ctx)? {
        let form = r.param("form").map(|f| f.to_string()).unwrap_or_default();
        println!("{:<14} {:<9} {} vs {}  pass={}", r.identity, form, r.lhs, r.rhs, r.pass);
    }
    Ok(())
}
