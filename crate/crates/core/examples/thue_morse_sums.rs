//! Thue-Morse signed sums: direct, through the weight table, and as stepped differences.
use digitsum::altsum::{alpha_weights, alternating_sum_direct, alternating_sum_via_weights, delta_product_form, monomial_sum_closed};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> digitsum::Result<()> {
    let f = |x: &f64| 1.0 / (x + 1.0);
    for n in [2, 5, 8] {
        let direct = alternating_sum_direct(f, &0.5, n)?;
        let weights = alternating_sum_via_weights(f, &0.5, n)?;
        let product = delta_product_form(f, &0.5, n)?;
        println!("N={n}: direct {direct:.16e}, weights {weights:.16e}, differences {product:.16e}");
    }
    let table = alpha_weights(3)?;
    println!("weights for N = 3: {:?}", table.to_vec());
    let x = BigRational::new(BigInt::from(7), BigInt::from(3));
    let cube = |t: &BigRational| t * t * t;
    println!(
        "exact sum of (x+n)^3 at x = 7/3, N = 3: {} (closed form {})",
        alternating_sum_direct(cube, &x, 3)?,
        monomial_sum_closed(3)
    );
    Ok(())
}
