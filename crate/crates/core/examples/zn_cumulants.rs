//! The law of Z_N = W_1 + ... + W_N with W_k uniform on {0, ..., 2^k - 1}.
use digitsum::altsum::{limit_cumulant, standardized_cumulant_exact, zn_mean_variance_exact, zn_pmf};

fn main() -> digitsum::Result<()> {
    let (mean, var) = zn_mean_variance_exact(6)?;
    println!("Z_6: mean {mean}, variance {var}");
    let pmf = zn_pmf(6)?;
    for order in [2, 4, 6, 8] {
        let closed = standardized_cumulant_exact(6, order)?;
        let law = pmf.standardized_cumulant(order)?;
        println!("order {order}: closed {closed}, from the law {law}");
    }
    for order in [4, 6, 8] {
        println!("limit of order {order}: {:.16}", limit_cumulant(order)?);
    }
    Ok(())
}
