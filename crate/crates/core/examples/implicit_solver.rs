//! Solving g(n) = f(n) - sum_j f(bn+j) and summing s_b(n) g(n) through it.
use digitsum::solver::{finite_direct_sum, finite_weighted_sum, putnam_sequence, solve_implicit, weighted_digit_sum, TruncationPolicy};

fn main() -> digitsum::Result<()> {
    let policy = TruncationPolicy::default();
    let g = putnam_sequence();
    for b in [2u32, 3, 10] {
        let v = weighted_digit_sum(b, &g, &policy)?;
        let bf = b as f64;
        println!("b = {b:>2}: sum s_b(n)/(n(n+1)) = {:.15}, (b/(b-1)) ln b = {:.15}", v.value, bf / (bf - 1.0) * bf.ln());
    }
    let f3 = solve_implicit(2, &g, 3, &policy)?;
    println!("f(3) = {:.15} using {} block sums", f3.value, f3.truncation.terms);
    let h = |n: u64| 1.0 / (n as f64).powi(2);
    println!(
        "finite p = 10: via the solver {:.16e}, direct {:.16e}",
        finite_weighted_sum(10, h)?,
        finite_direct_sum(10, h)?
    );
    Ok(())
}
