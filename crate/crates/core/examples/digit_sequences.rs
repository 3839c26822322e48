//! Digit sums, 2-adic valuations and the Thue-Morse sign.
use digitsum::digitseq::{digit_count, digit_sum, legendre_scan, thue_morse_sign, valuation2, Base, DigitSums};

fn main() -> digitsum::Result<()> {
    let ten = Base::new(10)?;
    println!("s_10(2024) = {}", digit_sum(2024, ten));
    println!("2024 has {} decimal digits, v_2(2024) = {}", digit_count(2024, ten)?, valuation2(2024)?);
    let signs: String = (0..32).map(|n| if thue_morse_sign(n) > 0 { '+' } else { '-' }).collect();
    println!("Thue-Morse signs: {signs}");
    let first: Vec<u64> = DigitSums::new(Base::new(3)?).take(12).collect();
    println!("s_3(0..12) = {first:?}");
    let bad = legendre_scan(1_000_000).filter(|c| !c.holds()).count();
    println!("2-adic identities fail at {bad} of 10^6 integers");
    Ok(())
}
