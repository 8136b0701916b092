//! Coefficients of the quartic oscillator series, exact and at 50 digits.
use frobenius_wkb::frobenius::{coefficients, exact_coefficients, verify_residuals};
use frobenius_wkb::ode::{preset_anharmonic, Branch};
use frobenius_wkb::precision::{format_decimal, PrecisionContext};

fn main() -> frobenius_wkb::Result<()> {
    let spec = preset_anharmonic(0);
    let exact = exact_coefficients(&spec, Branch::NuMinus, 12)?;
    for m in (0..=12).step_by(3) {
        println!("a_{m:<2} = {}", exact.value(m));
    }
    let table = coefficients(&spec, Branch::NuMinus, 600, &PrecisionContext::new(50)?)?;
    println!("a_600 = {}", format_decimal(table.value(600), 20));
    println!("residual check: {:?}", verify_residuals(&table));
    table.write_csv(std::io::sink()).expect("sink");
    Ok(())
}
