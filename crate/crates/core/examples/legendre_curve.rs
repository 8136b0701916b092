//! Forecast log|a_m| from the WKB growth profile and check it against the recurrence.
use frobenius_wkb::frobenius::coefficients;
use frobenius_wkb::legendre::{coefficient_curve, coefficient_curve_with, estimate_at, CurveOptions};
use frobenius_wkb::ode::{preset_anharmonic, Branch};
use frobenius_wkb::oracles::{anharmonic_pred0, anharmonic_pred1};
use frobenius_wkb::precision::PrecisionContext;
use frobenius_wkb::wkb::{growth_profile, growth_profile_with, PhaseScanConfig};

fn main() -> frobenius_wkb::Result<()> {
    let spec = preset_anharmonic(0);
    let cfg = PhaseScanConfig::default();
    let full = coefficient_curve(&growth_profile(&spec, Branch::NuMinus, 1.0, 6.0, 64, &cfg)?, 0.0)?;
    let bare = coefficient_curve_with(
        &growth_profile_with(&spec, Branch::NuMinus, 1.0, 6.0, 64, &cfg, false)?,
        0.0,
        &CurveOptions { log_correction: false },
    )?;
    let exact = coefficients(&spec, Branch::NuMinus, 900, &PrecisionContext::new(30)?)?;
    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "m", "exact", "corrected", "leading", "pred1", "pred0");
    for m in [30usize, 60, 150, 300, 600, 900] {
        let mf = m as f64;
        println!(
            "{m:>5} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            exact.log_abs(m),
            estimate_at(&full, mf)?,
            estimate_at(&bare, mf)?,
            anharmonic_pred1(mf),
            anharmonic_pred0(mf)?
        );
    }
    Ok(())
}
