//! Oscillating double-well coefficients against the closed-form amplitude, with the
//! envelope over windows of six indices.
use frobenius_wkb::frobenius::coefficients;
use frobenius_wkb::ode::{preset_double_well, Branch};
use frobenius_wkb::oracles::OracleKind;
use frobenius_wkb::precision::PrecisionContext;

fn main() -> frobenius_wkb::Result<()> {
    let table = coefficients(&preset_double_well(2), Branch::NuMinus, 510, &PrecisionContext::new(100)?)?;
    let oracle = OracleKind::DoubleWellParametric { c: 2.0 };
    println!("m,sign,log_abs,estimate,envelope_minus_estimate");
    for m in (20..=500).step_by(10) {
        let est = oracle.log_abs(m as f64)?;
        let env = (m - 2..=m + 3)
            .map(|k| Ok(table.log_abs(k) - oracle.log_abs(k as f64)?))
            .collect::<frobenius_wkb::Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        println!("{m},{},{:.4},{est:.4},{env:.4}", table.sign(m), table.log_abs(m));
    }
    Ok(())
}
