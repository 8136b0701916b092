//! Tabulates the closed-form forecasts for both presets.
use frobenius_wkb::oracles::*;

fn main() {
    let c = 2.0;
    println!("double well c = {c}: boundary u = {:.4}", double_well_boundary(c));
    println!("{:>6} {:>10} {:>10} {:>12} {:>8}", "u", "S(u)", "m_bar", "log|a|", "phase");
    for i in -4..=8 {
        let u = 0.5 * i as f64;
        let (m, l) = double_well_parametric(c, u);
        println!("{u:>6.2} {:>10.4} {m:>10.4} {l:>12.4} {:>8.4}", double_well_growth(c, u), double_well_phase(c, u));
    }
    println!();
    for m in [3.0, 30.0, 300.0] {
        let corrected = OracleKind::AnharmonicCorrected { c: 0.0 }.log_abs(m).unwrap();
        println!("m = {m:>5}: pred0 {:>10.4}  pred1 {:>10.4}  corrected {corrected:>10.4}", anharmonic_pred0(m).unwrap(), anharmonic_pred1(m));
    }
}
