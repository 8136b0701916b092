//! Predicted against realized term counts at x = 100 for a range of target precisions.
use dashu_ratio::RBig;
use frobenius_wkb::ode::{preset_anharmonic, Branch};
use frobenius_wkb::planner::compare_plan_to_actual;

fn main() -> frobenius_wkb::Result<()> {
    println!("P,M_predicted,M_actual,relative_gap,peak_gap_log10");
    for p in [25, 50, 100, 200, 350, 500] {
        let c = compare_plan_to_actual(&preset_anharmonic(0), Branch::NuMinus, &RBig::from(100), p)?;
        println!("{p},{},{},{:.4},{:.3}", c.plan.predicted_terms, c.actual.terms_used, c.relative_gap(), c.peak_gap_log10());
    }
    Ok(())
}
