//! Sums the double-well series at x = 50 to 60 digits under a planned precision.
use dashu_ratio::RBig;
use frobenius_wkb::frobenius::evaluate;
use frobenius_wkb::ode::{preset_double_well, Branch};
use frobenius_wkb::planner::{plan_numeric, NumericPlanOptions};
use frobenius_wkb::precision::format_decimal;

fn main() -> frobenius_wkb::Result<()> {
    let spec = preset_double_well(2);
    let (plan, _) = plan_numeric(&spec, Branch::NuMinus, 50.0, 60, &NumericPlanOptions::default())?;
    let r = evaluate(&spec, Branch::NuMinus, &RBig::from(50), 60, &plan.context())?;
    println!("plan:   {}", plan.to_json());
    println!("value:  {}", format_decimal(&r.value, 60));
    println!("terms {} (planned {}), peak 10^{:.2} at m = {}", r.terms_used, plan.predicted_terms, r.peak_term_log10, r.peak_index);
    Ok(())
}
