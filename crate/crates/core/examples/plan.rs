//! Term counts and working digits from closed forms and from the numeric pipeline.
use frobenius_wkb::ode::{preset_anharmonic, Branch};
use frobenius_wkb::oracles::OracleKind;
use frobenius_wkb::planner::{plan, plan_numeric, NumericPlanOptions, OracleModel};

fn main() -> frobenius_wkb::Result<()> {
    let spec = preset_anharmonic(0);
    for x in [10.0, 100.0, 1000.0] {
        for p in [50, 200] {
            let closed = plan(&OracleModel { kind: OracleKind::AnharmonicPred1, nu: 0.0 }, x, p)?;
            let (numeric, _) = plan_numeric(&spec, Branch::NuMinus, x, p, &NumericPlanOptions::default())?;
            println!("x={x:<6} P={p:<4} pred1: {}  numeric: {}", closed.to_json(), numeric.to_json());
        }
    }
    Ok(())
}
