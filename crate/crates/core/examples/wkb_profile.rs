//! Max-modulus growth S(u) and maximizing phase for the double well, as CSV.
use frobenius_wkb::ode::{preset_double_well, Branch};
use frobenius_wkb::oracles::double_well_growth;
use frobenius_wkb::wkb::{growth_profile, growth_profile_with, PhaseScanConfig};

fn main() -> frobenius_wkb::Result<()> {
    let cfg = PhaseScanConfig::default();
    let profile = growth_profile(&preset_double_well(2), Branch::NuMinus, 0.5, 4.0, 36, &cfg)?;
    profile.write_csv(std::io::stdout().lock()).expect("stdout");

    // in y the leading term is exactly the closed form
    let y = growth_profile_with(&frobenius_wkb::ode::preset_double_well_y(2), Branch::NuMinus, -0.5, 1.5, 9, &cfg, false)?;
    for (u, s) in y.u_grid().iter().zip(y.s_values()) {
        eprintln!("u_x = {:5.2}  S = {s:12.6}  closed form {:12.6}", 2.0 * u, double_well_growth(2.0, 2.0 * u));
    }
    Ok(())
}
