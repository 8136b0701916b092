//! Integer-spaced indicial roots: a logarithmic solution is reported, unless the
//! recurrence leaves the coefficient free.
use dashu_ratio::RBig;
use frobenius_wkb::frobenius::exact_coefficients;
use frobenius_wkb::ode::{make_ode, parse_preset, Branch};

fn show(label: &str, t: &frobenius_wkb::frobenius::CoefficientTable<RBig>) {
    println!("{label}: {}", t.entries().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "));
}

fn main() -> frobenius_wkb::Result<()> {
    // roots 2 and 0
    let blocked = make_ode(RBig::from(2), RBig::ZERO, RBig::ONE, vec![RBig::ONE])?;
    if let Err(e) = exact_coefficients(&blocked, Branch::NuMinus, 10) {
        println!("v = [1]: {e}");
    }
    let free = make_ode(RBig::from(2), RBig::ZERO, RBig::ONE, vec![RBig::ONE, RBig::ONE])?;
    show("v = [1, 1]", &exact_coefficients(&free, Branch::NuMinus, 8)?);
    // in y the origin is ordinary; roots 0 and 1 differ by one but the even series exists
    show("anharmonic_y:c=1", &exact_coefficients(&parse_preset("anharmonic_y:c=1")?, Branch::NuMinus, 8)?);
    Ok(())
}
