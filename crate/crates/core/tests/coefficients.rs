use dashu_ratio::RBig;
use frobenius_wkb::frobenius::{coefficients, exact_coefficients, residual_tolerance, verify_residuals};
use frobenius_wkb::ode::{
    make_ode, preset_anharmonic, preset_anharmonic_y, preset_double_well, preset_double_well_y, ratio, Branch, OdeSpec,
};
use frobenius_wkb::precision::{PrecisionContext, SeriesScalar};
use frobenius_wkb::Error;
use proptest::prelude::*;

fn rel(a: &RBig, b: &RBig) -> f64 {
    if *b == RBig::ZERO {
        return if *a == RBig::ZERO { 0.0 } else { f64::INFINITY };
    }
    ((a - b) / b).to_f64().value().abs()
}

#[test]
fn quartic_product_closed_form() {
    let table = exact_coefficients(&preset_anharmonic(0), Branch::NuMinus, 300).unwrap();
    let mut p = RBig::ONE;
    for j in 1..=100u64 {
        p /= RBig::from(6 * j * (6 * j - 1));
        assert_eq!(*table.value(3 * j as usize), p, "j={j}");
        assert_eq!(*table.value(3 * j as usize - 1), RBig::ZERO);
    }
}

#[test]
fn x_series_is_even_part_of_y_series() {
    for c in 0..=2i64 {
        for (x_spec, y_spec) in [(preset_anharmonic(c), preset_anharmonic_y(c)), (preset_double_well(c), preset_double_well_y(c))] {
            for branch in [Branch::NuMinus, Branch::NuPlus] {
                let a = exact_coefficients(&x_spec, branch, 50).unwrap();
                let b = exact_coefficients(&y_spec, branch, 101).unwrap();
                for m in 0..=50 {
                    assert_eq!(a.value(m), b.value(2 * m), "c={c} {branch} m={m}");
                    assert_eq!(*b.value(2 * m + 1), RBig::ZERO, "c={c} {branch} odd {}", 2 * m + 1);
                }
            }
        }
    }
}

#[test]
fn double_well_signs_change() {
    let t = coefficients(&preset_double_well(2), Branch::NuMinus, 200, &PrecisionContext::new(50).unwrap()).unwrap();
    let flips = (1..=200).filter(|&m| t.sign(m) * t.sign(m - 1) < 0).count();
    assert!(flips > 10, "{flips}");
}

#[test]
fn resonance_is_reported_with_its_index() {
    let spec = make_ode(RBig::from(2), RBig::ZERO, RBig::ONE, vec![RBig::ONE]).unwrap();
    let err = exact_coefficients(&spec, Branch::NuMinus, 5).unwrap_err();
    assert_eq!(err, Error::ResonantIndicialRoots { m: 2 });
    // the plus branch never resonates
    assert!(exact_coefficients(&spec, Branch::NuPlus, 5).is_ok());
}

fn arb_spec() -> impl Strategy<Value = OdeSpec> {
    (
        -6i64..6,
        1u64..5,
        1i64..8,
        proptest::collection::vec((-9i64..9, 1u64..6), 1..5),
    )
        .prop_filter_map("valid spec", |(nm, den, gap, v)| {
            // non-integer root gap keeps both branches free of resonance
            let nu_minus = ratio(nm, den);
            let nu_plus = &nu_minus + ratio(2 * gap + 1, 2);
            let v = v.into_iter().map(|(p, q)| ratio(p, q)).collect();
            make_ode(nu_plus, nu_minus, RBig::ONE, v).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalized_and_finite(spec in arb_spec(), plus in any::<bool>()) {
        let branch = if plus { Branch::NuPlus } else { Branch::NuMinus };
        let t = coefficients(&spec, branch, 40, &PrecisionContext::new(30).unwrap()).unwrap();
        prop_assert_eq!(t.sign(0), 1);
        prop_assert_eq!(t.log_abs(0), 0.0);
        prop_assert!((0..=40).all(|m| !t.log_abs(m).is_nan()));
    }

    #[test]
    fn residuals_vanish(spec in arb_spec(), digits in 20usize..60) {
        let t = coefficients(&spec, Branch::NuMinus, 30, &PrecisionContext::new(digits).unwrap()).unwrap();
        let r = verify_residuals(&t);
        prop_assert!(r.within(residual_tolerance(digits)), "{:?}", r);
        prop_assert_eq!(verify_residuals(&exact_coefficients(&spec, Branch::NuMinus, 30).unwrap()).max_relative, 0.0);
    }

    #[test]
    // sign-definite recurrence; the double well cancels near its sign changes
    fn doubling_precision_agrees(c in 0i64..40, digits in 20usize..40) {
        let spec = preset_anharmonic(ratio(c, 10));
        let lo = coefficients(&spec, Branch::NuPlus, 60, &PrecisionContext::new(digits).unwrap()).unwrap();
        let hi = coefficients(&spec, Branch::NuPlus, 60, &PrecisionContext::new(2 * digits).unwrap()).unwrap();
        for m in 0..=60 {
            let gap = rel(&lo.value(m).to_rational(), &hi.value(m).to_rational());
            prop_assert!(gap <= 10f64.powi(3 - digits as i32), "m={} gap={:e}", m, gap);
        }
    }

    #[test]
    fn anharmonic_terms_fall_past_peak(c in prop_oneof![Just(0u32), 10u32..30], x in 1u32..60) {
        let spec = preset_anharmonic(ratio(c as i64, 10));
        let t = coefficients(&spec, Branch::NuMinus, 500, &PrecisionContext::new(30).unwrap()).unwrap();
        let ln_x = (x as f64).ln();
        let terms: Vec<f64> = (0..=500).map(|m| t.log_abs(m) + m as f64 * ln_x).filter(|l| l.is_finite()).collect();
        let peak = terms.iter().enumerate().fold((0, f64::NEG_INFINITY), |a, (i, &l)| if l > a.1 { (i, l) } else { a }).0;
        prop_assert!(terms[peak..].windows(2).all(|w| w[1] < w[0]), "c={} x={}", c, x);
    }
}
