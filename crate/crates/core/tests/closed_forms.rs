use frobenius_wkb::oracles::*;
use proptest::prelude::*;

#[test]
fn double_well_reference_points() {
    assert!((double_well_growth(2.0, 16f64.ln()) - 29.814).abs() < 1e-3);
    assert!((double_well_parametric(2.0, 16f64.ln()).0 - 35.78).abs() < 1e-2);
    assert!((double_well_parametric(2.0, (4.0f64 / 3.0).ln()).0 - 1.5396).abs() < 1e-4);
}

#[test]
fn pred1_minus_pred0_grows_like_log() {
    let d = |m: f64| anharmonic_pred1(m) - anharmonic_pred0(m).unwrap();
    let slope = (d(1e7) - d(1e5)) / (1e7f64.ln() - 1e5f64.ln());
    assert!((slope + 5.0 / 6.0).abs() < 1e-3, "{slope}");
}

proptest! {
    #[test]
    fn parametric_matches_pred0(m in 0.01f64..1e6) {
        let u = 2.0 / 3.0 * (2.0 * m).ln();
        let (mm, l) = anharmonic_parametric(0.0, u);
        let p0 = anharmonic_pred0(m).unwrap();
        prop_assert!((mm - m).abs() <= 1e-12 * m);
        prop_assert!((l - p0).abs() <= 1e-12 * (1.0 + p0.abs()));
    }

    #[test]
    fn boundary_continuity(c in 1e-3f64..=4.0) {
        let b = double_well_boundary(c);
        let x = c * c / 3.0;
        let tol = 1e-12 * (1.0 + c.powi(3));
        // both closed-form pieces at the switch
        let below = (c * c * x.sqrt() - x.powf(1.5) / 3.0, 0.5 * x.sqrt() * (c * c - x));
        let above = ((x + c * c).powf(1.5) / 3.0, 0.5 * x * (x + c * c).sqrt());
        prop_assert!((below.0 - above.0).abs() <= tol && (below.1 - above.1).abs() <= tol);
        prop_assert!((double_well_growth(c, b) - 8.0 * c.powi(3) / (9.0 * 3f64.sqrt())).abs() <= tol);
        let (l, r) = (double_well_parametric(c, b - 1e-9), double_well_parametric(c, b + 1e-9));
        prop_assert!((l.0 - r.0).abs() <= 1e-7 * (1.0 + l.0) && (l.1 - r.1).abs() <= 1e-7 * (1.0 + l.1.abs()));
    }

    #[test]
    fn phase_maximum_beats_real_axis(c in 0.0f64..4.0, u in -4.0f64..6.0) {
        let real_axis = (1.5 * u).exp() / 3.0 - c * c * (0.5 * u).exp();
        prop_assert!(double_well_growth(c, u) >= real_axis - 1e-12 * real_axis.abs());
    }

    #[test]
    fn curves_increase(c in 0.0f64..4.0, u in -4.0f64..6.0, du in 1e-3f64..1.0) {
        prop_assert!(double_well_growth(c, u + du) > double_well_growth(c, u));
        prop_assert!(anharmonic_parametric(c, u + du).0 > anharmonic_parametric(c, u).0);
        prop_assert!(double_well_parametric(c, u + du).0 > double_well_parametric(c, u).0);
    }
}
