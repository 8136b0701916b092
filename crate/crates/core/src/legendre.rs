//! From a growth function `S(u)` to coefficient magnitudes.
//!
//! Saddle point of `sum |a_m| e^{(m+nu)u}`: with `S0 = S - ½ ln(2π S'') + ln g`
//! (`g` the spacing of the index lattice carrying nonzero coefficients),
//! `m + nu = S0'(u)`, `ln|a_m| = S0 - u S0'`, and `s''(m) = -1/S0''(u)`.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::numeric::{CubicSpline, Pchip};
use crate::ode::Branch;
use crate::wkb::{GrowthProfile, ProfileSource};

/// Points a spline stage discards at each end.
pub const BOUNDARY_DROP: usize = 2;
pub const MIN_PROFILE_POINTS: usize = 8;

/// `S` with its first two derivatives on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentiatedProfile {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub branch: Branch,
    pub lattice: f64,
    pub source: ProfileSource,
}

/// Cubic spline derivatives at the interior knots.
pub fn differentiate_profile(profile: &GrowthProfile) -> Result<DifferentiatedProfile> {
    let (u, s1, s2, s) = spline_derivatives(profile.u_grid(), profile.s_values())?;
    Ok(DifferentiatedProfile {
        u,
        s,
        s1,
        s2,
        branch: profile.branch(),
        lattice: profile.lattice(),
        source: profile.source(),
    })
}

type Columns = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

fn spline_derivatives(x: &[f64], y: &[f64]) -> Result<Columns> {
    if x.len() < MIN_PROFILE_POINTS {
        return Err(Error::ProfileTooSmall(x.len()));
    }
    let spline = CubicSpline::new(x, y);
    let keep = BOUNDARY_DROP..x.len() - BOUNDARY_DROP;
    let mut out: Columns = Default::default();
    for i in keep {
        let (_, d1, d2) = spline.eval(x[i]);
        out.0.push(x[i]);
        out.1.push(d1);
        out.2.push(d2);
        out.3.push(y[i]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveOptions {
    /// Replace `S` by `S - ½ ln(2π S'') + ln g` before transforming.
    pub log_correction: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { log_correction: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub u: f64,
    pub m_bar: f64,
    pub log_abs_a: f64,
    pub s_second: f64,
}

/// Parametric estimate `(m̄(u), ln|a_m̄|(u))`, monotone in `m̄`.
#[derive(Debug, Clone)]
pub struct CoefficientCurve {
    points: Vec<CurvePoint>,
    branch: Branch,
    source: ProfileSource,
    interp: Pchip,
}

impl CoefficientCurve {
    pub fn from_points(points: Vec<CurvePoint>, branch: Branch, source: ProfileSource) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::ProfileTooSmall(points.len()));
        }
        for w in points.windows(2) {
            if !(w[1].m_bar > w[0].m_bar) {
                return Err(Error::NonconvexProfile { u: w[1].u, second: f64::NAN });
            }
        }
        if let Some(p) = points.iter().find(|p| !(p.s_second < 0.0)) {
            return Err(Error::NonconvexProfile { u: p.u, second: -1.0 / p.s_second });
        }
        let m: Vec<f64> = points.iter().map(|p| p.m_bar).collect();
        let l: Vec<f64> = points.iter().map(|p| p.log_abs_a).collect();
        let interp = Pchip::new(&m, &l);
        Ok(CoefficientCurve { points, branch, source, interp })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }

    /// Covered index interval `[min m̄, max m̄]`.
    pub fn m_range(&self) -> (f64, f64) {
        (self.points[0].m_bar, self.points[self.points.len() - 1].m_bar)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "u,m_bar,log_abs_a,s_second")?;
        for p in &self.points {
            writeln!(out, "{},{},{},{}", p.u, p.m_bar, p.log_abs_a, p.s_second)?;
        }
        Ok(())
    }
}

pub fn coefficient_curve(profile: &GrowthProfile, nu: f64) -> Result<CoefficientCurve> {
    coefficient_curve_with(profile, nu, &CurveOptions::default())
}

pub fn coefficient_curve_with(profile: &GrowthProfile, nu: f64, opts: &CurveOptions) -> Result<CoefficientCurve> {
    curve_from_derivatives(&differentiate_profile(profile)?, nu, opts)
}

/// Same as [`coefficient_curve_with`] for a profile whose derivatives are already
/// known. Without the log correction no further splining happens, so analytic
/// derivatives pass through exactly.
pub fn curve_from_derivatives(d: &DifferentiatedProfile, nu: f64, opts: &CurveOptions) -> Result<CoefficientCurve> {
    for i in 0..d.u.len() {
        if !(d.s2[i] > 0.0) {
            return Err(Error::NonconvexProfile { u: d.u[i], second: d.s2[i] });
        }
    }
    let (u, s0, s0_1, s0_2) = if opts.log_correction {
        let lattice = d.lattice.ln();
        let s0: Vec<f64> = (0..d.u.len())
            .map(|i| d.s[i] - 0.5 * (std::f64::consts::TAU * d.s2[i]).ln() + lattice)
            .collect();
        let (u, d1, d2, s0) = spline_derivatives(&d.u, &s0)?;
        (u, s0, d1, d2)
    } else {
        (d.u.clone(), d.s.clone(), d.s1.clone(), d.s2.clone())
    };
    let mut points = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        if !(s0_2[i] > 0.0) {
            return Err(Error::NonconvexProfile { u: u[i], second: s0_2[i] });
        }
        points.push(CurvePoint {
            u: u[i],
            m_bar: s0_1[i] - nu,
            log_abs_a: s0[i] - u[i] * s0_1[i],
            s_second: -1.0 / s0_2[i],
        });
    }
    CoefficientCurve::from_points(points, d.branch, d.source)
}

/// Monotone cubic interpolation of `ln|a|` against `m̄`.
pub fn estimate_at(curve: &CoefficientCurve, m: f64) -> Result<f64> {
    let (lo, hi) = curve.m_range();
    if !(m >= lo && m <= hi) {
        return Err(Error::OutOfRange { m, lo, hi });
    }
    Ok(curve.interp.eval(m))
}

/// Inverse transform: `u = -s'(m)` and `S0 = s + u (m + nu)` from the curve's
/// `(m̄, ln|a|)` data, at interior points.
pub fn recover_growth(curve: &CoefficientCurve, nu: f64) -> Result<Vec<(f64, f64)>> {
    let m: Vec<f64> = curve.points.iter().map(|p| p.m_bar).collect();
    let l: Vec<f64> = curve.points.iter().map(|p| p.log_abs_a).collect();
    let (m, d1, _, l) = spline_derivatives(&m, &l)?;
    Ok((0..m.len())
        .map(|i| {
            let u = -d1[i];
            (u, l[i] + u * (m[i] + nu))
        })
        .collect())
}

/// `du/dm̄` at interior curve points; equals `-s''(m̄)` for a consistent curve.
pub fn u_slope(curve: &CoefficientCurve) -> Result<Vec<(f64, f64)>> {
    let m: Vec<f64> = curve.points.iter().map(|p| p.m_bar).collect();
    let u: Vec<f64> = curve.points.iter().map(|p| p.u).collect();
    let (m, d1, _, _) = spline_derivatives(&m, &u)?;
    Ok(m.into_iter().zip(d1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anharmonic_c0(u0: f64, u1: f64, n: usize) -> GrowthProfile {
        GrowthProfile::from_fn(u0, u1, n, Branch::NuMinus, |u| (1.5 * u).exp() / 3.0).unwrap()
    }

    #[test]
    fn spline_derivatives_of_the_quartic_growth() {
        let d = differentiate_profile(&anharmonic_c0(1.0, 6.0, 64)).unwrap();
        assert_eq!(d.u.len(), 60);
        for i in 0..d.u.len() {
            let want = 0.5 * (1.5 * d.u[i]).exp();
            assert!((d.s1[i] - want).abs() < 1e-4 * want, "u={}", d.u[i]);
        }
    }

    #[test]
    fn exponential_profile() {
        let p = GrowthProfile::from_fn(0.0, 3.0, 80, Branch::NuPlus, f64::exp).unwrap();
        let d = differentiate_profile(&p).unwrap();
        for i in 3..d.u.len() - 3 {
            let e = d.u[i].exp();
            assert!((d.s1[i] - e).abs() < 1e-4 * e);
            assert!((d.s2[i] - e).abs() < 1e-2 * e);
        }
    }

    #[test]
    fn affine_profile_is_rejected() {
        let p = GrowthProfile::from_fn(0.0, 1.0, 16, Branch::NuPlus, |u| u).unwrap();
        assert!(matches!(coefficient_curve(&p, 0.0), Err(Error::NonconvexProfile { .. })));
        let small = GrowthProfile::from_fn(0.0, 1.0, 8, Branch::NuPlus, |u| u * u).unwrap();
        let short = GrowthProfile::new(small.u_grid()[..7].to_vec(), small.s_values()[..7].to_vec(), Branch::NuPlus, false).unwrap();
        assert_eq!(differentiate_profile(&short).unwrap_err(), Error::ProfileTooSmall(7));
    }

    #[test]
    fn analytic_derivatives_pass_through() {
        let u: Vec<f64> = (0..20).map(|i| 1.0 + 0.2 * i as f64).collect();
        let e: Vec<f64> = u.iter().map(|x| (1.5 * x).exp()).collect();
        let d = DifferentiatedProfile {
            u: u.clone(),
            s: e.iter().map(|x| x / 3.0).collect(),
            s1: e.iter().map(|x| x / 2.0).collect(),
            s2: e.iter().map(|x| 0.75 * x).collect(),
            branch: Branch::NuMinus,
            lattice: 1.0,
            source: ProfileSource::ClosedForm,
        };
        let curve = curve_from_derivatives(&d, 0.0, &CurveOptions { log_correction: false }).unwrap();
        for (p, (x, ex)) in curve.points().iter().zip(u.iter().zip(&e)) {
            assert_eq!(p.m_bar, 0.5 * ex);
            assert!((p.log_abs_a - (1.0 / 3.0 - x / 2.0) * ex).abs() <= 1e-14 * ex);
        }
    }

    #[test]
    fn estimate_interpolates_and_checks_range() {
        let curve = coefficient_curve_with(&anharmonic_c0(1.0, 6.0, 64), 0.0, &CurveOptions { log_correction: false }).unwrap();
        let knot = curve.points()[10];
        assert!((estimate_at(&curve, knot.m_bar).unwrap() - knot.log_abs_a).abs() < 1e-12);
        let (lo, hi) = curve.m_range();
        assert!(matches!(estimate_at(&curve, lo - 1.0), Err(Error::OutOfRange { .. })));
        assert!(estimate_at(&curve, hi).is_ok());
        // m = 30 on the closed form: 20 (1 - ln 60)
        let got = estimate_at(&curve, 30.0).unwrap();
        assert!((got - 20.0 * (1.0 - 60f64.ln())).abs() < 1e-3, "{got}");
    }

    #[test]
    fn involution_and_slope_consistency() {
        let curve = coefficient_curve_with(&anharmonic_c0(1.0, 6.0, 96), 0.0, &CurveOptions { log_correction: false }).unwrap();
        for (u, s0) in recover_growth(&curve, 0.0).unwrap() {
            let want = (1.5 * u).exp() / 3.0;
            assert!((s0 - want).abs() < 1e-3 * want, "u={u}: {s0} vs {want}");
        }
        let by_m: Vec<(f64, f64)> = curve.points().iter().map(|p| (p.m_bar, p.s_second)).collect();
        for (m, slope) in u_slope(&curve).unwrap() {
            let s2 = by_m.iter().find(|(mm, _)| *mm == m).unwrap().1;
            assert!((slope + s2).abs() < 1e-3 * s2.abs(), "m={m}");
        }
    }

    #[test]
    fn csv_header() {
        let curve = coefficient_curve(&anharmonic_c0(1.0, 4.0, 20), 0.0).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("u,m_bar,log_abs_a,s_second\n"));
        assert_eq!(text.lines().count(), 1 + curve.points().len());
    }
}
