//! Closed-form growth functions and coefficient forecasts for the quartic
//! anharmonic oscillator `(y^2 + c^2)^2` and the double well `(y^2 - c^2)^2`,
//! written in `x = y^2 = e^u`. Logarithms are natural.

use crate::error::{Error, Result};

/// `(m, ln|a_m|)` at parameter `u`, log correction ignored.
pub fn anharmonic_parametric(c: f64, u: f64) -> (f64, f64) {
    let c2 = c * c;
    let (e1, e3) = ((0.5 * u).exp(), (1.5 * u).exp());
    let m = 0.5 * (e3 + c2 * e1);
    let log_a = (1.0 / 3.0 - 0.5 * u) * e3 + c2 * (1.0 - 0.5 * u) * e1;
    (m, log_a)
}

/// Leading growth `S(u) = (1/3)(e^{3u/2} + 3 c^2 e^{u/2})`.
pub fn anharmonic_growth(c: f64, u: f64) -> f64 {
    ((1.5 * u).exp() + 3.0 * c * c * (0.5 * u).exp()) / 3.0
}

/// `ln|a_m| ≈ (2/3) m (1 - ln 2m)`, the `c = 0` case of [`anharmonic_parametric`].
pub fn anharmonic_pred0(m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::NonpositiveIndex(m));
    }
    Ok(2.0 / 3.0 * m * (1.0 - (2.0 * m).ln()))
}

/// `c = 0` with prefactor and Gaussian-width corrections:
/// `(1/3)(2m + 5/2)(1 - ln(2m + 5/2))`, additive constant dropped.
pub fn anharmonic_pred1(m: f64) -> f64 {
    let w = 2.0 * m + 2.5;
    w / 3.0 * (1.0 - w.ln())
}

/// Corrected parametric form for any `c`: `S0 = S - ½ ln(e^u + c²) - ½ ln S''`
/// with the leading `S`, transformed exactly. Returns `(m, ln|a_m|)`. For `c = 0` this
/// is `anharmonic_pred1` shifted by `-½ ln(3/4)`.
pub fn anharmonic_corrected(c: f64, u: f64) -> (f64, f64) {
    let c2 = c * c;
    let (e1, e2, e3) = ((0.5 * u).exp(), u.exp(), (1.5 * u).exp());
    let width = 0.75 * e3 + 0.25 * c2 * e1;
    let s0 = e3 / 3.0 + c2 * e1 - 0.5 * (e2 + c2).ln() - 0.5 * width.ln();
    let ds0 = 0.5 * e3 + 0.5 * c2 * e1 - 0.5 * e2 / (e2 + c2) - 0.5 * (1.125 * e3 + 0.125 * c2 * e1) / width;
    (ds0, s0 - u * ds0)
}

/// Max-modulus growth of the double well, split at `e^u = c²/3`.
pub fn double_well_growth(c: f64, u: f64) -> f64 {
    let c2 = c * c;
    let x = u.exp();
    if x <= c2 / 3.0 {
        c2 * x.sqrt() - x.powf(1.5) / 3.0
    } else {
        (x + c2).powf(1.5) / 3.0
    }
}

/// `(m̄, ln|a_m̄|)` for the double well, same split as [`double_well_growth`].
pub fn double_well_parametric(c: f64, u: f64) -> (f64, f64) {
    let c2 = c * c;
    let x = u.exp();
    if x <= c2 / 3.0 {
        let r = x.sqrt();
        (0.5 * r * (c2 - x), (1.0 - 0.5 * u) * c2 * r - (1.0 / 3.0 - 0.5 * u) * x * r)
    } else {
        let root = (x + c2).sqrt();
        (0.5 * x * root, ((1.0 / 3.0 - 0.5 * u) * x + c2 / 3.0) * root)
    }
}

/// `u` at the double-well phase switch, `ln(c²/3)`.
pub fn double_well_boundary(c: f64) -> f64 {
    (c * c / 3.0).ln()
}

/// Maximizing phase in `x`: `cos(φ/2) = -½ sqrt(1 + c² e^{-u})` above the boundary,
/// `cos(φ/2) = -1` (that is `φ = 2π`) below it.
pub fn double_well_phase(c: f64, u: f64) -> f64 {
    let x = u.exp();
    if x <= c * c / 3.0 {
        std::f64::consts::TAU
    } else {
        2.0 * (-0.5 * (1.0 + c * c / x).sqrt()).acos()
    }
}

/// Closed-form forecasts usable by the planner and the compare command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleKind {
    AnharmonicParametric { c: f64 },
    AnharmonicPred0,
    AnharmonicPred1,
    AnharmonicCorrected { c: f64 },
    DoubleWellParametric { c: f64 },
    DoubleWellGrowth { c: f64 },
}

const U_LO: f64 = -80.0;
const U_HI: f64 = 40.0;

impl OracleKind {
    /// Forecast of `ln|a_m|`; parametric forms are inverted for `u` by bisection.
    pub fn log_abs(&self, m: f64) -> Result<f64> {
        if !(m > 0.0) {
            return Err(Error::NonpositiveIndex(m));
        }
        let param = |f: &dyn Fn(f64) -> (f64, f64)| -> Result<f64> {
            let (mut lo, mut hi) = (U_LO, U_HI);
            if f(lo).0 > m || f(hi).0 < m {
                return Err(Error::OutOfRange { m, lo: f(lo).0, hi: f(hi).0 });
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid).0 < m {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * (1.0 + mid.abs()) {
                    break;
                }
            }
            Ok(f(0.5 * (lo + hi)).1)
        };
        match *self {
            OracleKind::AnharmonicPred0 => anharmonic_pred0(m),
            OracleKind::AnharmonicPred1 => Ok(anharmonic_pred1(m)),
            OracleKind::AnharmonicParametric { c } => param(&|u| anharmonic_parametric(c, u)),
            OracleKind::AnharmonicCorrected { c } => param(&|u| anharmonic_corrected(c, u)),
            OracleKind::DoubleWellParametric { c } | OracleKind::DoubleWellGrowth { c } => {
                param(&|u| double_well_parametric(c, u))
            }
        }
    }

    /// Growth function `S(u)` where the oracle has one.
    pub fn growth(&self, u: f64) -> Option<f64> {
        match *self {
            OracleKind::AnharmonicParametric { c } => Some(anharmonic_growth(c, u)),
            OracleKind::AnharmonicPred0 => Some(anharmonic_growth(0.0, u)),
            OracleKind::DoubleWellGrowth { c } | OracleKind::DoubleWellParametric { c } => Some(double_well_growth(c, u)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn anharmonic_examples() {
        assert_eq!(anharmonic_parametric(0.0, 0.0), (0.5, 1.0 / 3.0));
        let (m, l) = anharmonic_parametric(1.0, 2.0 * 2f64.ln());
        assert!(close(m, 5.0, 1e-12));
        let want = (1.0 / 3.0 - 2f64.ln()) * 8.0 + (1.0 - 2f64.ln()) * 2.0;
        assert!(close(l, want, 1e-12) && close(l, -2.265, 1e-3), "{l}");
    }

    #[test]
    fn pred0_values() {
        assert!(close(anharmonic_pred0(0.5).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(anharmonic_pred0(30.0).unwrap(), -61.887, 1e-3));
        assert!(close(anharmonic_pred0(3.0).unwrap(), -1.584, 1e-3));
        assert_eq!(anharmonic_pred0(0.0), Err(Error::NonpositiveIndex(0.0)));
    }

    #[test]
    fn pred1_values() {
        assert!(close(anharmonic_pred1(30.0), -65.31, 1e-2));
        let m = (std::f64::consts::E - 2.5) / 2.0;
        assert!(close(anharmonic_pred1(m), 0.0, 1e-15));
    }

    #[test]
    fn corrected_form_reduces_to_pred1() {
        for m in [1.0, 30.0, 500.0] {
            let l = OracleKind::AnharmonicCorrected { c: 0.0 }.log_abs(m).unwrap();
            assert!(close(l, anharmonic_pred1(m) - 0.5 * 0.75f64.ln(), 1e-9 * (1.0 + l.abs())), "m={m}");
        }
    }

    #[test]
    fn double_well_examples() {
        let b = double_well_boundary(2.0);
        let edge = 64.0 / (9.0 * 3f64.sqrt());
        assert!(close(double_well_growth(2.0, b), edge, 1e-12));
        assert!(close(double_well_growth(2.0, 16f64.ln()), 20f64.powf(1.5) / 3.0, 1e-12));
        assert!(close(double_well_parametric(2.0, b).0, 8.0 / (3.0 * 3f64.sqrt()), 1e-12));
        assert!(close(double_well_parametric(2.0, 16f64.ln()).0, 8.0 * 20f64.sqrt(), 1e-12));
        for u in [-3.0, 0.0, 2.5] {
            assert!(close(double_well_growth(0.0, u), (1.5 * u).exp() / 3.0, 1e-12));
            let (a, b) = (double_well_parametric(0.0, u), anharmonic_parametric(0.0, u));
            assert!(close(a.0, b.0, 1e-12) && close(a.1, b.1, 1e-12));
        }
    }

    #[test]
    fn boundary_phase() {
        assert_eq!(double_well_phase(2.0, 0.0), std::f64::consts::TAU);
        // at the boundary both formulas agree: cos(φ/2) = -1
        let b = double_well_boundary(2.0);
        assert!(close(double_well_phase(2.0, b + 1e-12), std::f64::consts::TAU, 1e-5));
    }

    #[test]
    fn inversion_round_trips() {
        for kind in [OracleKind::AnharmonicParametric { c: 1.5 }, OracleKind::DoubleWellParametric { c: 2.0 }] {
            for u in [-2.0, 0.1, 0.3, 3.0] {
                let (m, l) = match kind {
                    OracleKind::AnharmonicParametric { c } => anharmonic_parametric(c, u),
                    _ => double_well_parametric(2.0, u),
                };
                assert!(close(kind.log_abs(m).unwrap(), l, 1e-9 * (1.0 + l.abs())), "{kind:?} u={u}");
            }
        }
        let p0 = OracleKind::AnharmonicParametric { c: 0.0 }.log_abs(30.0).unwrap();
        assert!(close(p0, anharmonic_pred0(30.0).unwrap(), 1e-9));
    }
}
