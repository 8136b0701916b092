//! Term count and working precision for summing `Σ a_m x^(m+ν)` to `P` digits.

use std::f64::consts::LN_10;

use dashu_ratio::RBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{evaluate, EvaluationResult};
use crate::legendre::{coefficient_curve_with, estimate_at, CoefficientCurve, CurveOptions};
use crate::ode::{to_f64, Branch, OdeSpec};
use crate::oracles::OracleKind;
use crate::precision::PrecisionContext;
use crate::wkb::{growth_profile_with, PhaseScanConfig};

pub const DEFAULT_GUARD_DIGITS: usize = 10;

/// A forecast of `ln|a_m|` over some range of `m`.
pub trait CoefficientModel {
    fn log_abs(&self, m: f64) -> Result<f64>;
    /// Exponent `ν` of the series.
    fn nu(&self) -> f64;
    /// Range of `m` the forecast covers.
    fn domain(&self) -> (f64, f64);
}

pub struct CurveModel<'a> {
    pub curve: &'a CoefficientCurve,
    pub nu: f64,
}

impl CoefficientModel for CurveModel<'_> {
    fn log_abs(&self, m: f64) -> Result<f64> {
        estimate_at(self.curve, m)
    }

    fn nu(&self) -> f64 {
        self.nu
    }

    fn domain(&self) -> (f64, f64) {
        self.curve.m_range()
    }
}

pub struct OracleModel {
    pub kind: OracleKind,
    pub nu: f64,
}

impl CoefficientModel for OracleModel {
    fn log_abs(&self, m: f64) -> Result<f64> {
        self.kind.log_abs(m)
    }

    fn nu(&self) -> f64 {
        self.nu
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plan {
    pub x: f64,
    #[serde(rename = "P")]
    pub target_p: u32,
    #[serde(rename = "M")]
    pub predicted_terms: u64,
    #[serde(rename = "peak_log10")]
    pub peak_term_log10: f64,
    pub working_digits: usize,
    #[serde(skip)]
    pub peak_index: f64,
    #[serde(skip)]
    pub guard_digits: usize,
}

impl Plan {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serializes")
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::new(self.working_digits.max(crate::precision::MIN_DECIMAL_DIGITS)).expect("digits above minimum")
    }
}

pub fn plan(model: &dyn CoefficientModel, x: f64, target_p: u32) -> Result<Plan> {
    plan_with_guard(model, x, target_p, DEFAULT_GUARD_DIGITS)
}

pub fn plan_with_guard(model: &dyn CoefficientModel, x: f64, target_p: u32, guard_digits: usize) -> Result<Plan> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonpositiveArgument);
    }
    if target_p == 0 {
        return Err(Error::InvalidConfig("target precision must be at least 1".into()));
    }
    let ln_x = x.ln();
    let nu = model.nu();
    let (lo, hi) = model.domain();
    let term = |m: f64| -> Result<f64> { Ok(model.log_abs(m)? + (m + nu) * ln_x) };
    let exceeded = |needed: f64| Error::EstimateRangeExceeded { covered: hi, needed };

    // ln of the peak term over m >= 1; a_0 = 1 competes separately
    let start = lo.max(1.0);
    if start >= hi {
        return Err(exceeded(start));
    }
    let mut a = start;
    let mut b = (2.0 * a).max(1.0).min(hi);
    let mut tb = term(b)?;
    let mut ta = term(a)?;
    while tb > ta {
        if b >= hi {
            return Err(exceeded(2.0 * b));
        }
        a = b;
        ta = tb;
        b = (2.0 * b).min(hi);
        tb = term(b)?;
    }
    let bracket_lo = if a > start { a / 2.0 } else { start };
    let (peak_m, peak_t) = golden_max(&term, bracket_lo.max(start), b)?;
    let (peak_m, peak_t) = if nu * ln_x >= peak_t { (0.0, nu * ln_x) } else { (peak_m, peak_t) };

    // first index past the peak whose term drops below 10^-P
    let threshold = -(target_p as f64) * LN_10;
    let from = peak_m.max(start);
    let predicted = if term(from)? <= threshold {
        peak_m.floor() as u64 + 1
    } else {
        let mut left = from;
        let mut right = (2.0 * from).max(1.0).min(hi);
        while term(right)? > threshold {
            if right >= hi {
                return Err(exceeded(2.0 * right));
            }
            left = right;
            right = (2.0 * right).min(hi);
        }
        while right - left > 1e-9 * right.max(1.0) {
            let mid = 0.5 * (left + right);
            if term(mid)? > threshold {
                left = mid;
            } else {
                right = mid;
            }
        }
        (right.ceil() as u64).max(peak_m.floor() as u64 + 1)
    };
    let peak_log10 = peak_t / LN_10 + 0.0; // no -0 in the JSON
    Ok(Plan {
        x,
        target_p,
        predicted_terms: predicted.max(1),
        peak_term_log10: peak_log10,
        working_digits: target_p as usize + peak_log10.ceil().max(0.0) as usize + guard_digits,
        peak_index: peak_m,
        guard_digits,
    })
}

fn golden_max(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-10 * b.max(1.0) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let (fa, fb) = (f(a)?, f(b)?);
    let best = [(a, fa), (c, fc), (d, fd), (b, fb)].into_iter().fold((a, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
    Ok(best)
}

/// Settings for planning from the numeric WKB pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPlanOptions {
    pub scan: PhaseScanConfig,
    pub curve: CurveOptions,
    pub include_prefactor: bool,
    /// Grid points per unit of `u`.
    pub density: f64,
    pub guard_digits: usize,
}

impl Default for NumericPlanOptions {
    fn default() -> Self {
        NumericPlanOptions {
            scan: PhaseScanConfig { coarse_samples: 64, ..Default::default() },
            curve: CurveOptions::default(),
            include_prefactor: true,
            density: 24.0,
            guard_digits: DEFAULT_GUARD_DIGITS,
        }
    }
}

/// WKB coefficient curve about the saddle of the peak term (`u = ln x`), widened
/// to larger `u` until it reaches the stopping index.
pub fn plan_numeric(spec: &OdeSpec, branch: Branch, x: f64, target_p: u32, opts: &NumericPlanOptions) -> Result<(Plan, CoefficientCurve)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonpositiveArgument);
    }
    let nu = to_f64(branch.exponent(spec));
    let center = x.ln();
    let mut u_lo = center - 1.5;
    let mut u_hi = center + 1.5;
    let mut last = None;
    for _ in 0..24 {
        let samples = (((u_hi - u_lo) * opts.density).ceil() as usize).max(16);
        let profile = growth_profile_with(spec, branch, u_lo, u_hi, samples, &opts.scan, opts.include_prefactor)?;
        let curve = match coefficient_curve_with(&profile, nu, &opts.curve) {
            Ok(c) => c,
            // small-u trouble (phase switches, tiny S'') sits below the peak or, for
            // small x, below m = 1 where the a_0 candidate takes over
            Err(e @ Error::NonconvexProfile { .. }) => {
                let Error::NonconvexProfile { u, .. } = e else { unreachable!() };
                u_lo = u + 0.15;
                u_hi = u_hi.max(u_lo + 3.0);
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        match plan_with_guard(&CurveModel { curve: &curve, nu }, x, target_p, opts.guard_digits) {
            Ok(p) => return Ok((p, curve)),
            Err(e @ Error::EstimateRangeExceeded { .. }) => {
                last = Some(e);
                u_hi += 1.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Rough saddle location for index `m` from the leading potential term alone:
/// `S' ≈ sqrt|v_N| e^(hu) / s` with `h = (N+1)/2`.
pub fn saddle_guess(spec: &OdeSpec, m: f64) -> f64 {
    let v = spec.potential_f64();
    let n = v.iter().rposition(|c| *c != 0.0).unwrap_or(0);
    let h = (n as f64 + 1.0) / 2.0;
    let lead = v[n].abs().max(f64::MIN_POSITIVE).sqrt();
    (m.max(1e-3) * spec.scale_f64() / lead).ln() / h
}

/// Numeric coefficient curve whose `m` range contains `[m_lo, m_hi]`. The `u`
/// window starts around [`saddle_guess`] and grows by one unit on whichever side falls short.
pub fn curve_covering(spec: &OdeSpec, branch: Branch, m_lo: f64, m_hi: f64, opts: &NumericPlanOptions) -> Result<CoefficientCurve> {
    let nu = to_f64(branch.exponent(spec));
    let (mut u_lo, mut u_hi) = (saddle_guess(spec, m_lo) - 0.5, saddle_guess(spec, m_hi) + 0.5);
    let mut covered = (f64::NAN, f64::NAN);
    for _ in 0..32 {
        let samples = (((u_hi - u_lo) * opts.density).ceil() as usize).max(16);
        let profile = growth_profile_with(spec, branch, u_lo, u_hi, samples, &opts.scan, opts.include_prefactor)?;
        let curve = coefficient_curve_with(&profile, nu, &opts.curve)?;
        covered = curve.m_range();
        if covered.0 <= m_lo && covered.1 >= m_hi {
            return Ok(curve);
        }
        if covered.0 > m_lo {
            u_lo -= 1.0;
        }
        if covered.1 < m_hi {
            u_hi += 1.0;
        }
    }
    Err(Error::EstimateRangeExceeded { covered: if covered.0 > m_lo { covered.0 } else { covered.1 }, needed: if covered.0 > m_lo { m_lo } else { m_hi } })
}

#[derive(Debug, Clone)]
pub struct PlanComparison {
    pub plan: Plan,
    pub actual: EvaluationResult,
}

impl PlanComparison {
    /// `|predicted M - actual M| / actual M`.
    pub fn relative_gap(&self) -> f64 {
        let a = self.actual.terms_used as f64;
        (self.plan.predicted_terms as f64 - a).abs() / a
    }

    pub fn peak_gap_log10(&self) -> f64 {
        self.actual.peak_term_log10 - self.plan.peak_term_log10
    }
}

/// Plans with the numeric pipeline, then sums the series at the planned precision.
pub fn compare_plan_to_actual(spec: &OdeSpec, branch: Branch, x: &RBig, target_p: u32) -> Result<PlanComparison> {
    let (plan, _) = plan_numeric(spec, branch, to_f64(x), target_p, &NumericPlanOptions::default())?;
    let actual = evaluate(spec, branch, x, target_p, &plan.context())?;
    Ok(PlanComparison { plan, actual })
}

pub fn compare_model_to_actual(model: &dyn CoefficientModel, spec: &OdeSpec, branch: Branch, x: &RBig, target_p: u32) -> Result<PlanComparison> {
    let plan = plan(model, to_f64(x), target_p)?;
    let actual = evaluate(spec, branch, x, target_p, &plan.context())?;
    Ok(PlanComparison { plan, actual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred0() -> OracleModel {
        OracleModel { kind: OracleKind::AnharmonicPred0, nu: 0.0 }
    }

    #[test]
    fn pred0_plan_at_x100() {
        let p = plan(&pred0(), 100.0, 100).unwrap();
        // independent root of (2/3)M(1 - ln 2M) + M ln 100 + 100 ln 10 = 0
        let f = |m: f64| 2.0 / 3.0 * m * (1.0 - (2.0 * m).ln()) + m * 100f64.ln() + 100.0 * LN_10;
        let (mut a, mut b) = (500.0, 5000.0);
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            if f(mid) > 0.0 {
                a = mid
            } else {
                b = mid
            }
        }
        assert_eq!(p.predicted_terms, b.ceil() as u64);
        assert!((p.predicted_terms as f64 - 1700.0).abs() < 0.1 * 1700.0);
        assert!((p.peak_term_log10 - 1000.0 / 3.0 / LN_10).abs() < 1e-6);
        assert!((p.peak_index - 500.0).abs() < 1e-3);
        assert_eq!(p.working_digits, 100 + 145 + 10);
    }

    #[test]
    fn small_x_has_peak_at_origin() {
        let p = plan(&pred0(), 0.5, 10).unwrap();
        assert_eq!(p.peak_index, 0.0);
        assert_eq!(p.working_digits, 10 + DEFAULT_GUARD_DIGITS);
        assert!(p.predicted_terms >= 1 && p.predicted_terms < 20);
    }

    #[test]
    fn argument_checks() {
        assert_eq!(plan(&pred0(), 0.0, 10).unwrap_err(), Error::NonpositiveArgument);
        assert!(plan(&pred0(), 2.0, 0).is_err());
    }

    #[test]
    fn json_keys() {
        let p = plan(&pred0(), 10.0, 50).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(keys, ["M", "P", "peak_log10", "working_digits", "x"]);
    }

    #[test]
    fn limited_curve_reports_range() {
        use crate::wkb::GrowthProfile;
        let profile = GrowthProfile::from_fn(1.0, 3.0, 24, Branch::NuMinus, |u| (1.5 * u).exp() / 3.0).unwrap();
        let curve = coefficient_curve_with(&profile, 0.0, &CurveOptions { log_correction: false }).unwrap();
        let err = plan(&CurveModel { curve: &curve, nu: 0.0 }, 100.0, 100).unwrap_err();
        assert!(matches!(err, Error::EstimateRangeExceeded { .. }), "{err:?}");
    }
}
