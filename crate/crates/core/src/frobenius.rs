//! Frobenius coefficients by recurrence, and brute-force summation of the series.
//!
//! With `a_0 = 1` the coefficients on the branch with exponent `nu` obey
//! `a_m (m + nu - nu_plus)(m + nu - nu_minus) = sum_{n <= min(N, m-1)} v_n a_{m-1-n}`.

use std::collections::VecDeque;
use std::f64::consts::LN_10;
use std::io::{self, Write};

use dashu_int::IBig;
use dashu_ratio::RBig;

use crate::error::{Error, Result};
use crate::ode::{Branch, OdeSpec};
use crate::precision::{Decimal, PrecisionContext, SeriesScalar};

pub const DEFAULT_TERM_CAP: u64 = 10_000_000;

struct Recurrence {
    potential: Vec<RBig>,
    shift_plus: RBig,
    shift_minus: RBig,
    // index whose coefficient is free (denominator and numerator both vanish); set to zero
    free_index: Option<u64>,
}

impl Recurrence {
    fn new(spec: &OdeSpec, branch: Branch, m_limit: u64) -> Result<Self> {
        let nu = branch.exponent(spec);
        let mut rec = Recurrence {
            potential: spec.potential().to_vec(),
            shift_plus: nu - spec.nu_plus(),
            shift_minus: nu - spec.nu_minus(),
            free_index: None,
        };
        if branch == Branch::NuMinus {
            let gap = spec.nu_plus() - spec.nu_minus();
            if gap > RBig::ZERO && *gap.denominator() == dashu_int::UBig::ONE {
                let m = u64::try_from(gap.numerator()).map_err(|_| Error::ResonantIndicialRoots { m: u64::MAX })?;
                if m <= m_limit {
                    rec.check_resonance(m)?;
                }
            }
        }
        Ok(rec)
    }

    // Decide in exact arithmetic whether the series survives the vanishing denominator at m.
    fn check_resonance(&mut self, m: u64) -> Result<()> {
        let mut a: Vec<RBig> = vec![RBig::ONE];
        for k in 1..m {
            let num = self.numerator(&a, k, 0);
            a.push(num.div_rational(&self.denominator(k), 0));
        }
        if self.numerator(&a, m, 0) != RBig::ZERO {
            return Err(Error::ResonantIndicialRoots { m });
        }
        self.free_index = Some(m);
        Ok(())
    }

    fn denominator(&self, m: u64) -> RBig {
        let m = RBig::from(m);
        (&m + &self.shift_plus) * (&m + &self.shift_minus)
    }

    // `history[k]` holds a_k for all k < m (or the tail of it, see `numerator_ring`).
    fn numerator<T: SeriesScalar>(&self, history: &[T], m: u64, digits: usize) -> T {
        let mut acc = T::from_rational(&RBig::ZERO, digits);
        let top = (self.potential.len() as u64).min(m);
        for n in 0..top {
            let v = &self.potential[n as usize];
            if *v == RBig::ZERO {
                continue;
            }
            let a = &history[(m - 1 - n) as usize];
            acc = acc.add(&a.mul(&T::from_rational(v, digits)));
        }
        acc
    }
}

/// Coefficients `a_0..=a_{m_max}` on one branch, either exact (`RBig`) or rounded
/// (`Decimal`).
#[derive(Debug, Clone)]
pub struct CoefficientTable<T = Decimal> {
    spec: OdeSpec,
    branch: Branch,
    digits: Option<usize>,
    entries: Vec<T>,
}

impl<T: SeriesScalar> CoefficientTable<T> {
    /// Wraps arbitrary entries without checking them; see [`verify_residuals`].
    pub fn from_entries(spec: OdeSpec, branch: Branch, digits: Option<usize>, entries: Vec<T>) -> Self {
        CoefficientTable { spec, branch, digits, entries }
    }

    pub fn spec(&self) -> &OdeSpec {
        &self.spec
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Working precision, `None` for exact tables.
    pub fn digits(&self) -> Option<usize> {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn value(&self, m: usize) -> &T {
        &self.entries[m]
    }

    pub fn sign(&self, m: usize) -> i8 {
        self.entries[m].signum()
    }

    pub fn log_abs(&self, m: usize) -> f64 {
        self.entries[m].ln_abs()
    }

    pub fn log10_abs(&self, m: usize) -> f64 {
        self.entries[m].ln_abs() / LN_10
    }

    /// `m,sign,log10_abs` rows; zero coefficients print `-inf`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "m,sign,log10_abs")?;
        for m in 0..self.entries.len() {
            let l = self.log10_abs(m);
            if l == f64::NEG_INFINITY {
                writeln!(out, "{},{},-inf", m, self.sign(m))?;
            } else {
                writeln!(out, "{},{},{}", m, self.sign(m), l)?;
            }
        }
        Ok(())
    }
}

fn generate<T: SeriesScalar>(spec: &OdeSpec, branch: Branch, m_max: u64, digits: usize) -> Result<Vec<T>> {
    let rec = Recurrence::new(spec, branch, m_max)?;
    let mut a: Vec<T> = Vec::with_capacity(m_max as usize + 1);
    a.push(T::from_rational(&RBig::ONE, digits));
    for m in 1..=m_max {
        if rec.free_index == Some(m) {
            a.push(T::from_rational(&RBig::ZERO, digits));
            continue;
        }
        let num = rec.numerator(&a, m, digits);
        a.push(num.div_rational(&rec.denominator(m), digits));
    }
    Ok(a)
}

/// Coefficients in `ctx.decimal_digits()` digit arithmetic.
pub fn coefficients(spec: &OdeSpec, branch: Branch, m_max: u64, ctx: &PrecisionContext) -> Result<CoefficientTable> {
    let digits = ctx.decimal_digits();
    let entries = generate::<Decimal>(spec, branch, m_max, digits)?;
    Ok(CoefficientTable::from_entries(spec.clone(), branch, Some(digits), entries))
}

pub fn exact_coefficients(spec: &OdeSpec, branch: Branch, m_max: u64) -> Result<CoefficientTable<RBig>> {
    let entries = generate::<RBig>(spec, branch, m_max, 0)?;
    Ok(CoefficientTable::from_entries(spec.clone(), branch, None, entries))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_relative: f64,
    pub worst_index: Option<usize>,
    pub checked: usize,
}

impl ResidualReport {
    pub fn within(&self, tolerance: f64) -> bool {
        self.max_relative <= tolerance
    }
}

/// Acceptance threshold for a table computed with `digits` working digits.
pub fn residual_tolerance(digits: usize) -> f64 {
    10f64.powi(2 - digits as i32)
}

/// Recomputes every recurrence step exactly from the stored (possibly rounded)
/// entries. The residual at `m` is `|D_m a_m - sum v_n a_{m-1-n}|` relative to the
/// larger of `|D_m a_m|` and `sum |v_n a_{m-1-n}|`.
pub fn verify_residuals<T: SeriesScalar>(table: &CoefficientTable<T>) -> ResidualReport {
    let exact: Vec<RBig> = table.entries.iter().map(|e| e.to_rational()).collect();
    let mut report = ResidualReport { max_relative: 0.0, worst_index: None, checked: exact.len() };
    let mut note = |m: usize, r: f64| {
        if r > report.max_relative || (r.is_nan() && !report.max_relative.is_nan()) {
            report.max_relative = r;
            report.worst_index = Some(m);
        }
    };
    if let Some(a0) = exact.first() {
        note(0, (a0 - RBig::ONE).to_f64().value().abs());
    }
    let spec = &table.spec;
    let nu = table.branch.exponent(spec);
    let (sp, sm) = (nu - spec.nu_plus(), nu - spec.nu_minus());
    for m in 1..exact.len() {
        let mr = RBig::from(m as u64);
        let den = (&mr + &sp) * (&mr + &sm);
        let mut num = RBig::ZERO;
        let mut scale = RBig::ZERO;
        for (n, v) in spec.potential().iter().enumerate().take(m) {
            let t = v * &exact[m - 1 - n];
            scale += abs(&t);
            num += t;
        }
        let lhs = &den * &exact[m];
        let scale = if abs(&lhs) > scale { abs(&lhs) } else { scale };
        let r = if scale == RBig::ZERO {
            0.0
        } else {
            (abs(&(lhs - num)) / scale).to_f64().value()
        };
        note(m, r);
    }
    report
}

fn abs(r: &RBig) -> RBig {
    if r.numerator() < &IBig::ZERO {
        -r
    } else {
        r.clone()
    }
}

#[derive(Debug, Clone)]
pub struct EvaluationResult {
    pub value: Decimal,
    /// The stopping index M.
    pub terms_used: u64,
    pub peak_term_log10: f64,
    pub peak_index: u64,
    pub requested_precision: u32,
    pub working_digits: usize,
}

pub fn evaluate(
    spec: &OdeSpec,
    branch: Branch,
    x: &RBig,
    target_p: u32,
    ctx: &PrecisionContext,
) -> Result<EvaluationResult> {
    evaluate_with_cap(spec, branch, x, target_p, ctx, DEFAULT_TERM_CAP)
}

/// Sums `a_m x^(m+nu)` with coefficients streamed through a ring of the last N+1
/// values. Stops at the first M such that the terms M-N..=M all lie past the running
/// peak and are at most `10^-P` in modulus.
pub fn evaluate_with_cap(
    spec: &OdeSpec,
    branch: Branch,
    x: &RBig,
    target_p: u32,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<EvaluationResult> {
    if *x <= RBig::ZERO {
        return Err(Error::NonpositiveArgument);
    }
    let digits = ctx.decimal_digits();
    let rec = Recurrence::new(spec, branch, cap)?;
    let width = spec.potential().len();
    let nu = branch.exponent(spec);

    let xd = ctx.decimal(x);
    let ln_x = x_ln(x);
    let nu_f = crate::ode::to_f64(nu);
    let mut power = decimal_power(&xd, nu, digits);
    let threshold = -(target_p as f64) * LN_10;

    let mut ring: VecDeque<Decimal> = VecDeque::with_capacity(width + 1);
    let mut term_logs: VecDeque<f64> = VecDeque::with_capacity(width + 1);
    let mut sum = ctx.decimal(&RBig::ZERO);
    let mut peak = (0u64, f64::NEG_INFINITY);
    let vd: Vec<Decimal> = spec.potential().iter().map(|v| ctx.decimal(v)).collect();

    for m in 0..=cap {
        let a = if m == 0 {
            ctx.decimal(&RBig::ONE)
        } else if rec.free_index == Some(m) {
            ctx.decimal(&RBig::ZERO)
        } else {
            // ring.back() is a_{m-1}
            let mut acc = ctx.decimal(&RBig::ZERO);
            for (n, v) in vd.iter().enumerate().take(m as usize) {
                if rec.potential[n] == RBig::ZERO {
                    continue;
                }
                acc = &acc + &(&ring[ring.len() - 1 - n] * v);
            }
            acc.div_rational(&rec.denominator(m), digits)
        };

        let log_term = a.ln_abs() + (m as f64 + nu_f) * ln_x;
        sum = &sum + &(&a * &power);
        if log_term > peak.1 {
            peak = (m, log_term);
        }

        ring.push_back(a);
        if ring.len() > width {
            ring.pop_front();
        }
        term_logs.push_back(log_term);
        if term_logs.len() > width {
            term_logs.pop_front();
        }

        if m >= peak.0 + width as u64 && term_logs.iter().all(|&l| l <= threshold) {
            return Ok(EvaluationResult {
                value: sum,
                terms_used: m,
                peak_term_log10: peak.1 / LN_10,
                peak_index: peak.0,
                requested_precision: target_p,
                working_digits: digits,
            });
        }
        power = &power * &xd;
    }
    Err(Error::NoConvergenceWithinCap { cap })
}

fn x_ln(x: &RBig) -> f64 {
    x.ln_abs()
}

/// `x^nu` for rational `nu` at `digits` digits.
fn decimal_power(x: &Decimal, nu: &RBig, digits: usize) -> Decimal {
    if *nu == RBig::ZERO {
        return Decimal::ONE.with_precision(digits).value();
    }
    let guard = digits + 10;
    let xg = x.clone().with_precision(guard).value();
    let p = Decimal::from(nu.numerator().clone()).with_precision(guard).value()
        / Decimal::from(IBig::from(nu.denominator().clone())).with_precision(guard).value();
    (xg.ln() * p).exp().with_precision(digits).value()
}
