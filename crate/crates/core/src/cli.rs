//! Command-line front end. `run` parses arguments, writes results to `out` and
//! diagnostics to `err`, and returns the process exit code.

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::frobenius::{coefficients, evaluate};
use crate::legendre::{coefficient_curve_with, CurveOptions};
use crate::ode::{parse_rational, to_f64, Branch, OdeSpec, Preset, PresetFamily};
use crate::oracles::OracleKind;
use crate::planner::{curve_covering, plan, plan_numeric, CoefficientModel, CurveModel, NumericPlanOptions, OracleModel, Plan};
use crate::precision::{format_decimal, PrecisionContext};
use crate::wkb::{growth_profile_with, PhaseScanConfig};

pub const EXIT_SPEC: i32 = 2;
pub const EXIT_RESONANCE: i32 = 3;
pub const EXIT_PIPELINE: i32 = 4;
pub const EXIT_ACCURACY: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "frobenius", version, about = "Frobenius coefficients, WKB forecasts and precision plans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Series coefficients as CSV (m,sign,log10_abs).
    Coeffs {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 20)]
        m_max: u64,
        #[arg(long, default_value_t = 50)]
        digits: usize,
    },
    /// WKB coefficient curve as CSV (u,m_bar,log_abs_a,s_second).
    Estimate {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_negative_numbers = true)]
        u_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        u_max: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        corrections: Corrections,
    },
    /// Exact log|a_m| against a forecast, as CSV; summary on stderr.
    Compare {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        m_min: u64,
        #[arg(long, default_value_t = 200)]
        m_max: u64,
        #[arg(long, default_value_t = 50)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Method::Numeric)]
        method: Method,
        /// Report the envelope over this many consecutive indices instead of single terms.
        #[arg(long, default_value_t = 1)]
        window: u64,
        #[command(flatten)]
        corrections: Corrections,
    },
    /// Term count and working precision as JSON.
    Plan {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Method::Numeric)]
        method: Method,
        #[command(flatten)]
        corrections: Corrections,
    },
    /// Sums the series under a plan (or at --digits) and prints JSON.
    Evaluate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        target: Target,
        /// Working digits; planned when omitted.
        #[arg(long)]
        digits: Option<usize>,
        /// Forecast used for planning.
        #[arg(long, value_enum, default_value_t = Method::Numeric)]
        method: Method,
        #[command(flatten)]
        corrections: Corrections,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct OdeSource {
    /// JSON file with keys nu_plus, nu_minus, s, v.
    #[arg(long)]
    pub ode: Option<PathBuf>,
    /// For example anharmonic:c=0 or doublewell:c=2.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct Source {
    #[command(flatten)]
    pub ode: OdeSource,
    #[arg(long, default_value = "minus")]
    pub branch: Branch,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Evaluation point, decimal or p/q.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub precision: u32,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Corrections {
    #[arg(long)]
    pub no_prefactor: bool,
    #[arg(long)]
    pub no_log_correction: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Numeric,
    Pred0,
    Pred1,
    Parametric,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    AccuracyRisk(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_SPEC,
            Failure::AccuracyRisk(_) => EXIT_ACCURACY,
            Failure::Lib(e) => error_exit_code(e),
        }
    }
}

/// Exit code for a library error.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::ResonantIndicialRoots { .. } => EXIT_RESONANCE,
        Error::NoConvergenceWithinCap { .. }
        | Error::TurningPointOnRay { .. }
        | Error::QuadratureFailure { .. }
        | Error::PhaseScan { .. }
        | Error::NonconvexProfile { .. }
        | Error::OutOfRange { .. }
        | Error::EstimateRangeExceeded { .. } => EXIT_PIPELINE,
        _ => EXIT_SPEC,
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{e}");
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Coeffs { source, m_max, digits } => {
            let (spec, _) = load(&source)?;
            let table = coefficients(&spec, source.branch, m_max, &PrecisionContext::new(digits)?)?;
            table.write_csv(&mut *out)?;
        }
        Command::Estimate { source, u_min, u_max, samples, corrections } => {
            let (spec, _) = load(&source)?;
            let nu = source.branch.exponent_f64(&spec);
            let profile =
                growth_profile_with(&spec, source.branch, u_min, u_max, samples, &PhaseScanConfig::default(), !corrections.no_prefactor)?;
            let curve = coefficient_curve_with(&profile, nu, &curve_options(corrections))?;
            curve.write_csv(&mut *out)?;
        }
        Command::Compare { source, m_min, m_max, digits, method, window, corrections } => {
            compare(&source, m_min, m_max, digits, method, window, corrections, out, err)?;
        }
        Command::Plan { source, target, method, corrections } => {
            let (spec, preset) = load(&source)?;
            let x = to_f64(&parse_rational(&target.x)?);
            let p = make_plan(&spec, preset.as_ref(), source.branch, x, target.precision, method, corrections)?;
            writeln!(out, "{}", p.to_json())?;
        }
        Command::Evaluate { source, target, digits, method, corrections } => {
            let (spec, preset) = load(&source)?;
            let x = parse_rational(&target.x)?;
            let p = target.precision;
            let working = match digits {
                Some(d) => d,
                None => {
                    let plan = make_plan(&spec, preset.as_ref(), source.branch, to_f64(&x), p, method, corrections)?;
                    writeln!(err, "planned M={} peak_log10={:.3} working_digits={}", plan.predicted_terms, plan.peak_term_log10, plan.working_digits)?;
                    plan.working_digits
                }
            };
            let ctx = PrecisionContext::new(working)?;
            let r = evaluate(&spec, source.branch, &x, p, &ctx)?;
            let doc = json!({
                // two digits past the target so rounding stays below 10^-P
                "value": format_decimal(&r.value, p as usize + 2),
                "terms_used": r.terms_used,
                "peak_log10": r.peak_term_log10,
                "working_digits": working,
            });
            writeln!(out, "{doc}")?;
            // the sum loses about peak_log10 digits to cancellation
            let needed = p as f64 + r.peak_term_log10.max(0.0).ceil();
            if needed > working as f64 {
                return Err(Failure::AccuracyRisk(format!(
                    "peak term 10^{:.2} needs {needed} digits for P={p}, only {working} were used",
                    r.peak_term_log10
                )));
            }
        }
    }
    Ok(())
}

fn load(source: &Source) -> std::result::Result<(OdeSpec, Option<Preset>), Failure> {
    match (&source.ode.ode, &source.ode.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok((OdeSpec::from_json(&value)?, None))
        }
        (None, Some(desc)) => {
            let preset = Preset::parse(desc)?;
            Ok((preset.spec(), Some(preset)))
        }
        _ => Err(Failure::Usage("give exactly one of --ode or --preset".into())),
    }
}

fn curve_options(c: Corrections) -> CurveOptions {
    CurveOptions { log_correction: !c.no_log_correction }
}

fn numeric_options(c: Corrections) -> NumericPlanOptions {
    NumericPlanOptions { include_prefactor: !c.no_prefactor, curve: curve_options(c), ..Default::default() }
}

/// Closed form behind a non-numeric method. These describe the ν₋ series of the x-space presets.
fn oracle_for(preset: Option<&Preset>, branch: Branch, method: Method) -> std::result::Result<OracleKind, Failure> {
    let Some(preset) = preset else {
        return Err(Failure::Usage(format!("--method {method:?} needs a preset").to_lowercase()));
    };
    if branch != Branch::NuMinus {
        return Err(Failure::Usage("closed-form forecasts describe the minus branch".into()));
    }
    let c = preset.c_f64();
    match (method, preset.family) {
        (Method::Pred0, PresetFamily::Anharmonic) if c == 0.0 => Ok(OracleKind::AnharmonicPred0),
        (Method::Pred1, PresetFamily::Anharmonic) if c == 0.0 => Ok(OracleKind::AnharmonicPred1),
        (Method::Parametric, PresetFamily::Anharmonic) => Ok(OracleKind::AnharmonicParametric { c }),
        (Method::Parametric, PresetFamily::DoubleWell) => Ok(OracleKind::DoubleWellParametric { c }),
        _ => Err(Failure::Usage(format!("method {method:?} does not apply to this preset").to_lowercase())),
    }
}

fn make_plan(
    spec: &OdeSpec,
    preset: Option<&Preset>,
    branch: Branch,
    x: f64,
    p: u32,
    method: Method,
    corrections: Corrections,
) -> std::result::Result<Plan, Failure> {
    if method == Method::Numeric {
        return Ok(plan_numeric(spec, branch, x, p, &numeric_options(corrections))?.0);
    }
    let kind = oracle_for(preset, branch, method)?;
    Ok(plan(&OracleModel { kind, nu: branch.exponent_f64(spec) }, x, p)?)
}

#[allow(clippy::too_many_arguments)]
fn compare(
    source: &Source,
    m_min: u64,
    m_max: u64,
    digits: usize,
    method: Method,
    window: u64,
    corrections: Corrections,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    if m_min < 1 || m_max < m_min || window < 1 {
        return Err(Failure::Usage("need 1 <= m-min <= m-max and window >= 1".into()));
    }
    let (spec, preset) = load(source)?;
    let branch = source.branch;
    let half = (window - 1) / 2;
    let (k_lo, k_hi) = (m_min.saturating_sub(half).max(1), m_max + (window - 1 - half));
    let table = coefficients(&spec, branch, k_hi, &PrecisionContext::new(digits)?)?;

    let nu = branch.exponent_f64(&spec);
    let (curve, curve_model, oracle_model);
    let model: &dyn CoefficientModel = if method == Method::Numeric {
        curve = curve_covering(&spec, branch, k_lo as f64, k_hi as f64, &numeric_options(corrections))?;
        curve_model = CurveModel { curve: &curve, nu };
        &curve_model
    } else {
        oracle_model = OracleModel { kind: oracle_for(preset.as_ref(), branch, method)?, nu };
        &oracle_model
    };

    writeln!(out, "m,log_abs_exact,log_abs_estimate,difference")?;
    let mut fit = Vec::new();
    for m in m_min..=m_max {
        let est = model.log_abs(m as f64)?;
        let lo = m.saturating_sub(half).max(1);
        let mut best = f64::NEG_INFINITY;
        for k in lo..lo + window {
            let l = table.log_abs(k as usize);
            if l.is_finite() {
                let d = if k == m { l - est } else { l - model.log_abs(k as f64)? };
                best = best.max(d);
            }
        }
        if !best.is_finite() {
            continue;
        }
        writeln!(out, "{m},{},{est},{best}", est + best)?;
        fit.push(((m as f64).ln(), best));
    }
    let max_abs = fit.iter().fold(0.0f64, |a, p| a.max(p.1.abs()));
    writeln!(err, "rows={} max_abs_difference={max_abs} slope_vs_ln_m={}", fit.len(), slope(&fit))?;
    Ok(())
}

/// Least-squares slope of y against x.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let (mx, my) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    sxy / sxx
}
