//! Leading-order WKB magnitudes along rays from the origin and the growth function
//! `S(u) = max_phi log |psi(e^(u + i phi))|`.
//!
//! `Q` is continued along the ray `t = r e^(i phi)` by writing `Q^2 = t^k P(t)`
//! with `P(0) != 0`: `t^(k/2)` is taken literally along the ray and `sqrt(P)` is
//! continued panel by panel, each panel short enough relative to the distance to
//! the nearest zero of `P` that the principal root of `P(t)/P(a)` stays continuous.

use std::f64::consts::TAU;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{horner, integrate, poly_roots};
use crate::ode::{to_f64, Branch, OdeSpec, SingularPointKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseScanConfig {
    pub coarse_samples: usize,
    pub refine_tolerance: f64,
    pub quadrature_tolerance: f64,
    /// Phases are scanned over `[phase_start, phase_start + 2 pi)`.
    pub phase_start: f64,
}

impl Default for PhaseScanConfig {
    fn default() -> Self {
        PhaseScanConfig { coarse_samples: 256, refine_tolerance: 1e-10, quadrature_tolerance: 1e-10, phase_start: 0.0 }
    }
}

impl PhaseScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_samples < 16 {
            return Err(Error::InvalidConfig(format!("coarse_samples = {} < 16", self.coarse_samples)));
        }
        if !(self.refine_tolerance > 0.0 && self.quadrature_tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if !self.phase_start.is_finite() {
            return Err(Error::InvalidConfig("phase_start must be finite".into()));
        }
        Ok(())
    }
}

fn q_squared_coeffs(spec: &OdeSpec) -> Vec<Complex64> {
    let v = spec.potential_f64();
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut out = match spec.kind() {
        SingularPointKind::RegularSingular => {
            let s = spec.scale_f64();
            let gap = to_f64(&(spec.nu_plus() - spec.nu_minus()));
            let mut out = vec![c(0.25 * s * s * gap * gap)];
            out.extend(v.iter().map(|&x| c(x)));
            out
        }
        SingularPointKind::Ordinary => v.iter().skip(1).map(|&x| c(x)).collect(),
    };
    while out.len() > 1 && out.last() == Some(&c(0.0)) {
        out.pop();
    }
    out
}

/// `Q^2(z)`: `Σ_{n>=1} v_n z^(n-1)` at an ordinary point, otherwise
/// `¼ s² (ν₊ − ν₋)² + Σ v_n z^(n+1)`.
pub fn q_squared(spec: &OdeSpec, z: Complex64) -> Complex64 {
    horner(&q_squared_coeffs(spec), z)
}

/// Precomputed geometry of `Q^2` for one spec.
#[derive(Debug, Clone)]
pub(crate) struct WkbForm {
    full: Vec<Complex64>,
    order: usize,
    reduced: Vec<Complex64>,
    roots: Vec<Complex64>,
    q0: Complex64,
    scale: f64,
    nu: f64,
    inv_s: f64,
    langer: bool,
}

impl WkbForm {
    pub(crate) fn new(spec: &OdeSpec) -> Self {
        let full = q_squared_coeffs(spec);
        let order = full.iter().position(|c| c.norm() != 0.0).unwrap_or(0);
        let reduced = full[order..].to_vec();
        let roots = poly_roots(&reduced);
        let q0 = if order == 0 { full[0].sqrt() } else { Complex64::new(0.0, 0.0) };
        let scale = if q0.norm() > 0.0 { q0.norm_sqr() } else { full.iter().map(|c| c.norm()).fold(0.0, f64::max) };
        let langer = spec.kind() == SingularPointKind::RegularSingular;
        WkbForm {
            full,
            order,
            reduced,
            roots,
            q0,
            scale,
            // growing solution; z^nu_plus is its small-z behaviour in the Langer form
            nu: if langer { to_f64(spec.nu_plus()) } else { 0.0 },
            inv_s: 1.0 / spec.scale_f64(),
            langer,
        }
    }

    fn prefactor(&self, z: Complex64) -> f64 {
        let q2 = horner(&self.full, z).norm();
        let base = if self.q0.norm() > 0.0 { 0.5 * self.q0.norm().ln() } else { 0.0 };
        base - 0.25 * q2.ln()
    }

    fn blocked_radius(&self, dir: Complex64, tol: f64) -> Option<(f64, Complex64)> {
        let mut best: Option<(f64, Complex64)> = None;
        for &rho in &self.roots {
            let s = (rho * dir.conj()).re;
            if s <= 0.0 {
                continue;
            }
            let q2 = horner(&self.full, dir * s).norm();
            if q2 < tol * self.scale && best.is_none_or(|(b, _)| s < b) {
                best = Some((s, rho));
            }
        }
        best
    }

    fn root_distance(&self, t: Complex64) -> f64 {
        self.roots.iter().map(|r| (t - r).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Integrals `∫_0^{R e^{i phi}}` of the WKB exponent for each radius in `radii`
    /// (ascending). Radii at or beyond a turning point on the ray get an error.
    pub(crate) fn ray_integrals(&self, phi: f64, radii: &[f64], tol: f64) -> Vec<Result<Complex64>> {
        let dir = Complex64::from_polar(1.0, phi);
        let blocked = self.blocked_radius(dir, tol);
        let half_k = 0.5 * self.order as f64;
        let omega_phase = Complex64::from_polar(1.0, half_k * phi);
        let integrand = |r: f64, w_a: Complex64, p_a: Complex64| -> Complex64 {
            if r == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let t = dir * r;
            let w = w_a * (horner(&self.reduced, t) / p_a).sqrt();
            let q = omega_phase * r.powf(half_k) * w;
            if self.langer {
                let sum = q + self.q0;
                if self.order == 0 && sum.norm() > self.q0.norm() {
                    // (Q^2(t) - Q0^2) / (t (Q + Q0)) without the cancellation in Q - Q0
                    horner(&self.full[1..], t) * dir / sum
                } else {
                    (q - self.q0) / r
                }
            } else {
                q * dir
            }
        };

        let mut out = Vec::with_capacity(radii.len());
        let mut r = 0.0f64;
        let mut w = self.reduced[0].sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut failed: Option<Error> = None;
        for &target in radii {
            if let Some(e) = &failed {
                out.push(Err(e.clone()));
                continue;
            }
            if let Some((s, rho)) = blocked {
                if target >= s {
                    failed = Some(Error::TurningPointOnRay { re: rho.re, im: rho.im });
                    out.push(Err(failed.clone().unwrap()));
                    continue;
                }
            }
            while r < target {
                let h = 0.2 * self.root_distance(dir * r);
                let mut b = if h.is_finite() { (r + h).min(target) } else { target };
                if target - b <= 1e-13 * target {
                    b = target;
                }
                if b - r <= 1e-15 * (1.0 + r) {
                    failed = Some(Error::QuadratureFailure { phi });
                    break;
                }
                let p_a = w * w;
                let piece = if r == 0.0 {
                    let top = b.sqrt();
                    integrate(|s| integrand(s * s, w, p_a) * (2.0 * s), 0.0, top, tol)
                } else {
                    integrate(|s| integrand(s, w, p_a), r, b, tol)
                };
                match piece {
                    Some(v) => acc += v,
                    None => {
                        failed = Some(Error::QuadratureFailure { phi });
                        break;
                    }
                }
                w *= (horner(&self.reduced, dir * b) / p_a).sqrt();
                r = b;
            }
            match &failed {
                Some(e) => out.push(Err(e.clone())),
                None => out.push(Ok(acc)),
            }
        }
        out
    }

    fn log_magnitude(&self, radius: f64, phi: f64, integral: Complex64, include_prefactor: bool) -> f64 {
        let mut value = self.nu * radius.ln() + self.inv_s * integral.re;
        if include_prefactor {
            value += self.prefactor(Complex64::from_polar(radius, phi));
        }
        value
    }

    fn eval(&self, radius: f64, phi: f64, tol: f64, include_prefactor: bool) -> Result<f64> {
        let integral = self.ray_integrals(phi, &[radius], tol).pop().unwrap()?;
        Ok(self.log_magnitude(radius, phi, integral, include_prefactor))
    }
}

/// `Re log psi(z)` for the growing WKB solution. The branch does not change the
/// magnitude (it only fixes the index offset downstream); the form is chosen by
/// the spec's singular point kind.
pub fn wkb_log_magnitude(
    spec: &OdeSpec,
    _branch: Branch,
    z: Complex64,
    cfg: &PhaseScanConfig,
    include_prefactor: bool,
) -> Result<f64> {
    cfg.validate()?;
    if z.norm() == 0.0 {
        return Err(Error::NonpositiveArgument);
    }
    WkbForm::new(spec).eval(z.norm(), z.arg(), cfg.quadrature_tolerance, include_prefactor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    NumericWkb,
    ClosedForm,
}

/// Sampled growth function.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    u: Vec<f64>,
    s: Vec<f64>,
    phi_star: Option<Vec<f64>>,
    branch: Branch,
    include_prefactor: bool,
    lattice: f64,
    source: ProfileSource,
}

impl GrowthProfile {
    pub fn new(u: Vec<f64>, s: Vec<f64>, branch: Branch, include_prefactor: bool) -> Result<Self> {
        if u.len() != s.len() {
            return Err(Error::InvalidConfig("u and S have different lengths".into()));
        }
        if u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidConfig("u grid must be strictly increasing".into()));
        }
        if let Some(i) = s.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("S is not finite at u = {}", u[i])));
        }
        Ok(GrowthProfile {
            u,
            s,
            phi_star: None,
            branch,
            include_prefactor,
            lattice: 1.0,
            source: ProfileSource::ClosedForm,
        })
    }

    /// Samples a known growth function on a uniform grid.
    pub fn from_fn(u_min: f64, u_max: f64, samples: usize, branch: Branch, f: impl Fn(f64) -> f64) -> Result<Self> {
        let u = uniform_grid(u_min, u_max, samples)?;
        let s = u.iter().map(|&x| f(x)).collect();
        GrowthProfile::new(u, s, branch, false)
    }

    /// Spacing of the index lattice carrying nonzero coefficients (see `coefficient_curve`).
    pub fn with_lattice(mut self, spacing: f64) -> Self {
        self.lattice = spacing;
        self
    }

    /// Maps `u -> factor * u` and divides the lattice spacing by `factor`. With
    /// `factor = 2` a profile computed in `y` becomes one in `x = y^2`.
    pub fn rescale_u(&self, factor: f64) -> Self {
        GrowthProfile {
            u: self.u.iter().map(|u| u * factor).collect(),
            s: self.s.clone(),
            phi_star: self.phi_star.as_ref().map(|p| p.iter().map(|v| (v * factor).rem_euclid(TAU)).collect()),
            branch: self.branch,
            include_prefactor: self.include_prefactor,
            lattice: self.lattice / factor,
            source: self.source,
        }
    }

    pub fn u_grid(&self) -> &[f64] {
        &self.u
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s
    }

    pub fn phi_star(&self) -> Option<&[f64]> {
        self.phi_star.as_deref()
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn include_prefactor(&self) -> bool {
        self.include_prefactor
    }

    pub fn lattice(&self) -> f64 {
        self.lattice
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "u,S,phi_star")?;
        for i in 0..self.u.len() {
            match &self.phi_star {
                Some(p) => writeln!(out, "{},{},{}", self.u[i], self.s[i], p[i])?,
                None => writeln!(out, "{},{},", self.u[i], self.s[i])?,
            }
        }
        Ok(())
    }
}

pub(crate) fn uniform_grid(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidConfig(format!("need u_min < u_max, got [{lo}, {hi}]")));
    }
    if samples < 8 {
        return Err(Error::ProfileTooSmall(samples));
    }
    let step = (hi - lo) / (samples - 1) as f64;
    Ok((0..samples).map(|i| if i + 1 == samples { hi } else { lo + step * i as f64 }).collect())
}

/// Growth profile including the `sqrt(Q0/Q)` prefactor.
pub fn growth_profile(
    spec: &OdeSpec,
    branch: Branch,
    u_min: f64,
    u_max: f64,
    samples: usize,
    cfg: &PhaseScanConfig,
) -> Result<GrowthProfile> {
    growth_profile_with(spec, branch, u_min, u_max, samples, cfg, true)
}

pub fn growth_profile_with(
    spec: &OdeSpec,
    branch: Branch,
    u_min: f64,
    u_max: f64,
    samples: usize,
    cfg: &PhaseScanConfig,
    include_prefactor: bool,
) -> Result<GrowthProfile> {
    cfg.validate()?;
    let u = uniform_grid(u_min, u_max, samples)?;
    let radii: Vec<f64> = u.iter().map(|v| v.exp()).collect();
    let form = WkbForm::new(spec);
    let tol = cfg.quadrature_tolerance;
    let n = cfg.coarse_samples;
    let phases: Vec<f64> = (0..n).map(|j| cfg.phase_start + TAU * j as f64 / n as f64).collect();

    let coarse: Vec<Vec<Result<f64>>> = phases
        .par_iter()
        .map(|&phi| {
            form.ray_integrals(phi, &radii, tol)
                .into_iter()
                .zip(&radii)
                .map(|(res, &r)| res.map(|i| form.log_magnitude(r, phi, i, include_prefactor)))
                .collect()
        })
        .collect();

    let rows: Vec<Result<(f64, f64)>> = (0..u.len())
        .into_par_iter()
        .map(|i| {
            let column: Vec<f64> = coarse.iter().map(|c| *c[i].as_ref().unwrap_or(&f64::NEG_INFINITY)).collect();
            let best = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if best == f64::NEG_INFINITY {
                let source = coarse[0][i].clone().err().unwrap();
                return Err(Error::PhaseScan { u: u[i], phi: phases[0], source: Box::new(source) });
            }
            // smallest phase among (numerical) ties
            let slack = 1e-12 * (1.0 + best.abs());
            let j = column.iter().position(|&v| v >= best - slack).unwrap();
            let f = |phi: f64| form.eval(radii[i], phi, tol, include_prefactor).unwrap_or(f64::NEG_INFINITY);
            let step = TAU / n as f64;
            let (phi, value) = golden_max(f, phases[j] - step, phases[j] + step, cfg.refine_tolerance);
            let (phi, value) = if value >= column[j] { (phi, value) } else { (phases[j], column[j]) };
            Ok((wrap_phase(phi, cfg.phase_start, cfg.refine_tolerance), value))
        })
        .collect();

    let mut s = Vec::with_capacity(u.len());
    let mut phi_star = Vec::with_capacity(u.len());
    for row in rows {
        let (phi, value) = row?;
        phi_star.push(phi);
        s.push(value);
    }
    Ok(GrowthProfile {
        u,
        s,
        phi_star: Some(phi_star),
        branch,
        include_prefactor,
        lattice: spec.coefficient_stride() as f64,
        source: ProfileSource::NumericWkb,
    })
}

// Maxima are flat to O(dphi^2), so phases closer than ~sqrt(eps) to the start are
// reported as the start itself.
fn wrap_phase(phi: f64, start: f64, tol: f64) -> f64 {
    let tol = tol.max(1e-7);
    let w = (phi - start).rem_euclid(TAU);
    if w < tol || TAU - w < tol {
        start
    } else {
        start + w
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
