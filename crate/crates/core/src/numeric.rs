//! Small numerical kernels: complex polynomial roots, adaptive Gauss-Kronrod
//! quadrature of complex integrands, and cubic interpolation.

use num_complex::Complex64;

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All roots of `sum coeffs[k] z^k` (Aberth iteration). Leading coefficient must be
/// nonzero.
pub(crate) fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    // Cauchy bound for the starting circle
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = horner(&monic, z[i]);
            let dp = horner(&deriv, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulse: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulse);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Rule {
    value: Complex64,
    error: f64,
    l1: f64,
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Rule {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut l1 = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        k += (f1 + f2) * WGK[j];
        l1 += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    Rule { value: k * h, error: ((k - g) * h).norm(), l1: l1 * h.abs() }
}

/// Adaptive G7K15 integral of `f` over `[a, b]`. A subinterval is accepted when its
/// error estimate is below `tol` times its own integral of `|f|`, or below
/// `1e-3 tol` times that of the whole interval (endpoint singularities).
/// `None` if bisection runs out of depth.
pub(crate) fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Option<Complex64> {
    let whole = kronrod(&f, a, b);
    let floor = 1e-3 * tol * whole.l1;
    let mut total = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let r = kronrod(&f, lo, hi);
        if !r.value.is_finite() {
            return None;
        }
        if r.error <= tol * r.l1 || r.error <= floor || r.error <= 1e-300 {
            total += r.value;
        } else if depth >= 48 {
            return None;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Some(total)
}

/// Interpolating cubic spline with not-a-knot end conditions, `x` strictly
/// increasing. Falls back to natural ends below four knots.
#[derive(Debug, Clone)]
pub(crate) struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>, // second derivatives at knots
}

impl CubicSpline {
    pub(crate) fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut m = vec![0.0; n];
        if n >= 3 {
            let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
            // rows i = 1..n-2: h[i-1] M[i-1] + 2(h[i-1]+h[i]) M[i] + h[i] M[i+1] = r[i]
            let k = n - 2;
            let mut sub = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                sub[j] = h[i - 1];
                diag[j] = 2.0 * (h[i - 1] + h[i]);
                sup[j] = h[i];
                rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
            }
            let not_a_knot = n >= 4;
            if not_a_knot {
                // M0 = ((h0 + h1) M1 - h0 M2) / h1, and the mirror image at the far end
                let (h0, h1) = (h[0], h[1]);
                diag[0] += h0 * (h0 + h1) / h1;
                sup[0] -= h0 * h0 / h1;
                let (a, b) = (h[n - 2], h[n - 3]);
                diag[k - 1] += a * (a + b) / b;
                sub[k - 1] -= a * a / b;
            }
            let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
            m[1..n - 1].copy_from_slice(&inner);
            if not_a_knot {
                let (h0, h1) = (h[0], h[1]);
                m[0] = ((h0 + h1) * m[1] - h0 * m[2]) / h1;
                let (a, b) = (h[n - 2], h[n - 3]);
                m[n - 1] = ((a + b) * m[n - 2] - a * m[n - 3]) / b;
            }
        }
        CubicSpline { x: x.to_vec(), y: y.to_vec(), m }
    }

    fn interval(&self, t: f64) -> usize {
        match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= self.x.len() => self.x.len() - 2,
            k => k - 1,
        }
    }

    /// Value, first and second derivative at `t`.
    pub(crate) fn eval(&self, t: f64) -> (f64, f64, f64) {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let y = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let d2 = a * m0 + b * m1;
        (y, d1, d2)
    }
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone)]
pub(crate) struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub(crate) fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d = vec![delta[0]; 2];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Pchip { x: x.to_vec(), y: y.to_vec(), d }
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let i = match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= self.x.len() => self.x.len() - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_polynomials() {
        let c = |re: f64| Complex64::new(re, 0.0);
        // (z - 1)(z + 2)(z - 3i)
        let coeffs = [Complex64::new(0.0, 6.0), Complex64::new(-2.0, -3.0), Complex64::new(1.0, -3.0), c(1.0)];
        let mut roots = poly_roots(&coeffs);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let want = [c(-2.0), Complex64::new(0.0, 3.0), c(1.0)];
        for (r, w) in roots.iter().zip(want) {
            assert!((r - w).norm() < 1e-12, "{r} vs {w}");
        }
        // double roots still converge to usable accuracy
        let roots = poly_roots(&[c(16.0), c(0.0), c(-8.0), c(0.0), c(1.0)]);
        for r in roots {
            assert!((r.re.abs() - 2.0).abs() < 1e-6 && r.im.abs() < 1e-6);
        }
    }

    #[test]
    fn quadrature() {
        let v = integrate(|x| Complex64::new(x.sqrt(), x), 0.0, 2.0, 1e-12).unwrap();
        assert!((v.re - 2.0 / 3.0 * 2.0f64.powf(1.5)).abs() < 1e-10, "{v}");
        assert!((v.im - 2.0).abs() < 1e-13);
        let osc = integrate(|x| Complex64::from_polar(1.0, 40.0 * x), 0.0, 1.0, 1e-12).unwrap();
        let want = (Complex64::from_polar(1.0, 40.0) - 1.0) / Complex64::new(0.0, 40.0);
        assert!((osc - want).norm() < 1e-12);
    }

    #[test]
    fn spline_reproduces_cubics_in_the_interior() {
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|t| t.exp()).collect();
        let s = CubicSpline::new(&x, &y);
        let (v, d1, d2) = s.eval(2.05);
        let e = 2.05f64.exp();
        assert!((v - e).abs() < 1e-5 * e);
        assert!((d1 - e).abs() < 1e-4 * e);
        assert!((d2 - e).abs() < 1e-2 * e);
        // exact on cubics, ends included
        let c: Vec<f64> = x.iter().map(|t| t * t * t - 2.0 * t).collect();
        let s = CubicSpline::new(&x, &c);
        for t in [0.0, 0.05, 1.234, 3.9] {
            let (v, d1, d2) = s.eval(t);
            assert!((v - (t * t * t - 2.0 * t)).abs() < 1e-10);
            assert!((d1 - (3.0 * t * t - 2.0)).abs() < 1e-9);
            assert!((d2 - 6.0 * t).abs() < 1e-8);
        }
    }

    #[test]
    fn pchip_hits_knots_and_stays_monotone() {
        let x = [0.0, 1.0, 2.0, 3.0, 10.0];
        let y = [0.0, 0.1, 5.0, 5.1, 5.2];
        let p = Pchip::new(&x, &y);
        for (a, b) in x.iter().zip(y) {
            assert!((p.eval(*a) - b).abs() < 1e-14);
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let v = p.eval(i as f64 * 0.01);
            assert!(v >= prev);
            prev = v;
        }
    }
}
