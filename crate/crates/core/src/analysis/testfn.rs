//! Even test functions φ given through their compactly supported Fourier
//! transforms, with φ̂(u) = ∫ φ(x) e^(-2πixu) dx.

use serde::Serialize;

use super::quad::{integrate_breaks, QuadOptions};
use crate::num::{real, Real};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionKind<F> {
    /// φ̂ a triangle, φ = sinc²(σx).
    Fejer,
    /// φ̂ the triangle convolved with itself (a cubic B-spline), φ = sinc⁴(σx/2).
    FejerSquared,
    /// φ̂ = g * g with g(u) = Σ a_j cos(πju/s) on [-s, s] and σ = 2s, so φ = ĝ².
    Cosine { half_width: F, coeffs: Vec<F> },
}

/// An admissible test function, normalized to φ(0) = ∫ φ̂ = 1 for the Fejér
/// kinds; the cosine kind has φ(0) = (2s·a_0)².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction<F = f64> {
    pub sigma: F,
    #[serde(flatten)]
    pub kind: TestFunctionKind<F>,
}

fn check_sigma<F: Real>(sigma: F) -> Result<()> {
    if !(sigma > F::zero() && sigma <= real(2.0)) {
        return Err(Error::BadSupport(sigma.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// φ̂(u) = (1/σ)(1 - |u|/σ)₊, φ(x) = sinc²(σx).
pub fn fejer_test_function<F: Real>(sigma: F) -> Result<TestFunction<F>> {
    check_sigma(sigma)?;
    Ok(TestFunction { sigma, kind: TestFunctionKind::Fejer })
}

/// φ̂(u) = M(u/h)/h with h = σ/2 and M the centered cubic B-spline.
pub fn fejer_squared_test_function<F: Real>(sigma: F) -> Result<TestFunction<F>> {
    check_sigma(sigma)?;
    Ok(TestFunction { sigma, kind: TestFunctionKind::FejerSquared })
}

/// The cosine family on [-s, s]; support radius 2s.
pub fn cosine_test_function<F: Real>(half_width: F, coeffs: Vec<F>) -> Result<TestFunction<F>> {
    check_sigma(half_width * real(2.0))?;
    if coeffs.is_empty() {
        return Err(Error::BadSupport(0.0));
    }
    Ok(TestFunction { sigma: half_width * real(2.0), kind: TestFunctionKind::Cosine { half_width, coeffs } })
}

/// sin(πz)/(πz).
pub fn sinc<F: Real>(z: F) -> F {
    let pz = F::PI() * z;
    if pz.abs() < real(1e-8) {
        F::one() - pz * pz / real(6.0)
    } else {
        pz.sin() / pz
    }
}

/// sin(z)/z.
fn sinc_raw<F: Real>(z: F) -> F {
    if z.abs() < real(1e-8) {
        F::one() - z * z / real(6.0)
    } else {
        z.sin() / z
    }
}

fn bspline<F: Real>(v: F) -> F {
    let v = v.abs();
    if v >= real(2.0) {
        F::zero()
    } else if v <= F::one() {
        real::<F>(2.0 / 3.0) - v * v + v * v * v / real(2.0)
    } else {
        let w = real::<F>(2.0) - v;
        w * w * w / real(6.0)
    }
}

/// ∫_0^y M for 0 ≤ y.
fn bspline_cdf<F: Real>(y: F) -> F {
    if y >= real(2.0) {
        real(0.5)
    } else if y <= F::one() {
        real::<F>(2.0 / 3.0) * y - y * y * y / real(3.0) + y * y * y * y / real(8.0)
    } else {
        let w = real::<F>(2.0) - y;
        real::<F>(0.5) - w * w * w * w / real(24.0)
    }
}

/// ∫_l^r cos(c + m·v) dv.
fn int_cos<F: Real>(c: F, m: F, l: F, r: F) -> F {
    if r <= l {
        return F::zero();
    }
    if m.abs() < real(1e-12) {
        c.cos() * (r - l)
    } else {
        ((c + m * r).sin() - (c + m * l).sin()) / m
    }
}

fn freq<F: Real>(j: usize, s: F) -> F {
    F::PI() * real(j as f64) / s
}

impl<F: Real> TestFunction<F> {
    pub fn name(&self) -> &'static str {
        match self.kind {
            TestFunctionKind::Fejer => "fejer",
            TestFunctionKind::FejerSquared => "fejer2",
            TestFunctionKind::Cosine { .. } => "cosine",
        }
    }

    pub fn phi_hat(&self, u: F) -> F {
        let u = u.abs();
        if u >= self.sigma {
            return F::zero();
        }
        match &self.kind {
            TestFunctionKind::Fejer => (F::one() - u / self.sigma) / self.sigma,
            TestFunctionKind::FejerSquared => {
                let h = self.sigma / real(2.0);
                bspline(u / h) / h
            }
            TestFunctionKind::Cosine { half_width, coeffs } => cosine_autocorrelation(*half_width, coeffs, u),
        }
    }

    pub fn phi(&self, x: F) -> F {
        match &self.kind {
            TestFunctionKind::Fejer => {
                let s = sinc(self.sigma * x);
                s * s
            }
            TestFunctionKind::FejerSquared => {
                let s = sinc(self.sigma * x / real(2.0));
                (s * s) * (s * s)
            }
            TestFunctionKind::Cosine { half_width, coeffs } => {
                let g = cosine_transform(*half_width, coeffs, x);
                g * g
            }
        }
    }

    /// φ(0) = ∫ φ̂.
    pub fn phi_zero(&self) -> F {
        self.phi(F::zero())
    }

    /// φ̂(0) = ∫ φ.
    pub fn phi_hat_zero(&self) -> F {
        self.phi_hat(F::zero())
    }

    /// Points where φ̂ fails to be smooth, within [-σ, σ].
    pub fn kinks(&self) -> Vec<F> {
        let s = self.sigma;
        match self.kind {
            TestFunctionKind::Fejer => vec![-s, F::zero(), s],
            TestFunctionKind::FejerSquared => {
                let h = s / real(2.0);
                vec![-s, -h, F::zero(), h, s]
            }
            TestFunctionKind::Cosine { .. } => vec![-s, F::zero(), s],
        }
    }

    /// ∫_{-1}^{1} φ̂.
    pub fn central_mass(&self) -> F {
        let one = F::one();
        match &self.kind {
            TestFunctionKind::Fejer => {
                let s = self.sigma;
                if s <= one {
                    one
                } else {
                    (real::<F>(2.0) / s) * (one - one / (real::<F>(2.0) * s))
                }
            }
            TestFunctionKind::FejerSquared => {
                let h = self.sigma / real(2.0);
                real::<F>(2.0) * bspline_cdf(one / h)
            }
            TestFunctionKind::Cosine { half_width, coeffs } => {
                let h = central_gram(*half_width, coeffs.len());
                quad_form(&h, coeffs)
            }
        }
    }

    /// ∫ (1 - χ_[-1,1]) φ̂.
    pub fn outer_mass(&self) -> F {
        if self.sigma <= F::one() {
            return F::zero();
        }
        match &self.kind {
            TestFunctionKind::Fejer => {
                let r = (self.sigma - F::one()) / self.sigma;
                r * r
            }
            TestFunctionKind::FejerSquared => {
                let h = self.sigma / real(2.0);
                real::<F>(2.0) * (real::<F>(0.5) - bspline_cdf(F::one() / h))
            }
            TestFunctionKind::Cosine { .. } => self.phi_zero() - self.central_mass(),
        }
    }

    /// φ(x) recomputed as ∫ φ̂(u) cos(2πxu) du.
    pub fn phi_by_inversion(&self, x: F) -> Result<F> {
        let two_pi = F::PI() * real(2.0);
        let k = self.kinks();
        Ok(integrate_breaks(|u: F| self.phi_hat(u) * (two_pi * x * u).cos(), &k, &QuadOptions::new(1e-13, 1e-12))?.value)
    }
}

/// ĝ(x) = ∫_{-s}^{s} Σ a_j cos(πju/s) cos(2πxu) du.
fn cosine_transform<F: Real>(s: F, a: &[F], x: F) -> F {
    let beta = F::PI() * real(2.0) * x;
    a.iter()
        .enumerate()
        .map(|(j, &aj)| {
            let al = freq(j, s);
            aj * s * (sinc_raw((al - beta) * s) + sinc_raw((al + beta) * s))
        })
        .fold(F::zero(), |x, y| x + y)
}

/// (g * g)(u) for 0 ≤ u ≤ 2s in closed form.
fn cosine_autocorrelation<F: Real>(s: F, a: &[F], u: F) -> F {
    let (l, r) = (u - s, s);
    let half = real::<F>(0.5);
    let mut total = F::zero();
    for (j, &aj) in a.iter().enumerate() {
        let al = freq(j, s);
        for (k, &ak) in a.iter().enumerate() {
            let ak_ = freq(k, s);
            // cos(al v) cos(ak (u - v))
            let p = int_cos(ak_ * u, al - ak_, l, r);
            let m = int_cos(-ak_ * u, al + ak_, l, r);
            total = total + aj * ak * half * (p + m);
        }
    }
    total
}

fn quad_form<F: Real>(m: &[Vec<F>], a: &[F]) -> F {
    let mut t = F::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t = t + a[i] * v * a[j];
        }
    }
    t
}

/// H_jk = ∫_{-1}^{1} (g_j * g_k), with g_j = cos(πju/s) on [-s, s].
pub fn central_gram<F: Real>(s: F, dim: usize) -> Vec<Vec<F>> {
    let one = F::one();
    let mut pts = vec![-s];
    let c = one - s;
    if c.abs() < s {
        pts.push(-c.abs());
        pts.push(c.abs());
    }
    pts.push(s);
    let opts = QuadOptions::new(1e-14, 1e-13);
    let mut h = vec![vec![F::zero(); dim]; dim];
    for j in 0..dim {
        for k in j..dim {
            let (aj, ak) = (freq(j, s), freq(k, s));
            // ∫ g_j(v) ∫_{|v + w| ≤ 1} g_k(w) dw dv
            let v = integrate_breaks(
                |v: F| {
                    let lo = (-one - v).max(-s);
                    let hi = (one - v).min(s);
                    (aj * v).cos() * int_cos(F::zero(), ak, lo, hi)
                },
                &pts,
                &opts,
            )
            .expect("smooth panels")
            .value;
            h[j][k] = v;
            h[k][j] = v;
        }
    }
    h
}

/// G_jk = ∫ g_j g_k = diag(2s, s, s, ...).
pub fn full_gram<F: Real>(s: F, dim: usize) -> Vec<Vec<F>> {
    let mut g = vec![vec![F::zero(); dim]; dim];
    for (j, row) in g.iter_mut().enumerate() {
        row[j] = if j == 0 { s * real(2.0) } else { s };
    }
    g
}

/// ∫ φ(x) W_USp(x) dx = φ̂(0) - ½ ∫_{-1}^{1} φ̂, with W_USp(x) = 1 - sin(2πx)/(2πx).
pub fn usp_integral<F: Real>(tf: &TestFunction<F>) -> F {
    tf.phi_hat_zero() - tf.central_mass() * real(0.5)
}

/// W_USp(x).
pub fn w_usp<F: Real>(x: F) -> F {
    F::one() - sinc(x * real(2.0))
}

/// The same integral on the x side: quadrature over [0, L] with one panel per
/// period of φ, plus a tail estimate from the mean of φ(x)x² over the last
/// periods.
pub fn usp_integral_x_side(tf: &TestFunction<f64>) -> Result<f64> {
    let period = 1.0 / tf.sigma;
    let periods = 4000usize;
    let l = period * periods as f64;
    let pts: Vec<f64> = (0..=periods).map(|i| i as f64 * period).collect();
    let f = |x: f64| tf.phi(x) * w_usp(x);
    let body = integrate_breaks(f, &pts, &QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 4 * periods })?.value;
    let window = 20.0 * period;
    let mean = integrate_breaks(|x: f64| tf.phi(x) * x * x, &[l - window, l], &QuadOptions::new(1e-14, 1e-10))?.value / window;
    Ok(2.0 * (body + mean / l))
}
