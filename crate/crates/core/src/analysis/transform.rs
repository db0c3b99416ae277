//! The lattice Fourier transform Φ̃_K(t) = ∬ Φ(N(x + yω)) ẽ_K(-t(x + yω)) dx dy.
//!
//! Since ẽ_K(x + yω) = e(y) and N is a positive definite form of determinant
//! |D_K|/4, rotating to an orthonormal frame gives the radial form
//! Φ̃_K(t) = (2/√|D_K|)·π ∫_1^2 Φ(s) J0(κ√s) ds with κ = 4πt/√|D_K|.

use std::f64::consts::PI;

use super::quad::{integrate_2d, integrate_breaks, QuadOptions};
use super::weight::SmoothWeight;
use crate::fields::FieldParams;
use crate::{Error, Result};

/// Most panels `eval` will split [1, 2] into; bounds t at about 10⁶√|D_K|.
const MAX_PANELS: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct LatticeTransform {
    field: FieldParams,
    weight: SmoothWeight,
    abs_tol: f64,
}

impl LatticeTransform {
    pub fn new(field: &FieldParams, weight: SmoothWeight) -> Self {
        LatticeTransform { field: field.clone(), weight, abs_tol: 1e-11 }
    }

    pub fn with_tolerance(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn weight(&self) -> &SmoothWeight {
        &self.weight
    }

    /// 2/√|D_K|: the Jacobian of the map to the orthonormal frame. Equals
    /// 2/√-d for d ≡ 1 mod 4 and 1/√-d otherwise.
    pub fn prefactor(&self) -> f64 {
        2.0 / self.field.sqrt_abs_disc()
    }

    pub fn kappa(&self, t: f64) -> f64 {
        4.0 * PI * t / self.field.sqrt_abs_disc()
    }

    /// Φ̃_K(t) by the radial form.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let t = t.abs();
        let kappa = self.kappa(t);
        let mut pts = self.weight.breakpoints();
        // about one panel per half oscillation of J0(κ√s) on [1, 2]
        let extra = (kappa * (2f64.sqrt() - 1.0) / PI).ceil();
        if !(extra <= MAX_PANELS) {
            return Err(Error::BudgetExceeded { needed: extra, cap: MAX_PANELS });
        }
        let extra = extra as usize;
        if extra > 1 {
            let mut refined = Vec::new();
            for w in pts.windows(2) {
                let k = ((w[1] - w[0]) * extra as f64).ceil().max(1.0) as usize;
                for i in 0..k {
                    refined.push(w[0] + (w[1] - w[0]) * i as f64 / k as f64);
                }
            }
            refined.push(2.0);
            pts = refined;
        }
        let opts = QuadOptions { abs_tol: self.abs_tol / (self.prefactor() * PI), rel_tol: 0.0, max_panels: 20 * pts.len() + 2000 };
        let r = integrate_breaks(|s: f64| self.weight.eval(s) * libm::j0(kappa * s.sqrt()), &pts, &opts)?;
        Ok(self.prefactor() * PI * r.value)
    }

    /// Φ̃_K(t) as the 2-D integral ∬ Φ(N(x + yω)) cos(2πty) dx dy. With
    /// x' = x + P·y/2 the norm is x'² + c·y², c = |D_K|/4.
    pub fn eval_cartesian(&self, t: f64, abs_tol: f64) -> Result<f64> {
        let (p, q) = self.field.norm_coeffs();
        let c = q as f64 - (p * p) as f64 / 4.0;
        let br = self.weight.breakpoints();
        let mut ys = Vec::new();
        for s in br.iter().rev() {
            ys.push(-(s / c).sqrt());
        }
        ys.push(0.0);
        for s in br.iter() {
            ys.push((s / c).sqrt());
        }
        let w = self.weight;
        let opts = QuadOptions { abs_tol: abs_tol / 2.0, rel_tol: 0.0, max_panels: 4000 };
        // integrate x' ≥ 0 and double
        let r = integrate_2d(
            |x: f64, y: f64| w.eval(x * x + c * y * y) * (2.0 * PI * t * y).cos(),
            &ys,
            |y: f64| {
                let cy = c * y * y;
                let lo = (1.0 - cy).max(0.0).sqrt();
                let hi = (2.0 - cy).max(0.0).sqrt();
                (lo, hi)
            },
            &opts,
        )?;
        Ok(2.0 * r.value)
    }

    /// C_j with |Φ̃_K(t)| ≤ C_j t^(-j), from j integrations by parts:
    /// pref·π·(√|D_K|/(2π))^j · 2^(j/2) · ∫|Φ^(j)|, using
    /// d/ds[s^(k/2) J_k(κ√s)] = (κ/2) s^((k-1)/2) J_(k-1)(κ√s) and |J_k| ≤ 1.
    pub fn parts_constant(&self, j: usize) -> Result<f64> {
        let ratio = self.field.sqrt_abs_disc() / (2.0 * PI);
        Ok(self.prefactor() * PI * ratio.powi(j as i32) * 2f64.powf(j as f64 / 2.0) * self.weight.abs_derivative_integral(j)?)
    }

    /// min(C_0, C_j t^(-j)).
    pub fn decay_bound(&self, t: f64, j: usize) -> Result<f64> {
        let base = self.parts_constant(0)?;
        if j == 0 || t == 0.0 {
            return Ok(base);
        }
        Ok((self.parts_constant(j)? / t.powi(j as i32)).min(base))
    }

    /// The constant C with |Φ̃_K(t)| ≤ C·min(1, U^(j-1) t^(-j)) implied by
    /// `decay_bound`.
    pub fn decay_constant(&self, j: usize) -> Result<f64> {
        let u = self.weight.u();
        Ok(self.parts_constant(0)?.max(self.parts_constant(j)? / u.powi(j as i32 - 1)))
    }
}

/// Φ̃_K(t) for the weight Φ_X.
pub fn lattice_transform(field: &FieldParams, weight: &SmoothWeight, t: f64) -> Result<f64> {
    LatticeTransform::new(field, *weight).eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{field_params, SUPPORTED_D};

    #[test]
    fn value_at_zero_is_near_area_constant() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            let w = SmoothWeight::new(10_000).unwrap();
            let lt = LatticeTransform::new(&f, w);
            let v = lt.eval(0.0).unwrap();
            assert!((v - f.a_k()).abs() <= 5.0 / w.u(), "d={d}");
            // exactly A_K·∫Φ
            assert!((v - f.a_k() * w.integral().unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn radial_matches_cartesian() {
        for d in [-2, -3, -7, -163] {
            let f = field_params(d).unwrap();
            let lt = LatticeTransform::new(&f, SmoothWeight::new(10_000).unwrap());
            for t in [0.0, 0.3, 1.0, 2.5] {
                let a = lt.eval(t).unwrap();
                let b = lt.eval_cartesian(t, 1e-8).unwrap();
                assert!((a - b).abs() < 1e-7, "d={d} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn huge_frequency_is_refused() {
        let f = field_params(-3).unwrap();
        let lt = LatticeTransform::new(&f, SmoothWeight::new(1000).unwrap());
        assert!(lt.eval(f64::INFINITY).is_err());
        assert!(lt.eval(1e9).is_err());
    }

    #[test]
    fn decay_bound_dominates() {
        let f = field_params(-11).unwrap();
        let lt = LatticeTransform::new(&f, SmoothWeight::new(100_000).unwrap());
        for t in [1.0, 3.0, 10.0, 40.0] {
            let v = lt.eval(t).unwrap().abs();
            for j in 0..=4 {
                assert!(v <= lt.decay_bound(t, j).unwrap() * (1.0 + 1e-9) + 1e-12, "t={t} j={j}");
            }
        }
    }
}
