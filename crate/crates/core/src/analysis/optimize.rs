//! Minimizing ∫ φ W_USp over test functions φ = ĝ² with g = Σ a_j cos(πju/s)
//! on [-s, s], so that φ ≥ 0 and φ̂ = g * g is supported in [-2s, 2s].
//!
//! With G = ∫ g_j g_k and H = ∫_{-1}^{1} g_j * g_k the objective is
//! a·(G - ½H)·a under the normalization φ(0) = (2s·a_0)² = 1.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::DMatrix;
use serde::Serialize;

use super::testfn::{central_gram, cosine_test_function, full_gram, usp_integral, TestFunction};
use crate::{Error, Result};

/// Gap between the support radius 2s and 2.
pub const SUPPORT_GAP: f64 = 1e-9;

pub const MAX_FAMILY_DIM: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct OptimizedTestFunction {
    pub family_dim: usize,
    pub tf: TestFunction,
    /// ∫ φ W_USp for the returned φ.
    pub value: f64,
    /// The exact minimum over the family, 1/(4s²(Q⁻¹)_00).
    pub exact_minimum: f64,
    pub restarts: usize,
}

struct Objective {
    q: Vec<Vec<f64>>,
    a0: f64,
}

impl Objective {
    fn coeffs(&self, free: &[f64]) -> Vec<f64> {
        let mut a = vec![self.a0];
        a.extend_from_slice(free);
        a
    }
}

impl CostFunction for Objective {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, free: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let a = self.coeffs(free);
        let mut t = 0.0;
        for (i, row) in self.q.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t += a[i] * v * a[j];
            }
        }
        Ok(t)
    }
}

fn objective(s: f64, dim: usize) -> Objective {
    let g = full_gram(s, dim);
    let h = central_gram(s, dim);
    let q = (0..dim).map(|i| (0..dim).map(|j| g[i][j] - 0.5 * h[i][j]).collect()).collect();
    Objective { q, a0: 1.0 / (2.0 * s) }
}

/// min a·Q·a subject to a_0 = 1/(2s), by linear algebra.
pub fn exact_family_minimum(dim: usize) -> Result<f64> {
    if dim == 0 || dim > MAX_FAMILY_DIM {
        return Err(Error::Parse(format!("family_dim must be in 1..={MAX_FAMILY_DIM}, got {dim}")));
    }
    let s = 1.0 - SUPPORT_GAP / 2.0;
    let obj = objective(s, dim);
    let q = DMatrix::from_fn(dim, dim, |i, j| obj.q[i][j]);
    let inv = q.try_inverse().ok_or_else(|| Error::Parse("singular Gram matrix".into()))?;
    Ok(obj.a0 * obj.a0 / inv[(0, 0)])
}

fn nelder_mead(obj: Objective, start: Vec<f64>, step: f64) -> Result<(Vec<f64>, f64, Objective)> {
    let mut simplex = vec![start.clone()];
    for i in 0..start.len() {
        let mut v = start.clone();
        v[i] += step;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-16).map_err(|e| Error::Parse(e.to_string()))?;
    let res = Executor::new(obj, solver)
        .configure(|st| st.max_iters(20_000))
        .run()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let best = res.state.best_param.clone().unwrap_or(start);
    let cost = res.state.best_cost;
    Ok((best, cost, res.problem.problem.expect("problem is returned")))
}

/// Derivative-free minimization of ∫ φ W_USp over the first `family_dim`
/// cosine modes, restarting Nelder–Mead from its own optimum until it stalls.
pub fn optimize_test_function(family_dim: usize) -> Result<OptimizedTestFunction> {
    let exact_minimum = exact_family_minimum(family_dim)?;
    let s = 1.0 - SUPPORT_GAP / 2.0;
    let mut obj = objective(s, family_dim);
    let mut free = vec![0.0; family_dim - 1];
    let mut restarts = 0;
    if family_dim > 1 {
        let mut best = obj.cost(&free).expect("finite");
        let mut step = 0.1;
        for _ in 0..40 {
            let (p, c, back) = nelder_mead(obj, free.clone(), step)?;
            obj = back;
            restarts += 1;
            if c < best - 1e-15 {
                free = p;
                best = c;
            } else if step < 1e-6 {
                break;
            } else {
                step /= 10.0;
            }
        }
    }
    let coeffs = obj.coeffs(&free);
    let tf = cosine_test_function(s, coeffs)?;
    let value = usp_integral(&tf);
    Ok(OptimizedTestFunction { family_dim, tf, value, exact_minimum, restarts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::constants::nonvanishing_constants;

    #[test]
    fn one_mode_is_best_pure_fejer() {
        let r = optimize_test_function(1).unwrap();
        let s = 1.0 - SUPPORT_GAP / 2.0;
        // Fejér with σ = 2s and φ(0) = 1 gives 1/(8s²)
        assert!((r.value - 1.0 / (8.0 * s * s)).abs() < 1e-10);
        assert!((r.exact_minimum - r.value).abs() < 1e-10);
        assert!((r.tf.phi_zero() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn more_modes_approach_the_infimum() {
        let inf = nonvanishing_constants().inf_density;
        let mut last = f64::INFINITY;
        for dim in [2, 4, 6] {
            let r = optimize_test_function(dim).unwrap();
            assert!((r.tf.phi_zero() - 1.0).abs() < 1e-12);
            assert!(r.value >= inf - 1e-9, "dim={dim}");
            assert!(r.value <= last + 1e-12);
            assert!((r.value - r.exact_minimum).abs() < 1e-8, "dim={dim}: {} vs {}", r.value, r.exact_minimum);
            last = r.value;
        }
        assert!(last < 0.1146);
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(optimize_test_function(0).is_err());
        assert!(optimize_test_function(9).is_err());
    }
}
