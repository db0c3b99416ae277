//! The smooth weight Φ_X: supported on (1, 2), equal to 1 on (1 + 1/U, 2 - 1/U),
//! U = log log X, with ramps built from the bump exp(-1/(s(1-s))).

use std::sync::OnceLock;

use super::jet::Jet;
use super::quad::{gk15, integrate_breaks, QuadOptions};
use crate::{Error, Result};

const TABLE_INTERVALS: usize = 2048;

fn bump(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        (-1.0 / (s * (1.0 - s))).exp()
    }
}

struct StepTable {
    z: f64,
    cum: Vec<f64>,
}

fn step_table() -> &'static StepTable {
    static TABLE: OnceLock<StepTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let h = 1.0 / TABLE_INTERVALS as f64;
        let mut cum = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        let mut f = bump;
        for i in 0..TABLE_INTERVALS {
            acc += gk15(&mut f, i as f64 * h, (i + 1) as f64 * h).0;
            cum.push(acc);
        }
        StepTable { z: acc, cum }
    })
}

/// The smooth step S(s) = ∫_0^s b / ∫_0^1 b, via cubic Hermite interpolation of a
/// tabulated antiderivative.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let t = step_table();
    let h = 1.0 / TABLE_INTERVALS as f64;
    let i = ((s / h) as usize).min(TABLE_INTERVALS - 1);
    let s0 = i as f64 * h;
    let u = (s - s0) / h;
    let (p0, p1) = (t.cum[i] / t.z, t.cum[i + 1] / t.z);
    let (m0, m1) = (bump(s0) / t.z * h, bump(s0 + h) / t.z * h);
    let u2 = u * u;
    let u3 = u2 * u;
    let v = (2.0 * u3 - 3.0 * u2 + 1.0) * p0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * p1 + (u3 - u2) * m1;
    v.clamp(0.0, 1.0)
}

/// Normalizing constant ∫_0^1 b.
pub fn bump_mass() -> f64 {
    step_table().z
}

/// Taylor jet of S at s0.
pub fn smooth_step_jet(s0: f64, order: usize) -> Jet {
    if s0 <= 0.0 || s0 >= 1.0 {
        return Jet::constant(smooth_step(s0), order);
    }
    let mut v = vec![0.0; order + 1];
    v[0] = s0 - s0 * s0;
    if order >= 1 {
        v[1] = 1.0 - 2.0 * s0;
    }
    if order >= 2 {
        v[2] = -1.0;
    }
    let q = Jet(v).recip();
    if -q.0[0] < -700.0 {
        return Jet::constant(smooth_step(s0), order);
    }
    let b = Jet(q.0.iter().map(|c| -c).collect()).exp();
    let z = bump_mass();
    let mut c = vec![0.0; order + 1];
    c[0] = smooth_step(s0);
    for k in 1..=order {
        c[k] = b.0[k - 1] / (k as f64 * z);
    }
    Jet(c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothWeight {
    x: u64,
    u: f64,
}

impl SmoothWeight {
    pub fn new(x: u64) -> Result<Self> {
        if x < 16 {
            return Err(Error::XTooSmall(x));
        }
        Ok(SmoothWeight { x, u: (x as f64).ln().ln() })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// U = log log X.
    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 1.0 || t >= 2.0 {
            return 0.0;
        }
        smooth_step(self.u * (t - 1.0)) * smooth_step(self.u * (2.0 - t))
    }

    /// Ends of the ramps, for quadrature panels.
    pub fn breakpoints(&self) -> Vec<f64> {
        let a = 1.0 + 1.0 / self.u;
        let b = 2.0 - 1.0 / self.u;
        if a < b {
            vec![1.0, a, b, 2.0]
        } else {
            vec![1.0, 1.5, 2.0]
        }
    }

    pub fn jet(&self, t: f64, order: usize) -> Jet {
        if t <= 1.0 || t >= 2.0 {
            return Jet::constant(0.0, order);
        }
        let a = smooth_step_jet(self.u * (t - 1.0), order).scale_var(self.u);
        let b = smooth_step_jet(self.u * (2.0 - t), order).scale_var(-self.u);
        a.mul(&b)
    }

    /// Φ^(k)(t).
    pub fn derivative(&self, t: f64, k: usize) -> f64 {
        self.jet(t, k).derivative(k)
    }

    /// ∫_1^2 |Φ^(j)|.
    pub fn abs_derivative_integral(&self, j: usize) -> Result<f64> {
        if j == 0 {
            return Ok(self.integral()?);
        }
        Ok(integrate_breaks(|t| self.derivative(t, j).abs(), &self.breakpoints(), &QuadOptions::new(1e-10, 1e-9))?.value)
    }

    /// ∫_1^2 Φ.
    pub fn integral(&self) -> Result<f64> {
        Ok(integrate_breaks(|t| self.eval(t), &self.breakpoints(), &QuadOptions::new(1e-13, 1e-13))?.value)
    }
}
