//! Adaptive Gauss–Kronrod quadrature in one and two dimensions.

use crate::num::{real, Real};
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
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
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<F> {
    pub value: F,
    pub error: F,
    pub evals: usize,
}

/// Tolerances and panel budget.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<F> {
    pub abs_tol: F,
    pub rel_tol: F,
    pub max_panels: usize,
}

impl<F: Real> QuadOptions<F> {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions { abs_tol: real(abs_tol), rel_tol: real(rel_tol), max_panels: 4000 }
    }
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss estimate.
pub fn gk15<F: Real, G: FnMut(F) -> F>(f: &mut G, a: F, b: F) -> (F, F) {
    let half = real::<F>(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut kron = fc * real(WGK[7]);
    let mut gauss = fc * real(WG[3]);
    for j in 0..7 {
        let dx = h * real(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        kron = kron + s * real(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * real(WG[j / 2]);
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrate f over the union of panels between consecutive breakpoints.
pub fn integrate_breaks<F: Real, G: FnMut(F) -> F>(mut f: G, points: &[F], opts: &QuadOptions<F>) -> Result<QuadResult<F>> {
    let mut panels: Vec<(F, F, F, F)> = Vec::new();
    let mut evals = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gk15(&mut f, w[0], w[1]);
            evals += 15;
            panels.push((w[0], w[1], v, e));
        }
    }
    loop {
        let (value, error) = totals(&panels);
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= tol {
            return Ok(QuadResult { value, error, evals });
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::QuadratureFailure {
                achieved: error.to_f64().unwrap_or(f64::NAN),
                target: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .fold((0, F::neg_infinity()), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (a, b, _, _) = panels[i];
        let m = (a + b) * real(0.5);
        if !(m > a && m < b) {
            // panel cannot be split further in this precision
            return Err(Error::QuadratureFailure {
                achieved: error.to_f64().unwrap_or(f64::NAN),
                target: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        evals += 30;
        panels[i] = (a, m, v1, e1);
        panels.push((m, b, v2, e2));
    }
}

fn totals<F: Real>(panels: &[(F, F, F, F)]) -> (F, F) {
    // sum in left-endpoint order so the result does not depend on refinement history
    let mut idx: Vec<usize> = (0..panels.len()).collect();
    idx.sort_by(|&i, &j| panels[i].0.partial_cmp(&panels[j].0).unwrap());
    let mut v = F::zero();
    let mut e = F::zero();
    for i in idx {
        v = v + panels[i].2;
        e = e + panels[i].3;
    }
    (v, e)
}

pub fn integrate<F: Real, G: FnMut(F) -> F>(f: G, a: F, b: F, opts: &QuadOptions<F>) -> Result<QuadResult<F>> {
    integrate_breaks(f, &[a, b], opts)
}

/// ∫_{y0}^{y1} ∫_{x0(y)}^{x1(y)} f(x, y) dx dy by nesting the 1-D rule. The inner
/// tolerance is a tenth of the outer one.
pub fn integrate_2d<F, G, L>(f: G, y_breaks: &[F], x_limits: L, opts: &QuadOptions<F>) -> Result<QuadResult<F>>
where
    F: Real,
    G: Fn(F, F) -> F,
    L: Fn(F) -> (F, F),
{
    let inner = QuadOptions { abs_tol: opts.abs_tol * real(0.1), rel_tol: opts.rel_tol * real(0.1), max_panels: opts.max_panels };
    let mut failure: Option<Error> = None;
    let mut evals = 0;
    let outer = integrate_breaks(
        |y| {
            let (x0, x1) = x_limits(y);
            if x1 <= x0 {
                return F::zero();
            }
            match integrate(|x| f(x, y), x0, x1, &inner) {
                Ok(r) => {
                    evals += r.evals;
                    r.value
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    F::zero()
                }
            }
        },
        y_breaks,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(QuadResult { value: outer.value, error: outer.error, evals: evals + outer.evals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let o = QuadOptions::<f64>::new(1e-14, 0.0);
        let r = integrate(|x: f64| x.powi(20) - 3.0 * x.powi(7), 0.0, 1.0, &o).unwrap();
        assert!((r.value - (1.0 / 21.0 - 3.0 / 8.0)).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_and_kinked() {
        let o = QuadOptions::<f64>::new(1e-12, 0.0);
        let r = integrate(|x: f64| (50.0 * x).cos(), 0.0, 3.0, &o).unwrap();
        assert!((r.value - (150.0f64).sin() / 50.0).abs() < 1e-11);
        let r = integrate_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], &o).unwrap();
        assert!((r.value - 2.5).abs() < 1e-13);
    }

    #[test]
    fn single_precision_works() {
        let o = QuadOptions::<f32>::new(1e-5, 0.0);
        let r = integrate(|x: f32| x.exp(), 0.0, 1.0, &o).unwrap();
        assert!((r.value - (1f32.exp() - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn disc_area() {
        let o = QuadOptions::<f64>::new(1e-10, 0.0);
        let r = integrate_2d(|_, _| 1.0, &[-1.0, 1.0], |y: f64| {
            let h = (1.0 - y * y).max(0.0).sqrt();
            (-h, h)
        }, &o)
        .unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-8);
    }

    #[test]
    fn failure_is_reported() {
        let o = QuadOptions { abs_tol: 1e-15, rel_tol: 0.0, max_panels: 4 };
        assert!(matches!(integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0, &o), Err(Error::QuadratureFailure { .. })));
    }
}
