//! Truncated Taylor series arithmetic, used for exact derivatives of the weight.

/// Coefficients c_k of Σ c_k h^k, truncated at a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet(c)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.0.len().min(o.0.len());
        let mut c = vec![0.0; n];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = (0..=i).map(|j| self.0[j] * o.0[i - j]).sum();
        }
        Jet(c)
    }

    pub fn recip(&self) -> Jet {
        let v0 = self.0[0];
        let mut h = vec![0.0; self.0.len()];
        h[0] = 1.0 / v0;
        for k in 1..h.len() {
            let s: f64 = (1..=k).map(|j| self.0[j] * h[k - j]).sum();
            h[k] = -s / v0;
        }
        Jet(h)
    }

    pub fn exp(&self) -> Jet {
        let mut g = vec![0.0; self.0.len()];
        g[0] = self.0[0].exp();
        for k in 1..g.len() {
            let s: f64 = (1..=k).map(|j| j as f64 * self.0[j] * g[k - j]).sum();
            g[k] = s / k as f64;
        }
        Jet(g)
    }

    /// Rescale the variable: coefficients of f(s·h).
    pub fn scale_var(&self, s: f64) -> Jet {
        let mut p = 1.0;
        Jet(self
            .0
            .iter()
            .map(|c| {
                let v = c * p;
                p *= s;
                v
            })
            .collect())
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * fact
    }
}
