//! Numerical check of Poisson summation over O_K:
//! Σ_m (m/n) W(aN(m)/X) = X/(aN(n)) Σ_k G_K(k, n) W̃_K(√(N(k)X/(aN(n)))).

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use super::transform::LatticeTransform;
use super::weight::SmoothWeight;
use crate::arith::{Echelon, Elt};
use crate::fields::FieldParams;
use crate::gauss::GaussSummer;
use crate::num::pairwise_sum;
use crate::primes::factor;
use crate::symbols::residue_symbol;
use crate::{Error, Result};

/// Largest norm of k the dual sum may need before giving up.
pub const MAX_DUAL_NORM: u64 = 2_000_000;

/// Fraction of Σ W allowed for the truncated tail of the dual sum.
pub const TAIL_FRACTION: f64 = 1e-7;

const FIRST_PARTS: usize = 3;
const LAST_PARTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonReport {
    pub d: i64,
    pub n: Elt<i64>,
    pub a: f64,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Imaginary part of the dual sum, zero up to rounding.
    pub rhs_imag: f64,
    pub abs_err: f64,
    /// |lhs - rhs| / Σ W(aN(m)/X), the size of the sum before cancellation.
    pub rel_err: f64,
    pub mass: f64,
    pub k_norm_max: u64,
    pub k_terms: usize,
    pub tail_bound: f64,
}

/// All (x, N(x)) with lo ≤ N(x) ≤ hi.
pub fn lattice_points(field: &FieldParams, lo: u64, hi: u64) -> Vec<(Elt<i64>, u64)> {
    let (p, q) = field.norm_coeffs();
    let c = q as f64 - (p * p) as f64 / 4.0;
    let bmax = ((hi as f64) / c).sqrt().floor() as i64 + 1;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        let rest = hi as f64 - c * (b * b) as f64;
        if rest < 0.0 {
            continue;
        }
        let center = -(p * b) as f64 / 2.0;
        let r = rest.sqrt();
        for a in (center - r).floor() as i64 - 1..=(center + r).ceil() as i64 + 1 {
            let x = Elt::new(a, b);
            let n = field.norm(&x);
            if n >= lo as i64 && n <= hi as i64 {
                out.push((x, n as u64));
            }
        }
    }
    out
}

/// Sup over the cell [0,1] + [0,1]ω of √N: every lattice point's cell lies in
/// the norm ball of radius √s + δ around the origin when N(k) ≤ s.
fn cell_radius(field: &FieldParams) -> f64 {
    [Elt::new(1i64, 0), Elt::new(0, 1), Elt::new(1, 1)]
        .iter()
        .map(|x| (field.norm(x) as f64).sqrt())
        .fold(0.0, f64::max)
}

/// Σ_{N(k) > K} N(k)^(-α) ≤ α A_K [K^(1-α)/(α-1) + 2δK^(1/2-α)/(α-1/2) + δ²K^(-α)/α],
/// from #{N(k) ≤ s} ≤ A_K(√s + δ)² and partial summation.
fn lattice_tail(field: &FieldParams, k: f64, alpha: f64) -> f64 {
    let dl = cell_radius(field);
    alpha
        * field.a_k()
        * (k.powf(1.0 - alpha) / (alpha - 1.0) + 2.0 * dl * k.powf(0.5 - alpha) / (alpha - 0.5) + dl * dl * k.powf(-alpha) / alpha)
}

/// Smallest K (over j = 3..=16 integrations by parts, parts[i] = C_(3+i)) for which the dual tail
/// Σ_{N(k)>K} |G||W̃| · scale is provably below target, where |G| ≤ g_max and
/// t = √(N(k)λ).
fn truncation(parts: &[f64], field: &FieldParams, lambda: f64, scale: f64, g_max: f64, target: f64) -> Result<(u64, f64)> {
    let mut best: Option<(u64, f64)> = None;
    for (j, &cj) in (FIRST_PARTS..).zip(parts) {
        let alpha = j as f64 / 2.0;
        let tail = |k: f64| scale * g_max * cj * lambda.powf(-alpha) * lattice_tail(field, k, alpha);
        if tail(MAX_DUAL_NORM as f64) > target {
            continue;
        }
        let (mut lo, mut hi) = (1u64, MAX_DUAL_NORM);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if tail(mid as f64) <= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if best.map_or(true, |(k, _)| lo < k) {
            best = Some((lo, tail(lo as f64)));
        }
    }
    best.ok_or(Error::BudgetExceeded { needed: f64::INFINITY, cap: MAX_DUAL_NORM as f64 })
}

struct Dual {
    sums: BTreeMap<u64, Complex64>,
    k_norm_max: u64,
    k_terms: usize,
    tail_bound: f64,
}

/// Σ_k coeff(k)·G(k, n) grouped by N(k), over N(k) ≤ K with K from the tail bound.
fn dual_sums<C: Fn(&Elt<i64>) -> f64>(
    field: &FieldParams,
    summer: &GaussSummer,
    parts: &[f64],
    lambda: f64,
    scale: f64,
    coeff_max: f64,
    target: f64,
    coeff: C,
) -> Result<Dual> {
    let rs = summer.residue_system();
    let table: Vec<Complex64> = rs.iter().map(|k| summer.big_g(&k)).collect();
    let g_max = table.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (kmax, tail_bound) = truncation(parts, field, lambda, scale, g_max * coeff_max, target)?;
    let mut sums: BTreeMap<u64, Complex64> = BTreeMap::new();
    let pts = lattice_points(field, 0, kmax);
    for (k, nk) in &pts {
        let c = coeff(k);
        if c != 0.0 {
            *sums.entry(*nk).or_default() += table[rs.index(&rs.reduce(k))] * c;
        }
    }
    Ok(Dual { sums, k_norm_max: kmax, k_terms: pts.len(), tail_bound })
}

/// Direct lattice sum Σ_m coeff(m) W(aN(m)/X) over the support, with Σ W.
fn direct_side<C: Fn(&Elt<i64>) -> f64>(field: &FieldParams, w: &SmoothWeight, a: f64, x: f64, coeff: C) -> (f64, f64) {
    let lo = (x / a).floor() as u64;
    let hi = (2.0 * x / a).ceil() as u64;
    let mut vals = Vec::new();
    let mut mass = Vec::new();
    for (m, nm) in lattice_points(field, lo.max(1), hi) {
        let wt = w.eval(a * nm as f64 / x);
        if wt == 0.0 {
            continue;
        }
        vals.push(coeff(&m) * wt);
        mass.push(wt);
    }
    (pairwise_sum(&vals), pairwise_sum(&mass))
}

/// Runs both Poisson checks for one field and one X. Values of W̃ are cached,
/// so moduli of equal norm share their transform evaluations.
pub struct PoissonVerifier {
    field: FieldParams,
    x: f64,
    weight: SmoothWeight,
    lt: LatticeTransform,
    parts: Vec<f64>,
    cache: RefCell<HashMap<u64, f64>>,
}

impl PoissonVerifier {
    /// W = Φ_X with X rounded to an integer (at least 16).
    pub fn new(field: &FieldParams, x: f64) -> Result<Self> {
        let weight = SmoothWeight::new(x.round().max(16.0) as u64)?;
        let lt = LatticeTransform::new(field, weight);
        let parts = (FIRST_PARTS..=LAST_PARTS).map(|j| lt.parts_constant(j)).collect::<Result<Vec<_>>>()?;
        Ok(PoissonVerifier { field: field.clone(), x, weight, lt, parts, cache: RefCell::new(HashMap::new()) })
    }

    fn transform(&self, t: f64) -> Result<f64> {
        if let Some(v) = self.cache.borrow().get(&t.to_bits()) {
            return Ok(*v);
        }
        let v = self.lt.eval(t)?;
        self.cache.borrow_mut().insert(t.to_bits(), v);
        Ok(v)
    }

    fn dual_total(&self, dual: &Dual, lambda: f64) -> Result<Complex64> {
        let mut re = Vec::with_capacity(dual.sums.len());
        let mut im = Vec::with_capacity(dual.sums.len());
        for (&v, s) in &dual.sums {
            if s.norm() < 1e-9 {
                continue;
            }
            let w = self.transform((v as f64 * lambda).sqrt())?;
            re.push(s.re * w);
            im.push(s.im * w);
        }
        Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
    }

    pub fn check(&self, n: &Elt<i64>, a: f64) -> Result<PoissonReport> {
        self.check_with(n, a, Echelon::RationalFirst)
    }

    pub fn check_with(&self, n: &Elt<i64>, a: f64, echelon: Echelon) -> Result<PoissonReport> {
        let field = &self.field;
        let summer = GaussSummer::with_echelon(field, n, echelon)?;
        let rs = summer.residue_system();
        let (lhs, mass) = direct_side(field, &self.weight, a, self.x, |m| summer.symbol_at(rs.index(&rs.reduce(m))) as f64);
        let lambda = self.x / (a * summer.norm() as f64);
        let dual = dual_sums(field, &summer, &self.parts, lambda, lambda, 1.0, TAIL_FRACTION * mass, |_| 1.0)?;
        let rhs = self.dual_total(&dual, lambda)? * lambda;
        Ok(report(field, n, a, self.x, lhs, rhs, mass, &dual))
    }

    /// The odd-restricted variant:
    /// Σ_{(c,2)=1} (c/n) W(N(c)/X) =
    /// (c_K/n) X/N(n) Σ_{m | c_K} μ(m)/N(m) Σ_{(c_K/m) | k} G(k, n) W̃(√(N(k)X/(N(c_K)N(n)))).
    pub fn check_odd_restricted(&self, n: &Elt<i64>) -> Result<PoissonReport> {
        let field = &self.field;
        let summer = GaussSummer::new(field, n)?;
        let rs = summer.residue_system();
        let (lhs, mass) = direct_side(field, &self.weight, 1.0, self.x, |c| {
            if field.norm(c) % 2 == 0 {
                0.0
            } else {
                summer.symbol_at(rs.index(&rs.reduce(c))) as f64
            }
        });
        let ck = field.c_k::<i64>();
        let ck_sym = residue_symbol(field, &ck, n)?;
        let divs = c_k_divisors(field)?;
        let nck = field.norm(&ck) as f64;
        let lambda = self.x / (nck * summer.norm() as f64);
        let scale = self.x / summer.norm() as f64;
        let coeff_max: f64 = divs.iter().map(|(_, _, nm)| 1.0 / *nm as f64).sum();
        let coeff = |k: &Elt<i64>| -> f64 {
            divs.iter()
                .filter(|(g, _, _)| field.divides(g, k))
                .map(|(_, mu, nm)| *mu as f64 / *nm as f64)
                .sum()
        };
        let dual = dual_sums(field, &summer, &self.parts, lambda, scale, coeff_max, TAIL_FRACTION * mass, coeff)?;
        let rhs = self.dual_total(&dual, lambda)? * (scale * ck_sym as f64);
        Ok(report(field, n, 1.0, self.x, lhs, rhs, mass, &dual))
    }
}

/// Both sides of the Poisson identity for odd n, a > 0 and X, with W = Φ_X.
pub fn verify_poisson(field: &FieldParams, n: &Elt<i64>, a: f64, x: f64) -> Result<PoissonReport> {
    PoissonVerifier::new(field, x)?.check(n, a)
}

/// As `verify_poisson`, choosing the residue system used for G_K(k, n).
pub fn verify_poisson_with(field: &FieldParams, n: &Elt<i64>, a: f64, x: f64, echelon: Echelon) -> Result<PoissonReport> {
    PoissonVerifier::new(field, x)?.check_with(n, a, echelon)
}

/// Both sides of the odd-restricted variant; see `PoissonVerifier::check_odd_restricted`.
pub fn verify_poisson_odd_restricted(field: &FieldParams, n: &Elt<i64>, x: f64) -> Result<PoissonReport> {
    PoissonVerifier::new(field, x)?.check_odd_restricted(n)
}

fn report(field: &FieldParams, n: &Elt<i64>, a: f64, x: f64, lhs: f64, rhs: Complex64, mass: f64, dual: &Dual) -> PoissonReport {
    let abs_err = (lhs - rhs.re).abs().max(rhs.im.abs());
    PoissonReport {
        d: field.d(),
        n: n.clone(),
        a,
        x,
        lhs,
        rhs: rhs.re,
        rhs_imag: rhs.im,
        abs_err,
        rel_err: abs_err / mass,
        mass,
        k_norm_max: dual.k_norm_max,
        k_terms: dual.k_terms,
        tail_bound: dual.tail_bound,
    }
}

/// Ideal divisors m of c_K with μ_K(m) and N(m): (generator of c_K/m, μ, N(m)).
pub fn c_k_divisors(field: &FieldParams) -> Result<Vec<(Elt<i64>, i64, i64)>> {
    let ck = field.c_k::<i64>();
    let primes: Vec<Elt<i64>> = factor(field, &ck)?.factors.iter().map(|(q, _)| q.clone()).collect();
    let mut out = Vec::new();
    // c_K is square-free, so its divisors are the subsets of its primes
    for mask in 0..(1u32 << primes.len()) {
        let mut m = Elt::one();
        for (i, q) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                m = field.mul(&m, q);
            }
        }
        let mu = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        out.push((field.exact_div(&m, &ck)?, mu, field.norm(&m)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{field_params, SUPPORTED_D};

    #[test]
    fn lattice_points_match_brute_force() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            let pts = lattice_points(&f, 5, 300);
            let mut count = 0;
            for a in -40i64..=40 {
                for b in -40i64..=40 {
                    let n = f.norm(&Elt::new(a, b));
                    if (5..=300).contains(&n) {
                        count += 1;
                    }
                }
            }
            assert_eq!(pts.len(), count, "d={d}");
        }
    }

    #[test]
    fn lattice_tail_bound_holds() {
        for d in [-3, -163] {
            let f = field_params(d).unwrap();
            for alpha in [1.5, 3.0] {
                let k = 50.0;
                let exact: f64 = lattice_points(&f, 51, 200_000).iter().map(|(_, n)| (*n as f64).powf(-alpha)).sum();
                assert!(exact <= lattice_tail(&f, k, alpha), "d={d} α={alpha}");
            }
        }
    }

    #[test]
    fn divisors_of_c_k() {
        let f = field_params(-7).unwrap();
        let dv = c_k_divisors(&f).unwrap();
        assert_eq!(dv.len(), 4);
        let s: f64 = dv.iter().map(|(_, mu, n)| *mu as f64 / *n as f64).sum();
        assert!((s - 0.25).abs() < 1e-15);
        let f = field_params(-2).unwrap();
        assert_eq!(c_k_divisors(&f).unwrap().len(), 2);
        let f = field_params(-11).unwrap();
        assert_eq!(c_k_divisors(&f).unwrap().len(), 2);
    }

    #[test]
    fn unit_modulus_and_small_cases() {
        for d in [-2, -3, -7] {
            let f = field_params(d).unwrap();
            for n in [Elt::new(1i64, 0), Elt::new(3, 0), Elt::new(1, 1), Elt::new(-1, 2)] {
                if f.norm(&n) % 2 == 0 {
                    continue;
                }
                let r = verify_poisson(&f, &n, 1.0, 300.0).unwrap();
                assert!(r.rel_err < 1e-4, "{r:?}");
                let r = verify_poisson_odd_restricted(&f, &n, 300.0).unwrap();
                assert!(r.rel_err < 1e-4, "{r:?}");
            }
        }
    }

    #[test]
    fn residue_system_choice_does_not_matter() {
        let f = field_params(-11).unwrap();
        let n = Elt::new(2i64, 1);
        let a = verify_poisson_with(&f, &n, 2.0, 600.0, Echelon::RationalFirst).unwrap();
        let b = verify_poisson_with(&f, &n, 2.0, 600.0, Echelon::OmegaFirst).unwrap();
        assert!(a.rel_err < 1e-4 && b.rel_err < 1e-4);
        assert!((a.rhs - b.rhs).abs() < 1e-6 * a.mass);
    }
}
