//! Explicit-formula prime sums over the family, the density comparison, the
//! secondary main term and the family count.

use std::collections::HashMap;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{usp_integral, SmoothWeight, TestFunction};
use crate::arith::Elt;
use crate::fields::FieldParams;
use crate::num::{jacobi_reduced, pairwise_sum};
use crate::primes::{family, l_sum, m_sum, primary_primes_upto, FamilyElement, PrimeKind, L_SUM_BOUND};
use crate::{Error, Result};

/// Largest prime norm the prime sums may enumerate.
pub const NORM_BUDGET: f64 = 1e8;

/// Largest X accepted by the family count.
pub const COUNT_BUDGET: u64 = 1_000_000;

/// Family elements per work unit. Fixed, so the summation order does not
/// depend on the thread count.
const CHUNK: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSumStatistic {
    pub c: Elt<i64>,
    pub norm: u64,
    pub weight: f64,
    pub value: f64,
}

/// One primary prime with everything that does not depend on c.
#[derive(Debug, Clone, Copy)]
struct PrimeEntry {
    p: u64,
    /// ω ≡ r mod ϖ for a split prime; None for an inert one.
    root: Option<u64>,
    /// (-c_K/ϖ)·log N(ϖ)/√N(ϖ)·φ̂(log N(ϖ)/log X).
    coeff: f64,
    /// (-1/ϖ) = -1.
    odd_units: bool,
}

impl PrimeEntry {
    /// (c/ϖ) by reduction to F_p, or (N(c)/p) for inert p.
    #[inline]
    fn symbol(&self, field: &FieldParams, c: &Elt<i64>) -> i8 {
        let p = self.p;
        let v = match self.root {
            // p <= NORM_BUDGET, so the product stays below 2^64
            Some(r) => (reduce(c.a, p) + reduce(c.b, p) * r) % p,
            None => (field.norm(c) as u64) % p,
        };
        jacobi_reduced(v, p)
    }
}

/// Prime data for one field, test function and X, shared by every c.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    field: FieldParams,
    x: u64,
    entries: Vec<PrimeEntry>,
}

/// Errors unless X^σ is within the enumeration budget. Checked before any
/// allocation.
pub fn check_budget(x: u64, sigma: f64) -> Result<f64> {
    let y = (x as f64).powf(sigma);
    if y > NORM_BUDGET {
        return Err(Error::BudgetExceeded { needed: y, cap: NORM_BUDGET });
    }
    Ok(y)
}

impl PrimeTable {
    pub fn new(field: &FieldParams, tf: &TestFunction, x: u64) -> Result<Self> {
        if x < 16 {
            return Err(Error::XTooSmall(x));
        }
        let y = check_budget(x, tf.sigma)?;
        let log_x = (x as f64).ln();
        let neg_ck = field.neg(&field.c_k::<i64>());
        let mut entries = Vec::new();
        for q in primary_primes_upto(field, y.floor() as u64) {
            let p = q.p as u64;
            let n = q.norm as f64;
            let root = match q.kind {
                PrimeKind::Split => {
                    // ϖ = a + bω with p ∤ b, so ω ≡ -a/b mod ϖ
                    let pi = p as i64;
                    let inv_b = mod_inverse(q.gen.b.rem_euclid(pi), pi);
                    Some(((-q.gen.a).rem_euclid(pi) as i128 * inv_b as i128 % pi as i128) as u64)
                }
                PrimeKind::Inert => None,
            };
            let mut e = PrimeEntry { p, root, coeff: 0.0, odd_units: false };
            let eps = e.symbol(field, &neg_ck) as f64;
            e.odd_units = e.symbol(field, &Elt::from_int(-1)) == -1;
            e.coeff = eps * n.ln() / n.sqrt() * tf.phi_hat(n.ln() / log_x);
            if e.coeff != 0.0 {
                entries.push(e);
            }
        }
        Ok(PrimeTable { field: field.clone(), x, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// For each c in `cs` (best sorted by (b, a)), the partial sums of
    /// coeff·(c/ϖ) over primes with (-1/ϖ) = 1 and with (-1/ϖ) = -1.
    fn split_sums(&self, cs: &[Elt<i64>]) -> Vec<(f64, f64)> {
        let n = cs.len();
        let norms: Vec<u64> = cs.iter().map(|c| self.field.norm(c) as u64).collect();
        // Neumaier-compensated accumulators; index 2i for (-1/ϖ) = 1, 2i + 1 otherwise
        let mut sum = vec![0.0f64; 2 * n];
        let mut comp = vec![0.0f64; 2 * n];
        let mut add = |j: usize, s: i8, coeff: f64| {
            if s == 0 {
                return;
            }
            let v = if s > 0 { coeff } else { -coeff };
            let t = sum[j] + v;
            comp[j] += if sum[j].abs() >= v.abs() { (sum[j] - t) + v } else { (v - t) + sum[j] };
            sum[j] = t;
        };
        for e in &self.entries {
            let p = e.p;
            let off = e.odd_units as usize;
            match e.root {
                Some(r) => {
                    // along a run of consecutive a with fixed b, a + br steps by 1
                    let mut prev: Option<(i64, i64, u64)> = None;
                    for (i, c) in cs.iter().enumerate() {
                        let v = match prev {
                            Some((pa, pb, pv)) if pb == c.b && pa + 1 == c.a => {
                                if pv + 1 == p {
                                    0
                                } else {
                                    pv + 1
                                }
                            }
                            // p <= NORM_BUDGET, so the product stays below 2^64
                            _ => (reduce(c.a, p) + reduce(c.b, p) * r) % p,
                        };
                        prev = Some((c.a, c.b, v));
                        add(2 * i + off, jacobi_reduced(v, p), e.coeff);
                    }
                }
                None => {
                    for (i, m) in norms.iter().enumerate() {
                        add(2 * i + off, jacobi_reduced(m % p, p), e.coeff);
                    }
                }
            }
        }
        (0..n).map(|i| (sum[2 * i] + comp[2 * i], sum[2 * i + 1] + comp[2 * i + 1])).collect()
    }

    pub fn prime_sum(&self, c: &Elt<i64>) -> f64 {
        let (even, odd) = self.split_sums(std::slice::from_ref(c))[0];
        (even + odd) / (self.x as f64).ln()
    }

    /// S for each family element, in family order. Associates share the work:
    /// (u/ϖ) depends only on (-1/ϖ) and whether u is a square, so
    /// S_{uc} = A_c ± B_c.
    pub fn family_sums(&self, fam: &[FamilyElement]) -> Vec<PrimeSumStatistic> {
        let units = self.field.units::<i64>();
        let square_units: Vec<Elt<i64>> = units.iter().map(|u| self.field.mul(u, u)).collect();
        let mut reps: Vec<Elt<i64>> = Vec::new();
        let mut index: HashMap<(i64, i64), usize> = HashMap::new();
        let mut class = Vec::with_capacity(fam.len());
        for e in fam {
            // representative: the associate with the smallest (b, a)
            let (rep, unit) = units
                .iter()
                .map(|u| (self.field.mul(u, &e.c), u))
                .min_by_key(|(x, _)| (x.b, x.a))
                .expect("units are nonempty");
            // c = u⁻¹·rep; u⁻¹ is a square iff u is
            let sign = if square_units.contains(unit) { 1.0 } else { -1.0 };
            let k = *index.entry((rep.b, rep.a)).or_insert_with(|| {
                reps.push(rep.clone());
                reps.len() - 1
            });
            class.push((k, sign));
        }
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&i| (reps[i].b, reps[i].a));
        let sorted: Vec<Elt<i64>> = order.iter().map(|&i| reps[i].clone()).collect();
        let parts: Vec<(f64, f64)> = sorted.par_chunks(CHUNK).flat_map_iter(|ch| self.split_sums(ch)).collect();
        let mut by_rep = vec![(0.0, 0.0); reps.len()];
        for (pos, &i) in order.iter().enumerate() {
            by_rep[i] = parts[pos];
        }
        let log_x = (self.x as f64).ln();
        fam.iter()
            .zip(class)
            .map(|(e, (k, sign))| {
                let (even, odd) = by_rep[k];
                PrimeSumStatistic { c: e.c.clone(), norm: e.norm, weight: e.weight, value: (even + sign * odd) / log_x }
            })
            .collect()
    }
}

/// x mod p in [0, p), skipping the division when |x| < p.
#[inline]
fn reduce(x: i64, p: u64) -> u64 {
    if x.unsigned_abs() < p {
        if x < 0 {
            (x + p as i64) as u64
        } else {
            x as u64
        }
    } else {
        x.rem_euclid(p as i64) as u64
    }
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1) = (p, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p)
}

/// S(χ^(-4c_K c), X; φ̂) for one c.
pub fn prime_sum(field: &FieldParams, c: &Elt<i64>, tf: &TestFunction, x: u64) -> Result<PrimeSumStatistic> {
    let table = PrimeTable::new(field, tf, x)?;
    let norm = field.norm(c) as u64;
    let weight = SmoothWeight::new(x)?.eval(norm as f64 / x as f64);
    Ok(PrimeSumStatistic { c: c.clone(), norm, weight, value: table.prime_sum(c) })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub d: i64,
    #[serde(rename = "X")]
    pub x: u64,
    pub tf: TestFunction,
    /// Elements c (c and -c counted separately).
    pub family_size: usize,
    /// Ideals (c): family_size / #units.
    pub family_ideals: usize,
    pub weighted_family_mass: f64,
    pub prime_count: usize,
    /// Σ Φ_c S_c / Σ Φ_c.
    pub avg_s: f64,
    /// ∫φ - ½∫φ̂ - 2·avg_S.
    pub density_estimate: f64,
    pub usp_reference: f64,
    /// Σ Φ_c S_c·log X / (X log X) = Σ Φ_c S_c / X.
    pub secondary_main_term_lhs: f64,
    /// -(A_K/4)·(m-sum)·(l-sum)·∫(1 - χ_[-1,1])φ̂.
    pub secondary_main_term_rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime: Option<f64>,
}

/// A density run with its per-c statistics.
#[derive(Debug, Clone)]
pub struct DensityRun {
    pub report: DensityReport,
    pub per_c: Vec<PrimeSumStatistic>,
}

fn check_experiment_support(tf: &TestFunction) -> Result<()> {
    if !(tf.sigma > 0.0 && tf.sigma < 2.0) {
        return Err(Error::BadSupport(tf.sigma));
    }
    Ok(())
}

/// -(A_K/4)·(m-sum)·(l-sum)·∫(1 - χ_[-1,1])φ̂. Zero for σ ≤ 1.
pub fn secondary_main_term_rhs(field: &FieldParams, tf: &TestFunction) -> f64 {
    let outer = tf.outer_mass();
    if outer == 0.0 {
        return 0.0;
    }
    -field.a_k() / 4.0 * m_sum(field).to_f64().expect("small ratio") * l_sum(field, L_SUM_BOUND) * outer
}

pub fn run_density(field: &FieldParams, x: u64, tf: &TestFunction) -> Result<DensityRun> {
    check_experiment_support(tf)?;
    let start = Instant::now();
    let table = PrimeTable::new(field, tf, x)?;
    let weight = SmoothWeight::new(x)?;
    let fam = family(field, x, &weight)?;
    let per_c = table.family_sums(&fam);
    let weighted: Vec<f64> = per_c.iter().map(|s| s.weight * s.value).collect();
    let masses: Vec<f64> = per_c.iter().map(|s| s.weight).collect();
    let total = pairwise_sum(&weighted);
    let mass = pairwise_sum(&masses);
    let avg_s = total / mass;
    let report = DensityReport {
        d: field.d(),
        x,
        tf: tf.clone(),
        family_size: fam.len(),
        family_ideals: fam.len() / field.units::<i64>().len(),
        weighted_family_mass: mass,
        prime_count: table.len(),
        avg_s,
        density_estimate: tf.phi_hat_zero() - 0.5 * tf.phi_zero() - 2.0 * avg_s,
        usp_reference: usp_integral(tf),
        secondary_main_term_lhs: total / x as f64,
        secondary_main_term_rhs: secondary_main_term_rhs(field, tf),
        runtime: Some(start.elapsed().as_secs_f64()),
    };
    Ok(DensityRun { report, per_c })
}

/// The family-averaged density comparison at one X.
pub fn run_density_experiment(field: &FieldParams, x: u64, tf: &TestFunction) -> Result<DensityReport> {
    Ok(run_density(field, x, tf)?.report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SecondaryTermCheck {
    pub d: i64,
    #[serde(rename = "X")]
    pub x: u64,
    pub sigma: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    /// |lhs - rhs|/|rhs|; absent when rhs = 0 (σ ≤ 1).
    pub rel_err: Option<f64>,
}

/// Compares Σ_c Φ_c Σ_ϖ (…) / (X log X) with its predicted limit.
pub fn secondary_main_term_check(field: &FieldParams, x: u64, tf: &TestFunction) -> Result<SecondaryTermCheck> {
    check_experiment_support(tf)?;
    check_budget(x, tf.sigma)?;
    let r = run_density_experiment(field, x, tf)?;
    let (lhs, rhs) = (r.secondary_main_term_lhs, r.secondary_main_term_rhs);
    Ok(SecondaryTermCheck {
        d: field.d(),
        x,
        sigma: tf.sigma,
        lhs,
        rhs,
        abs_err: (lhs - rhs).abs(),
        rel_err: if rhs == 0.0 { None } else { Some((lhs - rhs).abs() / rhs.abs()) },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyCountCheck {
    pub d: i64,
    #[serde(rename = "X")]
    pub x: u64,
    /// #{c odd square-free, X ≤ N(c) ≤ 2X}.
    pub empirical: usize,
    pub weighted: f64,
    pub asymptotic: f64,
    pub rel_err: f64,
    pub weighted_rel_err: f64,
}

pub fn family_count_check(field: &FieldParams, x: u64) -> Result<FamilyCountCheck> {
    if x > COUNT_BUDGET {
        return Err(Error::BudgetExceeded { needed: x as f64, cap: COUNT_BUDGET as f64 });
    }
    let w = SmoothWeight::new(x)?;
    let fam = family(field, x, &w)?;
    let weighted = pairwise_sum(&fam.iter().map(|e| e.weight).collect::<Vec<_>>());
    let asymptotic = crate::primes::family_count_asymptotic(field, x);
    Ok(FamilyCountCheck {
        d: field.d(),
        x,
        empirical: fam.len(),
        weighted,
        asymptotic,
        rel_err: (fam.len() as f64 - asymptotic).abs() / asymptotic,
        weighted_rel_err: (weighted - asymptotic).abs() / asymptotic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{fejer_squared_test_function, fejer_test_function};
    use crate::fields::{field_params, SUPPORTED_D};
    use crate::primes::is_squarefree;
    use crate::symbols::{kronecker_char, residue_symbol};

    #[test]
    fn hot_path_symbol_matches_euler_criterion() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            let tf = fejer_test_function(1.5).unwrap();
            let t = PrimeTable::new(&f, &tf, 400).unwrap();
            let primes = primary_primes_upto(&f, 400f64.powf(1.5) as u64);
            for (k, c) in [Elt::new(3i64, 1), Elt::new(-5, 2), Elt::new(7, -4), Elt::new(11, 0)].iter().enumerate() {
                for e in t.entries.iter().skip(k).step_by(7) {
                    let q = primes.iter().find(|q| q.p as u64 == e.p && e.symbol(&f, &q.gen) == 0).unwrap();
                    assert_eq!(e.symbol(&f, c), residue_symbol(&f, c, &q.gen).unwrap(), "d={d} c={c} ϖ={}", q.gen);
                }
            }
        }
    }

    /// Independent sum: primes found by trial division, each primary prime
    /// recovered by brute-force search, χ from the Kronecker character.
    fn brute_prime_sum(f: &FieldParams, c: &Elt<i64>, tf: &TestFunction, x: u64) -> f64 {
        let y = (x as f64).powf(tf.sigma);
        let chi = kronecker_char(f, c).unwrap();
        let mut total = 0.0;
        for p in (3..=y as u64).filter(|&p| (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0)) {
            for q in primary_primes_upto(f, y as u64).into_iter().filter(|q| q.p as u64 == p) {
                let n = q.norm as f64;
                total += n.ln() / n.sqrt() * chi.eval(&q.gen) as f64 * tf.phi_hat(n.ln() / (x as f64).ln());
            }
        }
        total / (x as f64).ln()
    }

    #[test]
    fn prime_sum_matches_brute_force() {
        let f = field_params(-2).unwrap();
        let c = Elt::new(1i64, 3);
        assert!(is_squarefree(&f, &c));
        for tf in [fejer_test_function(1.0).unwrap(), fejer_test_function(1.7).unwrap()] {
            let s = prime_sum(&f, &c, &tf, 100).unwrap().value;
            let b = brute_prime_sum(&f, &c, &tf, 100);
            assert!((s - b).abs() < 1e-12, "{s} vs {b}");
        }
        let f = field_params(-7).unwrap();
        let tf = fejer_squared_test_function(1.8).unwrap();
        let c = Elt::new(1i64, 2);
        assert_eq!(f.norm(&c), 11);
        let s = prime_sum(&f, &c, &tf, 200).unwrap().value;
        assert!((s - brute_prime_sum(&f, &c, &tf, 200)).abs() < 1e-12);
    }

    #[test]
    fn associate_classes_match_direct_sums() {
        for d in [-2, -3, -7, -43] {
            let f = field_params(d).unwrap();
            let tf = fejer_test_function(1.5).unwrap();
            let t = PrimeTable::new(&f, &tf, 300).unwrap();
            let fam = family(&f, 300, &SmoothWeight::new(300).unwrap()).unwrap();
            for s in t.family_sums(&fam) {
                let direct = t.prime_sum(&s.c);
                assert!((s.value - direct).abs() < 1e-12, "d={d} c={}: {} vs {direct}", s.c, s.value);
            }
        }
    }

    #[test]
    fn vanishing_test_function_gives_zero() {
        let f = field_params(-3).unwrap();
        // φ̂ vanishes once the support ends below the smallest log N(ϖ)/log X
        let tf = fejer_test_function(0.05).unwrap();
        assert_eq!(prime_sum(&f, &Elt::new(5, 1), &tf, 1000).unwrap().value, 0.0);
    }

    #[test]
    fn square_c_gives_positive_mertens_growth() {
        // c = 9 makes (c/ϖ) = 1 off 3, so S is a positive sum growing with σ
        let f = field_params(-7).unwrap();
        let c = Elt::new(9i64, 0);
        let mut last = 0.0;
        for sigma in [0.5, 1.0, 1.5] {
            let tf = fejer_test_function(sigma).unwrap();
            let t = PrimeTable::new(&f, &tf, 10_000).unwrap();
            let neg_ck = f.neg(&f.c_k::<i64>());
            // undo the (-c_K/ϖ) factor to get the principal sum
            let s: f64 = t.entries.iter().map(|e| e.coeff * e.symbol(&f, &neg_ck) as f64 * e.symbol(&f, &c).abs() as f64).sum();
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn sign_of_c_twists_by_minus_one() {
        let f = field_params(-11).unwrap();
        let tf = fejer_test_function(1.2).unwrap();
        let t = PrimeTable::new(&f, &tf, 300).unwrap();
        let minus_one = f.neg(&Elt::<i64>::one());
        for e in &t.entries {
            let c = Elt::new(4i64, 3);
            assert_eq!(e.symbol(&f, &f.neg(&c)), e.symbol(&f, &c) * e.symbol(&f, &minus_one));
        }
    }

    #[test]
    fn linear_in_the_test_function() {
        let f = field_params(-19).unwrap();
        let c = Elt::new(3i64, 2);
        let t1 = PrimeTable::new(&f, &fejer_test_function(1.5).unwrap(), 500).unwrap();
        let t2 = PrimeTable::new(&f, &fejer_squared_test_function(1.5).unwrap(), 500).unwrap();
        let (s1, s2) = (t1.prime_sum(&c), t2.prime_sum(&c));
        // the combination 2φ̂₁ - 3φ̂₂ evaluated termwise
        let mut both = t1.clone();
        for (e, g) in both.entries.iter_mut().zip(&t2.entries) {
            assert_eq!(e.p, g.p);
            e.coeff = 2.0 * e.coeff - 3.0 * g.coeff;
        }
        assert!((both.prime_sum(&c) - (2.0 * s1 - 3.0 * s2)).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let f = field_params(-3).unwrap();
        let tf = fejer_test_function(1.9).unwrap();
        assert!(matches!(PrimeTable::new(&f, &tf, 100_000_000), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(run_density_experiment(&f, 1000, &fejer_test_function(2.0).unwrap()), Err(Error::BadSupport(_))));
    }

    #[test]
    fn small_density_run_is_consistent() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            let tf = fejer_test_function(0.8).unwrap();
            let run = run_density(&f, 1000, &tf).unwrap();
            let r = &run.report;
            assert!(r.family_size > 0);
            assert_eq!(r.secondary_main_term_rhs, 0.0);
            assert!(r.weighted_family_mass <= r.family_size as f64);
            // order of the family does not matter beyond rounding
            let mut w: Vec<f64> = run.per_c.iter().map(|s| s.weight * s.value).collect();
            w.reverse();
            let m: Vec<f64> = run.per_c.iter().rev().map(|s| s.weight).collect();
            let avg = pairwise_sum(&w) / pairwise_sum(&m);
            assert!((avg - r.avg_s).abs() <= 1e-12 * r.avg_s.abs().max(1e-3));
        }
    }

    #[test]
    fn secondary_rhs_examples() {
        let f = field_params(-2).unwrap();
        assert_eq!(secondary_main_term_rhs(&f, &fejer_test_function(0.9).unwrap()), 0.0);
        // Fejér at σ = 2 has outer mass 1/4
        let tf = fejer_test_function(2.0f64).unwrap();
        assert!((tf.outer_mass() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn family_count_small() {
        let f = field_params(-2).unwrap();
        let r = family_count_check(&f, 10_000).unwrap();
        assert!(r.weighted <= r.empirical as f64);
        assert!(r.rel_err < 0.1);
        assert!(family_count_check(&f, 2_000_000).is_err());
    }
}
