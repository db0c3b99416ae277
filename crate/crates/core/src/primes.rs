//! Norm equations, factorization, primary generators and the square-free
//! family of characters.

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::analysis::weight::SmoothWeight;
use crate::arith::Elt;
use crate::fields::{FieldParams, Splitting};
use crate::num::{factor_int, factor_with_spf, int, is_prime, jacobi_int, primes_upto, spf_table, sqrt_mod_prime, Int};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PrimeKind {
    Split,
    Inert,
}

/// A primary generator together with the rational prime below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(bound(serialize = "I: Int + Serialize"))]
pub struct PrimaryPrime<I = i64> {
    pub gen: Elt<I>,
    pub p: I,
    pub norm: I,
    pub kind: PrimeKind,
}

/// Brute-force search for an element of norm p, smallest |b| first.
pub fn solve_norm<I: Int>(field: &FieldParams, p: &I) -> Option<Elt<I>> {
    let (tr, _) = field.norm_coeffs();
    let abs_disc: I = int(-field.disc());
    let four_p = int::<I>(4) * p.clone();
    // N = (a + tr·b/2)² + |D|·b²/4
    let bmax = (four_p.clone() / abs_disc.clone()).sqrt();
    let mut b = I::zero();
    while b <= bmax {
        let disc = four_p.clone() - abs_disc.clone() * b.clone() * b.clone();
        let s = disc.sqrt();
        if s.clone() * s.clone() == disc {
            let num = s - int::<I>(tr) * b.clone();
            if num.is_even() {
                return Some(Elt::new(num / int(2), b));
            }
        }
        b = b + I::one();
    }
    None
}

/// An element of norm p for a prime p that splits or ramifies, via a square
/// root of D_K modulo p and Lagrange reduction of the ideal lattice.
pub fn prime_above(field: &FieldParams, p: u64) -> Option<Elt<i64>> {
    if p == 2 {
        return solve_norm(field, &2i64);
    }
    let (tr, _) = field.norm_coeffs();
    let s = sqrt_mod_prime(field.disc(), p)? as i128;
    let pi = p as i128;
    // a root r of x² - tr·x + q, so that ω ≡ r modulo one prime above p
    let inv2 = (pi + 1) / 2;
    let r = ((tr as i128 + s) * inv2).rem_euclid(pi);
    // lattice {x + yω : x + y·r ≡ 0 mod p} has basis p and -r + ω
    let norm = |v: (i128, i128)| -> i128 {
        let (t, q) = field.norm_coeffs();
        v.0 * v.0 + t as i128 * v.0 * v.1 + q as i128 * v.1 * v.1
    };
    let mut u = (pi, 0i128);
    let mut v = (-r, 1i128);
    loop {
        if norm(v) < norm(u) {
            std::mem::swap(&mut u, &mut v);
        }
        let nu = norm(u);
        let two_b = norm((u.0 + v.0, u.1 + v.1)) - nu - norm(v);
        // m = round(two_b / (2 nu))
        let m = (2 * two_b + 2 * nu).div_euclid(4 * nu);
        if m == 0 {
            break;
        }
        v = (v.0 - m * u.0, v.1 - m * u.1);
    }
    if norm(u) == pi {
        Some(Elt::new(u.0 as i64, u.1 as i64))
    } else {
        None
    }
}

/// The primary condition for a prime of degree one, or a positive inert
/// rational prime.
pub fn is_primary<I: Int>(field: &FieldParams, x: &Elt<I>) -> bool {
    if x.b.is_zero() {
        return x.a.is_positive();
    }
    let four = int::<I>(4);
    match field.quarter() {
        Some(q) => {
            if x.b.mod_floor(&four).is_one() {
                return true;
            }
            x.b.is_even() && (x.a.clone() + x.b.clone() * int(q)).mod_floor(&four) == int(3)
        }
        None => {
            let mut b = x.b.clone();
            while b.is_even() {
                b = b / int(2);
            }
            b.mod_floor(&four).is_one()
        }
    }
}

fn associates<I: Int>(field: &FieldParams, x: &Elt<I>) -> Vec<Elt<I>> {
    field.units::<I>().iter().map(|u| field.mul(u, x)).collect()
}

fn smallest<I: Int>(mut v: Vec<Elt<I>>) -> Elt<I> {
    v.sort_by(|x, y| {
        (x.b.abs(), x.a.abs(), x.b.clone(), x.a.clone()).cmp(&(y.b.abs(), y.a.abs(), y.b.clone(), y.a.clone()))
    });
    v.swap_remove(0)
}

/// Fixed associate for primes that have no primary generator: a > 0, or a = 0
/// and b > 0; among several such (only for d = -3) the one with the smallest
/// |b|, then |a|.
pub fn canonical_associate<I: Int>(field: &FieldParams, x: &Elt<I>) -> Elt<I> {
    let cands: Vec<_> = associates(field, x)
        .into_iter()
        .filter(|y| y.a.is_positive() || (y.a.is_zero() && y.b.is_positive()))
        .collect();
    smallest(cands)
}

/// Whether the rational prime p admits primary generators.
pub fn is_eligible(field: &FieldParams, p: u64) -> bool {
    !field.is_excluded_prime(p)
}

/// The primary associate of a prime x.
///
/// For d = -3 three associates (one per ± pair) satisfy the congruence
/// conditions; they differ by cube roots of unity, which are quadratic
/// residues modulo every eligible prime, so the choice does not affect any
/// residue symbol or Gauss sum. The one with the smallest |b|, then |a|, is
/// returned.
pub fn primary_normalize<I: Int>(field: &FieldParams, x: &Elt<I>) -> Result<PrimaryPrime<I>> {
    let n = field.norm(x);
    let not_prime = || Error::NotPrime(x.to_string());
    if n <= I::one() {
        return Err(not_prime());
    }
    let nu = n.to_u64().ok_or_else(|| Error::Overflow(n.to_string()))?;
    if is_prime(nu) {
        if !is_eligible(field, nu) {
            return Err(Error::NotPrimaryEligible(x.to_string()));
        }
        let cands: Vec<_> = associates(field, x).into_iter().filter(|y| is_primary(field, y)).collect();
        debug_assert!(!cands.is_empty());
        return Ok(PrimaryPrime { gen: smallest(cands), p: n.clone(), norm: n, kind: PrimeKind::Split });
    }
    let p = nu.sqrt();
    if p * p == nu && is_prime(p) && p % 2 == 1 && field.splitting_type(p) == Splitting::Inert
        || p == 2 && nu == 4 && field.two_splitting() == Splitting::Inert
    {
        if !is_eligible(field, p) {
            return Err(Error::NotPrimaryEligible(x.to_string()));
        }
        let pi: I = I::from_u64(p).unwrap();
        return Ok(PrimaryPrime { gen: Elt::from_int(pi.clone()), p: pi, norm: n, kind: PrimeKind::Inert });
    }
    Err(not_prime())
}

fn normalized_prime(field: &FieldParams, x: &Elt<i64>) -> PrimaryPrime<i64> {
    primary_normalize(field, x).expect("eligible prime")
}

/// Every primary prime of norm at most `y`, one per prime ideal, ordered by
/// norm and then by generator. Primes dividing the excluded modulus are
/// skipped.
pub fn primary_primes_upto(field: &FieldParams, y: u64) -> Vec<PrimaryPrime<i64>> {
    let mut out = Vec::new();
    if y < 2 {
        return out;
    }
    for p in primes_upto(y) {
        if !is_eligible(field, p) {
            continue;
        }
        match field.splitting_type(p) {
            Splitting::Split => {
                let g = prime_above(field, p).expect("split prime has an element of norm p");
                let a = normalized_prime(field, &g);
                let b = normalized_prime(field, &field.conj(&g));
                let (a, b) = if (a.gen.a, a.gen.b) <= (b.gen.a, b.gen.b) { (a, b) } else { (b, a) };
                out.push(a);
                out.push(b);
            }
            Splitting::Inert => {
                if let Some(n) = p.checked_mul(p).filter(|&n| n <= y) {
                    out.push(PrimaryPrime { gen: Elt::from_int(p as i64), p: p as i64, norm: n as i64, kind: PrimeKind::Inert });
                }
            }
            Splitting::Ramified => {}
        }
    }
    out.sort_by_key(|q| (q.norm, q.gen.a, q.gen.b));
    out
}

/// n = unit · ∏ prime^exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<I> {
    pub unit: Elt<I>,
    pub factors: Vec<(Elt<I>, u32)>,
}

impl<I: Int> Factorization<I> {
    pub fn product(&self, field: &FieldParams) -> Elt<I> {
        let mut r = self.unit.clone();
        for (q, e) in &self.factors {
            r = field.mul(&r, &field.pow(q, *e));
        }
        r
    }
}

/// Normalized generator of the prime ideal above p containing x (x of norm p
/// or the rational prime for inert p).
fn normalize_any<I: Int>(field: &FieldParams, x: &Elt<I>) -> Elt<I> {
    match primary_normalize(field, x) {
        Ok(pp) => pp.gen,
        Err(_) => canonical_associate(field, x),
    }
}

fn element_of_norm<I: Int>(field: &FieldParams, p: &I) -> Elt<I> {
    if let Some(pu) = p.to_u64() {
        if let Some(e) = prime_above(field, pu) {
            return e.lift();
        }
    }
    solve_norm(field, p).expect("split or ramified prime")
}

/// Factor a nonzero element into normalized primes and a unit. Primes come
/// out ordered by the rational prime below, the two primes above a split p in
/// generator order.
pub fn factor<I: Int>(field: &FieldParams, n: &Elt<I>) -> Result<Factorization<I>> {
    if n.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let mut rest = n.clone();
    let mut factors = Vec::new();
    for (p, e) in factor_int(&field.norm(n)) {
        match splitting_of(field, &p) {
            Splitting::Inert => {
                let k = e / 2;
                let g = Elt::from_int(p.clone());
                for _ in 0..k {
                    rest = field.exact_div(&g, &rest)?;
                }
                factors.push((g, k));
            }
            Splitting::Ramified => {
                let g = normalize_any(field, &element_of_norm(field, &p));
                for _ in 0..e {
                    rest = field.exact_div(&g, &rest)?;
                }
                factors.push((g, e));
            }
            Splitting::Split => {
                let g1 = normalize_any(field, &element_of_norm(field, &p));
                let g2 = normalize_any(field, &field.conj(&g1));
                let (g1, g2) = if (&g1.a, &g1.b) <= (&g2.a, &g2.b) { (g1, g2) } else { (g2, g1) };
                for g in [g1, g2] {
                    let mut k = 0;
                    while field.divides(&g, &rest) {
                        rest = field.exact_div(&g, &rest)?;
                        k += 1;
                    }
                    if k > 0 {
                        factors.push((g, k));
                    }
                }
            }
        }
    }
    debug_assert!(field.is_unit(&rest));
    Ok(Factorization { unit: rest, factors })
}

/// Square-freeness read off the factorization of N(c): an inert p may occur
/// once, a ramified prime once, and a split p with p² ‖ N(c) only as 𝔭𝔭̄ = (p).
pub fn is_squarefree<I: Int>(field: &FieldParams, c: &Elt<I>) -> bool {
    if c.is_zero() {
        return false;
    }
    let n = field.norm(c);
    factor_int(&n).into_iter().all(|(p, e)| squarefree_at(field, c, &p, e))
}

/// Decomposition type of any rational prime, 2 included.
pub fn splitting_of<I: Int>(field: &FieldParams, p: &I) -> Splitting {
    if *p == int(2) {
        return field.two_splitting();
    }
    match jacobi_int(&int::<I>(field.disc()), p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

fn squarefree_at<I: Int>(field: &FieldParams, c: &Elt<I>, p: &I, e: u32) -> bool {
    match splitting_of(field, p) {
        Splitting::Inert => e <= 2,
        Splitting::Ramified => e <= 1,
        Splitting::Split => e <= 1 || (e == 2 && c.a.is_multiple_of(p) && c.b.is_multiple_of(p)),
    }
}

/// A member of the family: c odd and square-free with X <= N(c) <= 2X.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyElement {
    pub c: Elt<i64>,
    pub norm: u64,
    pub weight: f64,
}

/// Elements with lo <= N(c) <= hi that are odd and square-free, ordered by
/// (norm, a, b), weighted by Φ(N(c)/x). Disjoint ranges give disjoint shards.
pub fn family_in_range(field: &FieldParams, lo: u64, hi: u64, x: u64, weight: &SmoothWeight) -> Vec<FamilyElement> {
    let spf = spf_table(hi as usize);
    family_with_spf(field, lo, hi, x, weight, &spf)
}

fn family_with_spf(field: &FieldParams, lo: u64, hi: u64, x: u64, weight: &SmoothWeight, spf: &[u32]) -> Vec<FamilyElement> {
    let (tr, q) = field.norm_coeffs();
    let abs_disc = (-field.disc()) as u64;
    let bmax = ((4 * hi) / abs_disc).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        // N = (a + tr·b/2)² + |D| b²/4 <= hi
        let rest = 4 * hi as i128 - abs_disc as i128 * (b as i128) * (b as i128);
        if rest < 0 {
            continue;
        }
        let r = (rest as u128).sqrt() as i64 + 2;
        let centre = -(tr * b) / 2;
        for a in centre - r..=centre + r {
            let n = a as i128 * a as i128 + (tr * a) as i128 * b as i128 + q as i128 * b as i128 * b as i128;
            if n < lo as i128 || n > hi as i128 || n % 2 == 0 {
                continue;
            }
            let n = n as u64;
            let c = Elt::new(a, b);
            if factor_with_spf(n, spf).into_iter().all(|(p, e)| squarefree_at(field, &c, &(p as i64), e)) {
                out.push(FamilyElement { c, norm: n, weight: weight.eval(n as f64 / x as f64) });
            }
        }
    }
    out.sort_by_key(|e| (e.norm, e.c.a, e.c.b));
    out
}

/// The family C_K(X): odd square-free c with X <= N(c) <= 2X, counted as
/// elements (c and -c separately).
pub fn family(field: &FieldParams, x: u64, weight: &SmoothWeight) -> Result<Vec<FamilyElement>> {
    if x < 16 {
        return Err(Error::XTooSmall(x));
    }
    Ok(family_in_range(field, x, 2 * x, x, weight))
}

/// Σ μ(m)/N(m) over ideal divisors m of (c_K), exactly.
pub fn m_sum(field: &FieldParams) -> Ratio<i64> {
    let f = factor(field, &field.c_k::<i64>()).expect("c_K is nonzero");
    let mut r = Ratio::one();
    for (g, _) in f.factors {
        r *= Ratio::one() - Ratio::new(1, field.norm(&g));
    }
    r
}

/// ∏(1 - N(𝔭)^-2) over the odd prime ideals of norm at most `bound`.
pub fn l_sum(field: &FieldParams, bound: u64) -> f64 {
    let mut terms = Vec::new();
    for p in primes_upto(bound).into_iter().skip(1) {
        let pf = p as f64;
        match field.splitting_type(p) {
            Splitting::Split => {
                let t = (1.0 - pf.powi(-2)).ln();
                terms.push(t);
                terms.push(t);
            }
            Splitting::Ramified => terms.push((1.0 - pf.powi(-2)).ln()),
            Splitting::Inert => {
                if p.saturating_mul(p) <= bound {
                    terms.push((1.0 - pf.powi(-4)).ln());
                }
            }
        }
    }
    crate::num::pairwise_sum(&terms).exp()
}

/// Truncation of the odd l-sum used by default.
pub const L_SUM_BOUND: u64 = 1_000_000;

/// X·A_K·(m-sum)·(l-sum), the main term for the number of family elements.
pub fn family_count_asymptotic(field: &FieldParams, x: u64) -> f64 {
    x as f64 * field.a_k() * m_sum(field).to_f64().unwrap() * l_sum(field, L_SUM_BOUND)
}
