//! Exact arithmetic in the ring of integers Z + ωZ.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::fields::FieldParams;
use crate::num::{int, Int};
use crate::{Error, Result};

/// The element a + b·ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elt<I> {
    pub a: I,
    pub b: I,
}

impl<I: Int> Elt<I> {
    pub fn new(a: I, b: I) -> Self {
        Elt { a, b }
    }

    pub fn from_int(a: I) -> Self {
        Elt { a, b: I::zero() }
    }

    pub fn zero() -> Self {
        Elt::from_int(I::zero())
    }

    pub fn one() -> Self {
        Elt::from_int(I::one())
    }

    pub fn omega() -> Self {
        Elt::new(I::zero(), I::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, k: &I) -> Self {
        Elt::new(self.a.clone() * k.clone(), self.b.clone() * k.clone())
    }

    /// Convert coordinates to another integer type.
    pub fn cast<J: Int>(&self) -> Result<Elt<J>> {
        let conv = |v: &I| -> Result<J> {
            if let Some(x) = v.to_i64() {
                return Ok(int(x));
            }
            if let Some(x) = v.to_i128() {
                return J::from_i128(x).ok_or_else(|| Error::Overflow(v.to_string()));
            }
            Err(Error::Overflow(v.to_string()))
        };
        Ok(Elt::new(conv(&self.a)?, conv(&self.b)?))
    }
}

impl Elt<i64> {
    /// Lift into an arbitrary integer type (always succeeds).
    pub fn lift<J: Int>(&self) -> Elt<J> {
        Elt::new(int(self.a), int(self.b))
    }
}

impl<I: Int> Add for Elt<I> {
    type Output = Elt<I>;
    fn add(self, o: Self) -> Self {
        Elt::new(self.a + o.a, self.b + o.b)
    }
}

impl<'a, I: Int> Add<&'a Elt<I>> for &'a Elt<I> {
    type Output = Elt<I>;
    fn add(self, o: &Elt<I>) -> Elt<I> {
        Elt::new(self.a.clone() + o.a.clone(), self.b.clone() + o.b.clone())
    }
}

impl<I: Int> Sub for Elt<I> {
    type Output = Elt<I>;
    fn sub(self, o: Self) -> Self {
        Elt::new(self.a - o.a, self.b - o.b)
    }
}

impl<'a, I: Int> Sub<&'a Elt<I>> for &'a Elt<I> {
    type Output = Elt<I>;
    fn sub(self, o: &Elt<I>) -> Elt<I> {
        Elt::new(self.a.clone() - o.a.clone(), self.b.clone() - o.b.clone())
    }
}

impl<I: Int> Neg for Elt<I> {
    type Output = Elt<I>;
    fn neg(self) -> Self {
        Elt::new(-self.a, -self.b)
    }
}

impl<I: Int> Neg for &Elt<I> {
    type Output = Elt<I>;
    fn neg(self) -> Elt<I> {
        Elt::new(-self.a.clone(), -self.b.clone())
    }
}

impl<I: Int> fmt::Display for Elt<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, self.b.abs())
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl<I: Int> Serialize for Elt<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<I: Int + FromStr> FromStr for Elt<I> {
    type Err = Error;

    /// Accepts sums of signed terms `k`, `w`, `k*w` and `kw`, e.g. `3-2*w`, `w`, `-7`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = t.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' {
                terms.push(&t[start..i]);
                start = i;
            }
        }
        terms.push(&t[start..]);
        let mut a = I::zero();
        let mut b = I::zero();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coef, is_w) = if let Some(c) = body.strip_suffix("*w") {
                (c, true)
            } else if let Some(c) = body.strip_suffix('w') {
                (c, true)
            } else {
                (body, false)
            };
            let mut v: I = if coef.is_empty() {
                if !is_w {
                    return Err(bad());
                }
                I::one()
            } else {
                if !coef.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(bad());
                }
                coef.parse::<I>().map_err(|_| bad())?
            };
            if neg {
                v = -v;
            }
            if is_w {
                b = b + v;
            } else {
                a = a + v;
            }
        }
        Ok(Elt::new(a, b))
    }
}

/// Which echelon form of the ideal lattice a residue system uses. Both give
/// a complete set of representatives x + yω, 0 <= x < m11, 0 <= y < m22.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Echelon {
    /// Basis {m11, m12 + m22·ω}.
    RationalFirst,
    /// Basis {m22·ω, m11 + m12·ω}.
    OmegaFirst,
}

/// A complete residue system modulo a nonzero element n.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSystem<I> {
    modulus: Elt<I>,
    m11: I,
    m12: I,
    m22: I,
    echelon: Echelon,
}

impl<I: Int> ResidueSystem<I> {
    pub fn modulus(&self) -> &Elt<I> {
        &self.modulus
    }

    /// (m11, m12, m22).
    pub fn hnf(&self) -> (I, I, I) {
        (self.m11.clone(), self.m12.clone(), self.m22.clone())
    }

    pub fn echelon(&self) -> Echelon {
        self.echelon
    }

    /// Number of residues, N(n).
    pub fn size(&self) -> I {
        self.m11.clone() * self.m22.clone()
    }

    pub fn len(&self) -> usize {
        self.size().to_usize().expect("residue system too large to enumerate")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The representative congruent to x.
    pub fn reduce(&self, x: &Elt<I>) -> Elt<I> {
        match self.echelon {
            Echelon::RationalFirst => {
                let t = x.b.div_floor(&self.m22);
                let a = x.a.clone() - t.clone() * self.m12.clone();
                let b = x.b.clone() - t * self.m22.clone();
                Elt::new(a.mod_floor(&self.m11), b)
            }
            Echelon::OmegaFirst => {
                let t = x.a.div_floor(&self.m11);
                let a = x.a.clone() - t.clone() * self.m11.clone();
                let b = x.b.clone() - t * self.m12.clone();
                Elt::new(a, b.mod_floor(&self.m22))
            }
        }
    }

    pub fn is_zero_mod(&self, x: &Elt<I>) -> bool {
        self.reduce(x).is_zero()
    }

    /// Position of a reduced representative in enumeration order.
    pub fn index(&self, r: &Elt<I>) -> usize {
        (r.b.clone() * self.m11.clone() + r.a.clone())
            .to_usize()
            .expect("index of a reduced representative")
    }

    /// The representative at position i.
    pub fn rep(&self, i: usize) -> Elt<I> {
        let m11 = self.m11.to_usize().unwrap();
        Elt::new(I::from_usize(i % m11).unwrap(), I::from_usize(i / m11).unwrap())
    }

    /// All representatives, x fastest.
    pub fn iter(&self) -> impl Iterator<Item = Elt<I>> + '_ {
        (0..self.len()).map(move |i| self.rep(i))
    }
}

impl FieldParams {
    pub fn add<I: Int>(&self, x: &Elt<I>, y: &Elt<I>) -> Elt<I> {
        x + y
    }

    pub fn sub<I: Int>(&self, x: &Elt<I>, y: &Elt<I>) -> Elt<I> {
        x - y
    }

    pub fn neg<I: Int>(&self, x: &Elt<I>) -> Elt<I> {
        -x
    }

    pub fn mul<I: Int>(&self, x: &Elt<I>, y: &Elt<I>) -> Elt<I> {
        let (p, q) = self.norm_coeffs();
        let bb = x.b.clone() * y.b.clone();
        let a = x.a.clone() * y.a.clone() - int::<I>(q) * bb.clone();
        let b = x.a.clone() * y.b.clone() + x.b.clone() * y.a.clone() + int::<I>(p) * bb;
        Elt::new(a, b)
    }

    pub fn mul_omega<I: Int>(&self, x: &Elt<I>) -> Elt<I> {
        self.mul(x, &Elt::omega())
    }

    pub fn pow<I: Int>(&self, x: &Elt<I>, e: u32) -> Elt<I> {
        let mut r = Elt::one();
        for _ in 0..e {
            r = self.mul(&r, x);
        }
        r
    }

    pub fn norm<I: Int>(&self, x: &Elt<I>) -> I {
        let (p, q) = self.norm_coeffs();
        x.a.clone() * x.a.clone() + int::<I>(p) * x.a.clone() * x.b.clone() + int::<I>(q) * x.b.clone() * x.b.clone()
    }

    /// Trace x + x̄.
    pub fn trace<I: Int>(&self, x: &Elt<I>) -> I {
        let (p, _) = self.norm_coeffs();
        int::<I>(2) * x.a.clone() + int::<I>(p) * x.b.clone()
    }

    pub fn conj<I: Int>(&self, x: &Elt<I>) -> Elt<I> {
        let (p, _) = self.norm_coeffs();
        Elt::new(x.a.clone() + int::<I>(p) * x.b.clone(), -x.b.clone())
    }

    /// True iff x lies in the ideal (m). m must be nonzero.
    pub fn divides<I: Int>(&self, m: &Elt<I>, x: &Elt<I>) -> bool {
        let n = self.norm(m);
        assert!(!n.is_zero(), "divisibility by zero");
        let w = self.mul(x, &self.conj(m));
        w.a.is_multiple_of(&n) && w.b.is_multiple_of(&n)
    }

    /// The quotient x / m.
    pub fn exact_div<I: Int>(&self, m: &Elt<I>, x: &Elt<I>) -> Result<Elt<I>> {
        let n = self.norm(m);
        if n.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let w = self.mul(x, &self.conj(m));
        if w.a.is_multiple_of(&n) && w.b.is_multiple_of(&n) {
            Ok(Elt::new(w.a / n.clone(), w.b / n))
        } else {
            Err(Error::NotDivisible { divisor: m.to_string(), dividend: x.to_string() })
        }
    }

    pub fn is_unit<I: Int>(&self, x: &Elt<I>) -> bool {
        self.norm(x).is_one()
    }

    /// Coprime to 2, i.e. odd norm.
    pub fn is_odd<I: Int>(&self, x: &Elt<I>) -> bool {
        self.norm(x).is_odd()
    }

    pub fn residue_system<I: Int>(&self, n: &Elt<I>) -> Result<ResidueSystem<I>> {
        self.residue_system_with(n, Echelon::RationalFirst)
    }

    pub fn residue_system_with<I: Int>(&self, n: &Elt<I>, echelon: Echelon) -> Result<ResidueSystem<I>> {
        if n.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let v1 = n.clone();
        let v2 = self.mul_omega(n);
        let (m11, m12, m22) = match echelon {
            Echelon::RationalFirst => {
                let g = v1.b.extended_gcd(&v2.b);
                let row = v1.scale(&g.x) + v2.scale(&g.y);
                let flat = v1.scale(&(v2.b.clone() / g.gcd.clone())) - v2.scale(&(v1.b.clone() / g.gcd.clone()));
                debug_assert!(flat.b.is_zero());
                let (m22, row) = if g.gcd.is_negative() { (-g.gcd, -row) } else { (g.gcd, row) };
                let m11 = flat.a.abs();
                (m11.clone(), row.a.mod_floor(&m11), m22)
            }
            Echelon::OmegaFirst => {
                let g = v1.a.extended_gcd(&v2.a);
                let row = v1.scale(&g.x) + v2.scale(&g.y);
                let flat = v1.scale(&(v2.a.clone() / g.gcd.clone())) - v2.scale(&(v1.a.clone() / g.gcd.clone()));
                debug_assert!(flat.a.is_zero());
                let (m11, row) = if g.gcd.is_negative() { (-g.gcd, -row) } else { (g.gcd, row) };
                let m22 = flat.b.abs();
                (m11, row.b.mod_floor(&m22), m22)
            }
        };
        Ok(ResidueSystem { modulus: n.clone(), m11, m12, m22, echelon })
    }

    /// x^e reduced modulo the residue system's modulus, by square-and-multiply.
    pub fn pow_mod<I: Int>(&self, x: &Elt<I>, e: &I, rs: &ResidueSystem<I>) -> Elt<I> {
        assert!(!e.is_negative(), "negative exponent");
        let mut result = rs.reduce(&Elt::one());
        let mut base = rs.reduce(x);
        let mut e = e.clone();
        let two = int::<I>(2);
        while !e.is_zero() {
            if e.is_odd() {
                result = rs.reduce(&self.mul(&result, &base));
            }
            e = e / two.clone();
            if !e.is_zero() {
                base = rs.reduce(&self.mul(&base, &base));
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{field_params, SUPPORTED_D};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let f7 = field_params(-7).unwrap();
        assert_eq!(f7.norm(&Elt::<i64>::omega()), 2);
        assert_eq!(f7.norm(&Elt::<i64>::zero()), 0);
        let f2 = field_params(-2).unwrap();
        assert_eq!(f2.norm(&Elt::new(1i64, 1)), 3);
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            let w = Elt::<i64>::omega();
            let ww = f.mul(&w, &w);
            if d.rem_euclid(4) == 1 {
                assert_eq!(ww, Elt::new(-(1 - d) / 4, 1));
                assert_eq!(f.conj(&Elt::new(3, 5)), Elt::new(8, -5));
            } else {
                assert_eq!(ww, Elt::from_int(d));
            }
        }
    }

    #[test]
    fn divisibility_examples() {
        let f2 = field_params(-2).unwrap();
        let p = Elt::new(1i64, 1);
        assert!(f2.divides(&p, &Elt::from_int(3)));
        assert_eq!(f2.exact_div(&p, &Elt::from_int(3)).unwrap(), Elt::new(1, -1));
        let f3 = field_params(-3).unwrap();
        assert!(!f3.divides(&Elt::from_int(2), &Elt::new(1i64, 2)));
        assert!(matches!(
            f3.exact_div(&Elt::from_int(2), &Elt::new(1i64, 2)),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn residue_system_examples() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            assert_eq!(f.residue_system(&Elt::from_int(3i64)).unwrap().len(), 9);
            assert_eq!(f.residue_system(&Elt::from_int(1i64)).unwrap().len(), 1);
            assert_eq!(f.residue_system(&Elt::<i64>::zero()), Err(Error::ZeroModulus));
        }
        let f2 = field_params(-2).unwrap();
        let rs = f2.residue_system(&Elt::new(1i64, 1)).unwrap();
        assert_eq!(rs.len(), 3);
        // √-2 ≡ -1 modulo 1 + √-2
        assert_eq!(rs.reduce(&Elt::omega()), rs.reduce(&Elt::from_int(-1)));
    }

    #[test]
    fn residue_systems_are_complete_and_distinct() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            for a in -6i64..=6 {
                for b in -6i64..=6 {
                    let n = Elt::new(a, b);
                    if n.is_zero() {
                        continue;
                    }
                    for ech in [Echelon::RationalFirst, Echelon::OmegaFirst] {
                        let rs = f.residue_system_with(&n, ech).unwrap();
                        assert_eq!(rs.size(), f.norm(&n));
                        let mut seen = vec![false; rs.len()];
                        for r in rs.iter() {
                            assert_eq!(rs.reduce(&r), r);
                            seen[rs.index(&r)] = true;
                        }
                        assert!(seen.iter().all(|&s| s));
                        // reps are pairwise incongruent: difference never divisible
                        for x in rs.iter().take(20) {
                            for y in rs.iter().take(20) {
                                assert_eq!(x == y, f.divides(&n, &(&x - &y)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pow_mod_examples_and_fermat() {
        let f3 = field_params(-3).unwrap();
        let p = Elt::new(1i64, 2);
        let rs = f3.residue_system(&p).unwrap();
        let x = Elt::new(5i64, -3);
        assert_eq!(f3.pow_mod(&x, &0, &rs), rs.reduce(&Elt::one()));
        assert_eq!(f3.pow_mod(&x, &1, &rs), rs.reduce(&x));
        let r = f3.pow_mod(&Elt::from_int(2), &3, &rs);
        assert!(r == rs.reduce(&Elt::one()) || r == rs.reduce(&Elt::from_int(-1)));
        // 2 is a cube... and the Euler value agrees with the square table
        let squares: std::collections::HashSet<_> = rs.iter().map(|t| rs.reduce(&f3.mul(&t, &t))).collect();
        let is_sq = squares.contains(&rs.reduce(&Elt::from_int(2)));
        assert_eq!(is_sq, r == rs.reduce(&Elt::one()));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3+2*w", "-1-4*w", "0+0*w", "12+1*w"] {
            let e: Elt<i64> = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert_eq!("w".parse::<Elt<i64>>().unwrap(), Elt::new(0, 1));
        assert_eq!("-w".parse::<Elt<i64>>().unwrap(), Elt::new(0, -1));
        assert_eq!("7".parse::<Elt<i64>>().unwrap(), Elt::new(7, 0));
        assert_eq!(" 1 + 3w ".parse::<Elt<i64>>().unwrap(), Elt::new(1, 3));
        assert_eq!("-2*w+5".parse::<Elt<BigInt>>().unwrap(), Elt::new(BigInt::from(5), BigInt::from(-2)));
        for bad in ["", "+", "1+", "x", "2*v", "1..2", "w*3"] {
            assert!(bad.parse::<Elt<i64>>().is_err(), "{bad}");
        }
    }

    #[test]
    fn norm_is_multiplicative_on_a_box() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            for a1 in (-50i64..=50).step_by(7) {
                for b1 in (-50i64..=50).step_by(5) {
                    for a2 in (-50i64..=50).step_by(9) {
                        for b2 in (-50i64..=50).step_by(11) {
                            let x = Elt::new(a1, b1);
                            let y = Elt::new(a2, b2);
                            assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reduction_is_a_ring_homomorphism(
            di in 0usize..8, na in -30i64..30, nb in -30i64..30,
            xa in -1000i64..1000, xb in -1000i64..1000,
            ya in -1000i64..1000, yb in -1000i64..1000,
        ) {
            let f = field_params(SUPPORTED_D[di]).unwrap();
            let n = Elt::new(na, nb);
            prop_assume!(!n.is_zero());
            let x = Elt::new(xa, xb);
            let y = Elt::new(ya, yb);
            for ech in [Echelon::RationalFirst, Echelon::OmegaFirst] {
                let rs = f.residue_system_with(&n, ech).unwrap();
                prop_assert_eq!(rs.reduce(&f.mul(&x, &y)), rs.reduce(&f.mul(&rs.reduce(&x), &rs.reduce(&y))));
                prop_assert_eq!(rs.reduce(&(&x + &y)), rs.reduce(&(&rs.reduce(&x) + &rs.reduce(&y))));
                prop_assert!(f.divides(&n, &(&x - &rs.reduce(&x))));
            }
        }

        #[test]
        fn conj_and_division(di in 0usize..8, xa in -500i64..500, xb in -500i64..500, ya in -500i64..500, yb in -500i64..500) {
            let f = field_params(SUPPORTED_D[di]).unwrap();
            let x = Elt::new(xa, xb);
            let y = Elt::new(ya, yb);
            let xc = f.conj(&x);
            prop_assert_eq!(f.mul(&x, &xc), Elt::from_int(f.norm(&x)));
            prop_assert_eq!(f.conj(&f.mul(&x, &y)), f.mul(&xc, &f.conj(&y)));
            prop_assume!(!x.is_zero());
            prop_assert_eq!(f.exact_div(&x, &f.mul(&x, &y)).unwrap(), y.clone());
            let big = f.mul(&x.lift::<BigInt>(), &y.lift::<BigInt>());
            prop_assert_eq!(big, f.mul(&x, &y).lift::<BigInt>());
        }
    }
}
