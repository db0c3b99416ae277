//! Constant tables for the eight imaginary quadratic fields of class number one
//! that the family is built over.

use serde::Serialize;

use crate::arith::Elt;
use crate::num::{int, kronecker_odd_prime, Int};
use crate::{Error, Result};

/// Supported values of d, in the order reports list them.
pub const SUPPORTED_D: [i64; 8] = [-2, -3, -7, -11, -19, -43, -67, -163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OmegaCase {
    /// ω = (1 + √d)/2, d ≡ 1 mod 4.
    HalfOnePlusSqrtD,
    /// ω = √d.
    SqrtD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Everything attached to one field Q(√d).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldParams {
    d: i64,
    disc: i64,
    omega_case: OmegaCase,
    trace: i64,
    norm_q: i64,
    c_k: (i64, i64),
    a_k: f64,
    two_splitting: Splitting,
}

pub fn field_params(d: i64) -> Result<FieldParams> {
    if !SUPPORTED_D.contains(&d) {
        return Err(Error::UnsupportedField(d));
    }
    let fp = if d.rem_euclid(4) == 1 {
        FieldParams {
            d,
            disc: d,
            omega_case: OmegaCase::HalfOnePlusSqrtD,
            trace: 1,
            norm_q: (1 - d) / 4,
            c_k: (2, 0),
            a_k: 2.0 * std::f64::consts::PI / ((-d) as f64).sqrt(),
            two_splitting: if d.rem_euclid(8) == 1 {
                Splitting::Split
            } else {
                Splitting::Inert
            },
        }
    } else {
        FieldParams {
            d,
            disc: 4 * d,
            omega_case: OmegaCase::SqrtD,
            trace: 0,
            norm_q: -d,
            c_k: (0, 1),
            a_k: std::f64::consts::PI / ((-d) as f64).sqrt(),
            two_splitting: Splitting::Ramified,
        }
    };
    Ok(fp)
}

impl FieldParams {
    pub fn d(&self) -> i64 {
        self.d
    }

    /// The discriminant D_K.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega_case(&self) -> OmegaCase {
        self.omega_case
    }

    /// (p, q) with N(a + bω) = a² + p·ab + q·b².
    pub fn norm_coeffs(&self) -> (i64, i64) {
        (self.trace, self.norm_q)
    }

    /// (1 - d)/4 for d ≡ 1 mod 4, None otherwise.
    pub fn quarter(&self) -> Option<i64> {
        match self.omega_case {
            OmegaCase::HalfOnePlusSqrtD => Some(self.norm_q),
            OmegaCase::SqrtD => None,
        }
    }

    /// c_K: √-2 for d = -2 and 2 otherwise.
    pub fn c_k<I: Int>(&self) -> Elt<I> {
        Elt::new(int(self.c_k.0), int(self.c_k.1))
    }

    /// Area constant A_K (lattice points of norm at most x grow like A_K·x).
    pub fn a_k(&self) -> f64 {
        self.a_k
    }

    pub fn two_splitting(&self) -> Splitting {
        self.two_splitting
    }

    pub fn sqrt_abs_disc(&self) -> f64 {
        ((-self.disc) as f64).sqrt()
    }

    /// All units of the ring of integers.
    pub fn units<I: Int>(&self) -> Vec<Elt<I>> {
        let mut u = vec![Elt::from_int(int(1)), Elt::from_int(int(-1))];
        if self.d == -3 {
            // ω is a primitive sixth root of unity, ω² = ω - 1
            for (a, b) in [(0, 1), (0, -1), (-1, 1), (1, -1)] {
                u.push(Elt::new(int(a), int(b)));
            }
        }
        u
    }

    /// How an odd rational prime decomposes, by the Kronecker symbol (D_K/p).
    pub fn splitting_type(&self, p: u64) -> Splitting {
        match kronecker_odd_prime(self.disc, p) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }

    /// 2·|D_K|·(1-d)/4 for d ≡ 1 mod 4 and 2·|D_K| otherwise. Primes dividing it
    /// have no primary generator and are left out of every prime sum.
    pub fn excluded_modulus(&self) -> u64 {
        let base = 2 * self.disc.unsigned_abs();
        match self.quarter() {
            Some(q) => base * q as u64,
            None => base,
        }
    }

    pub fn is_excluded_prime(&self, p: u64) -> bool {
        self.excluded_modulus() % p == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_examples() {
        let f = field_params(-7).unwrap();
        assert_eq!(f.omega_case(), OmegaCase::HalfOnePlusSqrtD);
        assert_eq!(f.disc(), -7);
        assert_eq!(f.norm_coeffs(), (1, 2));
        assert_eq!(f.two_splitting(), Splitting::Split);

        let f = field_params(-2).unwrap();
        assert_eq!(f.disc(), -8);
        assert_eq!(f.c_k::<i64>(), Elt::new(0, 1));
        assert_eq!(f.two_splitting(), Splitting::Ramified);

        assert_eq!(field_params(-1), Err(Error::UnsupportedField(-1)));
        assert_eq!(field_params(-5), Err(Error::UnsupportedField(-5)));
    }

    #[test]
    fn invariants_hold_for_every_field() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            let expected_disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
            assert_eq!(f.disc(), expected_disc);
            assert_eq!(f.norm(&f.c_k::<i64>()), if d == -2 { 2 } else { 4 });
            let scaled = f.a_k() * ((-d) as f64).sqrt() / std::f64::consts::PI;
            let want = if d.rem_euclid(4) == 1 { 2.0 } else { 1.0 };
            assert!((scaled - want).abs() < 1e-12);
            for u in f.units::<i64>() {
                assert_eq!(f.norm(&u), 1);
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let f = field_params(-3).unwrap();
        assert_eq!(f.splitting_type(7), Splitting::Split);
        assert_eq!(f.splitting_type(3), Splitting::Ramified);
        let f = field_params(-2).unwrap();
        assert_eq!(f.splitting_type(5), Splitting::Inert);
    }

    #[test]
    fn two_splitting_matches_norm_search() {
        for d in SUPPORTED_D {
            let f = field_params(d).unwrap();
            // 2 is split or ramified iff some element has norm 2
            let mut norm_two = false;
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    if f.norm(&Elt::new(a, b)) == 2 {
                        norm_two = true;
                    }
                }
            }
            let expect = match d.rem_euclid(8) {
                1 => Splitting::Split,
                5 => Splitting::Inert,
                _ => Splitting::Ramified,
            };
            assert_eq!(f.two_splitting(), expect);
            assert_eq!(norm_two, expect != Splitting::Inert);
            if expect == Splitting::Ramified {
                // ramified: 2 is a unit times the square of the prime above it
                let s = f.c_k::<i64>();
                assert_eq!(f.mul(&s, &s), Elt::from_int(-2));
            }
        }
    }
}
