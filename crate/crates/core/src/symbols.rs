//! Quadratic residue symbols, the i^w map, reciprocity, and the family
//! characters χ^(-4 c_K c).

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{Elt, ResidueSystem};
use crate::fields::FieldParams;
use crate::num::{int, jacobi_int, Int};
use crate::primes::{factor, Factorization};
use crate::{Error, Result};

/// Value of a quadratic residue symbol: -1, 0 or 1.
pub type SymbolValue = i8;

/// A fourth root of unity i^k, k taken mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IPower(pub u8);

impl IPower {
    pub fn from_exponent<I: Int>(w: &I) -> Self {
        IPower(w.mod_floor(&int(4)).to_u8().unwrap())
    }

    pub fn pow<I: Int>(self, e: &I) -> Self {
        IPower::from_exponent(&(int::<I>(self.0 as i64) * e.mod_floor(&int(4))))
    }

    pub fn mul(self, o: IPower) -> Self {
        IPower((self.0 + o.0) % 4)
    }

    pub fn from_sign(s: i8) -> Self {
        match s {
            1 => IPower(0),
            -1 => IPower(2),
            _ => panic!("sign must be ±1"),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

fn require_odd_modulus<I: Int>(field: &FieldParams, n: &Elt<I>) -> Result<()> {
    if n.is_zero() || field.norm(n).is_even() {
        return Err(Error::EvenModulus(n.to_string()));
    }
    Ok(())
}

/// (a/ϖ) for an odd prime ϖ by Euler's criterion a^((N(ϖ)-1)/2) mod ϖ.
pub fn residue_symbol_prime<I: Int>(field: &FieldParams, a: &Elt<I>, rs: &ResidueSystem<I>) -> SymbolValue {
    let n = rs.size();
    let e = (n - I::one()) / int(2);
    let r = field.pow_mod(a, &e, rs);
    if r.is_zero() {
        0
    } else if r == rs.reduce(&Elt::one()) {
        1
    } else if r == rs.reduce(&Elt::from_int(int(-1))) {
        -1
    } else {
        panic!("Euler criterion gave {r}: modulus {} is not prime", rs.modulus())
    }
}

/// (a/n) for odd n, multiplicative over the factorization of n, 1 for units.
pub fn residue_symbol<I: Int>(field: &FieldParams, a: &Elt<I>, n: &Elt<I>) -> Result<SymbolValue> {
    require_odd_modulus(field, n)?;
    let f = factor(field, n)?;
    Ok(residue_symbol_factored(field, a, &f))
}

/// (a/n) given the factorization of n.
pub fn residue_symbol_factored<I: Int>(field: &FieldParams, a: &Elt<I>, f: &Factorization<I>) -> SymbolValue {
    let mut s = 1i8;
    for (q, e) in &f.factors {
        let rs = field.residue_system(q).expect("prime is nonzero");
        let v = residue_symbol_prime(field, a, &rs);
        if v == 0 {
            return 0;
        }
        if e % 2 == 1 {
            s *= v;
        }
    }
    s
}

/// χ(n) = i^w with w = (b² - a + 2)c + (a² - b + 2)d + ad, where n = a + bω and
/// nω = c + dω. Depends only on n mod 4.
pub fn chi_iw<I: Int>(field: &FieldParams, n: &Elt<I>) -> Result<IPower> {
    if field.norm(n).is_even() {
        return Err(Error::EvenArgument(n.to_string()));
    }
    let (a, b) = (n.a.clone(), n.b.clone());
    let nw = field.mul_omega(n);
    let (c, d) = (nw.a, nw.b);
    let two = int::<I>(2);
    let w = (b.clone() * b.clone() - a.clone() + two.clone()) * c + (a.clone() * a.clone() - b + two) * d.clone() + a * d;
    Ok(IPower::from_exponent(&w))
}

/// m ≡ 1 modulo 4O_K.
pub fn is_one_mod_four<I: Int>(m: &Elt<I>) -> bool {
    let four = int::<I>(4);
    (m.a.clone() - I::one()).is_multiple_of(&four) && m.b.is_multiple_of(&four)
}

/// Both sides of the reciprocity law for one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReciprocityCheck {
    /// (n/m)(m/n).
    pub lhs: SymbolValue,
    /// (-1)^(..)·χ(m)^(..)·χ(n)^(..).
    pub rhs: IPower,
    pub general_holds: bool,
    /// Whether m or n is ≡ 1 mod 4, so the product must be 1.
    pub specialization_applies: bool,
    pub specialization_holds: bool,
}

/// Evaluate the general law and, when m or n ≡ 1 mod 4, its specialization.
pub fn check_reciprocity<I: Int>(field: &FieldParams, m: &Elt<I>, n: &Elt<I>) -> Result<ReciprocityCheck> {
    require_odd_modulus(field, m)?;
    require_odd_modulus(field, n)?;
    let fm = factor(field, m)?;
    let fn_ = factor(field, n)?;
    check_reciprocity_factored(field, m, &fm, n, &fn_)
}

/// As `check_reciprocity`, with both factorizations supplied.
pub fn check_reciprocity_factored<I: Int>(
    field: &FieldParams,
    m: &Elt<I>,
    fm: &Factorization<I>,
    n: &Elt<I>,
    fn_: &Factorization<I>,
) -> Result<ReciprocityCheck> {
    let a = residue_symbol_factored(field, n, fm);
    let b = residue_symbol_factored(field, m, fn_);
    if a == 0 || b == 0 {
        return Err(Error::NotCoprime(m.to_string(), n.to_string()));
    }
    let lhs = a * b;
    let nm = field.norm(m);
    let nn = field.norm(n);
    let hm = (nm.clone() - I::one()) / int(2);
    let hn = (nn.clone() - I::one()) / int(2);
    let sign = if (hm.clone() * hn.clone()).is_odd() { IPower(2) } else { IPower(0) };
    let rhs = sign
        .mul(chi_iw(field, m)?.pow(&(nm * hn)))
        .mul(chi_iw(field, n)?.pow(&(nn * hm)));
    let specialization_applies = is_one_mod_four(m) || is_one_mod_four(n);
    Ok(ReciprocityCheck {
        lhs,
        rhs,
        general_holds: IPower::from_sign(lhs) == rhs,
        specialization_applies,
        specialization_holds: !specialization_applies || lhs == 1,
    })
}

/// (-1/n) = (-1)^((N(n)-1)/2).
pub fn supplement_minus_one<I: Int>(field: &FieldParams, n: &Elt<I>) -> Result<SymbolValue> {
    let nn = field.norm(n);
    if nn.is_even() {
        return Err(Error::EvenArgument(n.to_string()));
    }
    Ok(if ((nn - I::one()) / int(2)).is_even() { 1 } else { -1 })
}

/// (2/n) = (2/N(n)) as a Jacobi symbol.
pub fn supplement_two<I: Int>(field: &FieldParams, n: &Elt<I>) -> Result<SymbolValue> {
    let nn = field.norm(n);
    if nn.is_even() {
        return Err(Error::EvenArgument(n.to_string()));
    }
    Ok(jacobi_int(&int(2), &nn))
}

/// (m/a) = (N(m)/a) for an odd rational integer a.
pub fn rational_modulus_symbol<I: Int>(field: &FieldParams, m: &Elt<I>, a: &I) -> Result<SymbolValue> {
    if a.is_even() {
        return Err(Error::EvenModulus(a.to_string()));
    }
    Ok(jacobi_int(&field.norm(m), &a.abs()))
}

/// A witness that χ is not induced from the modulus M/𝔭.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimitivityWitness {
    pub prime: Elt<i64>,
    pub smaller_modulus: Elt<i64>,
    pub n: Option<Elt<i64>>,
}

/// The quadratic character χ^(-4c_K c)(n) = (-4c_K c / n).
#[derive(Debug, Clone)]
pub struct KroneckerCharacter {
    field: FieldParams,
    c: Elt<i64>,
    modulus: Elt<i64>,
    modulus_primes: Vec<Elt<i64>>,
    c_k_is_two: bool,
}

pub fn kronecker_char(field: &FieldParams, c: &Elt<i64>) -> Result<KroneckerCharacter> {
    if c.is_zero() || field.norm(c) % 2 == 0 {
        return Err(Error::EvenC(c.to_string()));
    }
    let four_ck = field.c_k::<i64>().scale(&4);
    let modulus = field.mul(&four_ck, c);
    let mut modulus_primes: Vec<Elt<i64>> = factor(field, &modulus)?.factors.into_iter().map(|(g, _)| g).collect();
    modulus_primes.dedup();
    Ok(KroneckerCharacter {
        field: field.clone(),
        c: c.clone(),
        modulus,
        modulus_primes,
        c_k_is_two: field.c_k::<i64>() == Elt::from_int(2),
    })
}

impl KroneckerCharacter {
    pub fn c(&self) -> &Elt<i64> {
        &self.c
    }

    pub fn modulus(&self) -> &Elt<i64> {
        &self.modulus
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    /// Distinct primes dividing 4c_K c.
    pub fn modulus_primes(&self) -> &[Elt<i64>] {
        &self.modulus_primes
    }

    /// χ(n): 0 unless n is coprime to 4c_K c.
    pub fn eval(&self, n: &Elt<i64>) -> SymbolValue {
        let f = &self.field;
        if n.is_zero() || f.norm(n) % 2 == 0 {
            return 0;
        }
        let fac = factor(f, n).expect("nonzero");
        let c_part = residue_symbol_factored(f, &self.c, &fac);
        if c_part == 0 {
            return 0;
        }
        let minus_one = supplement_minus_one(f, n).expect("odd");
        let ck_part = if self.c_k_is_two {
            supplement_two(f, n).expect("odd")
        } else {
            residue_symbol_factored(f, &f.c_k(), &fac)
        };
        minus_one * ck_part * c_part
    }

    fn coprime_to_modulus(&self, n: &Elt<i64>) -> bool {
        !self.modulus_primes.iter().any(|q| self.field.divides(q, n))
    }

    /// For every prime 𝔭 | 4c_K c, search n = 1 + (4c_K c/𝔭)·t over t mod 𝔭 for
    /// an n coprime to the modulus with χ(n) = -1. χ is primitive iff every
    /// prime gets a witness.
    pub fn primitivity_witnesses(&self) -> Vec<PrimitivityWitness> {
        let f = &self.field;
        self.modulus_primes
            .iter()
            .map(|q| {
                let smaller = f.exact_div(q, &self.modulus).expect("prime divides the modulus");
                let rs = f.residue_system(q).expect("nonzero");
                let n = rs
                    .iter()
                    .map(|t| &Elt::one() + &f.mul(&smaller, &t))
                    .find(|n| self.coprime_to_modulus(n) && self.eval(n) == -1);
                PrimitivityWitness { prime: q.clone(), smaller_modulus: smaller, n }
            })
            .collect()
    }

    pub fn is_primitive(&self) -> bool {
        self.primitivity_witnesses().iter().all(|w| w.n.is_some())
    }
}
