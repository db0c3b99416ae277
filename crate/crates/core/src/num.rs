//! Scalar traits and rational-integer helpers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Exact integer coordinates of ring elements. Implemented for `i64`, `i128`
/// and `BigInt`.
pub trait Int:
    Integer + Signed + Roots + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: Integer + Signed + Roots + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Floating point scalars for the analytic routines.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub fn int<I: Int>(v: i64) -> I {
    I::from_i64(v).expect("every Int holds an i64")
}

#[inline]
pub fn real<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("f64 constant")
}

pub fn to_i64<I: Int>(v: &I) -> crate::Result<i64> {
    v.to_i64().ok_or_else(|| crate::Error::Overflow(v.to_string()))
}

pub fn to_u64<I: Int>(v: &I) -> crate::Result<u64> {
    v.to_u64().ok_or_else(|| crate::Error::Overflow(v.to_string()))
}

/// Jacobi symbol (a/n) for odd n > 0.
pub fn jacobi_int<I: Int>(a: &I, n: &I) -> i8 {
    assert!(n.is_positive() && n.is_odd(), "Jacobi symbol needs an odd positive modulus");
    let two = int::<I>(2);
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        while a.is_even() {
            a = a / two.clone();
            let r = n.mod_floor(&int(8));
            if r == int(3) || r == int(5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&int(4)) == int(3) && n.mod_floor(&int(4)) == int(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Jacobi symbol (a/n), odd n > 0, on machine words.
#[inline]
pub fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n & 1 == 1);
    let a = a.rem_euclid(n as i64) as u64;
    jacobi_u64(a, n)
}

/// Jacobi symbol for 0 <= a and odd n, binary algorithm.
#[inline]
pub fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    let mut t = 1i8;
    a %= n;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z & 1 == 1 && (n & 7 == 3 || n & 7 == 5) {
            t = -t;
        }
        if a & n & 2 != 0 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Jacobi symbol (a/n) for 0 <= a < n and odd n, by shifts and subtractions
/// only. Faster than `jacobi_u64` in hot loops.
#[inline]
pub fn jacobi_reduced(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n & 1 == 1 && a < n);
    // only bit 0 of `flip` matters
    let mut flip = 0u64;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        // (2/n) = -1 iff n ≡ ±3 mod 8
        flip ^= (z as u64) & ((n >> 1) ^ (n >> 2));
        if a < n {
            // both odd: flip iff a ≡ n ≡ 3 mod 4
            flip ^= (a & n) >> 1;
            std::mem::swap(&mut a, &mut n);
        }
        a -= n;
    }
    if n == 1 {
        1 - 2 * (flip & 1) as i8
    } else {
        0
    }
}

/// Kronecker symbol (D/p) for an odd prime p, as used for splitting laws.
pub fn kronecker_odd_prime(disc: i64, p: u64) -> i8 {
    jacobi(disc, p)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization, primes in increasing order.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factor a positive integer of any supported width by trial division.
pub fn factor_int<I: Int>(n: &I) -> Vec<(I, u32)> {
    if let Some(v) = n.to_u64() {
        return factor_u64(v)
            .into_iter()
            .map(|(p, e)| (I::from_u64(p).unwrap(), e))
            .collect();
    }
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p: I = int(2);
    while p.clone() * p.clone() <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n = n / p.clone();
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p = if p == int(2) { int(3) } else { p + int(2) };
    }
    if n > I::one() {
        out.push((n, 1));
    }
    out
}

/// Primes up to and including `limit` by the sieve of Eratosthenes.
pub fn primes_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for 0..=limit (entries 0 and 1 are 0).
pub fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Factor n using a smallest-prime-factor table covering n.
pub fn factor_with_spf(mut n: u64, spf: &[u32]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n as usize] as u64;
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

/// Square root of n modulo an odd prime p (Tonelli-Shanks), if n is a square.
pub fn sqrt_mod_prime(n: i64, p: u64) -> Option<u64> {
    let n = n.rem_euclid(p as i64) as u64;
    if n == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(n);
    }
    if pow_mod_u64(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    if s == 1 {
        return Some(pow_mod_u64(n, (p + 1) / 4, p));
    }
    let mut z = 2;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(n, q, p);
    let mut r = pow_mod_u64(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Modular inverse of a modulo m (gcd must be 1).
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let g = num_integer::Integer::extended_gcd(&a.rem_euclid(m), &m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m))
}

/// Pairwise summation, fixed association order regardless of threading.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
