//! Randomized properties of the public API across all eight fields.

use proptest::prelude::*;

use qhecke::gauss::gauss_g;
use qhecke::primes::{factor, is_primary, primary_primes_upto};
use qhecke::symbols::residue_symbol;
use qhecke::{field_params, Elt, OkElt, SUPPORTED_D};

fn elt(a: i64, b: i64) -> Elt<i64> {
    Elt::new(a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative(i in 0usize..8, a in -300i64..300, b in -300i64..300, c in -300i64..300, e in -300i64..300) {
        let f = field_params(SUPPORTED_D[i]).unwrap();
        let (x, y) = (elt(a, b), elt(c, e));
        prop_assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
    }

    #[test]
    fn factorization_multiplies_back(i in 0usize..8, a in -400i64..400, b in -200i64..200) {
        prop_assume!(a != 0 || b != 0);
        let f = field_params(SUPPORTED_D[i]).unwrap();
        let x = elt(a, b);
        prop_assert_eq!(factor(&f, &x).unwrap().product(&f), x);
    }

    #[test]
    fn symbol_is_multiplicative_in_the_top(i in 0usize..8, a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50, k in 0usize..40) {
        let f = field_params(SUPPORTED_D[i]).unwrap();
        let primes = primary_primes_upto(&f, 400);
        let n = &primes[k % primes.len()].gen;
        let (x, y) = (elt(a, b), elt(c, e));
        let lhs = residue_symbol(&f, &f.mul(&x, &y), n).unwrap();
        let rhs = residue_symbol(&f, &x, n).unwrap() * residue_symbol(&f, &y, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn big_and_small_coordinates_agree(i in 0usize..8, a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let f = field_params(SUPPORTED_D[i]).unwrap();
        let small = elt(a, b);
        let big: OkElt = small.lift();
        prop_assert_eq!(f.norm(&big), f.norm(&small).into());
        prop_assert_eq!(is_primary(&f, &big), is_primary(&f, &small));
    }
}

#[test]
fn gauss_sums_at_primes_have_norm_size() {
    for d in SUPPORTED_D {
        let f = field_params(d).unwrap();
        for q in primary_primes_upto(&f, 300) {
            let g = gauss_g(&f, &Elt::one(), &q.gen).unwrap();
            let ratio = g.value.norm_sqr() / g.modulus_norm as f64;
            assert!((ratio - 1.0).abs() < 1e-9, "d={d} ϖ={} ratio={ratio}", q.gen);
        }
    }
}
