use num_bigint::BigInt;
use proptest::prelude::*;

use kzq_core::cyclo::{Cyclotomic, Rat};

const CONDUCTORS: &[u32] = &[1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 16, 20, 24];
const UNITS: &[i64] = &[1, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn element() -> impl Strategy<Value = Cyclotomic> {
    (
        prop::sample::select(CONDUCTORS),
        prop::collection::vec(-5i64..=5, 1..6),
        1i64..=4,
    )
        .prop_map(|(e, coeffs, den)| {
            let mut x = Cyclotomic::zero();
            for (k, c) in coeffs.iter().enumerate() {
                x = &x + &Cyclotomic::zeta(e, k as i64).scale(&Rat::from_integer(BigInt::from(*c)));
            }
            x.scale(&Rat::new(BigInt::from(1), BigInt::from(den)))
        })
}

proptest! {
    #[test]
    fn ring_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &Cyclotomic::zero(), a.clone());
        prop_assert_eq!(&a * &Cyclotomic::one(), a);
    }

    #[test]
    fn inverses(a in element()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn galois_is_a_ring_map(a in element(), b in element(), t in prop::sample::select(UNITS)) {
        let s = |x: &Cyclotomic| x.galois(t).unwrap();
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.conj(), a.galois(-1).unwrap());
    }

    #[test]
    fn canonical_conductor(a in element()) {
        let e = a.conductor();
        let lifted: Cyclotomic = a.coords_in(e * 3)
            .iter()
            .enumerate()
            .fold(Cyclotomic::zero(), |acc, (k, q)| &acc + &Cyclotomic::zeta(e * 3, k as i64).scale(q));
        prop_assert_eq!(lifted.conductor(), e);
        prop_assert_eq!(lifted, a);
    }
}

#[test]
fn roots_of_unity() {
    let z = Cyclotomic::zeta(8, 1);
    assert!(z.pow(8).is_one());
    assert!(!z.pow(4).is_one());
    let sqrt2 = &z + &z.conj();
    assert_eq!(&sqrt2 * &sqrt2, Cyclotomic::from_int(2));
    assert_eq!(Cyclotomic::zeta(4, 2), Cyclotomic::from_int(-1));
    assert_eq!(Cyclotomic::zeta(6, 1).conductor(), 3);
}
