use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use kzq_core::zlin::{cokernel, exact_at, hnf, image, integer_kernel, kernel, snf, solve, AbMap, FgAbGroup, IntMat};

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn big(m: &IntMat) -> Vec<Vec<i128>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_i128().unwrap()).collect()).collect()
}

proptest! {
    #[test]
    fn smith_form_matches_minors(m in matrix(4)) {
        let a = IntMat::from_rows(&m);
        let (d, p, q) = snf(&a);
        prop_assert_eq!(p.mul(&a).mul(&q), d.clone());
        prop_assert_eq!(p.det().abs(), BigInt::from(1));
        prop_assert_eq!(q.det().abs(), BigInt::from(1));
        let diag: Vec<i128> = (0..d.rows().min(d.cols()))
            .map(|i| d.get(i, i).to_i128().unwrap())
            .filter(|x| *x != 0)
            .collect();
        prop_assert_eq!(diag, kzq_oracle::invariant_factors_by_minors(&m));
    }

    #[test]
    fn hermite_form_matches_oracle(m in matrix(4)) {
        let a = IntMat::from_rows(&m);
        let (h, u) = hnf(&a);
        prop_assert_eq!(a.mul(&u), h.clone());
        prop_assert_eq!(big(&h), kzq_oracle::column_hermite(&m));
    }

    #[test]
    fn kernels_are_saturated(m in matrix(4)) {
        let a = IntMat::from_rows(&m);
        let k = integer_kernel(&a);
        prop_assert!(a.mul(&k).is_zero());
        let rank_a = snf(&a).0;
        let rank = (0..rank_a.rows().min(rank_a.cols())).filter(|&i| !rank_a.get(i, i).is_zero()).count();
        prop_assert_eq!(k.cols(), a.cols() - rank);
        if k.cols() > 0 {
            let (d, _, _) = snf(&k);
            for i in 0..k.cols() {
                prop_assert_eq!(d.get(i, i).abs(), BigInt::from(1));
            }
        }
    }

    #[test]
    fn solve_finds_preimages(m in matrix(4), x in prop::collection::vec(-5i64..=5, 4)) {
        let a = IntMat::from_rows(&m);
        let x: Vec<BigInt> = x.into_iter().take(a.cols()).map(BigInt::from).collect();
        let y = a.mul_vec(&x);
        let z = solve(&a, &y).expect("y lies in the image");
        prop_assert_eq!(a.mul_vec(&z), y);
    }

    #[test]
    fn kernel_image_cokernel_sequence(m in matrix(4), orders in prop::collection::vec(0i64..=4, 4)) {
        let a = IntMat::from_rows(&m);
        let target = FgAbGroup::cyclic(&orders[..a.rows()]);
        let f = AbMap::new(FgAbGroup::free(a.cols()), target, a).unwrap();
        let (_, inc) = kernel(&f);
        let (_, proj) = cokernel(&f);
        prop_assert!(exact_at(&inc, &f));
        prop_assert!(exact_at(&f, &proj));
        prop_assert!(proj.is_surjective());
        prop_assert!(inc.is_injective());
        let (im, _) = image(&f);
        let (coim, _) = cokernel(&inc);
        prop_assert_eq!(im.iso(), coim.iso());
    }
}

#[test]
fn presentations() {
    let g = FgAbGroup::cyclic(&[2, 4, 0, 1]);
    assert_eq!(g.iso().to_string(), "Z + Z/2 + Z/4");
    let h = FgAbGroup::new(IntMat::from_rows(&[vec![2, 0], vec![0, 2]]));
    assert_eq!(h.iso().to_string(), "(Z/2)^2");
    assert!(FgAbGroup::new(IntMat::from_rows(&[vec![2, 3]])).is_trivial());
}
