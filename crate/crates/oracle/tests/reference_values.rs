use kzq_oracle::{closure, column_hermite, determinant, fused_class_count, galois_exponents, invariant_factors_by_minors};

#[test]
fn small_matrices() {
    assert_eq!(determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
    assert_eq!(invariant_factors_by_minors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    assert_eq!(invariant_factors_by_minors(&[vec![1, 2], vec![2, 4]]), vec![1]);
    assert_eq!(column_hermite(&[vec![0, 3], vec![2, 1]]), vec![vec![3, 0], vec![1, 2]]);
}

#[test]
fn galois_groups() {
    assert_eq!(galois_exponents(8, None), vec![1, 3, 5, 7]);
    // powers of p; only their action on p-regular elements is used
    assert_eq!(galois_exponents(8, Some((2, true))), vec![0, 1, 2, 4]);
    // over Q_2 only the part prime to 2 is constrained
    assert_eq!(galois_exponents(8, Some((2, false))), vec![1, 3, 5, 7]);
    assert_eq!(galois_exponents(5, Some((2, false))), vec![1, 2, 3, 4]);
    assert_eq!(galois_exponents(7, Some((2, false))), vec![1, 2, 4]);
}

#[test]
fn quaternion_counts() {
    // Q8 on 8 points: r = (0 1 2 3)(4 5 6 7), s = (0 4 2 6)(1 7 3 5)
    let q8 = closure(8, &[vec![1, 2, 3, 0, 5, 6, 7, 4], vec![4, 7, 6, 5, 2, 1, 0, 3]]);
    assert_eq!(q8.len(), 8);
    assert_eq!(fused_class_count(&q8, None), 5);
    assert_eq!(fused_class_count(&q8, Some((2, false))), 5);
    assert_eq!(fused_class_count(&q8, Some((2, true))), 1);
}
