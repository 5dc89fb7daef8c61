use proptest::prelude::*;

use tropical_core::linalg::{int, lattice_index, saturate, smith_normal_form, Integer, LatticeIndex, ZMatrix};

fn matrix(max_dim: usize, r: i64) -> impl Strategy<Value = ZMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(m, n)| {
        prop::collection::vec(-r..=r, m * n).prop_map(move |d| ZMatrix::from_i64(m, n, &d))
    })
}

/// Products of elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = ZMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..6).prop_map(move |ops| {
        let mut w = ZMatrix::identity(n);
        for (i, j, k, neg) in ops {
            if i != j {
                w.add_col_multiple(i, j, &int(k));
            } else if neg {
                w.negate_col(i);
            }
        }
        w
    })
}

fn brute_det(m: &ZMatrix) -> Integer {
    // Laplace expansion along the first row
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut total = int(0);
    for j in 0..n {
        let rows: Vec<Vec<Integer>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect())
            .collect();
        let minor = brute_det(&ZMatrix::from_rows(&rows, n - 1));
        let term = m.get(0, j) * minor;
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_decomposition_reassembles(a in matrix(4, 6)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&snf.s).mul(&snf.v), a.clone());
        prop_assert_eq!(brute_det(&snf.u).magnitude().clone(), int(1).magnitude().clone());
        prop_assert_eq!(brute_det(&snf.v).magnitude().clone(), int(1).magnitude().clone());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= int(0));
            if w[0] == int(0) {
                prop_assert_eq!(&w[1], &int(0));
            } else {
                prop_assert_eq!(&w[1] % &w[0], int(0));
            }
        }
        let nonzero = diag.iter().filter(|x| **x != int(0)).count();
        prop_assert_eq!(nonzero, a.rank());
    }

    #[test]
    fn index_of_square_generators_is_the_determinant(n in 1usize..=3, data in prop::collection::vec(-5i64..=5, 9)) {
        let m = ZMatrix::from_i64(n, n, &data[..n * n]);
        let det = brute_det(&m);
        match lattice_index(&m, n) {
            LatticeIndex::Finite(k) => prop_assert_eq!(k, det.magnitude().clone().into()),
            LatticeIndex::Infinite => prop_assert_eq!(det, int(0)),
        }
    }

    #[test]
    fn index_is_basis_invariant((m, w) in (1usize..=3).prop_flat_map(|n| (
        prop::collection::vec(-4i64..=4, n * n).prop_map(move |d| ZMatrix::from_i64(n, n, &d)),
        unimodular(n),
    ))) {
        let n = m.rows();
        prop_assert_eq!(lattice_index(&m, n), lattice_index(&m.mul(&w), n));
    }

    #[test]
    fn saturation_is_idempotent_and_saturated(a in matrix(3, 5)) {
        let s = saturate(&a);
        prop_assert_eq!(saturate(&s), s.clone());
        prop_assert_eq!(s.cols(), a.rank());
        if s.cols() > 0 {
            // a saturated basis has all elementary divisors equal to one
            let diag = smith_normal_form(&s).diagonal();
            prop_assert!(diag.iter().take(s.cols()).all(|x| *x == int(1)));
        }
    }
}
