use proptest::prelude::*;

use tropical_core::linalg::{qvec, rat, ZMatrix};
use tropical_core::polyhedra::{AffineForm, Polyhedron};
use tropical_core::tropical::{
    projection_formula_check, pushforward, weil_divisor, PLFunction, PLMap, WeightedComplex,
};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    v.iter().map(|x| x / g).collect()
}

/// One-dimensional fans in R^n with distinct rays; `balance` appends the
/// ray that cancels the weighted sum.
fn fan(n: usize) -> impl Strategy<Value = WeightedComplex> {
    (
        prop::collection::vec((prop::collection::vec(-2i64..=2, n), 1i64..=3), 2..=4),
        any::<bool>(),
    )
        .prop_filter_map("distinct nonzero rays", move |(raw, balance)| {
            let mut rays: Vec<(Vec<i64>, i64)> = raw
                .into_iter()
                .filter(|(v, _)| v.iter().any(|&x| x != 0))
                .map(|(v, m)| (primitive(&v), m))
                .collect();
            if balance {
                let mut s = vec![0; n];
                for (v, m) in &rays {
                    for i in 0..n {
                        s[i] -= m * v[i];
                    }
                }
                let g = s.iter().fold(0, |g, &x| gcd(g, x));
                if g != 0 {
                    rays.push((s.iter().map(|x| x / g).collect(), g));
                }
            }
            let mut dirs: Vec<&Vec<i64>> = rays.iter().map(|(v, _)| v).collect();
            dirs.sort();
            dirs.dedup();
            if rays.len() < 2 || dirs.len() != rays.len() {
                return None;
            }
            let cells = rays
                .iter()
                .map(|(v, m)| (Polyhedron::from_v_rep(n, &[qvec(&vec![0; n])], &[qvec(v)], &[]).unwrap(), *m))
                .collect();
            Some(WeightedComplex::from_cells(n, 1, cells).unwrap())
        })
}

fn affine(n: usize) -> impl Strategy<Value = AffineForm> {
    (prop::collection::vec(-2i64..=2, n), -4i64..=4, 1i64..=2)
        .prop_map(|(u, a, b)| AffineForm::new(u.into_iter().map(Into::into).collect(), rat(a, b)))
}

fn function(n: usize) -> impl Strategy<Value = PLFunction> {
    prop::collection::vec(affine(n), 1..=3).prop_map(move |t| PLFunction::max_of_affine(n, &t).unwrap())
}

fn fan_with_functions(k: usize) -> impl Strategy<Value = (WeightedComplex, Vec<PLFunction>)> {
    (2usize..=3).prop_flat_map(move |n| (fan(n), prop::collection::vec(function(n), k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn divisor_is_additive((c, fs) in fan_with_functions(2)) {
        let sum = fs[0].add(&fs[1]).unwrap();
        let lhs = weil_divisor(&c, &sum).unwrap();
        let rhs = weil_divisor(&c, &fs[0]).unwrap().add(&weil_divisor(&c, &fs[1]).unwrap()).unwrap();
        prop_assert!(lhs.equivalent(&rhs));
    }

    #[test]
    fn affine_functions_have_no_divisor((c, a) in (2usize..=3).prop_flat_map(|n| (fan(n), affine(n)))) {
        prop_assert!(weil_divisor(&c, &PLFunction::affine(a)).unwrap().is_zero());
    }

    #[test]
    fn refinement_preserves_class_and_balancing((c, hs) in (2usize..=3).prop_flat_map(|n| (fan(n), prop::collection::vec(affine(n), 0..=3)))) {
        let r = c.refine_by_hyperplanes(&hs);
        prop_assert!(r.equivalent(&c));
        prop_assert_eq!(r.is_tropical_cycle(), c.is_tropical_cycle());
    }

    #[test]
    fn identity_pushforward_is_trivial(c in (2usize..=3).prop_flat_map(fan)) {
        let n = c.ambient_dim();
        prop_assert!(pushforward(&c, &PLMap::identity(n)).unwrap().equivalent(&c));
    }

    #[test]
    fn pushforward_preserves_cycles((c, data) in (2usize..=3).prop_flat_map(|n| (fan(n), prop::collection::vec(-2i64..=2, 2 * n)))) {
        prop_assume!(c.is_tropical_cycle());
        let n = c.ambient_dim();
        let l = ZMatrix::from_i64(2, n, &data);
        prop_assert!(pushforward(&c, &PLMap::linear(l)).unwrap().is_tropical_cycle());
    }

    #[test]
    fn projection_formula((c, data, phi) in (2usize..=3).prop_flat_map(|n| (fan(n), prop::collection::vec(-2i64..=2, 2 * n), function(2)))) {
        let n = c.ambient_dim();
        let l = ZMatrix::from_i64(2, n, &data);
        prop_assert!(projection_formula_check(&c, &l, &phi).unwrap().equal);
    }
}
