use proptest::prelude::*;

use tropical_core::lagerberg::{integrate, stokes_check, FormField, LagerbergForm, Polynomial};
use tropical_core::linalg::{rat, QMatrix, Rational};
use tropical_core::polyhedra::{AffineForm, Polyhedron};
use tropical_core::tropical::WeightedComplex;

fn poly(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=2, n), -4i64..=4, 1i64..=3), 0..4)
        .prop_map(move |terms| Polynomial::from_terms(n, terms.into_iter().map(|(e, a, b)| (e, rat(a, b)))))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn form(n: usize, p: usize, q: usize) -> impl Strategy<Value = LagerbergForm> {
    let slots: Vec<(Vec<usize>, Vec<usize>)> = subsets(n, p)
        .into_iter()
        .flat_map(|i| subsets(n, q).into_iter().map(move |j| (i.clone(), j)))
        .collect();
    prop::collection::vec(poly(n), slots.len()).prop_map(move |coeffs| {
        slots
            .iter()
            .zip(coeffs)
            .fold(LagerbergForm::zero(n, p, q), |acc, ((i, j), f)| {
                acc.add(&LagerbergForm::term(n, i, j, f))
            })
    })
}

fn any_form(n: usize) -> impl Strategy<Value = LagerbergForm> {
    (0..=n, 0..=n).prop_flat_map(move |(p, q)| form(n, p, q))
}

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

fn unit_square() -> Polyhedron {
    Polyhedron::from_v_rep(2, &[vec![rat(0, 1), rat(0, 1)], vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]], &[], &[]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differentials_square_to_zero(w in (1usize..=3).prop_flat_map(any_form)) {
        prop_assert!(w.d_prime().d_prime().is_zero());
        prop_assert!(w.d_second().d_second().is_zero());
        prop_assert!(w.d_prime().d_second().add(&w.d_second().d_prime()).is_zero());
    }

    #[test]
    fn involution_is_an_involution(w in (1usize..=3).prop_flat_map(any_form)) {
        prop_assert_eq!(w.involution_j().involution_j(), w.clone());
        let (p, q) = w.bidegree();
        prop_assert_eq!(w.involution_j().bidegree(), (q, p));
    }

    #[test]
    fn leibniz_rule((a, b) in (1usize..=3).prop_flat_map(|n| (any_form(n), any_form(n)))) {
        let k = a.degree();
        let lhs = a.wedge(&b).d_prime();
        let rhs = a.d_prime().wedge(&b).add(&a.wedge(&b.d_prime()).scale(&sign(k)));
        prop_assert_eq!(lhs, rhs);
        let lhs = a.wedge(&b).d_second();
        let rhs = a.d_second().wedge(&b).add(&a.wedge(&b.d_second()).scale(&sign(k)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_differentials(
        (w, a, b) in (1usize..=2, 1usize..=2).prop_flat_map(|(n, m)| (
            any_form(n),
            prop::collection::vec(-3i64..=3, n * m).prop_map(move |d| {
                let rows: Vec<Vec<Rational>> = d.chunks(m).map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
                QMatrix::from_rows(&rows, m)
            }),
            prop::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(|x| rat(x, 2)).collect::<Vec<_>>()),
        ))
    ) {
        prop_assert_eq!(w.d_prime().pullback_affine(&a, &b), w.pullback_affine(&a, &b).d_prime());
        prop_assert_eq!(w.d_second().pullback_affine(&a, &b), w.pullback_affine(&a, &b).d_second());
        prop_assert_eq!(w.involution_j().pullback_affine(&a, &b), w.pullback_affine(&a, &b).involution_j());
    }

    #[test]
    fn integration_is_additive_under_subdivision(
        w in form(2, 2, 2),
        cut in (-3i64..=3, -3i64..=3, -2i64..=2).prop_filter("a proper line", |(a, b, _)| *a != 0 || *b != 0),
    ) {
        let c = WeightedComplex::from_cells(2, 2, vec![(unit_square(), 2)]).unwrap();
        let h = AffineForm::new(vec![cut.0.into(), cut.1.into()], rat(cut.2, 2));
        let refined = c.refine_by_hyperplanes(&[h]);
        let field = FormField::uniform(w);
        prop_assert_eq!(integrate(&field, &c).unwrap(), integrate(&field, &refined).unwrap());
    }

    #[test]
    fn stokes_on_triangles(
        pts in prop::collection::vec((-4i64..=4, -4i64..=4), 3),
        w in form(2, 2, 1),
        flip in any::<bool>(),
    ) {
        let vs: Vec<Vec<Rational>> = pts.iter().map(|&(x, y)| vec![rat(x, 1), rat(y, 2)]).collect();
        let t = Polyhedron::from_v_rep(2, &vs, &[], &[]).unwrap();
        prop_assume!(t.dim() == 2);
        let c = WeightedComplex::from_cells(2, 2, vec![(t, 1)]).unwrap();
        let eta = FormField::uniform(if flip { w.involution_j() } else { w });
        let r = stokes_check(&eta, &c).unwrap();
        prop_assert_eq!(r.lhs, r.rhs);
    }
}

#[test]
fn monomial_integrals_match_the_beta_formula() {
    // d'x∧d''x∧d'y∧d''y is a positive density
    let c = WeightedComplex::from_cells(2, 2, vec![(unit_square(), 1)]).unwrap();
    for a in 0..4u32 {
        for b in 0..4u32 {
            let f = Polynomial::monomial(2, vec![a, b], rat(1, 1));
            let w = LagerbergForm::term(2, &[0], &[0], Polynomial::one(2))
                .wedge(&LagerbergForm::term(2, &[1], &[1], f));
            let got = integrate(&FormField::uniform(w), &c).unwrap();
            let want = rat(1, i64::from((a + 1) * (b + 1)));
            assert_eq!(got, want, "x^{a} y^{b}");
        }
    }
}
