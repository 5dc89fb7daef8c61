use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{to_q, Rational};
use crate::tropical::{weil_divisor_detailed, PLFunction, WeightedComplex};

use super::field::FormField;
use super::form::LagerbergForm;
use super::integrate::{boundary_integrate, facet_integral, integrate, integrate_over_cell};
use super::poly::Polynomial;

/// Both sides of an integral identity `lhs = rhs + boundary_term`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentPairingReport {
    pub identity_name: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub boundary_term: Rational,
}

impl CurrentPairingReport {
    pub fn holds(&self) -> bool {
        self.lhs == &self.rhs + &self.boundary_term
    }
}

/// `∫_C d″η = ∫_∂C η` for `η` of bidegree `(d, d−1)`, or the `d′` version
/// for bidegree `(d−1, d)`.
pub fn stokes_check(eta: &FormField, c: &WeightedComplex) -> Result<CurrentPairingReport> {
    let d = c.dim();
    let (p, q) = eta.bidegree();
    let lhs = if d > 0 && p == d && q + 1 == d {
        integrate(&eta.d_second(), c)?
    } else if d > 0 && p + 1 == d && q == d {
        integrate(&eta.d_prime(), c)?
    } else {
        return Err(Error::Bidegree {
            p,
            q,
            reason: format!("Stokes needs bidegree (d,d-1) or (d-1,d) on a {d}-dimensional complex"),
        });
    };
    Ok(CurrentPairingReport {
        identity_name: "stokes".into(),
        lhs,
        rhs: boundary_integrate(eta, c)?,
        boundary_term: Rational::zero(),
    })
}

fn require_symmetric(f: &FormField, name: &str) -> Result<()> {
    if f.is_symmetric() {
        Ok(())
    } else {
        let (p, q) = f.bidegree();
        Err(Error::NotSymmetric(format!("{name} of bidegree ({p},{q}) fails Jω = (-1)^p ω")))
    }
}

/// `∫ (ω∧d′d″η − d′d″ω∧η) = ∫_∂ (ω∧d″η − d″ω∧η)` for symmetric `ω`, `η`
/// of bidegrees `(p,p)`, `(q,q)` on a complex of dimension `p + q + 1`.
pub fn green_check(omega: &FormField, eta: &FormField, c: &WeightedComplex) -> Result<CurrentPairingReport> {
    require_symmetric(omega, "ω")?;
    require_symmetric(eta, "η")?;
    let (p, _) = omega.bidegree();
    let (q, _) = eta.bidegree();
    if p + q + 1 != c.dim() {
        return Err(Error::Bidegree {
            p,
            q,
            reason: format!("bidegrees ({p},{p}) and ({q},{q}) do not fit a {}-dimensional complex", c.dim()),
        });
    }
    let ddc = |f: &FormField| f.d_second().d_prime();
    let bulk = omega.wedge(&ddc(eta))?.sub(&ddc(omega).wedge(eta)?)?;
    let bdry = omega.wedge(&eta.d_second())?.sub(&omega.d_second().wedge(eta)?)?;
    Ok(CurrentPairingReport {
        identity_name: "green".into(),
        lhs: integrate(&bulk, c)?,
        rhs: boundary_integrate(&bdry, c)?,
        boundary_term: Rational::zero(),
    })
}

/// `∫_C f·d′d″η = ∫_{div f} η + boundary_term`.
///
/// The boundary term collects, over the faces where `C` is not balanced, the
/// difference between the local boundary contributions of integrating by
/// parts twice and the divisor contribution. On a tropical cycle it is zero.
pub fn poincare_lelong_check(f: &PLFunction, eta: &FormField, c: &WeightedComplex) -> Result<CurrentPairingReport> {
    require_symmetric(eta, "η")?;
    let d = c.dim();
    if d == 0 || eta.bidegree() != (d - 1, d - 1) {
        let (p, q) = eta.bidegree();
        return Err(Error::Bidegree {
            p,
            q,
            reason: format!("η must have bidegree (d-1,d-1) on a {d}-dimensional complex"),
        });
    }
    let mut hs = f.as_map().hyperplanes();
    hs.extend(eta.hyperplanes());
    let r = if hs.is_empty() { c.clone() } else { c.refine_by_hyperplanes(&hs) };
    let cx = r.complex();
    for cell in cx.cells() {
        if !cell.is_bounded() && !eta.form_at(cell.anchor().expect("nonempty")).is_zero() {
            return Err(Error::NonCompactSupport { cell: cell.to_string() });
        }
    }
    let slope = |x: &[Rational]| -> Result<(Polynomial, LagerbergForm)> {
        let a = f
            .form_at(x)
            .ok_or_else(|| Error::NotPiecewiseLinear(format!("point {x:?} leaves the domain of f")))?;
        let poly = Polynomial::affine(&to_q(&a.normal), &a.constant);
        Ok((poly.clone(), LagerbergForm::function(poly).d_prime()))
    };

    let mut lhs = Rational::zero();
    for (&s, &m) in r.weights() {
        let cell = cx.cell(s);
        let x = cell.anchor().expect("nonempty");
        let (fs, _) = slope(x)?;
        let ddc = eta.form_at(x).d_second().d_prime();
        lhs += integrate_over_cell(&ddc.mul_poly(&fs), cell)? * Rational::from_integer(m.into());
    }

    let report = weil_divisor_detailed(&r, f)?;
    let div = &report.divisor;
    let mut rhs = Rational::zero();
    for (cell, m) in div.weighted_cells() {
        let form = eta.form_at(cell.anchor().expect("nonempty"));
        rhs += integrate_over_cell(&form, cell)? * Rational::from_integer(m.into());
    }

    let mut boundary_term = Rational::zero();
    for tau in r.boundary_faces() {
        let face = cx.cell(tau);
        let mut local = Rational::zero();
        for s in r.adjacent_top_cells(tau) {
            let x = cx.cell(s).anchor().expect("nonempty");
            let (fs, dfs) = slope(x)?;
            let e = eta.form_at(x);
            let omega = to_q(&r.primitive_normal(s, tau));
            // f·d′d″η = d′(f·d″η) + d″(d′f∧η) on each cell
            let part = facet_integral(&e.d_second().mul_poly(&fs), face, &omega)?
                + facet_integral(&dfs.wedge(&e), face, &omega)?;
            local += part * Rational::from_integer(r.weight(s).into());
        }
        let mult = div.complex().index_of(face).map(|i| div.weight(i)).unwrap_or(0);
        let on_divisor = if mult == 0 {
            Rational::zero()
        } else {
            integrate_over_cell(&eta.form_at(face.anchor().expect("nonempty")), face)? * Rational::from_integer(mult.into())
        };
        boundary_term += local - on_divisor;
    }
    Ok(CurrentPairingReport {
        identity_name: "poincare-lelong".into(),
        lhs,
        rhs,
        boundary_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, rat};
    use crate::polyhedra::{halfspace, Polyhedron};

    fn x1() -> Polynomial {
        Polynomial::var(1, 0)
    }

    fn unit() -> WeightedComplex {
        let s = Polyhedron::from_v_rep(1, &[qvec(&[0]), qvec(&[1])], &[], &[]).unwrap();
        WeightedComplex::from_cells(1, 1, vec![(s, 1)]).unwrap()
    }

    fn bump_1d() -> FormField {
        // (1 − x²)² on [−1, 1], zero outside
        let g = Polynomial::one(1).sub(&x1().pow(2)).pow(2);
        let box1 = Polyhedron::from_v_rep(1, &[qvec(&[-1]), qvec(&[1])], &[], &[]).unwrap();
        FormField::piecewise(1, 0, 0, vec![(box1, LagerbergForm::function(g))]).unwrap()
    }

    #[test]
    fn stokes_examples() {
        let eta = LagerbergForm::term(1, &[0], &[], x1().pow(2));
        let r = stokes_check(&eta.into(), &unit()).unwrap();
        assert!(r.holds());
        assert_eq!(r.lhs, rat(-1, 1));
        let r = stokes_check(&LagerbergForm::zero(1, 1, 0).into(), &unit()).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn green_on_interval() {
        let f = LagerbergForm::function(x1().pow(3).add(&x1()));
        let g = LagerbergForm::function(x1().pow(2).scale(&rat(2, 1)));
        let r = green_check(&f.clone().into(), &g.into(), &unit()).unwrap();
        assert!(r.holds());
        let g = LagerbergForm::function(x1().pow(4));
        let r = green_check(&f.clone().into(), &g.into(), &unit()).unwrap();
        // [f g′ − f′ g]₀¹ = 2·4 − 4·1 = 4
        assert_eq!((r.lhs.clone(), r.holds()), (rat(4, 1), true));
        let r = green_check(&f.clone().into(), &f.into(), &unit()).unwrap();
        assert_eq!((r.lhs, r.rhs), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn green_rejects_asymmetric_forms() {
        let tri = Polyhedron::from_v_rep(2, &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1])], &[], &[]).unwrap();
        let c = WeightedComplex::from_cells(2, 2, vec![(tri, 1)]).unwrap();
        let asym = LagerbergForm::d_prime_x(2, 0).wedge(&LagerbergForm::d_second_x(2, 1));
        let f = LagerbergForm::constant(2, rat(1, 1));
        assert!(matches!(green_check(&asym.into(), &f.into(), &c), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn poincare_lelong_on_the_line() {
        let c = WeightedComplex::from_cells(1, 1, vec![(Polyhedron::whole_space(1), 1)]).unwrap();
        let f = PLFunction::max_of_affine(1, &[halfspace(&[0], rat(0, 1)), halfspace(&[1], rat(0, 1))]).unwrap();
        let r = poincare_lelong_check(&f, &bump_1d(), &c).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.boundary_term.clone()), (rat(1, 1), rat(1, 1), rat(0, 1)));
        let aff = PLFunction::affine(halfspace(&[2], rat(1, 1)));
        let r = poincare_lelong_check(&aff, &bump_1d(), &c).unwrap();
        assert_eq!((r.lhs, r.rhs), (rat(0, 1), rat(0, 1)));
    }

    #[test]
    fn poincare_lelong_needs_compact_support() {
        let c = WeightedComplex::from_cells(1, 1, vec![(Polyhedron::whole_space(1), 1)]).unwrap();
        let f = PLFunction::affine(halfspace(&[1], rat(0, 1)));
        let eta = LagerbergForm::constant(1, rat(1, 1));
        assert!(matches!(poincare_lelong_check(&f, &eta.into(), &c), Err(Error::NonCompactSupport { .. })));
    }

    #[test]
    fn poincare_lelong_on_a_ray_has_a_boundary_term() {
        let ray = Polyhedron::from_v_rep(1, &[qvec(&[0])], &[qvec(&[1])], &[]).unwrap();
        let c = WeightedComplex::from_cells(1, 1, vec![(ray, 1)]).unwrap();
        let f = PLFunction::affine(halfspace(&[1], rat(0, 1)));
        let r = poincare_lelong_check(&f, &bump_1d(), &c).unwrap();
        // ∫₀¹ x g″ = [x g′ − g]₀¹ = 1, and the origin is not balanced
        assert_eq!(r.lhs, rat(1, 1));
        assert_eq!(r.boundary_term, rat(1, 1) - &r.rhs);
        assert!(r.holds());
    }
    #[test]
    fn poincare_lelong_on_tropical_line() {
        let ray = |d: &[i64]| Polyhedron::from_v_rep(2, &[qvec(&[0, 0])], &[qvec(d)], &[]).unwrap();
        let c = WeightedComplex::from_cells(2, 1, vec![(ray(&[1, 0]), 1), (ray(&[0, 1]), 1), (ray(&[-1, -1]), 1)])
            .unwrap();
        let f = PLFunction::max_of_affine(
            2,
            &[halfspace(&[0, 0], rat(0, 1)), halfspace(&[1, 0], rat(0, 1)), halfspace(&[0, 1], rat(0, 1))],
        )
        .unwrap();
        let one = Polynomial::one(2);
        let g = one
            .sub(&Polynomial::var(2, 0).pow(2))
            .pow(2)
            .mul(&one.sub(&Polynomial::var(2, 1).pow(2)).pow(2));
        let square =
            Polyhedron::from_v_rep(2, &[qvec(&[-1, -1]), qvec(&[1, -1]), qvec(&[-1, 1]), qvec(&[1, 1])], &[], &[]).unwrap();
        let eta = FormField::piecewise(2, 0, 0, vec![(square, LagerbergForm::function(g))]).unwrap();
        let r = poincare_lelong_check(&f, &eta, &c).unwrap();
        // slopes 1, 1, 0 along the rays give multiplicity 2 at the origin
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.boundary_term.clone()), (rat(2, 1), rat(2, 1), rat(0, 1)));
    }
}
