use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{coordinates, sub_q, to_q, QMatrix, QVector, Rational};
use crate::polyhedra::Polyhedron;
use crate::tropical::WeightedComplex;

use super::field::FormField;
use super::form::LagerbergForm;
use super::poly::Polynomial;

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Splits a polytope into simplices by coning from its first vertex over
/// the facets that avoid it.
pub fn triangulate(p: &Polyhedron) -> Vec<Vec<QVector>> {
    assert!(p.is_bounded() && !p.is_empty(), "only nonempty polytopes can be triangulated");
    if p.dim() == 0 {
        return vec![vec![p.vertices()[0].clone()]];
    }
    let apex = p.vertices()[0].clone();
    let mut out = Vec::new();
    for f in p.facets() {
        if f.contains(&apex) {
            continue;
        }
        for mut s in triangulate(&f) {
            s.insert(0, apex.clone());
            out.push(s);
        }
    }
    out
}

/// `∫_Δ g` over the simplex with the given `d + 1` vertices in `R^d`.
pub fn integrate_over_simplex(g: &Polynomial, vertices: &[QVector]) -> Rational {
    let d = g.nvars();
    assert_eq!(vertices.len(), d + 1, "a d-simplex has d + 1 vertices");
    let w0 = &vertices[0];
    let cols: Vec<QVector> = vertices[1..].iter().map(|w| sub_q(w, w0)).collect();
    let w = QMatrix::from_columns(&cols, d);
    let jac = w.determinant().abs();
    if jac.is_zero() {
        return Rational::zero();
    }
    let h = g.compose_affine(&w, w0);
    let mut total = Rational::zero();
    for (e, c) in h.terms() {
        let num: BigInt = e.iter().map(|&k| factorial(k)).product();
        let den = factorial(e.iter().sum::<u32>() + d as u32);
        total += c * Rational::new(num, den);
    }
    total * jac
}

/// A form of bidegree `(k, k)` on a `k`-dimensional cell, written as a
/// density in lattice coordinates `x = base + B t` where the columns of
/// `B` are the lattice basis of the cell.
fn density(form: &LagerbergForm, cell: &Polyhedron) -> (Polynomial, QVector, Vec<QVector>) {
    let k = cell.dim();
    let base = cell.anchor().expect("nonempty cell").clone();
    let basis: Vec<QVector> = cell.span_basis().iter().map(|v| to_q(v)).collect();
    let b = QMatrix::from_columns(&basis, form.ambient_dim());
    let pulled = form.pullback_affine(&b, &base);
    let idx: Vec<usize> = (0..k).collect();
    let mut g = pulled.coefficient(&idx, &idx);
    if (k * k.saturating_sub(1) / 2) % 2 == 1 {
        g = g.neg();
    }
    (g, base, basis)
}

/// `∫_σ ω` for a `(k, k)`-form on a `k`-dimensional cell, with the lattice
/// normalized measure.
pub fn integrate_over_cell(form: &LagerbergForm, cell: &Polyhedron) -> Result<Rational> {
    let k = cell.dim();
    if form.bidegree() != (k, k) {
        return Err(Error::Bidegree {
            p: form.bidegree().0,
            q: form.bidegree().1,
            reason: format!("only ({k},{k})-forms integrate over a {k}-dimensional cell"),
        });
    }
    if form.ambient_dim() != cell.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: cell.ambient_dim(),
            found: form.ambient_dim(),
        });
    }
    let (g, base, basis) = density(form, cell);
    if g.is_zero() {
        return Ok(Rational::zero());
    }
    if !cell.is_bounded() {
        return Err(Error::NonCompactSupport { cell: cell.to_string() });
    }
    let mut total = Rational::zero();
    for simplex in triangulate(cell) {
        let local: Vec<QVector> = simplex
            .iter()
            .map(|v| coordinates(&basis, &sub_q(v, &base)).expect("vertex lies in the affine hull"))
            .collect();
        total += integrate_over_simplex(&g, &local);
    }
    Ok(total)
}

fn refined(field: &FormField, c: &WeightedComplex) -> WeightedComplex {
    let hs = field.hyperplanes();
    if hs.is_empty() {
        c.clone()
    } else {
        c.refine_by_hyperplanes(&hs)
    }
}

fn check_ambient(field: &FormField, c: &WeightedComplex) -> Result<()> {
    if field.ambient_dim() != c.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: c.ambient_dim(),
            found: field.ambient_dim(),
        });
    }
    Ok(())
}

/// `∫_C ω = Σ m_σ ∫_σ ω` for a `(d, d)`-form on a `d`-dimensional complex.
pub fn integrate(field: &FormField, c: &WeightedComplex) -> Result<Rational> {
    check_ambient(field, c)?;
    let d = c.dim();
    if field.bidegree() != (d, d) {
        let (p, q) = field.bidegree();
        return Err(Error::Bidegree {
            p,
            q,
            reason: format!("integration over a {d}-dimensional complex needs bidegree ({d},{d})"),
        });
    }
    let r = refined(field, c);
    let mut total = Rational::zero();
    for (cell, m) in r.weighted_cells() {
        let form = field.form_at(cell.anchor().expect("nonempty"));
        total += integrate_over_cell(&form, cell)? * Rational::from_integer(m.into());
    }
    Ok(total)
}

/// The integral over a facet `τ` of the boundary contraction of a form
/// living on an adjacent top cell, with `inward` the primitive normal
/// pointing into that cell.
///
/// For bidegree `(d, d−1)` this contracts the `d′` slots with `inward`; for
/// `(d−1, d)` it contracts the `d″` slots with the outward normal.
pub fn facet_integral(form: &LagerbergForm, tau: &Polyhedron, inward: &[Rational]) -> Result<Rational> {
    let d = tau.dim() + 1;
    let (p, q) = form.bidegree();
    if p == d && q + 1 == d {
        integrate_over_cell(&form.contract_prime(inward), tau)
    } else if p + 1 == d && q == d {
        Ok(-integrate_over_cell(&form.contract_second(inward), tau)?)
    } else {
        Err(Error::Bidegree {
            p,
            q,
            reason: format!("boundary integrals over a {d}-dimensional complex need bidegree ({d},{}) or ({},{d})", d - 1, d - 1),
        })
    }
}

/// Per-face boundary contributions `Σ_{σ ⊃ τ} m_σ ∫_τ ι η|_σ` over the
/// codimension-one cells of `c` refined along the regions of `η`.
pub fn boundary_contributions(field: &FormField, c: &WeightedComplex) -> Result<Vec<(Polyhedron, Rational)>> {
    check_ambient(field, c)?;
    let d = c.dim();
    let (p, q) = field.bidegree();
    if d == 0 || !((p == d && q + 1 == d) || (p + 1 == d && q == d)) {
        return Err(Error::Bidegree {
            p,
            q,
            reason: format!("boundary integrals over a {d}-dimensional complex need bidegree (d,d-1) or (d-1,d)"),
        });
    }
    let r = refined(field, c);
    let mut out = Vec::new();
    for tau in r.complex().cells_of_dim(d - 1) {
        let face = r.complex().cell(tau);
        let mut total = Rational::zero();
        for s in r.adjacent_top_cells(tau) {
            let form = field.form_at(r.complex().cell(s).anchor().expect("nonempty"));
            let omega = to_q(&r.primitive_normal(s, tau));
            total += facet_integral(&form, face, &omega)? * Rational::from_integer(r.weight(s).into());
        }
        out.push((face.clone(), total));
    }
    Ok(out)
}

/// `∫_{∂C} η` for a form of bidegree `(d, d−1)` or `(d−1, d)`.
pub fn boundary_integrate(field: &FormField, c: &WeightedComplex) -> Result<Rational> {
    Ok(boundary_contributions(field, c)?
        .into_iter()
        .fold(Rational::zero(), |acc, (_, v)| acc + v))
}
