use crate::error::{Error, Result};
use crate::linalg::{dot_z, in_span, to_q, Integer, QVector};
use crate::polyhedra::Polyhedron;

use super::plmap::{AffineMap, PLFunction, PLMap};
use super::weighted::WeightedComplex;

/// A weighted complex refined so that a PL map is affine on every cell,
/// together with the affine piece of each cell.
pub(crate) struct Refined {
    pub complex: WeightedComplex,
    pub pieces: Vec<AffineMap>,
}

/// Refines `c` by the domain of `map`; fails if some cell leaves the domain.
pub(crate) fn refine_along(c: &WeightedComplex, map: &PLMap) -> Result<Refined> {
    let complex = c.refine_by_hyperplanes(&map.hyperplanes());
    let pieces = complex
        .complex()
        .cells()
        .iter()
        .map(|cell| {
            map.piece_at(cell.anchor().expect("nonempty"))
                .cloned()
                .ok_or_else(|| Error::NotPiecewiseLinear(format!("cell {cell} leaves the domain of the map")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Refined { complex, pieces })
}

/// A divisor together with the faces where the input is not balanced and
/// the multiplicity depends on the choice of reference cell.
#[derive(Clone, Debug)]
pub struct DivisorReport {
    pub divisor: WeightedComplex,
    pub unbalanced_faces: Vec<Polyhedron>,
}

/// The corner locus `div(f)` of `f` on `c`.
///
/// At a codimension-one face `τ` the multiplicity is
/// `Σ m_σ ⟨u_σ, ω_{σ,τ}⟩ − ⟨u_{σ0}, Σ m_σ ω_{σ,τ}⟩`, where `u_σ` is the
/// slope of `f` on `σ` and `σ0` is the adjacent cell with the lowest index.
/// When `c` is balanced at `τ` the second term does not depend on `σ0`.
pub fn weil_divisor(c: &WeightedComplex, f: &PLFunction) -> Result<WeightedComplex> {
    Ok(weil_divisor_detailed(c, f)?.divisor)
}

pub fn weil_divisor_detailed(c: &WeightedComplex, f: &PLFunction) -> Result<DivisorReport> {
    if c.dim() == 0 {
        return Err(Error::Hypothesis("the divisor of a 0-dimensional complex is undefined".into()));
    }
    if f.ambient_dim() != c.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: c.ambient_dim(),
            found: f.ambient_dim(),
        });
    }
    let refined = refine_along(c, f.as_map())?;
    let r = &refined.complex;
    let slope = |cell: usize| refined.pieces[cell].linear.row(0);
    let mut pieces = Vec::new();
    let mut unbalanced = Vec::new();
    for tau in r.complex().cells_of_dim(r.dim() - 1) {
        let adjacent = r.adjacent_top_cells(tau);
        let n = r.ambient_dim();
        let mut cert = vec![Integer::from(0); n];
        let mut first = Integer::from(0);
        for &s in &adjacent {
            let m = Integer::from(r.weight(s));
            let omega = r.primitive_normal(s, tau);
            first += &m * dot_z(&slope(s), &omega);
            for (c, w) in cert.iter_mut().zip(&omega) {
                *c += &m * w;
            }
        }
        let second = dot_z(&slope(adjacent[0]), &cert);
        let span: Vec<QVector> = r.complex().cell(tau).span_basis().iter().map(|v| to_q(v)).collect();
        if !in_span(&span, &to_q(&cert)) {
            unbalanced.push(r.complex().cell(tau).clone());
        }
        let mult = first - second;
        let mult = i64::try_from(mult).map_err(|_| Error::InvalidInput("multiplicity overflows i64".into()))?;
        if mult != 0 {
            pieces.push((r.complex().cell(tau).clone(), mult));
        }
    }
    Ok(DivisorReport {
        divisor: WeightedComplex::from_pieces(c.ambient_dim(), c.dim() - 1, pieces),
        unbalanced_faces: unbalanced,
    })
}

/// The graph `{(x, F(x))}` of a PL map over `c`, with the same weights.
pub fn graph_lift(c: &WeightedComplex, f: &PLMap) -> Result<WeightedComplex> {
    let refined = refine_along(c, f)?;
    let r = &refined.complex;
    let pieces: Vec<_> = r
        .weights()
        .iter()
        .map(|(&i, &m)| {
            let g = refined.pieces[i].graph();
            (r.complex().cell(i).affine_image(&g.linear, &g.translation), m)
        })
        .collect();
    Ok(WeightedComplex::from_pieces(c.ambient_dim() + f.target_dim(), c.dim(), pieces))
}

/// The three conditions relating balancing of a graph to its base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphBalancing {
    pub graph_balanced: bool,
    pub base_balanced: bool,
    pub divisor_zero: bool,
}

impl GraphBalancing {
    /// The graph is balanced exactly when the base is and `div(φ) = 0`.
    pub fn equivalence_holds(&self) -> bool {
        self.graph_balanced == (self.base_balanced && self.divisor_zero)
    }
}

pub fn graph_balancing_check(c: &WeightedComplex, phi: &PLFunction) -> Result<GraphBalancing> {
    Ok(GraphBalancing {
        graph_balanced: graph_lift(c, phi.as_map())?.is_tropical_cycle(),
        base_balanced: c.is_tropical_cycle(),
        divisor_zero: weil_divisor(c, phi)?.is_zero(),
    })
}
