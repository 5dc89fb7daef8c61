use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{in_span, primitive_generator, sub_q, to_q, Integer, QVector, ZVector};
use crate::polyhedra::{split_by_hyperplanes, supporting_hyperplanes, AffineForm, PolyComplex, Polyhedron};

/// A polyhedral complex with integer weights on its `d`-dimensional cells.
/// Cells of weight zero are purged, so every cell is a face of a weighted
/// top cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    complex: PolyComplex,
    dim: usize,
    weights: BTreeMap<usize, i64>,
}

/// Balancing data at a codimension-one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub face: usize,
    pub balanced: bool,
    /// `Σ m_σ ω_{σ,τ}` over the adjacent top cells.
    pub certificate: ZVector,
}

impl WeightedComplex {
    pub fn zero(ambient_dim: usize, dim: usize) -> Self {
        WeightedComplex {
            complex: PolyComplex::empty(ambient_dim),
            dim,
            weights: BTreeMap::new(),
        }
    }

    /// Weights keyed by cell index of `complex`; all keyed cells must have
    /// dimension `dim`.
    pub fn new(complex: PolyComplex, dim: usize, weights: BTreeMap<usize, i64>) -> Result<Self> {
        let mut pieces = Vec::new();
        for (&i, &m) in &weights {
            if i >= complex.len() {
                return Err(Error::InvalidInput(format!("weight on unknown cell {i}")));
            }
            let c = complex.cell(i);
            if c.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "weight on cell {c} of dimension {} in a complex of dimension {dim}",
                    c.dim()
                )));
            }
            pieces.push((c.clone(), m));
        }
        Ok(Self::from_pieces(complex.ambient_dim(), dim, pieces))
    }

    /// Weighted top cells; checks dimensions and the complex axioms.
    pub fn from_cells(ambient_dim: usize, dim: usize, cells: Vec<(Polyhedron, i64)>) -> Result<Self> {
        for (c, _) in &cells {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: c.ambient_dim(),
                });
            }
            if c.is_empty() || c.dim() != dim {
                return Err(Error::InvalidInput(format!("cell {c} does not have dimension {dim}")));
            }
        }
        PolyComplex::new(ambient_dim, cells.iter().map(|(c, _)| c.clone()).collect())?;
        Ok(Self::from_pieces(ambient_dim, dim, cells))
    }

    /// Sums weights of equal cells, drops zeros, face-closes. The pieces
    /// must already be pairwise compatible.
    pub(crate) fn from_pieces(
        ambient_dim: usize,
        dim: usize,
        pieces: impl IntoIterator<Item = (Polyhedron, i64)>,
    ) -> Self {
        let mut sums: BTreeMap<Polyhedron, i64> = BTreeMap::new();
        for (p, m) in pieces {
            debug_assert_eq!(p.dim(), dim);
            *sums.entry(p).or_insert(0) += m;
        }
        sums.retain(|_, m| *m != 0);
        let complex = PolyComplex::from_cells_unchecked(ambient_dim, sums.keys().cloned().collect());
        let weights = sums
            .into_iter()
            .map(|(p, m)| (complex.index_of(&p).expect("cell present"), m))
            .collect();
        WeightedComplex {
            complex,
            dim,
            weights,
        }
    }

    /// Resolves arbitrary overlaps: every piece is cut by the hyperplanes
    /// of all pieces, then weights of coinciding fragments are summed.
    pub(crate) fn from_overlapping(
        ambient_dim: usize,
        dim: usize,
        pieces: Vec<(Polyhedron, i64)>,
    ) -> Self {
        let hyperplanes = supporting_hyperplanes(pieces.iter().map(|(p, _)| p));
        let fragments = pieces.iter().flat_map(|(p, m)| {
            split_by_hyperplanes(p, &hyperplanes)
                .into_iter()
                .map(move |q| (q, *m))
        });
        Self::from_pieces(ambient_dim, dim, fragments.collect::<Vec<_>>())
    }

    pub fn complex(&self) -> &PolyComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.complex.ambient_dim()
    }

    pub fn weight(&self, cell: usize) -> i64 {
        self.weights.get(&cell).copied().unwrap_or(0)
    }

    pub fn weights(&self) -> &BTreeMap<usize, i64> {
        &self.weights
    }

    /// `(cell, weight)` for the top cells, in canonical order.
    pub fn weighted_cells(&self) -> Vec<(&Polyhedron, i64)> {
        self.weights.iter().map(|(&i, &m)| (self.complex.cell(i), m)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_pieces(
            self.ambient_dim(),
            self.dim,
            self.weighted_cells().into_iter().map(|(p, m)| (p.clone(), k * m)).collect::<Vec<_>>(),
        )
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1)
    }

    /// Hyperplanes supporting the top cells.
    pub fn hyperplanes(&self) -> Vec<AffineForm> {
        supporting_hyperplanes(self.weights.keys().map(|&i| self.complex.cell(i)))
    }

    /// Subdivision by a hyperplane arrangement; weights are inherited.
    pub fn refine_by_hyperplanes(&self, hyperplanes: &[AffineForm]) -> Self {
        let pieces: Vec<(Polyhedron, i64)> = self
            .weighted_cells()
            .into_iter()
            .flat_map(|(p, m)| split_by_hyperplanes(p, hyperplanes).into_iter().map(move |q| (q, m)))
            .collect();
        Self::from_pieces(self.ambient_dim(), self.dim, pieces)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Sum on a joint subdivision.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let pieces = self
            .weighted_cells()
            .into_iter()
            .chain(other.weighted_cells())
            .map(|(p, m)| (p.clone(), m))
            .collect();
        Ok(Self::from_overlapping(self.ambient_dim(), self.dim, pieces))
    }

    /// Equality up to subdivision and weight-zero parts.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.check_compatible(other).is_ok()
            && self.add(&other.negated()).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// The inward primitive generator `ω_{σ,τ}` for a top cell `σ` and its
    /// facet `τ`.
    pub fn primitive_normal(&self, sigma: usize, tau: usize) -> ZVector {
        let s = self.complex.cell(sigma);
        let t = self.complex.cell(tau);
        let witness: QVector = sub_q(s.anchor().expect("nonempty"), t.anchor().expect("nonempty"));
        primitive_generator(t.span_basis(), s.span_basis(), &witness)
            .expect("a facet lattice is saturated of corank one")
    }

    /// Top cells adjacent to the codimension-one cell `tau`.
    pub fn adjacent_top_cells(&self, tau: usize) -> Vec<usize> {
        self.complex
            .cofacets_of(tau)
            .into_iter()
            .filter(|s| self.weights.contains_key(s))
            .collect()
    }

    pub fn is_balanced_at(&self, tau: usize) -> Result<BalanceReport> {
        if self.dim == 0 || self.complex.cell(tau).dim() + 1 != self.dim {
            return Err(Error::Hypothesis(format!(
                "cell {tau} is not of codimension one in a {}-dimensional complex",
                self.dim
            )));
        }
        let n = self.ambient_dim();
        let mut cert = vec![Integer::from(0); n];
        for s in self.adjacent_top_cells(tau) {
            let m = Integer::from(self.weight(s));
            for (c, w) in cert.iter_mut().zip(self.primitive_normal(s, tau)) {
                *c += &m * w;
            }
        }
        let tau_span: Vec<QVector> = self.complex.cell(tau).span_basis().iter().map(|v| to_q(v)).collect();
        let balanced = in_span(&tau_span, &to_q(&cert));
        Ok(BalanceReport {
            face: tau,
            balanced,
            certificate: cert,
        })
    }

    /// Reports for every codimension-one cell.
    pub fn balance_reports(&self) -> Vec<BalanceReport> {
        if self.dim == 0 {
            return Vec::new();
        }
        self.complex
            .cells_of_dim(self.dim - 1)
            .into_iter()
            .map(|t| self.is_balanced_at(t).expect("codimension one"))
            .collect()
    }

    pub fn is_tropical_cycle(&self) -> bool {
        self.balance_reports().iter().all(|r| r.balanced)
    }

    /// Codimension-one cells where balancing fails.
    pub fn boundary_faces(&self) -> Vec<usize> {
        self.balance_reports()
            .into_iter()
            .filter(|r| !r.balanced)
            .map(|r| r.face)
            .collect()
    }
}

impl fmt::Display for WeightedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-cycle in R^{}:", self.dim, self.ambient_dim())?;
        if self.is_zero() {
            return write!(f, " 0");
        }
        for (p, m) in self.weighted_cells() {
            write!(f, " [{m}] {p};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, zvec};

    fn ray(dir: &[i64]) -> Polyhedron {
        Polyhedron::from_v_rep(dir.len(), &[qvec(&vec![0; dir.len()])], &[qvec(dir)], &[]).unwrap()
    }

    fn line(dir: &[i64]) -> Polyhedron {
        Polyhedron::from_v_rep(dir.len(), &[qvec(&vec![0; dir.len()])], &[], &[qvec(dir)]).unwrap()
    }

    fn tropical_line() -> WeightedComplex {
        WeightedComplex::from_cells(2, 1, vec![(ray(&[1, 0]), 1), (ray(&[0, 1]), 1), (ray(&[-1, -1]), 1)]).unwrap()
    }

    #[test]
    fn balancing_examples() {
        let l = tropical_line();
        assert!(l.is_tropical_cycle());
        let origin = l.complex().cells_of_dim(0)[0];
        assert_eq!(l.is_balanced_at(origin).unwrap().certificate, zvec(&[0, 0]));

        let half = WeightedComplex::from_cells(2, 1, vec![(ray(&[1, 0]), 1)]).unwrap();
        let r = half.is_balanced_at(half.complex().cells_of_dim(0)[0]).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.certificate, zvec(&[1, 0]));
        assert_eq!(half.boundary_faces().len(), 1);

        let axis = WeightedComplex::from_cells(2, 1, vec![(ray(&[1, 0]), 1), (ray(&[-1, 0]), 1)]).unwrap();
        assert!(axis.is_tropical_cycle());
        assert!(WeightedComplex::zero(2, 1).is_tropical_cycle());
    }

    #[test]
    fn equivalence_up_to_subdivision() {
        let axis2 = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 2)]).unwrap();
        let split = WeightedComplex::from_cells(2, 1, vec![(ray(&[1, 0]), 2), (ray(&[-1, 0]), 2)]).unwrap();
        assert!(axis2.equivalent(&split));
        let axis1 = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 1)]).unwrap();
        assert!(!axis1.equivalent(&axis2));
        let zero_weight = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 0)]).unwrap();
        assert!(zero_weight.equivalent(&WeightedComplex::zero(2, 1)));
        assert!(zero_weight.complex().is_empty());
    }

    #[test]
    fn group_laws() {
        let l = tropical_line();
        assert!(l.add(&l.negated()).unwrap().is_zero());
        let axis1 = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 1)]).unwrap();
        let axis2 = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 2)]).unwrap();
        let axis3 = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 3)]).unwrap();
        assert!(axis1.add(&axis2).unwrap().equivalent(&axis3));
        let r1 = WeightedComplex::from_cells(2, 1, vec![(ray(&[1, 0]), 1)]).unwrap();
        let r2 = WeightedComplex::from_cells(2, 1, vec![(ray(&[-1, 0]), 1)]).unwrap();
        let sum = r1.add(&r2).unwrap();
        assert_ne!(sum, axis1);
        assert!(sum.equivalent(&axis1));
    }

    #[test]
    fn crossing_lines_are_subdivided() {
        let x = WeightedComplex::from_cells(2, 1, vec![(line(&[1, 0]), 1)]).unwrap();
        let y = WeightedComplex::from_cells(2, 1, vec![(line(&[0, 1]), 1)]).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.weights().len(), 4);
        s.complex().validate().unwrap();
        assert!(s.is_tropical_cycle());
    }
}
