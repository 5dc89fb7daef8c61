use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{to_q, QVector, Rational, ZMatrix};
use crate::polyhedra::{supporting_hyperplanes, AffineForm, PolyComplex, Polyhedron};

/// `x ↦ A x + t` with integer linear part and rational translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: ZMatrix,
    pub translation: QVector,
}

impl AffineMap {
    pub fn new(linear: ZMatrix, translation: QVector) -> Result<Self> {
        if translation.len() != linear.rows() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                found: translation.len(),
            });
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn linear_map(linear: ZMatrix) -> Self {
        let k = linear.rows();
        AffineMap {
            linear,
            translation: vec![Rational::zero(); k],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear_map(ZMatrix::identity(n))
    }

    /// Stacks affine forms as the rows of a map.
    pub fn from_rows(rows: &[AffineForm], source_dim: usize) -> Self {
        let normals: Vec<_> = rows.iter().map(|r| r.normal.clone()).collect();
        AffineMap {
            linear: ZMatrix::from_rows(&normals, source_dim),
            translation: rows.iter().map(|r| r.constant.clone()).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.linear.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn eval(&self, x: &[Rational]) -> QVector {
        self.linear
            .mul_qvec(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.mul(&inner.linear),
            translation: self.eval(&inner.translation),
        }
    }

    pub fn row(&self, i: usize) -> AffineForm {
        AffineForm::new(self.linear.row(i), self.translation[i].clone())
    }

    /// `x ↦ (x, A x + t)`.
    pub fn graph(&self) -> AffineMap {
        let n = self.source_dim();
        let k = self.target_dim();
        let mut m = ZMatrix::zeros(n + k, n);
        for i in 0..n {
            m.set(i, i, 1.into());
        }
        for i in 0..k {
            for j in 0..n {
                m.set(n + i, j, self.linear.get(i, j).clone());
            }
        }
        let mut t = vec![Rational::zero(); n];
        t.extend(self.translation.iter().cloned());
        AffineMap {
            linear: m,
            translation: t,
        }
    }

    /// Whether both maps agree on the polyhedron `p`.
    fn agrees_on(&self, other: &AffineMap, p: &Polyhedron) -> bool {
        p.vertices().iter().all(|v| self.eval(v) == other.eval(v))
            && p.rays().iter().chain(p.lineality()).all(|r| {
                let q = to_q(r);
                self.linear.mul_qvec(&q) == other.linear.mul_qvec(&q)
            })
    }
}

/// A continuous map that is affine on every cell of its domain complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    domain: PolyComplex,
    target_dim: usize,
    maps: Vec<AffineMap>,
}

impl PLMap {
    /// Builds the map from cells with their affine pieces. The cells must
    /// form a complex and the pieces must agree on shared faces.
    pub fn new(ambient_dim: usize, target_dim: usize, pieces: Vec<(Polyhedron, AffineMap)>) -> Result<Self> {
        for (_, m) in &pieces {
            if m.source_dim() != ambient_dim || m.target_dim() != target_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.source_dim(),
                });
            }
        }
        let domain = PolyComplex::new(ambient_dim, pieces.iter().map(|(p, _)| p.clone()).collect())?;
        let mut maps = Vec::with_capacity(domain.len());
        for cell in domain.cells() {
            let anchor = cell.anchor().expect("cells are nonempty");
            let owners: Vec<&AffineMap> = pieces
                .iter()
                .filter(|(p, _)| p.contains(anchor))
                .map(|(_, m)| m)
                .collect();
            let first = owners[0];
            if owners.iter().any(|m| !m.agrees_on(first, cell)) {
                return Err(Error::NotPiecewiseLinear(format!(
                    "affine pieces disagree on the shared face {cell}"
                )));
            }
            maps.push(first.clone());
        }
        Ok(PLMap {
            domain,
            target_dim,
            maps,
        })
    }

    /// Assigns to each cell of `domain` the affine map returned by `piece`.
    /// The caller guarantees continuity.
    pub(crate) fn from_domain(
        domain: PolyComplex,
        target_dim: usize,
        piece: impl Fn(&Polyhedron) -> Option<AffineMap>,
    ) -> Result<Self> {
        let maps = domain
            .cells()
            .iter()
            .map(|c| {
                piece(c).ok_or_else(|| Error::NotPiecewiseLinear(format!("no affine piece on {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PLMap {
            domain,
            target_dim,
            maps,
        })
    }

    pub fn affine(map: AffineMap) -> Self {
        let n = map.source_dim();
        let domain = PolyComplex::new(n, vec![Polyhedron::whole_space(n)]).expect("single cell");
        let target_dim = map.target_dim();
        let maps = vec![map; domain.len()];
        PLMap {
            domain,
            target_dim,
            maps,
        }
    }

    pub fn linear(matrix: ZMatrix) -> Self {
        Self::affine(AffineMap::linear_map(matrix))
    }

    pub fn identity(n: usize) -> Self {
        Self::affine(AffineMap::identity(n))
    }

    pub fn domain(&self) -> &PolyComplex {
        &self.domain
    }

    pub fn source_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// The affine piece on domain cell `i`.
    pub fn piece(&self, i: usize) -> &AffineMap {
        &self.maps[i]
    }

    /// The affine piece of some domain cell containing `x`.
    pub fn piece_at(&self, x: &[Rational]) -> Option<&AffineMap> {
        (0..self.domain.len())
            .find(|&i| self.domain.cell(i).contains(x))
            .map(|i| &self.maps[i])
    }

    pub fn eval(&self, x: &[Rational]) -> Result<QVector> {
        self.piece_at(x).map(|m| m.eval(x)).ok_or(Error::NotInSupport)
    }

    /// Hyperplanes along which the domain cells are cut out.
    pub fn hyperplanes(&self) -> Vec<AffineForm> {
        let maximal = self.domain.maximal_cells();
        supporting_hyperplanes(maximal.iter().map(|&i| self.domain.cell(i)))
    }

    /// `self ∘ inner`, defined where `inner` lands in the domain of `self`.
    pub fn compose(&self, inner: &PLMap) -> Result<PLMap> {
        if inner.target_dim != self.source_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim(),
                found: inner.target_dim,
            });
        }
        let mut pieces = Vec::new();
        for &i in &inner.domain.maximal_cells() {
            let delta = inner.domain.cell(i);
            let a = &inner.maps[i];
            for &j in &self.domain.maximal_cells() {
                let pre = self.domain.cell(j).affine_preimage(&a.linear, &a.translation);
                let piece = delta.intersect(&pre)?;
                if !piece.is_empty() {
                    pieces.push(piece);
                }
            }
        }
        let domain = PolyComplex::from_cells_unchecked(inner.source_dim(), pieces);
        Self::from_domain(domain, self.target_dim, |c| {
            let x = c.anchor()?;
            let a = inner.piece_at(x)?;
            let b = self.piece_at(&a.eval(x))?;
            Some(b.compose(a))
        })
    }

    /// `x ↦ (x, F(x))`.
    pub fn graph_map(&self) -> PLMap {
        PLMap {
            domain: self.domain.clone(),
            target_dim: self.source_dim() + self.target_dim,
            maps: self.maps.iter().map(AffineMap::graph).collect(),
        }
    }

    pub fn component(&self, i: usize) -> PLFunction {
        PLFunction(PLMap {
            domain: self.domain.clone(),
            target_dim: 1,
            maps: self
                .maps
                .iter()
                .map(|m| AffineMap::from_rows(&[m.row(i)], m.source_dim()))
                .collect(),
        })
    }

    /// Stacks scalar functions into a map on the common refinement of
    /// their domains.
    pub fn from_components(ambient_dim: usize, components: &[PLFunction]) -> Result<PLMap> {
        let mut domain = PolyComplex::new(ambient_dim, vec![Polyhedron::whole_space(ambient_dim)])?;
        for f in components {
            domain = domain.common_refinement(f.domain())?;
        }
        Self::from_domain(domain, components.len(), |c| {
            let x = c.anchor()?;
            let rows = components
                .iter()
                .map(|f| f.form_at(x))
                .collect::<Option<Vec<_>>>()?;
            Some(AffineMap::from_rows(&rows, ambient_dim))
        })
    }
}

/// A piecewise linear function with integer slopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction(PLMap);

impl PLFunction {
    pub fn new(ambient_dim: usize, pieces: Vec<(Polyhedron, AffineForm)>) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(p, f)| (p, AffineMap::from_rows(&[f], ambient_dim)))
            .collect();
        Ok(PLFunction(PLMap::new(ambient_dim, 1, pieces)?))
    }

    pub fn affine(form: AffineForm) -> Self {
        let n = form.dim();
        PLFunction(PLMap::affine(AffineMap::from_rows(&[form], n)))
    }

    /// `max_i (⟨u_i, x⟩ + c_i)` on `R^n`, with domain the arrangement of the
    /// tie hyperplanes.
    pub fn max_of_affine(ambient_dim: usize, terms: &[AffineForm]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("max of no terms".into()));
        }
        for t in terms {
            if t.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: t.dim(),
                });
            }
        }
        // Region where term i attains the maximum.
        let mut regions = Vec::new();
        for a in terms {
            let ineqs: Vec<AffineForm> = terms
                .iter()
                .map(|b| {
                    let normal: Vec<Rational> = a
                        .normal
                        .iter()
                        .zip(&b.normal)
                        .map(|(x, y)| Rational::from_integer(x - y))
                        .collect();
                    AffineForm::from_rational(&normal, &(&a.constant - &b.constant))
                })
                .collect();
            let region = Polyhedron::from_h_rep(ambient_dim, &ineqs, &[])?;
            if !region.is_empty() && region.dim() == ambient_dim {
                regions.push(region);
            }
        }
        let domain = PolyComplex::from_cells_unchecked(ambient_dim, regions);
        let map = PLMap::from_domain(domain, 1, |c| {
            let x = c.anchor()?;
            let best = terms
                .iter()
                .max_by(|a, b| a.eval(x).cmp(&b.eval(x)))
                .expect("nonempty");
            Some(AffineMap::from_rows(std::slice::from_ref(best), ambient_dim))
        })?;
        Ok(PLFunction(map))
    }

    pub fn as_map(&self) -> &PLMap {
        &self.0
    }

    pub fn domain(&self) -> &PolyComplex {
        self.0.domain()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.source_dim()
    }

    /// The affine form of some domain cell containing `x`.
    pub fn form_at(&self, x: &[Rational]) -> Option<AffineForm> {
        self.0.piece_at(x).map(|m| m.row(0))
    }

    pub fn form(&self, cell: usize) -> AffineForm {
        self.0.piece(cell).row(0)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        Ok(self.0.eval(x)?.remove(0))
    }

    /// `f ∘ L` for an integer matrix `L: R^m → R^n`.
    pub fn pullback_linear(&self, l: &ZMatrix) -> Result<PLFunction> {
        Ok(PLFunction(self.0.compose(&PLMap::linear(l.clone()))?))
    }

    /// `f ∘ F` for a PL map `F`.
    pub fn pullback(&self, inner: &PLMap) -> Result<PLFunction> {
        Ok(PLFunction(self.0.compose(inner)?))
    }

    pub fn add(&self, other: &PLFunction) -> Result<PLFunction> {
        let n = self.ambient_dim();
        let domain = self.domain().common_refinement(other.domain())?;
        let map = PLMap::from_domain(domain, 1, |c| {
            let x = c.anchor()?;
            let a = self.form_at(x)?;
            let b = other.form_at(x)?;
            let sum = AffineForm::new(
                a.normal.iter().zip(&b.normal).map(|(p, q)| p + q).collect(),
                &a.constant + &b.constant,
            );
            Some(AffineMap::from_rows(&[sum], n))
        })?;
        Ok(PLFunction(map))
    }

    pub fn negated(&self) -> PLFunction {
        let n = self.ambient_dim();
        let maps = self.0.maps.iter().map(|m| AffineMap::from_rows(&[m.row(0).negated()], n)).collect();
        PLFunction(PLMap {
            domain: self.0.domain.clone(),
            target_dim: 1,
            maps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, rat, zvec};
    use crate::polyhedra::halfspace;

    #[test]
    fn max_of_affine_values() {
        let f = PLFunction::max_of_affine(
            2,
            &[
                halfspace(&[0, 0], rat(0, 1)),
                halfspace(&[1, 0], rat(0, 1)),
                halfspace(&[0, 1], rat(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(f.domain().cells_of_dim(2).len(), 3);
        assert_eq!(f.eval(&qvec(&[3, 1])).unwrap(), rat(3, 1));
        assert_eq!(f.eval(&qvec(&[-3, -1])).unwrap(), rat(0, 1));
        assert_eq!(f.form_at(&qvec(&[1, 5])).unwrap().normal, zvec(&[0, 1]));
    }

    #[test]
    fn inconsistent_pieces_are_rejected() {
        let left = Polyhedron::from_h_rep(1, &[halfspace(&[-1], rat(0, 1))], &[]).unwrap();
        let right = Polyhedron::from_h_rep(1, &[halfspace(&[1], rat(0, 1))], &[]).unwrap();
        let bad = PLFunction::new(1, vec![(left.clone(), halfspace(&[0], rat(0, 1))), (right.clone(), halfspace(&[1], rat(1, 1)))]);
        assert!(matches!(bad, Err(Error::NotPiecewiseLinear(_))));
        let good = PLFunction::new(1, vec![(left, halfspace(&[0], rat(0, 1))), (right, halfspace(&[1], rat(0, 1)))]);
        assert!(good.is_ok());
    }

    #[test]
    fn composition_and_sum() {
        let f = PLFunction::max_of_affine(1, &[halfspace(&[0], rat(0, 1)), halfspace(&[1], rat(0, 1))]).unwrap();
        let g = f.pullback_linear(&ZMatrix::from_i64(1, 2, &[1, -1])).unwrap();
        assert_eq!(g.eval(&qvec(&[3, 1])).unwrap(), rat(2, 1));
        assert_eq!(g.eval(&qvec(&[1, 3])).unwrap(), rat(0, 1));
        let h = f.add(&f.negated()).unwrap();
        assert_eq!(h.eval(&qvec(&[7])).unwrap(), rat(0, 1));
        let m = PLMap::from_components(1, &[f.clone(), f.negated()]).unwrap();
        assert_eq!(m.eval(&qvec(&[2])).unwrap(), qvec(&[2, -2]));
        assert_eq!(m.graph_map().eval(&qvec(&[2])).unwrap(), qvec(&[2, 2, -2]));
    }
}
