use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::polyhedron::{AffineForm, Polyhedron};
use crate::error::{Error, Result};
use crate::linalg::{Integer, Rational};

/// A face-closed collection of polyhedra, sorted by `(dim, canonical key)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyComplex {
    ambient_dim: usize,
    cells: Vec<Polyhedron>,
    facets: Vec<Vec<usize>>,
}

/// Cells containing a point together with the fan of tangent cones there.
#[derive(Clone, Debug)]
pub struct Star {
    pub cells: Vec<usize>,
    pub fan: PolyComplex,
}

impl PolyComplex {
    pub fn empty(ambient_dim: usize) -> Self {
        PolyComplex {
            ambient_dim,
            cells: Vec::new(),
            facets: Vec::new(),
        }
    }

    /// Face-closes `cells` and checks that cells meet in common faces.
    pub fn new(ambient_dim: usize, cells: Vec<Polyhedron>) -> Result<Self> {
        for c in &cells {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: c.ambient_dim(),
                });
            }
        }
        let complex = Self::from_cells_unchecked(ambient_dim, cells);
        complex.validate()?;
        Ok(complex)
    }

    /// Face closure without the pairwise intersection check. Callers must
    /// guarantee the cells already form a complex.
    pub(crate) fn from_cells_unchecked(ambient_dim: usize, cells: Vec<Polyhedron>) -> Self {
        let mut facet_map: BTreeMap<Polyhedron, Vec<Polyhedron>> = BTreeMap::new();
        let mut stack: Vec<Polyhedron> = cells.into_iter().filter(|c| !c.is_empty()).collect();
        while let Some(p) = stack.pop() {
            if facet_map.contains_key(&p) {
                continue;
            }
            let fs = p.facets();
            stack.extend(fs.iter().cloned());
            facet_map.insert(p, fs);
        }
        let cells: Vec<Polyhedron> = facet_map.keys().cloned().collect();
        let facets = facet_map
            .values()
            .map(|fs| {
                let mut idx: Vec<usize> = fs
                    .iter()
                    .map(|f| cells.binary_search(f).expect("face closure"))
                    .collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        PolyComplex {
            ambient_dim,
            cells,
            facets,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cells(&self) -> &[Polyhedron] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Polyhedron {
        &self.cells[i]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Largest cell dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.last().map(Polyhedron::dim)
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim() == d).collect()
    }

    /// Indices of the facets of cell `i`.
    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    /// Cells having `i` as a facet.
    pub fn cofacets_of(&self, i: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&j| self.facets[j].binary_search(&i).is_ok()).collect()
    }

    /// All faces of cell `i` (including `i`), ascending.
    pub fn faces_of(&self, i: usize) -> Vec<usize> {
        let mut seen = vec![false; self.cells.len()];
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            if std::mem::replace(&mut seen[k], true) {
                continue;
            }
            stack.extend(self.facets[k].iter().copied());
        }
        (0..self.cells.len()).filter(|&k| seen[k]).collect()
    }

    /// Cells that are not a proper face of another cell.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut is_face = vec![false; self.cells.len()];
        for fs in &self.facets {
            for &f in fs {
                is_face[f] = true;
            }
        }
        (0..self.cells.len()).filter(|&i| !is_face[i]).collect()
    }

    pub fn index_of(&self, p: &Polyhedron) -> Option<usize> {
        self.cells.binary_search(p).ok()
    }

    /// The cell whose relative interior contains `x`.
    pub fn locate(&self, x: &[Rational]) -> Option<usize> {
        (0..self.cells.len()).find(|&i| self.cells[i].contains_in_relative_interior(x))
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.locate(x).is_some()
    }

    /// Every pair of maximal cells meets in a common face (or not at all).
    pub fn validate(&self) -> Result<()> {
        let maximal = self.maximal_cells();
        for (k, &i) in maximal.iter().enumerate() {
            for &j in &maximal[k + 1..] {
                let a = &self.cells[i];
                let b = &self.cells[j];
                let meet = a.intersect(b)?;
                if meet.is_empty() {
                    continue;
                }
                if !meet.is_face_of(a) || !meet.is_face_of(b) {
                    return Err(Error::InvalidInput(format!(
                        "cells {a} and {b} meet in {meet}, which is not a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every cell is a cone with apex at the origin.
    pub fn is_fan(&self) -> bool {
        self.cells.iter().all(Polyhedron::is_cone)
    }

    /// Every maximal cell has dimension `d`.
    pub fn is_pure(&self, d: usize) -> bool {
        self.maximal_cells().iter().all(|&i| self.cells[i].dim() == d)
    }

    /// Nonempty intersections of cells of both complexes, face-closed.
    pub fn common_refinement(&self, other: &PolyComplex) -> Result<PolyComplex> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut pieces = Vec::new();
        for &i in &self.maximal_cells() {
            for &j in &other.maximal_cells() {
                let meet = self.cells[i].intersect(&other.cells[j])?;
                if !meet.is_empty() {
                    pieces.push(meet);
                }
            }
        }
        Ok(Self::from_cells_unchecked(self.ambient_dim, pieces))
    }

    /// Subdivides every maximal cell by the hyperplanes `{h = 0}`. Two
    /// pieces are either equal or meet in a common face, so the result
    /// is again a complex with the same support.
    pub fn refine_by_hyperplanes(&self, hyperplanes: &[AffineForm]) -> PolyComplex {
        let pieces = self
            .maximal_cells()
            .into_iter()
            .flat_map(|i| split_by_hyperplanes(&self.cells[i], hyperplanes))
            .collect();
        Self::from_cells_unchecked(self.ambient_dim, pieces)
    }

    /// Cells containing `omega` and the fan `{R≥0 (σ − ω)}` they generate.
    /// When `omega` is not a vertex the tangent cones share a lineality
    /// space; they are then cut by the coordinate hyperplanes so that the
    /// returned fan is pointed.
    pub fn star(&self, omega: &[Rational]) -> Result<Star> {
        if omega.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: omega.len(),
            });
        }
        let cells: Vec<usize> = (0..self.cells.len()).filter(|&i| self.cells[i].contains(omega)).collect();
        if cells.is_empty() {
            return Err(Error::NotInSupport);
        }
        let cones: Vec<Polyhedron> = cells.iter().map(|&i| self.cells[i].tangent_cone(omega)).collect();
        let mut fan = Self::from_cells_unchecked(self.ambient_dim, cones);
        let carrier = self.locate(omega).expect("omega lies in the support");
        if self.cells[carrier].dim() > 0 {
            let coords: Vec<AffineForm> = (0..self.ambient_dim)
                .map(|i| {
                    let mut e = vec![Integer::zero(); self.ambient_dim];
                    e[i] = Integer::from(1);
                    AffineForm::new(e, Rational::zero())
                })
                .collect();
            fan = fan.refine_by_hyperplanes(&coords);
        }
        Ok(Star { cells, fan })
    }
}

/// Cuts `p` successively by each hyperplane that crosses it.
pub(crate) fn split_by_hyperplanes(p: &Polyhedron, hyperplanes: &[AffineForm]) -> Vec<Polyhedron> {
    let mut current = vec![p.clone()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(current.len());
        for q in current {
            if crosses(&q, h) {
                next.push(q.cut(std::slice::from_ref(h), &[]).expect("same dimension"));
                next.push(q.cut(&[h.negated()], &[]).expect("same dimension"));
            } else {
                next.push(q);
            }
        }
        current = next;
    }
    current
}

/// Canonical representative of the hyperplane `{h = 0}`: first nonzero
/// normal entry positive. `None` for a constant form.
pub(crate) fn hyperplane_key(h: &AffineForm) -> Option<AffineForm> {
    let first = h.normal.iter().find(|x| !x.is_zero())?;
    Some(if first.is_negative() { h.negated() } else { h.clone() })
}

/// Canonical, deduplicated hyperplanes supporting the facets and affine
/// hulls of the given polyhedra.
pub(crate) fn supporting_hyperplanes<'a>(cells: impl IntoIterator<Item = &'a Polyhedron>) -> Vec<AffineForm> {
    let mut set = std::collections::BTreeSet::new();
    for c in cells {
        for h in c.equations().iter().chain(c.inequalities()) {
            if let Some(k) = hyperplane_key(h) {
                set.insert(k);
            }
        }
    }
    set.into_iter().collect()
}

/// Whether `{h = 0}` meets the relative interior of `p` without containing it.
pub(crate) fn crosses(p: &Polyhedron, h: &AffineForm) -> bool {
    let mut pos = false;
    let mut neg = false;
    for v in p.vertices() {
        let s = h.eval(v);
        pos |= s.is_positive();
        neg |= s.is_negative();
    }
    for r in p.rays() {
        let s = h.slope(&crate::linalg::to_q(r));
        pos |= s.is_positive();
        neg |= s.is_negative();
    }
    for l in p.lineality() {
        if !h.slope(&crate::linalg::to_q(l)).is_zero() {
            pos = true;
            neg = true;
        }
    }
    pos && neg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, rat};

    fn interval(a: Rational, b: Rational) -> Polyhedron {
        Polyhedron::from_v_rep(1, &[vec![a], vec![b]], &[], &[]).unwrap()
    }

    fn ray(dir: &[i64]) -> Polyhedron {
        Polyhedron::from_v_rep(dir.len(), &[vec![Rational::zero(); dir.len()]], &[qvec(dir)], &[]).unwrap()
    }

    fn maximal(c: &PolyComplex) -> Vec<Polyhedron> {
        c.maximal_cells().iter().map(|&i| c.cell(i).clone()).collect()
    }

    #[test]
    fn faces_are_completed() {
        let c = PolyComplex::new(1, vec![interval(rat(0, 1), rat(1, 1)), interval(rat(1, 1), rat(2, 1))]).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.cells_of_dim(0).len(), 3);
        let top = c.cells_of_dim(1);
        assert_eq!(c.facets_of(top[0]).len(), 2);
        assert_eq!(c.cofacets_of(c.locate(&qvec(&[1])).unwrap()).len(), 2);
    }

    #[test]
    fn rejects_overlaps() {
        let bad = PolyComplex::new(1, vec![interval(rat(0, 1), rat(2, 1)), interval(rat(1, 1), rat(3, 1))]);
        assert!(matches!(bad, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn refinement_of_intervals() {
        let a = PolyComplex::new(1, vec![interval(rat(0, 1), rat(1, 1)), interval(rat(1, 1), rat(2, 1))]).unwrap();
        let b = PolyComplex::new(1, vec![interval(rat(0, 1), rat(3, 2)), interval(rat(3, 2), rat(2, 1))]).unwrap();
        let r = a.common_refinement(&b).unwrap();
        assert_eq!(
            maximal(&r),
            vec![
                interval(rat(0, 1), rat(1, 1)),
                interval(rat(1, 1), rat(3, 2)),
                interval(rat(3, 2), rat(2, 1))
            ]
        );
        assert_eq!(r.cells_of_dim(0).len(), 4);
        assert_eq!(a.common_refinement(&a).unwrap(), a);
        assert_eq!(r, b.common_refinement(&a).unwrap());
    }

    #[test]
    fn fan_meets_interval() {
        let fan = PolyComplex::new(1, vec![ray(&[1]), ray(&[-1])]).unwrap();
        let seg = PolyComplex::new(1, vec![interval(rat(-1, 1), rat(1, 1))]).unwrap();
        let r = fan.common_refinement(&seg).unwrap();
        assert_eq!(maximal(&r), vec![interval(rat(-1, 1), rat(0, 1)), interval(rat(0, 1), rat(1, 1))]);
        assert_eq!(r.cells_of_dim(0).len(), 3);
    }

    #[test]
    fn stars() {
        let seg = PolyComplex::new(1, vec![interval(rat(0, 1), rat(1, 1))]).unwrap();
        let s = seg.star(&[rat(1, 2)]).unwrap();
        assert_eq!(s.fan.cells().to_vec(), vec![Polyhedron::point(qvec(&[0])), ray(&[-1]), ray(&[1])]);
        assert!(s.fan.is_fan());
        let s = seg.star(&qvec(&[0])).unwrap();
        assert_eq!(s.fan.cells().to_vec(), vec![Polyhedron::point(qvec(&[0])), ray(&[1])]);
        assert!(matches!(seg.star(&qvec(&[2])), Err(Error::NotInSupport)));

        let line = PolyComplex::new(2, vec![ray(&[1, 0]), ray(&[0, 1]), ray(&[-1, -1])]).unwrap();
        let s = line.star(&qvec(&[0, 0])).unwrap();
        assert_eq!(s.fan, line);
    }

    #[test]
    fn fan_predicate() {
        let quadrant = Polyhedron::from_v_rep(2, &[qvec(&[0, 0])], &[qvec(&[1, 0]), qvec(&[0, 1])], &[]).unwrap();
        assert!(PolyComplex::new(2, vec![quadrant]).unwrap().is_fan());
        let square = Polyhedron::from_v_rep(2, &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1])], &[], &[])
            .unwrap();
        assert!(!PolyComplex::new(2, vec![square]).unwrap().is_fan());
        assert!(PolyComplex::new(2, vec![Polyhedron::point(qvec(&[0, 0]))]).unwrap().is_fan());
    }

    #[test]
    fn hyperplane_refinement_keeps_support() {
        let plane = PolyComplex::new(2, vec![Polyhedron::whole_space(2)]).unwrap();
        let cuts = [
            AffineForm::new(vec![Integer::from(1), Integer::from(0)], Rational::zero()),
            AffineForm::new(vec![Integer::from(0), Integer::from(1)], Rational::zero()),
        ];
        let r = plane.refine_by_hyperplanes(&cuts);
        assert_eq!(r.cells_of_dim(2).len(), 4);
        assert_eq!(r.cells_of_dim(1).len(), 4);
        assert_eq!(r.cells_of_dim(0).len(), 1);
        r.validate().unwrap();
    }
}
