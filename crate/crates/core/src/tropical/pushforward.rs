use crate::error::{Error, Result};
use crate::linalg::{image_index, ZMatrix};

use super::divisor::{refine_along, weil_divisor};
use super::plmap::{PLFunction, PLMap};
use super::weighted::WeightedComplex;

/// `L_*(C)`: images of the top cells on which `L` is injective, weighted by
/// `m_σ · [N'_{σ'} : L(N_σ)]`, with overlapping images summed.
pub fn pushforward(c: &WeightedComplex, l: &PLMap) -> Result<WeightedComplex> {
    if l.source_dim() != c.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: c.ambient_dim(),
            found: l.source_dim(),
        });
    }
    let refined = refine_along(c, l)?;
    let r = &refined.complex;
    let mut images = Vec::new();
    for (&i, &m) in r.weights() {
        let cell = r.complex().cell(i);
        let a = &refined.pieces[i];
        let image = cell.affine_image(&a.linear, &a.translation);
        if image.dim() < c.dim() {
            continue;
        }
        let index = image_index(&a.linear, cell.span_basis());
        let index = i64::try_from(index).map_err(|_| Error::InvalidInput("lattice index overflows i64".into()))?;
        images.push((image, m * index));
    }
    Ok(WeightedComplex::from_overlapping(l.target_dim(), c.dim(), images))
}

pub fn pushforward_linear(c: &WeightedComplex, l: &ZMatrix) -> Result<WeightedComplex> {
    pushforward(c, &PLMap::linear(l.clone()))
}

/// Both sides of `L_*(div(φ ∘ L)) = div(φ)` on `L_*(C)`.
#[derive(Clone, Debug)]
pub struct ProjectionFormula {
    pub pushed_divisor: WeightedComplex,
    pub divisor_of_pushforward: WeightedComplex,
    pub equal: bool,
}

pub fn projection_formula_check(c: &WeightedComplex, l: &ZMatrix, phi: &PLFunction) -> Result<ProjectionFormula> {
    let pulled = phi.pullback_linear(l)?;
    let lhs = pushforward_linear(&weil_divisor(c, &pulled)?, l)?;
    let rhs = weil_divisor(&pushforward_linear(c, l)?, phi)?;
    let equal = lhs.equivalent(&rhs);
    Ok(ProjectionFormula {
        pushed_divisor: lhs,
        divisor_of_pushforward: rhs,
        equal,
    })
}

/// `(L2 ∘ L1)_*(C)` against `L2_*(L1_*(C))`.
#[derive(Clone, Debug)]
pub struct Functoriality {
    pub composite: WeightedComplex,
    pub iterated: WeightedComplex,
    pub equal: bool,
}

pub fn functoriality_check(c: &WeightedComplex, l1: &PLMap, l2: &PLMap) -> Result<Functoriality> {
    let composite = pushforward(c, &l2.compose(l1)?)?;
    let iterated = pushforward(&pushforward(c, l1)?, l2)?;
    let equal = composite.equivalent(&iterated);
    Ok(Functoriality {
        composite,
        iterated,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, rat};
    use crate::polyhedra::{halfspace, Polyhedron};

    fn line(dir: &[i64]) -> WeightedComplex {
        let p = Polyhedron::from_v_rep(dir.len(), &[qvec(&vec![0; dir.len()])], &[], &[qvec(dir)]).unwrap();
        WeightedComplex::from_cells(dir.len(), 1, vec![(p, 1)]).unwrap()
    }

    fn real_line(m: i64) -> WeightedComplex {
        WeightedComplex::from_cells(1, 1, vec![(Polyhedron::whole_space(1), m)]).unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let px = ZMatrix::from_i64(1, 2, &[1, 0]);
        assert!(pushforward_linear(&line(&[1, 1]), &px).unwrap().equivalent(&real_line(1)));
        assert!(pushforward_linear(&line(&[0, 1]), &px).unwrap().is_zero());
        let py = ZMatrix::from_i64(1, 2, &[0, 1]);
        let img = pushforward_linear(&line(&[1, 3]), &py).unwrap();
        assert_eq!(img.weights().values().copied().collect::<Vec<_>>(), vec![3]);
        assert!(img.equivalent(&real_line(3)));
    }

    #[test]
    fn overlapping_images_add() {
        // x-axis and diagonal both project onto the x-axis
        let c = line(&[1, 0]).add(&line(&[1, 1])).unwrap();
        let img = pushforward_linear(&c, &ZMatrix::from_i64(1, 2, &[1, 0])).unwrap();
        assert!(img.equivalent(&real_line(2)));
    }

    #[test]
    fn projection_formula_on_diagonal() {
        let phi = PLFunction::max_of_affine(1, &[halfspace(&[0], rat(0, 1)), halfspace(&[1], rat(0, 1))]).unwrap();
        let r = projection_formula_check(&line(&[1, 1]), &ZMatrix::from_i64(1, 2, &[1, 0]), &phi).unwrap();
        assert!(r.equal);
        assert_eq!(r.divisor_of_pushforward.weighted_cells(), vec![(&Polyhedron::point(qvec(&[0])), 1)]);
    }

    #[test]
    fn identity_functoriality() {
        let c = line(&[2, 1]);
        let id = PLMap::identity(2);
        let r = functoriality_check(&c, &id, &id).unwrap();
        assert!(r.equal);
        assert!(r.composite.equivalent(&c));
    }
}
