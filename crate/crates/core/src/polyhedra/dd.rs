//! Double description for polyhedral cones `{y : A y >= 0, E y = 0}`.

use num_traits::{Signed, Zero};

use crate::linalg::{dot_q, primitive, rat_int, QVector, Rational};

/// `cone = span(lineality) + cone(rays)`, rays extreme modulo lineality.
#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lineality: Vec<QVector>,
    pub rays: Vec<QVector>,
}

fn normalized(v: &[Rational]) -> QVector {
    primitive(v).iter().map(rat_int).collect()
}

fn axpy(y: &mut QVector, a: &Rational, x: &[Rational]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Motzkin's double description with the combinatorial adjacency test.
pub(crate) fn cone_generators(dim: usize, inequalities: &[QVector], equations: &[QVector]) -> ConeGenerators {
    let mut lineality: Vec<QVector> = (0..dim)
        .map(|i| {
            let mut e = vec![Rational::zero(); dim];
            e[i] = Rational::from_integer(1.into());
            e
        })
        .collect();
    let mut rays: Vec<QVector> = Vec::new();
    let mut processed: Vec<QVector> = Vec::new();

    let constraints = equations
        .iter()
        .flat_map(|e| [e.clone(), e.iter().map(|x| -x).collect::<QVector>()])
        .chain(inequalities.iter().cloned());

    for a in constraints {
        debug_assert_eq!(a.len(), dim);
        if let Some(k) = lineality.iter().position(|l| !dot_q(&a, l).is_zero()) {
            let mut l0 = lineality.remove(k);
            let mut s = dot_q(&a, &l0);
            if s.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                s = -s;
            }
            for l in lineality.iter_mut() {
                let t = dot_q(&a, l);
                if !t.is_zero() {
                    axpy(l, &(-t / &s), &l0);
                }
            }
            for r in rays.iter_mut() {
                let t = dot_q(&a, r);
                if !t.is_zero() {
                    axpy(r, &(-t / &s), &l0);
                    *r = normalized(r);
                }
            }
            rays.push(normalized(&l0));
            processed.push(a);
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| dot_q(&a, r)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            processed.push(a);
            continue;
        }
        let zero_sets: Vec<Vec<bool>> = rays
            .iter()
            .map(|r| processed.iter().map(|c| dot_q(c, r).is_zero()).collect())
            .collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let mut next: Vec<QVector> = (0..rays.len())
            .filter(|&i| !values[i].is_negative())
            .map(|i| rays[i].clone())
            .collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> = (0..processed.len())
                    .filter(|&c| zero_sets[p][c] && zero_sets[n][c])
                    .collect();
                let adjacent = (0..rays.len())
                    .filter(|&r| r != p && r != n)
                    .all(|r| !common.iter().all(|&c| zero_sets[r][c]));
                if !adjacent {
                    continue;
                }
                let mut v: QVector = rays[n].iter().map(|x| x * &values[p]).collect();
                axpy(&mut v, &(-values[n].clone()), &rays[p]);
                if v.iter().any(|x| !x.is_zero()) {
                    next.push(normalized(&v));
                }
            }
        }
        rays = next;
        processed.push(a);
    }
    ConeGenerators { lineality, rays }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qvec;

    #[test]
    fn quadrant() {
        let g = cone_generators(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[]);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let g = cone_generators(2, &[qvec(&[1, 0])], &[]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
    }

    #[test]
    fn square_cone() {
        // cone over the unit square: x>=0, y>=0, t-x>=0, t-y>=0
        let ineqs = [qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[-1, 0, 1]), qvec(&[0, -1, 1])];
        let g = cone_generators(3, &ineqs, &[]);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
    }

    #[test]
    fn equation_cuts_dimension() {
        let g = cone_generators(3, &[qvec(&[0, 0, 1])], &[qvec(&[1, -1, 0])]);
        assert_eq!(g.lineality.len(), 1);
        let l = &g.lineality[0];
        assert!(l[2].is_zero() && l[0] == l[1] && !l[0].is_zero());
        assert_eq!(g.rays.len(), 1);
    }
}
