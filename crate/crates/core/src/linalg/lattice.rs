use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{
    coordinates, rank_of, round_rational, smith_normal_form, to_q, to_z, Integer, QMatrix,
    QVector, Rational, ZMatrix, ZVector,
};
use crate::error::{Error, Result};

/// Index of a sublattice in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LatticeIndex {
    Finite(Integer),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&Integer> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

impl std::fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// `[Z^ambient_rank : span_Z(columns)]`.
pub fn lattice_index(generators: &ZMatrix, ambient_rank: usize) -> LatticeIndex {
    if generators.cols() == 0 {
        return if ambient_rank == 0 {
            LatticeIndex::Finite(Integer::one())
        } else {
            LatticeIndex::Infinite
        };
    }
    assert_eq!(generators.rows(), ambient_rank, "generators live in the wrong rank");
    let snf = smith_normal_form(generators);
    let divisors = snf.elementary_divisors();
    if divisors.len() < ambient_rank {
        return LatticeIndex::Infinite;
    }
    LatticeIndex::Finite(divisors.iter().product())
}

/// Index of the lattice spanned by the columns inside its saturation, i.e.
/// the product of the nonzero elementary divisors.
pub fn saturation_index(generators: &ZMatrix) -> Integer {
    if generators.cols() == 0 || generators.rows() == 0 {
        return Integer::one();
    }
    smith_normal_form(generators)
        .elementary_divisors()
        .iter()
        .product()
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// echelon rows, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped. Canonical for the lattice.
pub fn hermite_basis(vectors: &[ZVector], dim: usize) -> Vec<ZVector> {
    let mut rows: Vec<ZVector> = vectors.iter().filter(|v| !super::is_zero_z(v)).cloned().collect();
    let mut out: Vec<ZVector> = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // Euclid on column `col` across the remaining rows.
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let piv = *nonzero
                .iter()
                .min_by(|&&a, &&b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)))
                .unwrap();
            for &i in &nonzero {
                if i == piv {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[piv][col]);
                let p = rows[piv].clone();
                for (x, y) in rows[i].iter_mut().zip(&p) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.remove(i);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
        rows.retain(|v| !super::is_zero_z(v));
        col += 1;
    }
    // Reduce entries above pivots.
    for k in 0..out.len() {
        let pc = (0..dim).find(|&c| !out[k][c].is_zero()).unwrap();
        let pivot_row = out[k].clone();
        for r in out.iter_mut().take(k) {
            let q = r[pc].div_floor(&pivot_row[pc]);
            if !q.is_zero() {
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// Basis of `span_Q(columns) ∩ Z^n`, returned as the columns of a matrix
/// in Hermite form.
pub fn saturate(generators: &ZMatrix) -> ZMatrix {
    let n = generators.rows();
    if generators.cols() == 0 || generators.is_zero() {
        return ZMatrix::zeros(n, 0);
    }
    let snf = smith_normal_form(generators);
    let r = snf.rank();
    let cols: Vec<ZVector> = (0..r).map(|j| snf.u.col(j)).collect();
    let basis = hermite_basis(&cols, n);
    ZMatrix::from_columns(&basis, n)
}

/// Convenience: saturated basis of the span of a list of vectors.
pub fn saturate_vectors(vectors: &[ZVector], dim: usize) -> Vec<ZVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    saturate(&ZMatrix::from_columns(vectors, dim)).columns()
}

/// The primitive generator `ω` of `N_σ / N_τ ≅ Z`, signed so that the
/// witness direction has positive coefficient along `ω` modulo `L_τ`.
/// The representative is size-reduced against `N_τ` by rounding.
pub fn primitive_generator(
    tau_basis: &[ZVector],
    sigma_basis: &[ZVector],
    inward_witness: &[Rational],
) -> Result<ZVector> {
    let n = inward_witness.len();
    let rt = rank_of(&tau_basis.iter().map(|v| to_q(v)).collect::<Vec<_>>(), n);
    let rs = rank_of(&sigma_basis.iter().map(|v| to_q(v)).collect::<Vec<_>>(), n);
    if rt != tau_basis.len() || rs != sigma_basis.len() || rs != rt + 1 {
        return Err(Error::RankMismatch(format!(
            "need rank(N_sigma) = rank(N_tau) + 1 with independent bases, got {rs} and {rt}"
        )));
    }
    let sigma_q: Vec<QVector> = sigma_basis.iter().map(|v| to_q(v)).collect();
    // Coordinates of N_tau inside N_sigma.
    let mut t_cols: Vec<ZVector> = Vec::with_capacity(rt);
    for t in tau_basis {
        let c = coordinates(&sigma_q, &to_q(t))
            .ok_or_else(|| Error::RankMismatch("tau lattice not contained in sigma span".into()))?;
        let c = to_z(&c)
            .ok_or_else(|| Error::RankMismatch("tau lattice not contained in sigma lattice".into()))?;
        t_cols.push(c);
    }
    let complement = if rt == 0 {
        let mut e = vec![Integer::zero(); rs];
        e[0] = Integer::one();
        if rs != 1 {
            unreachable!("rank check above");
        }
        e
    } else {
        let t = ZMatrix::from_columns(&t_cols, rs);
        let snf = smith_normal_form(&t);
        if snf.elementary_divisors().iter().any(|d| !d.is_one()) {
            return Err(Error::RankMismatch("tau lattice is not saturated in sigma".into()));
        }
        snf.u.col(rs - 1)
    };
    let mut omega: ZVector = vec![Integer::zero(); n];
    for (k, c) in complement.iter().enumerate() {
        for (o, s) in omega.iter_mut().zip(&sigma_basis[k]) {
            *o += c * s;
        }
    }
    if rt > 0 {
        let tq: Vec<QVector> = tau_basis.iter().map(|v| to_q(v)).collect();
        let b = QMatrix::from_columns(&tq, n);
        let bt = b.transpose();
        let gram = bt.mul(&b);
        let coeffs = gram.solve(&bt.mul_vec(&to_q(&omega))).expect("independent basis");
        for (c, t) in coeffs.iter().zip(tau_basis) {
            let k = round_rational(c);
            if !k.is_zero() {
                for (o, x) in omega.iter_mut().zip(t) {
                    *o -= &k * x;
                }
            }
        }
    }
    // Sign: witness = λ ω + (element of L_τ), want λ > 0.
    let mut cols = vec![to_q(&omega)];
    cols.extend(tau_basis.iter().map(|v| to_q(v)));
    let sol = QMatrix::from_columns(&cols, n)
        .solve(inward_witness)
        .ok_or_else(|| Error::RankMismatch("witness is not in the span of sigma".into()))?;
    let lambda = &sol[0];
    if lambda.is_zero() {
        return Err(Error::RankMismatch("witness lies in the span of tau".into()));
    }
    if lambda.is_negative() {
        omega.iter_mut().for_each(|x| *x = -x.clone());
    }
    Ok(omega)
}

const VALUE_ORDER_SIGN: [i64; 2] = [1, -1];

fn candidate_value(index: usize) -> i64 {
    // 0, 1, -1, 2, -2, ...
    if index == 0 {
        0
    } else {
        let k = index.div_ceil(2) as i64;
        k * VALUE_ORDER_SIGN[(index + 1) % 2]
    }
}

/// Integer matrix `Q: Z^n → Z^d` injective on each listed span.
///
/// Candidates are enumerated by increasing max-norm, lexicographically in
/// row-major entry order with values ordered `0, 1, -1, 2, -2, ...`; the
/// first admissible matrix is returned.
pub fn generic_projection(spans: &[Vec<ZVector>], ambient_dim: usize, target_rank: usize) -> Result<ZMatrix> {
    let spans_q: Vec<(usize, Vec<QVector>)> = spans
        .iter()
        .map(|s| {
            let q: Vec<QVector> = s.iter().map(|v| to_q(v)).collect();
            (rank_of(&q, ambient_dim), q)
        })
        .collect();
    if let Some((r, _)) = spans_q.iter().find(|(r, _)| *r > target_rank) {
        return Err(Error::NoGenericProjection {
            rank: *r,
            target: target_rank,
        });
    }
    let entries = ambient_dim * target_rank;
    let admissible = |q: &ZMatrix| {
        let qq = q.to_rational();
        spans_q.iter().all(|(r, basis)| {
            if *r == 0 {
                return true;
            }
            let images: Vec<QVector> = basis.iter().map(|v| qq.mul_vec(v)).collect();
            rank_of(&images, target_rank) == *r
        })
    };
    if entries == 0 {
        let q = ZMatrix::zeros(target_rank, ambient_dim);
        return if admissible(&q) {
            Ok(q)
        } else {
            Err(Error::NoGenericProjection { rank: 0, target: target_rank })
        };
    }
    let zero = ZMatrix::zeros(target_rank, ambient_dim);
    if admissible(&zero) {
        return Ok(zero);
    }
    for norm in 1usize.. {
        let base = 2 * norm + 1;
        let mut idx = vec![0usize; entries];
        loop {
            if idx.iter().any(|&i| i.div_ceil(2) == norm) {
                let data: Vec<i64> = idx.iter().map(|&i| candidate_value(i)).collect();
                let q = ZMatrix::from_i64(target_rank, ambient_dim, &data);
                if admissible(&q) {
                    return Ok(q);
                }
            }
            // odometer, last entry fastest
            let mut k = entries;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < base {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX {
                break;
            }
        }
    }
    unreachable!("generic projections exist for spans of rank <= target")
}

/// Lattice index helper used by tests and the push-forward: the index of
/// `L(N_σ)` in its saturation, for `L` integer and `N_σ` given by a basis.
pub fn image_index(map: &ZMatrix, basis: &[ZVector]) -> Integer {
    if basis.is_empty() {
        return Integer::one();
    }
    let images: Vec<ZVector> = basis.iter().map(|b| map.mul_vec(b)).collect();
    saturation_index(&ZMatrix::from_columns(&images, map.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, qvec, zvec};

    #[test]
    fn index_examples() {
        let g = ZMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(lattice_index(&g, 2), LatticeIndex::Finite(int(6)));
        assert_eq!(lattice_index(&ZMatrix::identity(4), 4), LatticeIndex::Finite(int(1)));
        let g = ZMatrix::from_i64(2, 1, &[1, 0]);
        assert_eq!(lattice_index(&g, 2), LatticeIndex::Infinite);
    }

    #[test]
    fn saturate_examples() {
        let s = saturate(&ZMatrix::from_i64(2, 1, &[2, 0]));
        assert_eq!(s.columns(), vec![zvec(&[1, 0])]);
        let s = saturate(&ZMatrix::from_columns(&[zvec(&[1, 1]), zvec(&[1, -1])], 2));
        assert_eq!(lattice_index(&s, 2), LatticeIndex::Finite(int(1)));
        assert_eq!(saturate(&ZMatrix::zeros(3, 0)).cols(), 0);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_basis(&[zvec(&[2, 4]), zvec(&[1, 1])], 2);
        let b = hermite_basis(&[zvec(&[1, 1]), zvec(&[0, 2])], 2);
        assert_eq!(a, b);
    }

    #[test]
    fn primitive_generator_examples() {
        let w = primitive_generator(&[], &[zvec(&[1, 1])], &qvec(&[2, 2])).unwrap();
        assert_eq!(w, zvec(&[1, 1]));
        let x = vec![zvec(&[1, 0])];
        let plane = vec![zvec(&[1, 0]), zvec(&[0, 1])];
        assert_eq!(primitive_generator(&x, &plane, &qvec(&[0, 1])).unwrap(), zvec(&[0, 1]));
        assert_eq!(primitive_generator(&x, &plane, &qvec(&[0, -1])).unwrap(), zvec(&[0, -1]));
        // witness with a component along tau
        assert_eq!(primitive_generator(&x, &plane, &qvec(&[5, 3])).unwrap(), zvec(&[0, 1]));
        assert!(primitive_generator(&[], &plane, &qvec(&[0, 1])).is_err());
    }

    #[test]
    fn generic_projection_examples() {
        let spans = vec![vec![zvec(&[1, 0])], vec![zvec(&[0, 1])]];
        let q = generic_projection(&spans, 2, 1).unwrap();
        assert_eq!(q, ZMatrix::from_i64(1, 2, &[1, 1]));
        let q = generic_projection(&[vec![zvec(&[1, 0]), zvec(&[0, 1])]], 2, 2).unwrap();
        assert_eq!(q.rank(), 2);
        assert!(matches!(
            generic_projection(&[vec![zvec(&[1, 0]), zvec(&[0, 1])]], 2, 1),
            Err(Error::NoGenericProjection { .. })
        ));
    }
}
