use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{Integer, ZMatrix};

/// `A = U · S · V` with `U`, `V` unimodular and `S` diagonal with a
/// nonnegative divisibility chain on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: ZMatrix,
    pub s: ZMatrix,
    pub v: ZMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries of `S`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<Integer> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// The nonzero diagonal entries.
    pub fn elementary_divisors(&self) -> Vec<Integer> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Position of the nonzero entry of least absolute value in the lower-right
/// block starting at `(t, t)`; ties go to the lowest `(row, col)`.
fn smallest_entry(s: &ZMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Integer)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let a = s.get(i, j).abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

struct Reducer {
    s: ZMatrix,
    u: ZMatrix,
    v: ZMatrix,
}

// Each elementary operation on S is mirrored by its inverse on U (columns)
// or V (rows) so that A = U S V holds throughout.
impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_rows(a, b);
    }

    /// row[target] += k row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &Integer) {
        self.s.add_row_multiple(target, source, k);
        self.u.add_col_multiple(source, target, &-k.clone());
    }

    /// col[target] += k col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &Integer) {
        self.s.add_col_multiple(target, source, k);
        self.v.add_row_multiple(source, target, &-k.clone());
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_col(i);
    }

    /// Clears row and column `t` below/right of the pivot. Returns false if
    /// a nonzero remainder is left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let p = self.s.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..self.s.rows() {
            let q = self.s.get(i, t).div_floor(&p);
            if !q.is_zero() {
                self.add_row(i, t, &-q);
            }
            if !self.s.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.s.cols() {
            let q = self.s.get(t, j).div_floor(&p);
            if !q.is_zero() {
                self.add_col(j, t, &-q);
            }
            if !self.s.get(t, j).is_zero() {
                clean = false;
            }
        }
        clean
    }
}

pub fn smith_normal_form(a: &ZMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        s: a.clone(),
        u: ZMatrix::identity(m),
        v: ZMatrix::identity(n),
    };
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_entry(&r.s, t) else {
                return finish(r);
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            if !r.eliminate(t) {
                continue;
            }
            // Divisibility: pull a non-multiple of the pivot into row t.
            let p = r.s.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !r.s.get(i, j).is_multiple_of(&p))
            });
            match bad {
                Some(i) => r.add_row(t, i, &Integer::one()),
                None => break,
            }
        }
        if r.s.get(t, t).is_negative() {
            r.negate_row(t);
        }
    }
    finish(r)
}

fn finish(r: Reducer) -> SmithDecomposition {
    SmithDecomposition {
        u: r.u,
        s: r.s,
        v: r.v,
    }
}
