use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::linalg::{QMatrix, Rational};

use super::poly::Polynomial;

/// Sorts `idx` in place and returns the sign of the sorting permutation, or
/// `None` if an index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

fn parity(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// A `(p, q)`-superform `Σ α_IJ d′x_I ∧ d″x_J` on `R^n` with polynomial
/// coefficients. Terms are stored in normal order: all `d′` slots first,
/// then all `d″` slots, each strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LagerbergForm {
    n: usize,
    p: usize,
    q: usize,
    terms: BTreeMap<(Vec<usize>, Vec<usize>), Polynomial>,
}

impl LagerbergForm {
    pub fn zero(n: usize, p: usize, q: usize) -> Self {
        LagerbergForm {
            n,
            p,
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(f: Polynomial) -> Self {
        Self::term(f.nvars(), &[], &[], f)
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::function(Polynomial::constant(n, c))
    }

    /// `f · d′x_I ∧ d″x_J` for index lists in any order.
    pub fn term(n: usize, i: &[usize], j: &[usize], f: Polynomial) -> Self {
        assert_eq!(f.nvars(), n, "coefficient lives in the wrong ring");
        assert!(i.iter().chain(j).all(|&k| k < n), "index out of range");
        let mut out = Self::zero(n, i.len(), j.len());
        out.add_term(i.to_vec(), j.to_vec(), f);
        out
    }

    pub fn d_prime_x(n: usize, i: usize) -> Self {
        Self::term(n, &[i], &[], Polynomial::one(n))
    }

    pub fn d_second_x(n: usize, i: usize) -> Self {
        Self::term(n, &[], &[i], Polynomial::one(n))
    }

    fn add_term(&mut self, mut i: Vec<usize>, mut j: Vec<usize>, f: Polynomial) {
        debug_assert_eq!((i.len(), j.len()), (self.p, self.q));
        if f.is_zero() {
            return;
        }
        let (Some(si), Some(sj)) = (sort_sign(&mut i), sort_sign(&mut j)) else {
            return;
        };
        let f = if si != sj { f.neg() } else { f };
        let key = (i, j);
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(&f),
            None => f,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<usize>, Vec<usize>), Polynomial> {
        &self.terms
    }

    pub fn coefficient(&self, i: &[usize], j: &[usize]) -> Polynomial {
        self.terms
            .get(&(i.to_vec(), j.to_vec()))
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `p + q`.
    pub fn degree(&self) -> usize {
        self.p + self.q
    }

    /// Sum of two forms of the same bidegree.
    ///
    /// # Panics
    /// If the bidegrees or ambient dimensions differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient dimensions differ");
        assert_eq!(self.bidegree(), other.bidegree(), "bidegrees differ");
        let mut out = self.clone();
        for ((i, j), f) in &other.terms {
            out.add_term(i.clone(), j.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.mul_poly(&Polynomial::constant(self.n, k.clone()))
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        let mut out = Self::zero(self.n, self.p, self.q);
        for ((i, j), g) in &self.terms {
            out.add_term(i.clone(), j.clone(), g.mul(f));
        }
        out
    }

    /// `self ∧ other`. Terms with repeated indices vanish, so bidegrees
    /// beyond `n` give the zero form.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient dimensions differ");
        let mut out = Self::zero(self.n, self.p + other.p, self.q + other.q);
        for ((i1, j1), f1) in &self.terms {
            for ((i2, j2), f2) in &other.terms {
                // d″x_{J1} moves past d′x_{I2}
                let sign = parity(j1.len() * i2.len());
                let i: Vec<usize> = i1.iter().chain(i2).copied().collect();
                let j: Vec<usize> = j1.iter().chain(j2).copied().collect();
                out.add_term(i, j, f1.mul(f2).scale(&sign));
            }
        }
        out
    }

    /// `d′ω = Σ_k ∂_k α d′x_k ∧ d′x_I ∧ d″x_J`.
    pub fn d_prime(&self) -> Self {
        let mut out = Self::zero(self.n, self.p + 1, self.q);
        for ((i, j), f) in &self.terms {
            for k in 0..self.n {
                let mut ik = vec![k];
                ik.extend_from_slice(i);
                out.add_term(ik, j.clone(), f.derivative(k));
            }
        }
        out
    }

    /// `d″ω = Σ_k ∂_k α d″x_k ∧ d′x_I ∧ d″x_J`.
    pub fn d_second(&self) -> Self {
        let mut out = Self::zero(self.n, self.p, self.q + 1);
        let sign = parity(self.p);
        for ((i, j), f) in &self.terms {
            for k in 0..self.n {
                let mut jk = vec![k];
                jk.extend_from_slice(j);
                out.add_term(i.clone(), jk, f.derivative(k).scale(&sign));
            }
        }
        out
    }

    /// The algebra involution exchanging `d′x_k` and `d″x_k`.
    pub fn involution_j(&self) -> Self {
        let mut out = Self::zero(self.n, self.q, self.p);
        let sign = parity(self.p * self.q);
        for ((i, j), f) in &self.terms {
            out.add_term(j.clone(), i.clone(), f.scale(&sign));
        }
        out
    }

    /// Whether `Jω = (−1)^p ω` for a form of bidegree `(p, p)`.
    pub fn is_symmetric(&self) -> bool {
        self.p == self.q && self.involution_j() == self.scale(&parity(self.p))
    }

    /// Pullback along `t ↦ A t + b` with `A` an `n × m` matrix.
    pub fn pullback_affine(&self, a: &QMatrix, b: &[Rational]) -> Self {
        assert_eq!(a.rows(), self.n, "map lands in the wrong space");
        let m = a.cols();
        let prime: Vec<Self> = (0..self.n).map(|k| Self::linear_one_form(a, k, true)).collect();
        let second: Vec<Self> = (0..self.n).map(|k| Self::linear_one_form(a, k, false)).collect();
        let mut out = Self::zero(m, self.p, self.q);
        for ((i, j), f) in &self.terms {
            let mut t = Self::function(f.compose_affine(a, b));
            for &k in i {
                t = t.wedge(&prime[k]);
            }
            for &k in j {
                t = t.wedge(&second[k]);
            }
            out = out.add(&t);
        }
        out
    }

    fn linear_one_form(a: &QMatrix, row: usize, prime: bool) -> Self {
        let m = a.cols();
        let (p, q) = if prime { (1, 0) } else { (0, 1) };
        let mut out = Self::zero(m, p, q);
        for col in 0..m {
            let c = a.get(row, col).clone();
            if c.is_zero() {
                continue;
            }
            let f = Polynomial::constant(m, c);
            if prime {
                out.add_term(vec![col], vec![], f);
            } else {
                out.add_term(vec![], vec![col], f);
            }
        }
        out
    }

    /// Contraction of the `d′` slots with `v`.
    pub fn contract_prime(&self, v: &[Rational]) -> Self {
        assert!(self.p > 0, "no d′ slot to contract");
        let mut out = Self::zero(self.n, self.p - 1, self.q);
        for ((i, j), f) in &self.terms {
            for (pos, &k) in i.iter().enumerate() {
                if v[k].is_zero() {
                    continue;
                }
                let mut rest = i.clone();
                rest.remove(pos);
                out.add_term(rest, j.clone(), f.scale(&(&v[k] * parity(pos))));
            }
        }
        out
    }

    /// Contraction of the `d″` slots with `v`, passing over the `d′` slots
    /// first.
    pub fn contract_second(&self, v: &[Rational]) -> Self {
        assert!(self.q > 0, "no d″ slot to contract");
        let mut out = Self::zero(self.n, self.p, self.q - 1);
        for ((i, j), f) in &self.terms {
            for (pos, &k) in j.iter().enumerate() {
                if v[k].is_zero() {
                    continue;
                }
                let mut rest = j.clone();
                rest.remove(pos);
                out.add_term(i.clone(), rest, f.scale(&(&v[k] * parity(pos + self.p))));
            }
        }
        out
    }
}

impl fmt::Display for LagerbergForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), g)| {
                let slots: Vec<String> = i
                    .iter()
                    .map(|k| format!("d'x{}", k + 1))
                    .chain(j.iter().map(|k| format!("d''x{}", k + 1)))
                    .collect();
                if slots.is_empty() {
                    format!("({g})")
                } else {
                    format!("({g}) {}", slots.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, rat};

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn differential_examples() {
        let w = LagerbergForm::term(1, &[0], &[], x(1, 0));
        let expected = LagerbergForm::term(1, &[0], &[0], Polynomial::constant(1, rat(-1, 1)));
        assert_eq!(w.d_second(), expected);
        assert!(LagerbergForm::constant(2, rat(5, 1)).d_prime().is_zero());
        let sq = LagerbergForm::function(x(1, 0).mul(&x(1, 0)));
        assert_eq!(sq.d_prime(), LagerbergForm::term(1, &[0], &[], x(1, 0).scale(&rat(2, 1))));
    }

    #[test]
    fn wedge_signs() {
        let dp = LagerbergForm::d_prime_x(1, 0);
        let ds = LagerbergForm::d_second_x(1, 0);
        assert_eq!(dp.wedge(&ds), ds.wedge(&dp).neg());
        let f = LagerbergForm::function(x(1, 0));
        assert_eq!(f.wedge(&dp), dp.mul_poly(&x(1, 0)));
        let a = LagerbergForm::d_prime_x(2, 0).wedge(&LagerbergForm::d_second_x(2, 0));
        let b = LagerbergForm::d_prime_x(2, 1).wedge(&LagerbergForm::d_second_x(2, 1));
        // d′x∧d″x∧d′y∧d″y = −d′x∧d′y∧d″x∧d″y
        assert_eq!(a.wedge(&b), LagerbergForm::term(2, &[0, 1], &[0, 1], Polynomial::constant(2, rat(-1, 1))));
        assert!(dp.wedge(&dp).is_zero());
    }

    #[test]
    fn involution_examples() {
        let f = LagerbergForm::function(x(2, 1));
        assert_eq!(f.involution_j(), f);
        assert_eq!(LagerbergForm::d_prime_x(2, 0).involution_j(), LagerbergForm::d_second_x(2, 0));
        let w = LagerbergForm::d_prime_x(1, 0).wedge(&LagerbergForm::d_second_x(1, 0));
        assert_eq!(w.involution_j(), w.neg());
        assert!(w.is_symmetric());
    }

    #[test]
    fn pullback_examples() {
        let w = LagerbergForm::d_prime_x(1, 0).wedge(&LagerbergForm::d_second_x(1, 0));
        let a = QMatrix::from_rows(&[qvec(&[2])], 1);
        assert_eq!(w.pullback_affine(&a, &qvec(&[0])), w.scale(&rat(4, 1)));
        let g = LagerbergForm::term(2, &[1], &[0], x(2, 0).mul(&x(2, 1)));
        assert_eq!(g.pullback_affine(&QMatrix::identity(2), &qvec(&[0, 0])), g);
        let f = LagerbergForm::function(x(1, 0).mul(&x(1, 0)));
        let shifted = f.pullback_affine(&a, &qvec(&[1]));
        assert_eq!(shifted.coefficient(&[], &[]).eval(&qvec(&[1])), rat(9, 1));
    }

    #[test]
    fn contractions() {
        let w = LagerbergForm::d_prime_x(2, 0).wedge(&LagerbergForm::d_prime_x(2, 1));
        let c = w.contract_prime(&qvec(&[0, 1]));
        assert_eq!(c, LagerbergForm::d_prime_x(2, 0).neg());
        let v = LagerbergForm::d_prime_x(1, 0).wedge(&LagerbergForm::d_second_x(1, 0));
        assert_eq!(v.contract_second(&qvec(&[1])), LagerbergForm::d_prime_x(1, 0).neg());
    }
}
