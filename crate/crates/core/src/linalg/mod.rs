//! Exact rational and integer linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; there is no
//! floating point anywhere in the kernel.

mod lattice;
mod matrix;
mod smith;

pub use lattice::{
    generic_projection, hermite_basis, image_index, lattice_index, primitive_generator, saturate,
    saturate_vectors, saturation_index, LatticeIndex,
};
pub use matrix::Matrix;
pub use smith::{smith_normal_form, SmithDecomposition};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Integer = BigInt;
pub type Rational = BigRational;
pub type ZVector = Vec<Integer>;
pub type QVector = Vec<Rational>;
pub type ZMatrix = Matrix<Integer>;
pub type QMatrix = Matrix<Rational>;

pub fn int(n: i64) -> Integer {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &Integer) -> Rational {
    BigRational::from_integer(n.clone())
}

pub fn zvec(v: &[i64]) -> ZVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn qvec(v: &[i64]) -> QVector {
    v.iter().map(|&x| rat(x, 1)).collect()
}

pub fn to_q(v: &[Integer]) -> QVector {
    v.iter().map(rat_int).collect()
}

/// `Some(z)` when every entry is an integer.
pub fn to_z(v: &[Rational]) -> Option<ZVector> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

pub fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_zq(a: &[Integer], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * x)
}

pub fn dot_z(a: &[Integer], b: &[Integer]) -> Integer {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Integer::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub_q(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_q(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_q(a: &[Rational], s: &Rational) -> QVector {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_q(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn is_zero_z(a: &[Integer]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn gcd_all(v: &[Integer]) -> Integer {
    v.iter().fold(Integer::zero(), |g, x| g.gcd(x))
}

/// Positive rescaling of a nonzero rational vector to a primitive integer
/// vector. The zero vector maps to the zero vector.
pub fn primitive(v: &[Rational]) -> ZVector {
    let lcm = v
        .iter()
        .fold(Integer::one(), |l, x| l.lcm(x.denom()));
    let scaled: ZVector = v
        .iter()
        .map(|x| (x * rat_int(&lcm)).to_integer())
        .collect();
    primitive_z(&scaled)
}

pub fn primitive_z(v: &[Integer]) -> ZVector {
    let g = gcd_all(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Flips the sign so that the first nonzero entry is positive.
pub fn sign_normalize(v: &mut [Integer]) -> bool {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
            return true;
        }
    }
    false
}

/// Renders a rational as `p/q`, denominator always present.
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn fmt_qvec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_zvec(v: &[Integer]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Rank of a set of rational vectors.
pub fn rank_of(vectors: &[QVector], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    QMatrix::from_rows(vectors, dim).rank()
}

/// Whether `v` lies in the rational span of `basis`.
pub fn in_span(basis: &[QVector], v: &[Rational]) -> bool {
    if is_zero_q(v) {
        return true;
    }
    let dim = v.len();
    let r = rank_of(basis, dim);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank_of(&ext, dim) == r
}

/// Coordinates of `v` in terms of the (linearly independent) `basis`, if `v`
/// is in its span.
pub fn coordinates(basis: &[QVector], v: &[Rational]) -> Option<QVector> {
    let dim = v.len();
    if basis.is_empty() {
        return if is_zero_q(v) { Some(Vec::new()) } else { None };
    }
    let a = QMatrix::from_columns(basis, dim);
    a.solve(v)
}

/// Basis of the rational kernel `{x : A x = 0}`.
pub fn kernel(a: &QMatrix) -> Vec<QVector> {
    a.kernel()
}

/// Orthogonal projection of `v` onto the orthogonal complement of the span
/// of `basis` (standard inner product).
pub fn project_out(basis: &[QVector], v: &[Rational]) -> QVector {
    if basis.is_empty() {
        return v.to_vec();
    }
    let dim = v.len();
    let b = QMatrix::from_columns(basis, dim);
    let bt = b.transpose();
    let gram = bt.mul(&b);
    let rhs = bt.mul_vec(v);
    let coeffs = gram
        .solve(&rhs)
        .expect("Gram matrix of an independent basis is invertible");
    let proj = b.mul_vec(&coeffs);
    sub_q(v, &proj)
}

/// Reduced row echelon basis of the span of `vectors`, scaled to primitive
/// integer rows. Canonical for the span.
pub fn canonical_span_basis(vectors: &[QVector], dim: usize) -> Vec<ZVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = QMatrix::from_rows(vectors, dim).rref();
    (0..pivots.len()).map(|i| primitive(&r.row(i))).collect()
}

pub(crate) fn floor_rational(x: &Rational) -> Integer {
    x.floor().to_integer()
}

pub(crate) fn round_rational(x: &Rational) -> Integer {
    floor_rational(&(x + rat(1, 2)))
}
