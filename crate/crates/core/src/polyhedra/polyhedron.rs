use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use crate::error::{Error, Result};
use crate::linalg::{
    canonical_span_basis, dot_zq, fmt_qvec, fmt_rational, fmt_zvec, gcd_all, primitive,
    project_out, rank_of, rat_int, saturate_vectors, to_q, Integer, QMatrix, QVector, Rational,
    ZMatrix, ZVector,
};

/// The affine function `x ↦ ⟨normal, x⟩ + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    pub normal: ZVector,
    pub constant: Rational,
}

impl AffineForm {
    pub fn new(normal: ZVector, constant: Rational) -> Self {
        AffineForm { normal, constant }
    }

    /// Positive rescaling of `⟨u, x⟩ + c` with rational `u` so that the
    /// normal becomes a primitive integer vector.
    pub fn from_rational(normal: &[Rational], constant: &Rational) -> Self {
        let lcm = normal
            .iter()
            .fold(Integer::one(), |l, x| l.lcm(x.denom()));
        let scaled: ZVector = normal
            .iter()
            .map(|x| (x * rat_int(&lcm)).to_integer())
            .collect();
        let g = gcd_all(&scaled);
        if g.is_zero() {
            let c = if constant.is_zero() {
                Rational::zero()
            } else {
                Rational::from_integer(constant.signum().to_integer())
            };
            return AffineForm::new(scaled, c);
        }
        let factor = rat_int(&lcm) / rat_int(&g);
        AffineForm::new(
            scaled.iter().map(|x| x / &g).collect(),
            constant * factor,
        )
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot_zq(&self.normal, x) + &self.constant
    }

    /// The linear part applied to a direction.
    pub fn slope(&self, v: &[Rational]) -> Rational {
        dot_zq(&self.normal, v)
    }

    pub fn negated(&self) -> Self {
        AffineForm::new(
            self.normal.iter().map(|x| -x).collect(),
            -self.constant.clone(),
        )
    }

    fn homogeneous(&self) -> QVector {
        let mut v = to_q(&self.normal);
        v.push(self.constant.clone());
        v
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, x> + {}", fmt_zvec(&self.normal), fmt_rational(&self.constant))
    }
}

/// A rational polyhedron stored in both representations.
///
/// The V-representation is canonical (lineality in reduced echelon form,
/// vertices and rays projected onto its orthogonal complement, rays
/// primitive, everything sorted), so it serves as the identity of the cell.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    ambient_dim: usize,
    empty: bool,
    vertices: Vec<QVector>,
    rays: Vec<ZVector>,
    lineality: Vec<ZVector>,
    equations: Vec<AffineForm>,
    inequalities: Vec<AffineForm>,
    span_basis: Vec<ZVector>,
    anchor: Option<QVector>,
}

impl Polyhedron {
    pub fn empty(ambient_dim: usize) -> Self {
        Polyhedron {
            ambient_dim,
            empty: true,
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
            equations: Vec::new(),
            inequalities: vec![AffineForm::new(vec![Integer::zero(); ambient_dim], -Rational::one())],
            span_basis: Vec::new(),
            anchor: None,
        }
    }

    pub fn whole_space(ambient_dim: usize) -> Self {
        let lin: Vec<QVector> = (0..ambient_dim)
            .map(|i| {
                let mut e = vec![Rational::zero(); ambient_dim];
                e[i] = Rational::one();
                e
            })
            .collect();
        Self::from_generators(ambient_dim, vec![vec![Rational::zero(); ambient_dim]], Vec::new(), lin)
    }

    pub fn point(x: QVector) -> Self {
        let n = x.len();
        Self::from_generators(n, vec![x], Vec::new(), Vec::new())
    }

    /// `{x : ⟨u_i, x⟩ + c_i ≥ 0, ⟨e_j, x⟩ + d_j = 0}`.
    pub fn from_h_rep(
        ambient_dim: usize,
        inequalities: &[AffineForm],
        equations: &[AffineForm],
    ) -> Result<Self> {
        for a in inequalities.iter().chain(equations) {
            if a.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: a.dim(),
                });
            }
        }
        let n = ambient_dim;
        let mut ineqs: Vec<QVector> = inequalities.iter().map(AffineForm::homogeneous).collect();
        let mut t = vec![Rational::zero(); n + 1];
        t[n] = Rational::one();
        ineqs.push(t);
        let eqs: Vec<QVector> = equations.iter().map(AffineForm::homogeneous).collect();
        let cone = cone_generators(n + 1, &ineqs, &eqs);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in cone.rays {
            let t = r[n].clone();
            if t.is_positive() {
                vertices.push(r[..n].iter().map(|x| x / &t).collect());
            } else {
                rays.push(r[..n].to_vec());
            }
        }
        if vertices.is_empty() {
            return Ok(Self::empty(n));
        }
        let lineality = cone.lineality.into_iter().map(|l| l[..n].to_vec()).collect();
        Ok(Self::from_generators(n, vertices, rays, lineality))
    }

    /// `conv(vertices) + cone(rays) + span(lineality)`; no vertices means empty.
    pub fn from_v_rep(
        ambient_dim: usize,
        vertices: &[QVector],
        rays: &[QVector],
        lineality: &[QVector],
    ) -> Result<Self> {
        for v in vertices.iter().chain(rays).chain(lineality) {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        if vertices.is_empty() {
            return Ok(Self::empty(ambient_dim));
        }
        Ok(Self::from_generators(
            ambient_dim,
            vertices.to_vec(),
            rays.to_vec(),
            lineality.to_vec(),
        ))
    }

    /// Builds the canonical form from a nonempty, possibly redundant,
    /// generating set.
    pub(crate) fn from_generators(
        n: usize,
        vertices: Vec<QVector>,
        rays: Vec<QVector>,
        lineality: Vec<QVector>,
    ) -> Self {
        debug_assert!(!vertices.is_empty());
        let given_lin = canonical_span_basis(&lineality, n);
        let given_lin_q: Vec<QVector> = given_lin.iter().map(|v| to_q(v)).collect();

        // Dual cone in (u, c)-space.
        let mut dual_ineqs: Vec<QVector> = Vec::new();
        for v in &vertices {
            let mut h = v.clone();
            h.push(Rational::one());
            dual_ineqs.push(h);
        }
        for r in &rays {
            let mut h = r.clone();
            h.push(Rational::zero());
            dual_ineqs.push(h);
        }
        let dual_eqs: Vec<QVector> = given_lin_q
            .iter()
            .map(|l| {
                let mut h = l.clone();
                h.push(Rational::zero());
                h
            })
            .collect();
        let dual = cone_generators(n + 1, &dual_ineqs, &dual_eqs);

        let equations: Vec<AffineForm> = if dual.lineality.is_empty() {
            Vec::new()
        } else {
            let (rref, pivots) = QMatrix::from_rows(&dual.lineality, n + 1).rref();
            (0..pivots.len())
                .map(|i| {
                    let row = rref.row(i);
                    AffineForm::from_rational(&row[..n], &row[n])
                })
                .collect()
        };
        let eq_normals: Vec<QVector> = equations.iter().map(|e| to_q(&e.normal)).collect();
        let mut facets: BTreeSet<AffineForm> = BTreeSet::new();
        for r in &dual.rays {
            let mut h = r.clone();
            if !equations.is_empty() {
                let u = r[..n].to_vec();
                let projected = project_out(&eq_normals, &u);
                let delta: QVector = u.iter().zip(&projected).map(|(a, b)| a - b).collect();
                // delta = Σ λ_j e_j; shift the constant by the same combination.
                let b = QMatrix::from_columns(&eq_normals, n);
                let lambda = b.solve(&delta).expect("delta lies in the equation span");
                let mut c = r[n].clone();
                for (l, e) in lambda.iter().zip(&equations) {
                    c -= l * &e.constant;
                }
                h = projected;
                h.push(c);
            }
            if h[..n].iter().all(Zero::is_zero) {
                continue;
            }
            facets.insert(AffineForm::from_rational(&h[..n], &h[n]));
        }
        let inequalities: Vec<AffineForm> = facets.into_iter().collect();

        // The true lineality space: rays may come in opposite pairs.
        let all_normals: Vec<QVector> = equations
            .iter()
            .chain(&inequalities)
            .map(|a| to_q(&a.normal))
            .collect();
        let lin_basis = if all_normals.is_empty() {
            canonical_span_basis(&QMatrix::identity(n).row_vecs(), n)
        } else {
            canonical_span_basis(&QMatrix::from_rows(&all_normals, n).kernel(), n)
        };
        let lin_q: Vec<QVector> = lin_basis.iter().map(|v| to_q(v)).collect();

        // Keep extreme generators only.
        let lin_dim = lin_basis.len();
        let full = n - lin_dim;
        let rank_of_tight = |tight: Vec<QVector>| {
            let mut rows = eq_normals.clone();
            rows.extend(tight);
            rank_of(&rows, n)
        };
        let mut vset: BTreeSet<QVector> = BTreeSet::new();
        for v in &vertices {
            let tight: Vec<QVector> = inequalities
                .iter()
                .filter(|f| f.eval(v).is_zero())
                .map(|f| to_q(&f.normal))
                .collect();
            if rank_of_tight(tight) == full {
                vset.insert(project_out(&lin_q, v));
            }
        }
        let mut rset: BTreeSet<ZVector> = BTreeSet::new();
        for r in &rays {
            let p = project_out(&lin_q, r);
            if p.iter().all(Zero::is_zero) {
                continue;
            }
            let tight: Vec<QVector> = inequalities
                .iter()
                .filter(|f| f.slope(r).is_zero())
                .map(|f| to_q(&f.normal))
                .collect();
            if rank_of_tight(tight) + 1 == full {
                rset.insert(primitive(&p));
            }
        }
        let vertices: Vec<QVector> = vset.into_iter().collect();
        let rays: Vec<ZVector> = rset.into_iter().collect();

        let span_basis = if equations.is_empty() {
            (0..n)
                .map(|i| {
                    let mut e = vec![Integer::zero(); n];
                    e[i] = Integer::one();
                    e
                })
                .collect()
        } else {
            let kernel = QMatrix::from_rows(&eq_normals, n).kernel();
            let prim: Vec<ZVector> = kernel.iter().map(|k| primitive(k)).collect();
            saturate_vectors(&prim, n)
        };

        let mut anchor = vec![Rational::zero(); n];
        for v in &vertices {
            for (a, x) in anchor.iter_mut().zip(v) {
                *a += x;
            }
        }
        let count = Rational::from_integer(Integer::from(vertices.len()));
        anchor.iter_mut().for_each(|a| *a /= &count);
        for r in &rays {
            for (a, x) in anchor.iter_mut().zip(r) {
                *a += rat_int(x);
            }
        }

        Polyhedron {
            ambient_dim: n,
            empty: false,
            vertices,
            rays,
            lineality: lin_basis,
            equations,
            inequalities,
            span_basis,
            anchor: Some(anchor),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Dimension of the affine hull; 0 for the empty polyhedron (check
    /// [`Polyhedron::is_empty`] to tell it apart from a point).
    pub fn dim(&self) -> usize {
        if self.empty {
            0
        } else {
            self.ambient_dim - self.equations.len()
        }
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[ZVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[ZVector] {
        &self.lineality
    }

    pub fn equations(&self) -> &[AffineForm] {
        &self.equations
    }

    /// Facet-defining inequalities.
    pub fn inequalities(&self) -> &[AffineForm] {
        &self.inequalities
    }

    /// Saturated lattice basis of the linear span `L_σ`.
    pub fn span_basis(&self) -> &[ZVector] {
        &self.span_basis
    }

    /// A point of the relative interior.
    pub fn anchor(&self) -> Option<&QVector> {
        self.anchor.as_ref()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Cone with apex at the origin.
    pub fn is_cone(&self) -> bool {
        !self.empty
            && self
                .equations
                .iter()
                .chain(&self.inequalities)
                .all(|a| a.constant.is_zero())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.empty
            && self.equations.iter().all(|e| e.eval(x).is_zero())
            && self.inequalities.iter().all(|f| !f.eval(x).is_negative())
    }

    pub fn contains_in_relative_interior(&self, x: &[Rational]) -> bool {
        !self.empty
            && self.equations.iter().all(|e| e.eval(x).is_zero())
            && self.inequalities.iter().all(|f| f.eval(x).is_positive())
    }

    /// Whether `v` is a direction of the affine hull.
    pub fn contains_direction(&self, v: &[Rational]) -> bool {
        self.equations.iter().all(|e| e.slope(v).is_zero())
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.empty || other.empty {
            return Ok(Self::empty(self.ambient_dim));
        }
        let ineqs: Vec<AffineForm> = self.inequalities.iter().chain(&other.inequalities).cloned().collect();
        let eqs: Vec<AffineForm> = self.equations.iter().chain(&other.equations).cloned().collect();
        Self::from_h_rep(self.ambient_dim, &ineqs, &eqs)
    }

    /// Intersection with extra inequalities and equations.
    pub fn cut(&self, inequalities: &[AffineForm], equations: &[AffineForm]) -> Result<Polyhedron> {
        if self.empty {
            return Ok(self.clone());
        }
        let ineqs: Vec<AffineForm> = self.inequalities.iter().chain(inequalities).cloned().collect();
        let eqs: Vec<AffineForm> = self.equations.iter().chain(equations).cloned().collect();
        Self::from_h_rep(self.ambient_dim, &ineqs, &eqs)
    }

    fn face_from_tight(&self, vertex_ok: impl Fn(&QVector) -> bool, ray_ok: impl Fn(&QVector) -> bool) -> Polyhedron {
        let verts: Vec<QVector> = self.vertices.iter().filter(|v| vertex_ok(v)).cloned().collect();
        if verts.is_empty() {
            return Self::empty(self.ambient_dim);
        }
        let rays: Vec<QVector> = self.rays.iter().map(|r| to_q(r)).filter(|r| ray_ok(r)).collect();
        let lin: Vec<QVector> = self.lineality.iter().map(|l| to_q(l)).collect();
        Self::from_generators(self.ambient_dim, verts, rays, lin)
    }

    /// The facets as polyhedra, in the order of [`Polyhedron::inequalities`].
    pub fn facets(&self) -> Vec<Polyhedron> {
        if self.empty {
            return Vec::new();
        }
        self.inequalities
            .iter()
            .map(|f| self.face_from_tight(|v| f.eval(v).is_zero(), |r| f.slope(r).is_zero()))
            .collect()
    }

    /// All nonempty faces including `self`, sorted.
    pub fn nonempty_faces(&self) -> Vec<Polyhedron> {
        if self.empty {
            return Vec::new();
        }
        let mut seen: BTreeSet<Polyhedron> = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(p) = stack.pop() {
            if seen.contains(&p) {
                continue;
            }
            stack.extend(p.facets());
            seen.insert(p);
        }
        seen.into_iter().collect()
    }

    /// All faces: the nonempty ones sorted, then the empty face marker.
    pub fn faces(&self) -> Vec<Polyhedron> {
        let mut out = self.nonempty_faces();
        out.push(Self::empty(self.ambient_dim));
        out
    }

    /// The smallest face containing `x`, or `None` if `x` lies outside.
    pub fn minimal_face_containing(&self, x: &[Rational]) -> Option<Polyhedron> {
        if !self.contains(x) {
            return None;
        }
        let tight: Vec<&AffineForm> = self.inequalities.iter().filter(|f| f.eval(x).is_zero()).collect();
        if tight.is_empty() {
            return Some(self.clone());
        }
        Some(self.face_from_tight(
            |v| tight.iter().all(|f| f.eval(v).is_zero()),
            |r| tight.iter().all(|f| f.slope(r).is_zero()),
        ))
    }

    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        if self.empty {
            return true;
        }
        let anchor = self.anchor.as_ref().expect("nonempty");
        match other.minimal_face_containing(anchor) {
            Some(f) => f == *self,
            None => false,
        }
    }

    /// Image under `x ↦ A x + t` with `A` integer.
    pub fn affine_image(&self, a: &ZMatrix, t: &[Rational]) -> Polyhedron {
        assert_eq!(a.cols(), self.ambient_dim);
        let k = a.rows();
        if self.empty {
            return Self::empty(k);
        }
        let verts = self
            .vertices
            .iter()
            .map(|v| a.mul_qvec(v).iter().zip(t).map(|(x, y)| x + y).collect())
            .collect();
        let rays = self.rays.iter().map(|r| to_q(&a.mul_vec(r))).collect();
        let lin = self.lineality.iter().map(|l| to_q(&a.mul_vec(l))).collect();
        Self::from_generators(k, verts, rays, lin)
    }

    /// Preimage under `x ↦ A x + t` with `A` integer (`A: R^m → R^n`).
    pub fn affine_preimage(&self, a: &ZMatrix, t: &[Rational]) -> Polyhedron {
        assert_eq!(a.rows(), self.ambient_dim);
        let m = a.cols();
        if self.empty {
            return Self::empty(m);
        }
        let at = a.transpose();
        let pull = |f: &AffineForm| {
            let normal = at.mul_vec(&f.normal);
            let constant = dot_zq(&f.normal, t) + &f.constant;
            AffineForm::new(normal, constant)
        };
        let ineqs: Vec<AffineForm> = self.inequalities.iter().map(pull).collect();
        let eqs: Vec<AffineForm> = self.equations.iter().map(pull).collect();
        Self::from_h_rep(m, &ineqs, &eqs).expect("dimensions agree")
    }

    /// Translation by `v`.
    pub fn translate(&self, v: &[Rational]) -> Polyhedron {
        self.affine_image(&ZMatrix::identity(self.ambient_dim), v)
    }

    /// `R≥0 · (self − ω)` for `ω ∈ self`.
    pub fn tangent_cone(&self, omega: &[Rational]) -> Polyhedron {
        let n = self.ambient_dim;
        let mut rays: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(omega).map(|(a, b)| a - b).collect::<QVector>())
            .filter(|d: &QVector| d.iter().any(|x| !x.is_zero()))
            .collect();
        rays.extend(self.rays.iter().map(|r| to_q(r)));
        let lin = self.lineality.iter().map(|l| to_q(l)).collect();
        Self::from_generators(n, vec![vec![Rational::zero(); n]], rays, lin)
    }

    fn key(&self) -> (bool, usize, usize, &[ZVector], &[QVector], &[ZVector]) {
        (
            self.empty,
            self.dim(),
            self.ambient_dim,
            &self.lineality,
            &self.vertices,
            &self.rays,
        )
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Polyhedron {}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyhedron {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Hash for Polyhedron {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "empty");
        }
        let verts: Vec<String> = self.vertices.iter().map(|v| fmt_qvec(v)).collect();
        write!(f, "conv{{{}}}", verts.join(", "))?;
        if !self.rays.is_empty() {
            let rays: Vec<String> = self.rays.iter().map(|r| fmt_zvec(r)).collect();
            write!(f, " + cone{{{}}}", rays.join(", "))?;
        }
        if !self.lineality.is_empty() {
            let lin: Vec<String> = self.lineality.iter().map(|l| fmt_zvec(l)).collect();
            write!(f, " + span{{{}}}", lin.join(", "))?;
        }
        Ok(())
    }
}

/// Shorthand used by tests and callers: `⟨u, x⟩ + c ≥ 0` with small integer data.
pub fn halfspace(normal: &[i64], constant: Rational) -> AffineForm {
    AffineForm::new(normal.iter().map(|&x| Integer::from(x)).collect(), constant)
}
