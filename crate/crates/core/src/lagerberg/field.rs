use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::polyhedra::{supporting_hyperplanes, AffineForm, Polyhedron};

use super::form::LagerbergForm;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Pieces {
        pieces: Vec<(Polyhedron, LagerbergForm)>,
        default: LagerbergForm,
    },
    DPrime(Arc<FormField>),
    DSecond(Arc<FormField>),
    J(Arc<FormField>),
    Scale(Rational, Arc<FormField>),
    Add(Arc<FormField>, Arc<FormField>),
    Wedge(Arc<FormField>, Arc<FormField>),
}

/// A superform given by polynomial pieces on polyhedral regions.
///
/// A point takes the form of the first region containing it, or the
/// default form if no region does. Algebraic operations are applied
/// pointwise, so regions of different fields need not match.
#[derive(Clone, Debug, PartialEq)]
pub struct FormField {
    n: usize,
    p: usize,
    q: usize,
    node: Node,
}

impl FormField {
    pub fn uniform(form: LagerbergForm) -> Self {
        let (p, q) = form.bidegree();
        FormField {
            n: form.ambient_dim(),
            p,
            q,
            node: Node::Pieces {
                pieces: Vec::new(),
                default: form,
            },
        }
    }

    /// A field equal to `pieces[i].1` on `pieces[i].0` and to zero
    /// elsewhere.
    pub fn piecewise(n: usize, p: usize, q: usize, pieces: Vec<(Polyhedron, LagerbergForm)>) -> Result<Self> {
        Self::piecewise_with_default(n, pieces, LagerbergForm::zero(n, p, q))
    }

    pub fn piecewise_with_default(
        n: usize,
        pieces: Vec<(Polyhedron, LagerbergForm)>,
        default: LagerbergForm,
    ) -> Result<Self> {
        let (p, q) = default.bidegree();
        for (region, form) in &pieces {
            if region.ambient_dim() != n || form.ambient_dim() != n || default.ambient_dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if region.ambient_dim() != n { region.ambient_dim() } else { form.ambient_dim() },
                });
            }
            if form.bidegree() != (p, q) {
                return Err(Error::Bidegree {
                    p: form.bidegree().0,
                    q: form.bidegree().1,
                    reason: format!("field pieces must all have bidegree ({p},{q})"),
                });
            }
        }
        Ok(FormField {
            n,
            p,
            q,
            node: Node::Pieces { pieces, default },
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// The polynomial form in force at `x`.
    pub fn form_at(&self, x: &[Rational]) -> LagerbergForm {
        match &self.node {
            Node::Pieces { pieces, default } => pieces
                .iter()
                .find(|(r, _)| r.contains(x))
                .map(|(_, f)| f.clone())
                .unwrap_or_else(|| default.clone()),
            Node::DPrime(a) => a.form_at(x).d_prime(),
            Node::DSecond(a) => a.form_at(x).d_second(),
            Node::J(a) => a.form_at(x).involution_j(),
            Node::Scale(k, a) => a.form_at(x).scale(k),
            Node::Add(a, b) => a.form_at(x).add(&b.form_at(x)),
            Node::Wedge(a, b) => a.form_at(x).wedge(&b.form_at(x)),
        }
    }

    /// Hyperplanes supporting the regions of every piece.
    pub fn hyperplanes(&self) -> Vec<AffineForm> {
        let mut regions = Vec::new();
        self.collect_regions(&mut regions);
        supporting_hyperplanes(regions)
    }

    fn collect_regions<'a>(&'a self, out: &mut Vec<&'a Polyhedron>) {
        match &self.node {
            Node::Pieces { pieces, .. } => out.extend(pieces.iter().map(|(r, _)| r)),
            Node::DPrime(a) | Node::DSecond(a) | Node::J(a) | Node::Scale(_, a) => a.collect_regions(out),
            Node::Add(a, b) | Node::Wedge(a, b) => {
                a.collect_regions(out);
                b.collect_regions(out);
            }
        }
    }

    /// Every polynomial form the field can take.
    pub fn leaf_forms(&self) -> Vec<&LagerbergForm> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a LagerbergForm>) {
        match &self.node {
            Node::Pieces { pieces, default } => {
                out.extend(pieces.iter().map(|(_, f)| f));
                out.push(default);
            }
            Node::DPrime(a) | Node::DSecond(a) | Node::J(a) | Node::Scale(_, a) => a.collect_leaves(out),
            Node::Add(a, b) | Node::Wedge(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn d_prime(&self) -> Self {
        self.unary(Node::DPrime(Arc::new(self.clone())), self.p + 1, self.q)
    }

    pub fn d_second(&self) -> Self {
        self.unary(Node::DSecond(Arc::new(self.clone())), self.p, self.q + 1)
    }

    pub fn involution_j(&self) -> Self {
        self.unary(Node::J(Arc::new(self.clone())), self.q, self.p)
    }

    pub fn scale(&self, k: Rational) -> Self {
        self.unary(Node::Scale(k, Arc::new(self.clone())), self.p, self.q)
    }

    pub fn neg(&self) -> Self {
        self.scale(-Rational::from_integer(1.into()))
    }

    fn unary(&self, node: Node, p: usize, q: usize) -> Self {
        FormField { n: self.n, p, q, node }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.bidegree() != other.bidegree() || self.n != other.n {
            return Err(Error::Bidegree {
                p: other.p,
                q: other.q,
                reason: format!("cannot add to a form of bidegree ({},{})", self.p, self.q),
            });
        }
        Ok(FormField {
            n: self.n,
            p: self.p,
            q: self.q,
            node: Node::Add(Arc::new(self.clone()), Arc::new(other.clone())),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(FormField {
            n: self.n,
            p: self.p + other.p,
            q: self.q + other.q,
            node: Node::Wedge(Arc::new(self.clone()), Arc::new(other.clone())),
        })
    }

    /// Whether every piece is symmetric. Only meaningful for fields given
    /// directly by pieces; composite fields are checked on their leaves.
    pub fn is_symmetric(&self) -> bool {
        self.p == self.q && self.leaf_forms().iter().all(|f| f.is_symmetric())
    }
}

impl From<LagerbergForm> for FormField {
    fn from(form: LagerbergForm) -> Self {
        FormField::uniform(form)
    }
}
