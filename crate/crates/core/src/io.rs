//! JSON encodings of the kernel types. Rationals are written as `"p/q"`
//! strings; integers may also be given as plain JSON numbers.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, GraphPL, MetricGraph};
use crate::lagerberg::{FormField, LagerbergForm, Polynomial};
use crate::linalg::{fmt_rational, parse_rational, to_q, to_z, QVector, Rational, ZMatrix, ZVector};
use crate::polyhedra::{AffineForm, Polyhedron};
use crate::tropical::{AffineMap, PLFunction, PLMap, WeightedComplex};

/// A rational in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Q(Rational::from_integer(n.into()))),
            Raw::Str(s) => parse_rational(&s)
                .map(Q)
                .ok_or_else(|| de::Error::custom(format!("not a rational: {s:?}"))),
        }
    }
}

fn qs(v: &[Q]) -> QVector {
    v.iter().map(|q| q.0.clone()).collect()
}

fn to_json_q(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn integral(v: &[Q], what: &str) -> Result<ZVector> {
    to_z(&qs(v)).ok_or_else(|| Error::InvalidInput(format!("{what} must have integer entries")))
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PolyhedronJson {
    /// Rows `[u..., c]` meaning `⟨u, x⟩ + c ≥ 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ineqs: Option<Vec<Vec<Q>>>,
    /// Rows `[u..., c]` meaning `⟨u, x⟩ + c = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eqs: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lineality: Option<Vec<Vec<Q>>>,
}

fn affine_row(row: &[Q], n: usize) -> Result<AffineForm> {
    if row.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: row.len(),
        });
    }
    let v = qs(row);
    Ok(AffineForm::from_rational(&v[..n], &v[n]))
}

impl PolyhedronJson {
    pub fn from_polyhedron(p: &Polyhedron) -> Self {
        PolyhedronJson {
            vertices: Some(p.vertices().iter().map(|v| to_json_q(v)).collect()),
            rays: Some(p.rays().iter().map(|r| to_json_q(&to_q(r))).collect()),
            lineality: Some(p.lineality().iter().map(|l| to_json_q(&to_q(l))).collect()),
            ..Default::default()
        }
    }

    pub fn to_polyhedron(&self, n: usize) -> Result<Polyhedron> {
        let h = self.ineqs.is_some() || self.eqs.is_some();
        let v = self.vertices.is_some() || self.rays.is_some() || self.lineality.is_some();
        match (h, v) {
            (true, true) => Err(Error::InvalidInput("give either ineqs/eqs or vertices/rays/lineality".into())),
            (true, false) => {
                let rows = |r: &Option<Vec<Vec<Q>>>| -> Result<Vec<AffineForm>> {
                    r.iter().flatten().map(|row| affine_row(row, n)).collect()
                };
                Polyhedron::from_h_rep(n, &rows(&self.ineqs)?, &rows(&self.eqs)?)
            }
            (false, _) => {
                let vecs = |r: &Option<Vec<Vec<Q>>>| -> Vec<QVector> { r.iter().flatten().map(|v| qs(v)).collect() };
                let vertices = vecs(&self.vertices);
                if vertices.is_empty() {
                    return Err(Error::InvalidInput("a polyhedron needs at least one vertex".into()));
                }
                Polyhedron::from_v_rep(n, &vertices, &vecs(&self.rays), &vecs(&self.lineality))
            }
        }
    }
}

/// `{"ambient_dim": n, "cells": [...], "weights": {"i": m}}`; without
/// `weights` every listed cell has weight 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedComplexJson {
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub cells: Vec<PolyhedronJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, i64>>,
}

impl WeightedComplexJson {
    pub fn from_complex(c: &WeightedComplex) -> Self {
        let cells = c.weighted_cells();
        WeightedComplexJson {
            ambient_dim: c.ambient_dim(),
            dim: Some(c.dim()),
            weights: Some(cells.iter().enumerate().map(|(i, (_, m))| (i.to_string(), *m)).collect()),
            cells: cells.iter().map(|(p, _)| PolyhedronJson::from_polyhedron(p)).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<WeightedComplex> {
        let n = self.ambient_dim;
        let cells: Vec<Polyhedron> = self.cells.iter().map(|p| p.to_polyhedron(n)).collect::<Result<_>>()?;
        let weights: BTreeMap<usize, i64> = match &self.weights {
            None => (0..cells.len()).map(|i| (i, 1)).collect(),
            Some(w) => w
                .iter()
                .map(|(k, &m)| {
                    let i: usize = k
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("weight key {k:?} is not a cell index")))?;
                    if i >= cells.len() {
                        return Err(Error::InvalidInput(format!("weight on unknown cell {i}")));
                    }
                    Ok((i, m))
                })
                .collect::<Result<_>>()?,
        };
        let dims: Vec<usize> = weights.keys().map(|&i| cells[i].dim()).collect();
        let d = match self.dim {
            Some(d) => d,
            None => *dims.first().ok_or_else(|| Error::InvalidInput("no weighted cells and no dim".into()))?,
        };
        if let Some(&bad) = dims.iter().find(|&&x| x != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad });
        }
        WeightedComplex::from_cells(n, d, weights.into_iter().map(|(i, m)| (cells[i].clone(), m)).collect())
    }
}

/// A PL function: pieces `{"cells": [...], "affine": [[u..., c]]}` or a
/// maximum `{"max": [[u..., c], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PLFunctionJson {
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<PolyhedronJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine: Option<Vec<Vec<Q>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<Vec<Vec<Q>>>,
}

fn integral_form(row: &[Q], n: usize) -> Result<AffineForm> {
    if row.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: row.len(),
        });
    }
    Ok(AffineForm::new(integral(&row[..n], "slopes")?, row[n].0.clone()))
}

impl PLFunctionJson {
    pub fn to_function(&self) -> Result<PLFunction> {
        let n = self.ambient_dim;
        match (&self.cells, &self.affine, &self.max) {
            (None, None, Some(terms)) => {
                let forms: Vec<AffineForm> = terms.iter().map(|t| integral_form(t, n)).collect::<Result<_>>()?;
                PLFunction::max_of_affine(n, &forms)
            }
            (Some(cells), Some(affine), None) => {
                if cells.len() != affine.len() {
                    return Err(Error::InvalidInput("cells and affine lists differ in length".into()));
                }
                let pieces = cells
                    .iter()
                    .zip(affine)
                    .map(|(c, a)| Ok((c.to_polyhedron(n)?, integral_form(a, n)?)))
                    .collect::<Result<_>>()?;
                PLFunction::new(n, pieces)
            }
            _ => Err(Error::InvalidInput("a function needs either cells+affine or max".into())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineMapJson {
    pub linear: Vec<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<Q>>,
}

impl AffineMapJson {
    fn to_map(&self, source: usize) -> Result<AffineMap> {
        let rows: Vec<ZVector> = self.linear.iter().map(|r| integral(r, "linear parts")).collect::<Result<_>>()?;
        if let Some(r) = rows.iter().find(|r| r.len() != source) {
            return Err(Error::DimensionMismatch {
                expected: source,
                found: r.len(),
            });
        }
        let m = rows.len();
        let linear = ZMatrix::from_rows(&rows, source);
        let translation = match &self.translation {
            Some(t) => qs(t),
            None => vec![Rational::zero(); m],
        };
        AffineMap::new(linear, translation)
    }
}

/// A PL map: one global affine map, or pieces on cells.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PLMapJson {
    pub source_dim: usize,
    pub target_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<AffineMapJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<PolyhedronJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<AffineMapJson>>,
}

impl PLMapJson {
    pub fn to_map(&self) -> Result<PLMap> {
        let n = self.source_dim;
        let check_target = |a: &AffineMap| -> Result<()> {
            if a.target_dim() != self.target_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.target_dim,
                    found: a.target_dim(),
                });
            }
            Ok(())
        };
        match (&self.map, &self.cells, &self.pieces) {
            (Some(m), None, None) => {
                let a = m.to_map(n)?;
                check_target(&a)?;
                Ok(PLMap::affine(a))
            }
            (None, Some(cells), Some(pieces)) => {
                if cells.len() != pieces.len() {
                    return Err(Error::InvalidInput("cells and pieces differ in length".into()));
                }
                let mut out = Vec::new();
                for (c, p) in cells.iter().zip(pieces) {
                    let a = p.to_map(n)?;
                    check_target(&a)?;
                    out.push((c.to_polyhedron(n)?, a));
                }
                PLMap::new(n, self.target_dim, out)
            }
            _ => Err(Error::InvalidInput("a map needs either map or cells+pieces".into())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonomialJson {
    pub exp: Vec<u32>,
    pub coef: Q,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<MonomialJson>,
}

impl PolynomialJson {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        PolynomialJson {
            terms: p
                .terms()
                .iter()
                .map(|(e, c)| MonomialJson {
                    exp: e.clone(),
                    coef: Q(c.clone()),
                })
                .collect(),
        }
    }

    pub fn to_polynomial(&self, n: usize) -> Result<Polynomial> {
        if let Some(t) = self.terms.iter().find(|t| t.exp.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.exp.len(),
            });
        }
        Ok(Polynomial::from_terms(n, self.terms.iter().map(|t| (t.exp.clone(), t.coef.0.clone()))))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormTermJson {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub poly: PolynomialJson,
}

/// `{"n", "p", "q", "terms": [{"I", "J", "poly"}]}` with 0-based indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub terms: Vec<FormTermJson>,
}

impl FormJson {
    pub fn from_form(f: &LagerbergForm) -> Self {
        let (p, q) = f.bidegree();
        FormJson {
            n: f.ambient_dim(),
            p,
            q,
            terms: f
                .terms()
                .iter()
                .map(|((i, j), poly)| FormTermJson {
                    i: i.clone(),
                    j: j.clone(),
                    poly: PolynomialJson::from_polynomial(poly),
                })
                .collect(),
        }
    }

    pub fn to_form(&self) -> Result<LagerbergForm> {
        if self.p > self.n || self.q > self.n {
            return Err(Error::Bidegree {
                p: self.p,
                q: self.q,
                reason: format!("exceeds the ambient dimension {}", self.n),
            });
        }
        let mut out = LagerbergForm::zero(self.n, self.p, self.q);
        for t in &self.terms {
            if t.i.len() != self.p || t.j.len() != self.q {
                return Err(Error::Bidegree {
                    p: t.i.len(),
                    q: t.j.len(),
                    reason: format!("term in a form of bidegree ({},{})", self.p, self.q),
                });
            }
            if t.i.iter().chain(&t.j).any(|&k| k >= self.n) {
                return Err(Error::InvalidInput("form index out of range".into()));
            }
            out = out.add(&LagerbergForm::term(self.n, &t.i, &t.j, t.poly.to_polynomial(self.n)?));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldPieceJson {
    pub region: PolyhedronJson,
    pub form: FormJson,
}

/// A single form, or `{"pieces": [{"region", "form"}], "default": form}`
/// where the default (zero if absent) applies outside all regions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Piecewise {
        n: usize,
        p: usize,
        q: usize,
        pieces: Vec<FieldPieceJson>,
        #[serde(default)]
        default: Option<FormJson>,
    },
    Uniform(FormJson),
}

impl FieldJson {
    pub fn to_field(&self) -> Result<FormField> {
        match self {
            FieldJson::Uniform(f) => Ok(FormField::uniform(f.to_form()?)),
            FieldJson::Piecewise {
                n,
                p,
                q,
                pieces,
                default,
            } => {
                let pieces = pieces
                    .iter()
                    .map(|pc| Ok((pc.region.to_polyhedron(*n)?, pc.form.to_form()?)))
                    .collect::<Result<_>>()?;
                let default = match default {
                    Some(f) => f.to_form()?,
                    None => LagerbergForm::zero(*n, *p, *q),
                };
                if default.bidegree() != (*p, *q) || default.ambient_dim() != *n {
                    return Err(Error::Bidegree {
                        p: default.bidegree().0,
                        q: default.bidegree().1,
                        reason: "default form does not match the field".into(),
                    });
                }
                FormField::piecewise_with_default(*n, pieces, default)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub tail: String,
    pub head: String,
    pub length: Q,
    #[serde(default = "one")]
    pub weight: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn one() -> i64 {
    1
}

/// `{"vertices", "edges": [{"tail", "head", "length", "weight"}],
/// "boundary"}` with optional Dirichlet data and a function.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_values: Option<BTreeMap<String, Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<GraphFunctionJson>,
    /// A cycle basis as maps from edge labels to coefficients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<BTreeMap<String, i64>>>,
}

/// Either vertex values of an edge-affine function, or per-edge breakpoint
/// arrays `[[position, value], ...]` running from `0` to the edge length.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFunctionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_values: Option<BTreeMap<String, Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Vec<(Q, Q)>>>,
}

impl GraphJson {
    pub fn from_graph(g: &MetricGraph) -> Self {
        GraphJson {
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    tail: g.vertex_name(e.tail).into(),
                    head: g.vertex_name(e.head).into(),
                    length: Q(e.length.clone()),
                    weight: e.weight,
                    label: Some(e.label.clone()),
                })
                .collect(),
            boundary: g.boundary().iter().map(|&v| g.vertex_name(v).into()).collect(),
            boundary_values: None,
            function: None,
            cycles: None,
        }
    }

    pub fn to_graph(&self) -> Result<MetricGraph> {
        let index = |name: &str| -> Result<usize> {
            self.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {name:?}")))
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(Edge {
                    tail: index(&e.tail)?,
                    head: index(&e.head)?,
                    length: e.length.0.clone(),
                    weight: e.weight,
                    label: e.label.clone().unwrap_or_else(|| format!("e{i}")),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let boundary = self.boundary.iter().map(|b| index(b)).collect::<Result<Vec<_>>>()?;
        MetricGraph::new(self.vertices.clone(), edges, boundary)
    }

    pub fn boundary_values(&self, g: &MetricGraph) -> Result<Option<BTreeMap<usize, Rational>>> {
        self.boundary_values.as_ref().map(|bv| vertex_map(g, bv)).transpose()
    }

    pub fn function(&self, g: &MetricGraph) -> Result<Option<GraphPL>> {
        self.function.as_ref().map(|f| f.to_function(g)).transpose()
    }

    pub fn cycles(&self, g: &MetricGraph) -> Result<Option<Vec<Cycle>>> {
        let Some(cycles) = &self.cycles else { return Ok(None) };
        cycles
            .iter()
            .map(|m| {
                let mut c = vec![0; g.edges().len()];
                for (label, &x) in m {
                    let e = g
                        .edge_index(label)
                        .ok_or_else(|| Error::InvalidGraph(format!("unknown edge {label:?}")))?;
                    c[e] = x;
                }
                Ok(c)
            })
            .collect::<Result<_>>()
            .map(Some)
    }
}

fn vertex_map(g: &MetricGraph, m: &BTreeMap<String, Q>) -> Result<BTreeMap<usize, Rational>> {
    m.iter()
        .map(|(k, v)| {
            let i = g
                .vertex_index(k)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {k:?}")))?;
            Ok((i, v.0.clone()))
        })
        .collect()
}

impl GraphFunctionJson {
    pub fn to_function(&self, g: &MetricGraph) -> Result<GraphPL> {
        match (&self.vertex_values, &self.edges) {
            (Some(vv), None) => {
                let map = vertex_map(g, vv)?;
                if map.len() != g.vertex_count() {
                    return Err(Error::InvalidInput("vertex_values must cover every vertex".into()));
                }
                GraphPL::from_vertex_values(g, map.into_values().collect())
            }
            (None, Some(edges)) => {
                let pts = edges
                    .iter()
                    .map(|e| e.iter().map(|(x, y)| (x.0.clone(), y.0.clone())).collect())
                    .collect();
                GraphPL::from_edge_breakpoints(g, pts, Rational::zero())
            }
            _ => Err(Error::InvalidInput("a graph function needs vertex_values or edges".into())),
        }
    }
}
