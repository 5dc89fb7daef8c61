use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{fmt_rational, QMatrix, Rational};

use super::metric::{GraphPoint, MetricGraph};

/// A continuous function on a metric graph, affine between breakpoints on
/// each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPL {
    vertex_values: Vec<Rational>,
    /// Per edge the full breakpoint list `(position, value)`, starting at
    /// `0` and ending at the edge length.
    edges: Vec<Vec<(Rational, Rational)>>,
}

/// Rational coefficients on finitely many points of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDivisor {
    coefficients: BTreeMap<GraphPoint, Rational>,
}

impl GraphDivisor {
    pub fn add_at(&mut self, p: GraphPoint, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coefficients.entry(p.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coefficients.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &GraphPoint) -> Rational {
        self.coefficients.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<GraphPoint, Rational> {
        &self.coefficients
    }

    pub fn support(&self) -> Vec<&GraphPoint> {
        self.coefficients.keys().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn total_mass(&self) -> Rational {
        self.coefficients.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// The part supported on boundary vertices.
    pub fn boundary_part(&self, g: &MetricGraph) -> GraphDivisor {
        self.filter(|p| matches!(p, GraphPoint::Vertex(v) if g.is_boundary(*v)))
    }

    /// The part supported away from the boundary.
    pub fn interior_part(&self, g: &MetricGraph) -> GraphDivisor {
        self.filter(|p| !matches!(p, GraphPoint::Vertex(v) if g.is_boundary(*v)))
    }

    fn filter(&self, keep: impl Fn(&GraphPoint) -> bool) -> GraphDivisor {
        GraphDivisor {
            coefficients: self
                .coefficients
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }
}

impl GraphPL {
    /// The edge-affine function with the given vertex values.
    pub fn from_vertex_values(g: &MetricGraph, values: Vec<Rational>) -> Result<Self> {
        Self::new(g, values, vec![Vec::new(); g.edges().len()])
    }

    /// Vertex values plus interior breakpoints `(position, value)` per edge,
    /// strictly inside the edge and strictly increasing.
    pub fn new(g: &MetricGraph, vertex_values: Vec<Rational>, interior: Vec<Vec<(Rational, Rational)>>) -> Result<Self> {
        if vertex_values.len() != g.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: g.vertex_count(),
                found: vertex_values.len(),
            });
        }
        if interior.len() != g.edges().len() {
            return Err(Error::DimensionMismatch {
                expected: g.edges().len(),
                found: interior.len(),
            });
        }
        let mut edges = Vec::new();
        for (e, pts) in interior.into_iter().enumerate() {
            let edge = g.edge(e);
            let mut full = vec![(Rational::zero(), vertex_values[edge.tail].clone())];
            for (pos, val) in pts {
                if !pos.is_positive() || pos >= edge.length || pos <= full.last().expect("nonempty").0 {
                    return Err(Error::InvalidInput(format!(
                        "breakpoint at {} on edge {} is out of order or outside the edge",
                        fmt_rational(&pos),
                        edge.label
                    )));
                }
                full.push((pos, val));
            }
            full.push((edge.length.clone(), vertex_values[edge.head].clone()));
            edges.push(full);
        }
        Ok(GraphPL { vertex_values, edges })
    }

    /// Full breakpoint lists per edge. Vertex values are read off the edge
    /// ends and must agree; isolated vertices take `isolated_value`.
    pub fn from_edge_breakpoints(
        g: &MetricGraph,
        edges: Vec<Vec<(Rational, Rational)>>,
        isolated_value: Rational,
    ) -> Result<Self> {
        if edges.len() != g.edges().len() {
            return Err(Error::DimensionMismatch {
                expected: g.edges().len(),
                found: edges.len(),
            });
        }
        let mut values: Vec<Option<Rational>> = vec![None; g.vertex_count()];
        let mut interior = Vec::new();
        for (e, pts) in edges.into_iter().enumerate() {
            let edge = g.edge(e);
            if pts.len() < 2 || !pts[0].0.is_zero() || pts[pts.len() - 1].0 != edge.length {
                return Err(Error::InvalidInput(format!(
                    "breakpoints on edge {} must start at 0 and end at its length",
                    edge.label
                )));
            }
            for (v, val) in [(edge.tail, &pts[0].1), (edge.head, &pts[pts.len() - 1].1)] {
                match &values[v] {
                    Some(old) if old != val => {
                        return Err(Error::InvalidInput(format!(
                            "discontinuous at vertex {}: {} vs {}",
                            g.vertex_name(v),
                            fmt_rational(old),
                            fmt_rational(val)
                        )))
                    }
                    _ => values[v] = Some(val.clone()),
                }
            }
            interior.push(pts[1..pts.len() - 1].to_vec());
        }
        let values = values.into_iter().map(|v| v.unwrap_or_else(|| isolated_value.clone())).collect();
        Self::new(g, values, interior)
    }

    pub fn vertex_value(&self, v: usize) -> &Rational {
        &self.vertex_values[v]
    }

    pub fn vertex_values(&self) -> &[Rational] {
        &self.vertex_values
    }

    pub fn breakpoints(&self, e: usize) -> &[(Rational, Rational)] {
        &self.edges[e]
    }

    fn segment_slopes(&self, e: usize) -> Vec<Rational> {
        self.edges[e]
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    pub fn eval(&self, g: &MetricGraph, p: &GraphPoint) -> Rational {
        match p {
            GraphPoint::Vertex(v) => self.vertex_values[*v].clone(),
            GraphPoint::Edge { edge, position } => {
                let pts = &self.edges[*edge];
                let i = pts.iter().rposition(|(x, _)| x <= position).expect("position within the edge");
                if &pts[i].0 == position || i + 1 == pts.len() {
                    return pts[i].1.clone();
                }
                let (x0, y0) = &pts[i];
                let (x1, y1) = &pts[i + 1];
                debug_assert!(position < &g.edge(*edge).length);
                y0 + (y1 - y0) * (position - x0) / (x1 - x0)
            }
        }
    }

    /// Whether every edge carries an affine function.
    pub fn is_edge_affine(&self) -> bool {
        (0..self.edges.len()).all(|e| self.segment_slopes(e).windows(2).all(|w| w[0] == w[1]))
    }

    /// The slope leaving `v` along edge `e`.
    pub fn outgoing_slope(&self, g: &MetricGraph, e: usize, v: usize) -> Rational {
        let slopes = self.segment_slopes(e);
        if g.edge(e).tail == v {
            slopes[0].clone()
        } else {
            -slopes[slopes.len() - 1].clone()
        }
    }

    /// `Σ_{e ∋ v} w(e) d_e(h)` at a vertex.
    pub fn vertex_slope_sum(&self, g: &MetricGraph, v: usize) -> Rational {
        g.incident_edges(v)
            .into_iter()
            .map(|e| self.outgoing_slope(g, e, v) * Rational::from_integer(g.edge(e).weight.into()))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Interior breakpoints with their weighted outgoing slope sums.
    fn breakpoint_slope_sums(&self, g: &MetricGraph) -> Vec<(GraphPoint, Rational)> {
        let mut out = Vec::new();
        for e in 0..self.edges.len() {
            let w = Rational::from_integer(g.edge(e).weight.into());
            let slopes = self.segment_slopes(e);
            for (k, pair) in slopes.windows(2).enumerate() {
                let point = GraphPoint::Edge {
                    edge: e,
                    position: self.edges[e][k + 1].0.clone(),
                };
                out.push((point, (&pair[1] - &pair[0]) * &w));
            }
        }
        out
    }
}

/// Outcome of the harmonicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicReport {
    pub harmonic: bool,
    pub edge_affine: bool,
    /// Nonzero weighted slope sums at interior vertices.
    pub defects: BTreeMap<usize, Rational>,
}

pub fn is_harmonic(g: &MetricGraph, h: &GraphPL) -> HarmonicReport {
    let edge_affine = h.is_edge_affine();
    let defects: BTreeMap<usize, Rational> = (0..g.vertex_count())
        .filter(|&v| !g.is_boundary(v))
        .map(|v| (v, h.vertex_slope_sum(g, v)))
        .filter(|(_, s)| !s.is_zero())
        .collect();
    HarmonicReport {
        harmonic: edge_affine && defects.is_empty(),
        edge_affine,
        defects,
    }
}

/// Weighted outgoing slope sums are nonnegative at interior vertices and at
/// all interior breakpoints.
pub fn is_subharmonic(g: &MetricGraph, h: &GraphPL) -> bool {
    let vertices_ok = (0..g.vertex_count())
        .filter(|&v| !g.is_boundary(v))
        .all(|v| !h.vertex_slope_sum(g, v).is_negative());
    vertices_ok && h.breakpoint_slope_sums(g).iter().all(|(_, s)| !s.is_negative())
}

/// Weighted outgoing slope sums at every vertex and breakpoint.
pub fn laplacian_divisor(g: &MetricGraph, h: &GraphPL) -> GraphDivisor {
    let mut d = GraphDivisor::default();
    for v in 0..g.vertex_count() {
        d.add_at(GraphPoint::Vertex(v), h.vertex_slope_sum(g, v));
    }
    for (p, s) in h.breakpoint_slope_sums(g) {
        d.add_at(p, s);
    }
    d
}

/// The edge-affine harmonic function with prescribed boundary values,
/// using conductances `w(e)/ℓ(e)`.
pub fn solve_dirichlet(g: &MetricGraph, boundary_values: &BTreeMap<usize, Rational>) -> Result<GraphPL> {
    for &v in boundary_values.keys() {
        if !g.is_boundary(v) {
            return Err(Error::InvalidInput(format!("{} is not a boundary vertex", g.vertex_name(v))));
        }
    }
    if let Some(&v) = g.boundary().iter().find(|v| !boundary_values.contains_key(v)) {
        return Err(Error::InvalidInput(format!("no value given for boundary vertex {}", g.vertex_name(v))));
    }
    for comp in g.components() {
        if !comp.iter().any(|&v| g.is_boundary(v)) {
            return Err(Error::ComponentWithoutBoundary(
                comp.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
            ));
        }
    }
    let interior: Vec<usize> = (0..g.vertex_count()).filter(|&v| !g.is_boundary(v)).collect();
    let slot: BTreeMap<usize, usize> = interior.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = interior.len();
    let mut a = QMatrix::zeros(k, k);
    let mut rhs = vec![Rational::zero(); k];
    for (i, &v) in interior.iter().enumerate() {
        for e in g.incident_edges(v) {
            let edge = g.edge(e);
            let c = Rational::from_integer(edge.weight.into()) / &edge.length;
            let w = g.other_end(e, v);
            let diag = a.get(i, i) + &c;
            a.set(i, i, diag);
            match slot.get(&w) {
                Some(&j) => {
                    let off = a.get(i, j) - &c;
                    a.set(i, j, off);
                }
                None => rhs[i] += &c * &boundary_values[&w],
            }
        }
    }
    let sol = a
        .solve(&rhs)
        .ok_or_else(|| Error::Hypothesis("the Dirichlet system is singular".into()))?;
    let mut values: Vec<Rational> = vec![Rational::zero(); g.vertex_count()];
    for (&v, val) in boundary_values {
        values[v] = val.clone();
    }
    for (i, &v) in interior.iter().enumerate() {
        values[v] = sol[i].clone();
    }
    GraphPL::from_vertex_values(g, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn path3(boundary: &[usize]) -> MetricGraph {
        MetricGraph::simple(3, &[(0, 1, rat(1, 1)), (1, 2, rat(1, 1))], boundary).unwrap()
    }

    fn vals(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn harmonic_examples() {
        let g = path3(&[0, 2]);
        assert!(is_harmonic(&g, &GraphPL::from_vertex_values(&g, vals(&[5, 5, 5])).unwrap()).harmonic);
        assert!(is_harmonic(&g, &GraphPL::from_vertex_values(&g, vals(&[0, 1, 2])).unwrap()).harmonic);
        let r = is_harmonic(&g, &GraphPL::from_vertex_values(&g, vals(&[0, 1, 1])).unwrap());
        assert!(!r.harmonic);
        assert_eq!(r.defects.get(&1), Some(&rat(-1, 1)));
    }

    #[test]
    fn dirichlet_examples() {
        let g = path3(&[0, 2]);
        let bv = BTreeMap::from([(0, rat(0, 1)), (2, rat(1, 1))]);
        let h = solve_dirichlet(&g, &bv).unwrap();
        assert_eq!(h.vertex_value(1), &rat(1, 2));
        let bv = BTreeMap::from([(0, rat(3, 1)), (2, rat(3, 1))]);
        assert_eq!(solve_dirichlet(&g, &bv).unwrap().vertex_values(), &vals(&[3, 3, 3])[..]);
        let closed = path3(&[]);
        assert!(matches!(
            solve_dirichlet(&closed, &BTreeMap::new()),
            Err(Error::ComponentWithoutBoundary(c)) if c == vec!["v0", "v1", "v2"]
        ));
    }

    #[test]
    fn subharmonic_examples() {
        let g = path3(&[0, 2]);
        let v = GraphPL::from_vertex_values(&g, vals(&[1, 0, 1])).unwrap();
        assert!(is_subharmonic(&g, &v));
        let v = GraphPL::from_vertex_values(&g, vals(&[-1, 0, -1])).unwrap();
        assert!(!is_subharmonic(&g, &v));
        let v = GraphPL::from_vertex_values(&g, vals(&[0, 1, 2])).unwrap();
        assert!(is_subharmonic(&g, &v));
    }

    #[test]
    fn laplacian_examples() {
        let g = MetricGraph::simple(2, &[(0, 1, rat(1, 1))], &[0, 1]).unwrap();
        let h = GraphPL::new(&g, vec![rat(0, 1), rat(1, 2)], vec![vec![(rat(1, 2), rat(0, 1))]]).unwrap();
        let d = laplacian_divisor(&g, &h);
        let bp = g.point_on_edge(0, rat(1, 2)).unwrap();
        assert_eq!(d.interior_part(&g).coefficients(), &BTreeMap::from([(bp, rat(1, 1))]));
        assert_eq!(d.boundary_part(&g).coefficient(&GraphPoint::Vertex(1)), rat(-1, 1));

        // circle of length 4, kinks at 0 and 2: h = distance to vertex 0
        let c = MetricGraph::simple(2, &[(0, 1, rat(2, 1)), (1, 0, rat(2, 1))], &[]).unwrap();
        let h = GraphPL::from_vertex_values(&c, vals(&[0, 2])).unwrap();
        let d = laplacian_divisor(&c, &h);
        assert_eq!(d.coefficient(&GraphPoint::Vertex(0)), rat(2, 1));
        assert_eq!(d.coefficient(&GraphPoint::Vertex(1)), rat(-2, 1));
        assert!(d.total_mass().is_zero());
    }

    #[test]
    fn eval_interpolates() {
        let g = MetricGraph::simple(2, &[(0, 1, rat(2, 1))], &[]).unwrap();
        let h = GraphPL::new(&g, vals(&[0, 0]), vec![vec![(rat(1, 1), rat(4, 1))]]).unwrap();
        assert_eq!(h.eval(&g, &g.point_on_edge(0, rat(1, 2)).unwrap()), rat(2, 1));
        assert_eq!(h.eval(&g, &g.point_on_edge(0, rat(3, 2)).unwrap()), rat(2, 1));
    }
}
