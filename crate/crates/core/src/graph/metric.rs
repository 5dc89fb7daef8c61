use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub length: Rational,
    pub weight: i64,
    pub label: String,
}

/// A finite multigraph without loops, with positive rational edge lengths,
/// positive integer weights and a set of boundary vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    boundary: BTreeSet<usize>,
}

/// A vertex, or a point in the interior of an edge at a distance
/// `position` from its tail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphPoint {
    Vertex(usize),
    Edge { edge: usize, position: Rational },
}

impl MetricGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, boundary: impl IntoIterator<Item = usize>) -> Result<Self> {
        let names: BTreeSet<&String> = vertices.iter().collect();
        if names.len() != vertices.len() {
            return Err(Error::InvalidGraph("vertex names must be distinct".into()));
        }
        let nv = vertices.len();
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= nv || e.head >= nv {
                return Err(Error::InvalidGraph(format!("edge {i} has an unknown endpoint")));
            }
            if e.tail == e.head {
                return Err(Error::InvalidGraph(format!("edge {i} is a loop")));
            }
            if !e.length.is_positive() {
                return Err(Error::InvalidGraph(format!("edge {i} has nonpositive length {}", fmt_rational(&e.length))));
            }
            if e.weight < 1 {
                return Err(Error::InvalidGraph(format!("edge {i} has weight {} < 1", e.weight)));
            }
        }
        let boundary: BTreeSet<usize> = boundary.into_iter().collect();
        if let Some(&v) = boundary.iter().find(|&&v| v >= nv) {
            return Err(Error::InvalidGraph(format!("boundary vertex {v} does not exist")));
        }
        Ok(MetricGraph {
            vertices,
            edges,
            boundary,
        })
    }

    /// Convenience constructor with edges `(tail, head, length)` of weight 1.
    pub fn simple(nv: usize, edges: &[(usize, usize, Rational)], boundary: &[usize]) -> Result<Self> {
        let vertices = (0..nv).map(|i| format!("v{i}")).collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, (t, h, l))| Edge {
                tail: *t,
                head: *h,
                length: l.clone(),
                weight: 1,
                label: format!("e{i}"),
            })
            .collect();
        Self::new(vertices, edges, boundary.iter().copied())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    pub fn boundary(&self) -> &BTreeSet<usize> {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.contains(&v)
    }

    pub fn with_boundary(&self, boundary: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(self.vertices.clone(), self.edges.clone(), boundary)
    }

    /// Edges at `v`, in input order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].tail == v || self.edges[e].head == v)
            .collect()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.tail == v {
            edge.head
        } else {
            edge.tail
        }
    }

    /// Connected components, each sorted, ordered by their lowest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for e in self.incident_edges(u) {
                    let w = self.other_end(e, u);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `#E − #V + #components`.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertex_count()
    }

    /// A point on edge `e` at distance `position` from the tail; endpoints
    /// become vertices.
    pub fn point_on_edge(&self, e: usize, position: Rational) -> Result<GraphPoint> {
        let edge = self
            .edges
            .get(e)
            .ok_or_else(|| Error::InvalidInput(format!("edge {e} does not exist")))?;
        if position.is_negative() || position > edge.length {
            return Err(Error::InvalidInput(format!(
                "position {} lies outside edge {} of length {}",
                fmt_rational(&position),
                edge.label,
                fmt_rational(&edge.length)
            )));
        }
        Ok(if position.is_zero() {
            GraphPoint::Vertex(edge.tail)
        } else if position == edge.length {
            GraphPoint::Vertex(edge.head)
        } else {
            GraphPoint::Edge { edge: e, position }
        })
    }

    pub fn point_label(&self, p: &GraphPoint) -> String {
        match p {
            GraphPoint::Vertex(v) => self.vertices[*v].clone(),
            GraphPoint::Edge { edge, position } => format!("{}@{}", self.edges[*edge].label, fmt_rational(position)),
        }
    }
}

impl fmt::Display for MetricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {{{}}}", self.vertices.join(", "))?;
        for e in &self.edges {
            write!(
                f,
                "; {}: {}->{} len {} wt {}",
                e.label,
                self.vertices[e.tail],
                self.vertices[e.head],
                fmt_rational(&e.length),
                e.weight
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn validation() {
        assert!(MetricGraph::simple(2, &[(0, 0, rat(1, 1))], &[]).is_err());
        assert!(MetricGraph::simple(2, &[(0, 1, rat(0, 1))], &[]).is_err());
        assert!(MetricGraph::simple(2, &[(0, 1, rat(1, 1))], &[2]).is_err());
        let g = MetricGraph::simple(3, &[(0, 1, rat(1, 1)), (1, 2, rat(1, 1))], &[0, 2]).unwrap();
        assert_eq!(g.betti_number(), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn points_normalize_to_vertices() {
        let g = MetricGraph::simple(2, &[(0, 1, rat(2, 1))], &[]).unwrap();
        assert_eq!(g.point_on_edge(0, rat(0, 1)).unwrap(), GraphPoint::Vertex(0));
        assert_eq!(g.point_on_edge(0, rat(2, 1)).unwrap(), GraphPoint::Vertex(1));
        assert!(g.point_on_edge(0, rat(3, 1)).is_err());
        assert_eq!(g.point_label(&g.point_on_edge(0, rat(1, 2)).unwrap()), "e0@1/2");
    }
}
