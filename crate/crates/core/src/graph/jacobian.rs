use std::collections::VecDeque;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{floor_rational, QMatrix, QVector, Rational};

use super::metric::{Edge, GraphPoint, MetricGraph};

/// Signed edge multiplicities of a 1-cycle.
pub type Cycle = Vec<i64>;

/// A breadth-first spanning forest: parent edge of every non-root vertex.
struct SpanningForest {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    tree_edges: Vec<bool>,
}

fn spanning_forest(g: &MetricGraph) -> SpanningForest {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut depth = vec![0; n];
    let mut seen = vec![false; n];
    let mut tree_edges = vec![false; g.edges().len()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for e in g.incident_edges(u) {
                let w = g.other_end(e, u);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    depth[w] = depth[u] + 1;
                    tree_edges[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    SpanningForest {
        parent,
        depth,
        tree_edges,
    }
}

impl SpanningForest {
    /// Signed edge multiplicities of the tree path from `from` to `to`.
    fn path(&self, g: &MetricGraph, from: usize, to: usize) -> Vec<i64> {
        let mut chain = vec![0; g.edges().len()];
        let (mut a, mut b) = (from, to);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let e = self.parent[a].expect("same component");
                // walking from a towards the root
                chain[e] += if g.edge(e).tail == a { 1 } else { -1 };
                a = g.other_end(e, a);
            } else {
                let e = self.parent[b].expect("same component");
                // the path enters b from its parent
                chain[e] += if g.edge(e).head == b { 1 } else { -1 };
                b = g.other_end(e, b);
            }
        }
        chain
    }
}

/// Fundamental cycles of the breadth-first spanning forest, one per chord
/// in input order and oriented along it.
pub fn cycle_basis(g: &MetricGraph) -> Vec<Cycle> {
    let forest = spanning_forest(g);
    let mut out = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if forest.tree_edges[e] {
            continue;
        }
        let mut cycle = forest.path(g, edge.head, edge.tail);
        cycle[e] += 1;
        out.push(cycle);
    }
    debug_assert_eq!(out.len(), g.betti_number());
    out
}

/// `⟨γ_i, γ_j⟩ = Σ_e ℓ(e) γ_i(e) γ_j(e)`.
pub fn edge_length_pairing(g: &MetricGraph, cycles: &[Cycle]) -> QMatrix {
    let k = cycles.len();
    let mut gram = QMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let s = g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, edge)| &edge.length * Rational::from_integer((cycles[i][e] * cycles[j][e]).into()))
                .fold(Rational::zero(), |a, b| a + b);
            gram.set(i, j, s);
        }
    }
    gram
}

/// The lattice `ι H_1` in dual-basis coordinates of a chosen cycle basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianLattice {
    pub cycles: Vec<Cycle>,
    /// Row `i` is `ι(γ_i)`.
    pub gram: QMatrix,
}

impl JacobianLattice {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn generator(&self, i: usize) -> QVector {
        self.gram.row(i)
    }

    pub fn covolume(&self) -> Rational {
        self.gram.determinant()
    }

    /// Coordinates of `v` in the basis of lattice generators.
    fn lattice_coordinates(&self, v: &[Rational]) -> QVector {
        self.gram.transpose().solve(v).expect("the pairing is positive definite")
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.lattice_coordinates(v).iter().all(|c| c.is_integer())
    }

    /// The representative of `v` whose lattice coordinates lie in `[0, 1)`.
    pub fn reduce(&self, v: &[Rational]) -> QVector {
        let coords = self.lattice_coordinates(v);
        let frac: QVector = coords.iter().map(|c| c - Rational::from_integer(floor_rational(c))).collect();
        self.gram.transpose().mul_vec(&frac)
    }
}

pub fn jacobian(g: &MetricGraph) -> Result<JacobianLattice> {
    jacobian_with_basis(g, cycle_basis(g))
}

pub fn jacobian_with_basis(g: &MetricGraph, cycles: Vec<Cycle>) -> Result<JacobianLattice> {
    if !g.is_connected() {
        return Err(Error::Hypothesis("the Jacobian needs a connected graph".into()));
    }
    if cycles.iter().any(|c| c.len() != g.edges().len()) {
        return Err(Error::InvalidInput("cycle vectors must have one entry per edge".into()));
    }
    let gram = edge_length_pairing(g, &cycles);
    if cycles.len() != g.betti_number() || (!cycles.is_empty() && gram.determinant().is_zero()) {
        return Err(Error::InvalidInput("the given cycles do not form a basis of the cycle space".into()));
    }
    Ok(JacobianLattice { cycles, gram })
}

/// A 1-chain from `base` to `x`, as signed traversed lengths per edge.
pub fn path_chain(g: &MetricGraph, base: usize, x: &GraphPoint) -> Result<QVector> {
    let forest = spanning_forest(g);
    let same_component = |v: usize| g.components().iter().any(|c| c.contains(&base) && c.contains(&v));
    let to_lengths = |chain: Vec<i64>| -> QVector {
        chain
            .iter()
            .zip(g.edges())
            .map(|(&m, e): (&i64, &Edge)| &e.length * Rational::from_integer(m.into()))
            .collect()
    };
    match x {
        GraphPoint::Vertex(v) => {
            if !same_component(*v) {
                return Err(Error::Hypothesis("point lies in another component".into()));
            }
            Ok(to_lengths(forest.path(g, base, *v)))
        }
        GraphPoint::Edge { edge, position } => {
            let tail = g.edge(*edge).tail;
            if !same_component(tail) {
                return Err(Error::Hypothesis("point lies in another component".into()));
            }
            let mut chain = to_lengths(forest.path(g, base, tail));
            chain[*edge] += position;
            Ok(chain)
        }
    }
}

/// `(⟨π, γ_1⟩, …, ⟨π, γ_b⟩)` for a chain of signed lengths.
pub fn chain_coordinates(lattice: &JacobianLattice, chain: &[Rational]) -> QVector {
    lattice
        .cycles
        .iter()
        .map(|c| {
            c.iter()
                .zip(chain)
                .map(|(&m, l)| l * Rational::from_integer(m.into()))
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect()
}

/// The Abel–Jacobi image of `x` based at `base`, reduced into the
/// fundamental domain of the lattice.
pub fn abel_jacobi(g: &MetricGraph, lattice: &JacobianLattice, base: usize, x: &GraphPoint) -> Result<QVector> {
    let chain = path_chain(g, base, x)?;
    Ok(lattice.reduce(&chain_coordinates(lattice, &chain)))
}

/// The affine map `t ↦ slope·t + offset` describing the unreduced
/// Abel–Jacobi image of the point at distance `t` from the tail of `edge`.
pub fn abel_jacobi_on_edge(
    g: &MetricGraph,
    lattice: &JacobianLattice,
    base: usize,
    edge: usize,
) -> Result<(QVector, QVector)> {
    let tail = g.edge(edge).tail;
    let offset = chain_coordinates(lattice, &path_chain(g, base, &GraphPoint::Vertex(tail))?);
    let mut unit = vec![Rational::zero(); g.edges().len()];
    unit[edge] = Rational::from_integer(1.into());
    Ok((chain_coordinates(lattice, &unit), offset))
}

/// Dimensions `h^{p,q}` of tropical Dolbeault cohomology of a closed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DolbeaultTable {
    pub h00: usize,
    pub h10: usize,
    pub h01: usize,
    pub h11: usize,
}

pub fn dolbeault_dims(g: &MetricGraph) -> Result<DolbeaultTable> {
    if !g.boundary().is_empty() {
        return Err(Error::Hypothesis("the graph must have empty boundary".into()));
    }
    if !g.is_connected() {
        return Err(Error::Hypothesis("the graph must be connected".into()));
    }
    let b = g.betti_number();
    Ok(DolbeaultTable {
        h00: 1,
        h10: b,
        h01: b,
        h11: 1,
    })
}

/// Two vertices `P`, `Q` joined by edges `a`, `b`, `c` oriented `P → Q`.
pub fn theta_graph(la: Rational, lb: Rational, lc: Rational) -> Result<MetricGraph> {
    let edges = [("a", la), ("b", lb), ("c", lc)]
        .into_iter()
        .map(|(label, length)| Edge {
            tail: 0,
            head: 1,
            length,
            weight: 1,
            label: label.into(),
        })
        .collect();
    MetricGraph::new(vec!["P".into(), "Q".into()], edges, [])
}

/// The cycles `c − a` and `c − b` on a theta graph, which give the usual
/// coordinates `ι(γ_1) = (ℓa + ℓc, ℓc)`, `ι(γ_2) = (ℓc, ℓb + ℓc)`.
pub fn theta_cycles() -> Vec<Cycle> {
    vec![vec![-1, 0, 1], vec![0, -1, 1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, rat};

    fn theta(a: i64, b: i64, c: i64) -> MetricGraph {
        theta_graph(rat(a, 1), rat(b, 1), rat(c, 1)).unwrap()
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(cycle_basis(&theta(1, 1, 1)).len(), 2);
        let tree = MetricGraph::simple(3, &[(0, 1, rat(1, 1)), (0, 2, rat(1, 1))], &[]).unwrap();
        assert!(cycle_basis(&tree).is_empty());
        let circle = MetricGraph::simple(2, &[(0, 1, rat(1, 1)), (0, 1, rat(2, 1))], &[]).unwrap();
        assert_eq!(cycle_basis(&circle), vec![vec![-1, 1]]);
    }

    #[test]
    fn gram_matrices() {
        let g = theta(1, 1, 1);
        let lat = jacobian_with_basis(&g, theta_cycles()).unwrap();
        assert_eq!(lat.gram, QMatrix::from_rows(&[qvec(&[2, 1]), qvec(&[1, 2])], 2));
        let g = theta(1, 2, 3);
        assert_eq!(jacobian_with_basis(&g, theta_cycles()).unwrap().covolume(), rat(11, 1));
        let circle = MetricGraph::simple(2, &[(0, 1, rat(3, 1)), (0, 1, rat(2, 1))], &[]).unwrap();
        assert_eq!(jacobian(&circle).unwrap().gram, QMatrix::from_rows(&[qvec(&[5])], 1));
    }

    #[test]
    fn theta_coordinates() {
        let g = theta(2, 3, 5);
        let lat = jacobian_with_basis(&g, theta_cycles()).unwrap();
        assert_eq!(lat.generator(0), qvec(&[7, 5]));
        assert_eq!(lat.generator(1), qvec(&[5, 8]));
    }

    #[test]
    fn abel_jacobi_on_theta() {
        let g = theta(2, 3, 5);
        let lat = jacobian_with_basis(&g, theta_cycles()).unwrap();
        let c = g.edge_index("c").unwrap();
        let (slope, offset) = abel_jacobi_on_edge(&g, &lat, 0, c).unwrap();
        assert_eq!((slope, offset), (qvec(&[1, 1]), qvec(&[0, 0])));
        let a = g.edge_index("a").unwrap();
        let (slope, offset) = abel_jacobi_on_edge(&g, &lat, 0, a).unwrap();
        assert_eq!(slope, qvec(&[-1, 0]));
        // the displayed offset (ℓa + ℓc, ℓc) differs by a lattice vector
        assert!(lat.contains(&crate::linalg::sub_q(&qvec(&[7, 5]), &offset)));
        assert_eq!(abel_jacobi(&g, &lat, 0, &GraphPoint::Vertex(0)).unwrap(), qvec(&[0, 0]));
    }

    #[test]
    fn reduction_is_canonical() {
        let g = theta(2, 3, 5);
        let lat = jacobian_with_basis(&g, theta_cycles()).unwrap();
        let v = qvec(&[1, 2]);
        let shifted = crate::linalg::add_q(&v, &lat.generator(1));
        assert_eq!(lat.reduce(&v), lat.reduce(&shifted));
    }

    #[test]
    fn dolbeault_tables() {
        let t = dolbeault_dims(&theta(1, 1, 1)).unwrap();
        assert_eq!((t.h00, t.h10, t.h01, t.h11), (1, 2, 2, 1));
        let circle = MetricGraph::simple(2, &[(0, 1, rat(1, 1)), (0, 1, rat(1, 1))], &[]).unwrap();
        assert_eq!(dolbeault_dims(&circle).unwrap().h10, 1);
        let point = MetricGraph::simple(1, &[], &[]).unwrap();
        let t = dolbeault_dims(&point).unwrap();
        assert_eq!((t.h00, t.h10, t.h01, t.h11), (1, 0, 0, 1));
        assert!(dolbeault_dims(&circle.with_boundary([0]).unwrap()).is_err());
        assert!(theta_graph(rat(1, 1), rat(0, 1), rat(1, 1)).is_err());
    }
}
