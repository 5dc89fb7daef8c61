mod function;
mod jacobian;
mod metric;

pub use function::{is_harmonic, is_subharmonic, laplacian_divisor, solve_dirichlet, GraphDivisor, GraphPL, HarmonicReport};
pub use jacobian::{
    abel_jacobi, abel_jacobi_on_edge, chain_coordinates, cycle_basis, dolbeault_dims, edge_length_pairing, jacobian,
    jacobian_with_basis, path_chain, theta_cycles, theta_graph, Cycle, DolbeaultTable, JacobianLattice,
};
pub use metric::{Edge, GraphPoint, MetricGraph};
