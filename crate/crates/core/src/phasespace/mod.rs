//! Phase-space point operators: CNC and Majorana constructions, membership
//! and vertex tests against the stabilizer polytope's dual `Lambda`, the
//! isotropic counting function, projected-polytope enumeration, and assembly
//! of generating sets.

mod build;
mod counting;
mod lambda;
mod majorana;
mod operator;
mod polytope;

pub use build::{
    build_from_seeds, build_phase_space, clifford_generators, cnc_cores, projected_family, theorem2_family, Origin,
    PhaseSpace, PhaseSpaceConfig,
};
pub use counting::{
    count_isotropics_containing, even_factorization, f_counting, inclusion_graph, orthogonal_supports, table_row,
};
pub use lambda::{
    find_vertex_signs, intersection_size, lambda_membership, scan_vertex_signs, stabilizer_inner_product,
    stabilizers, vertex_check, LambdaVerdict, SignStrategy, SignTrial, VertexReport,
};
pub use majorana::{
    edge_products, is_closed_under_inference, jordan_wigner_majoranas, make_cnc_operator, make_theorem2_operator,
    noncontextual_assignments, pair_order, CncLabel, Theorem2Label,
};
pub use operator::{ConstructiveForm, PhasePointOperator};
pub use polytope::{
    double_description, enumerate_projected_vertices, projected_constraints, projected_operator, Inequality,
    DEFAULT_PROJECTED_SUPPORT_CAP,
};

pub(crate) use counting::biguint_log2;
