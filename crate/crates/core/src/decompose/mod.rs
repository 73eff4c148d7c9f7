//! Quasiprobability decompositions over generating sets, robustness
//! monotones, and the closed-form bound utilities.

mod bounds;
mod lp;
mod robustness;

pub use bounds::{
    appendix_b_check, stirling_min_bound, vertex_magic_report, facet_ratio_bound, two_point_negativity, StirlingVerdict,
    VertexMagicReport, FacetGeometry, COLLINEAR_TOL,
};
pub use lp::{Certificate, LinearProgram, LpOutcome, LpSolution, DEFAULT_ITERATION_CAP};
pub use robustness::{
    decompose_nonnegative, operator_columns, phase_space_columns, robustness, robustness_of_magic,
    stabilizer_columns, Feasibility, QuasiDecomposition, RobustnessReport,
};

pub use crate::pauli::PauliVector;
