//! Quasiprobability phase spaces for qubit quantum computation with magic
//! states, built from Jordan-Wigner realizations of line-graph frustration
//! graphs.
//!
//! The crate covers Pauli/Clifford arithmetic ([`pauli`]), the graph
//! machinery behind line-graph supports ([`graphs`]), construction and
//! verification of phase-space point operators ([`phasespace`]), LP-based
//! decompositions and robustness ([`decompose`]), the sampling simulator
//! ([`simulate`]) and a dense brute-force reference ([`oracle`]).

pub mod decompose;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod phasespace;
pub mod scalar;
pub mod simulate;

pub use error::{Error, Result};
