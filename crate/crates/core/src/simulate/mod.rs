//! Sampling simulation of Clifford + Pauli-measurement circuits with magic
//! state inputs.

mod circuit;
mod sampler;
mod state;

pub use circuit::{injection_circuit, Circuit, Element, InputState, NamedState, StateSpec};
pub use sampler::{
    estimate_distribution, quasi_estimate, run_from, shot_rng, simulate_run, transcripts, Block, Estimate,
    Preparation, QuasiEstimate, Transcript, MAX_BLOCK_QUBITS,
};
pub use state::CanonicalState;
