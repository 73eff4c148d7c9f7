//! Binary-symplectic Pauli arithmetic.
//!
//! A point `a = (a_z, a_x)` of `E = Z_2^{2n}` labels the Hermitian Pauli
//! operator `T_a = i^{-<a_z|a_x>} Z(a_z) X(a_x)`, with the inner product taken
//! mod 4. With this convention `T_a` is the plain tensor product of
//! `I, X, Y, Z` factors, so `T_{(1,1)} = Y`.

mod clifford;
mod isotropic;
mod phased;
mod point;
mod vector;

pub use clifford::{CliffordTableau, Gate};
pub use isotropic::{enumerate_maximal_isotropics, enumerate_stabilizer_projectors, IsotropicSubspace};
pub use phased::PhasedPauli;
pub use point::{beta, symplectic, PauliPoint, MAX_QUBITS};
pub(crate) use point::beta_unchecked;
pub use vector::{PauliVector, MAX_VECTOR_QUBITS};

/// Default cap on the qubit count for exhaustive stabilizer enumeration.
pub const DEFAULT_STABILIZER_CAP: usize = 3;
