//! Variational quantum eigensolver simulation toolkit.
//!
//! The pipeline runs from FCIDUMP integrals ([`chem`]) through fermion-to-qubit
//! encodings and symmetry tapering ([`fermion`]), a Trotterized UCCSD circuit
//! ([`ansatz`]), statevector or shot-sampled expectation values ([`backend`]),
//! and a quasi-Newton outer loop ([`vqe`]). [`pipeline`] wires those stages
//! together and [`bench`] produces benchmark rows from fixtures.

pub mod ansatz;
pub mod backend;
pub mod bench;
pub mod bits;
pub mod chem;
pub mod error;
pub mod fermion;
pub mod pauli;
pub mod pipeline;
pub mod vqe;

pub use bits::Bitstring;
pub use error::{Error, Result};
pub use pauli::{Axis, PauliString, PauliSum, PauliTerm, Phase};
