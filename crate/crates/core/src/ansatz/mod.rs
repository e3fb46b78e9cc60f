//! UCCSD excitations, parametrized gate circuits and Pauli exponentials.

mod circuit;
mod uccsd;

pub use circuit::{exponentiate_pauli, Angle, Circuit, CircuitStats, Gate, Matrix2};
pub use uccsd::{
    build_uccsd_circuit, cluster_operator, uccsd_excitations, Excitation, ExcitationKind, MappedExcitation,
};
