//! Fermionic operators and their qubit encodings.

mod encoding;
pub(crate) mod gf2;
mod operator;
mod taper;

pub use encoding::{map_bravyi_kitaev, map_jordan_wigner, map_parity, Encoding, EncodingKind};
pub use operator::{is_normal_ordered, FermionOperator, FermionTerm, Ladder};
pub use taper::{
    find_z2_symmetries, full_symmetry_rank, reduction_qubits, taper, two_qubit_reduction, TaperingInfo,
};
