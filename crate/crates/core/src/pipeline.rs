//! From an active-space problem to a tapered qubit Hamiltonian and UCCSD circuit.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ansatz::{build_uccsd_circuit, uccsd_excitations, Circuit, CircuitStats, Excitation, MappedExcitation};
use crate::backend::{exact_ground_energy_in_subspace, ExactResult};
use crate::bits::Bitstring;
use crate::chem::{freeze_core, hf_bitstring, hf_energy, spin_orbital_hamiltonian, MolecularProblem};
use crate::error::{Error, Result};
use crate::fermion::{
    find_z2_symmetries, reduction_qubits, taper, two_qubit_reduction, Encoding, EncodingKind, FermionOperator,
    TaperingInfo,
};
use crate::pauli::{PauliSum, DEFAULT_DROP_TOL};

/// Hermiticity tolerance on mapped Hamiltonian coefficients.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub encoding: EncodingKind,
    pub two_qubit_reduction: bool,
    pub tapering: bool,
    pub n_frozen: usize,
    /// Fuse single-qubit runs and cancel CNOT pairs in the UCCSD circuit.
    pub optimize_circuit: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            encoding: EncodingKind::Parity,
            two_qubit_reduction: true,
            tapering: true,
            n_frozen: 0,
            optimize_circuit: true,
        }
    }
}

impl PipelineOptions {
    pub fn validate(&self) -> Result<()> {
        if self.two_qubit_reduction && self.encoding != EncodingKind::Parity {
            return Err(Error::contract(format!(
                "two-qubit reduction requires the parity encoding, not {}",
                self.encoding
            )));
        }
        Ok(())
    }
}

/// Every intermediate of the build, kept for inspection and cross-checks.
#[derive(Clone, Debug)]
pub struct BuiltProblem {
    pub options: PipelineOptions,
    /// Active-space problem after core freezing.
    pub active: MolecularProblem,
    pub hf_energy: f64,
    pub fermion_hamiltonian: FermionOperator,
    /// Occupation-number HF determinant over the active spin orbitals.
    pub hf_occupation: Bitstring,
    /// Mapped Hamiltonian before any qubit removal.
    pub mapped: PauliSum,
    /// After the optional two-qubit reduction.
    pub reduced: PauliSum,
    pub tapering: TaperingInfo,
    /// Final qubit Hamiltonian.
    pub hamiltonian: PauliSum,
    /// Reference basis state on the final register.
    pub reference: Bitstring,
    /// Every spin-conserving single and double.
    pub raw_excitations: Vec<Excitation>,
    /// Excitations kept after symmetry screening, renumbered from zero.
    pub excitations: Vec<Excitation>,
    pub mapped_excitations: Vec<MappedExcitation>,
    /// The UCCSD circuit, optimized when the options ask for it.
    pub circuit: Circuit,
    /// Counts of the circuit as synthesized, before any optimization.
    pub raw_circuit_stats: CircuitStats,
    pub build_seconds: f64,
}

impl BuiltProblem {
    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn n_parameters(&self) -> usize {
        self.circuit.n_parameters()
    }

    /// Label of the gate-count convention behind `circuit.stats()`.
    pub fn count_convention(&self) -> &'static str {
        if self.options.optimize_circuit {
            "fused-1q+cx-cancel"
        } else {
            "raw"
        }
    }

    /// Exact ground energy in the HF particle-number and spin sector, from the
    /// Jordan-Wigner image of the untapered Hamiltonian.
    pub fn sector_fci(&self) -> Result<ExactResult> {
        let n_modes = self.active.n_spin_orbitals();
        let jw = Encoding::new(EncodingKind::JordanWigner, n_modes)?.map(&self.fermion_hamiltonian)?;
        let (na, nb) = self.active.spin_counts();
        let basis = fixed_occupation_basis(n_modes / 2, na, nb);
        exact_ground_energy_in_subspace(&jw, &basis)
    }
}

/// Occupation bitstrings with `na` alpha electrons in modes `0..n` and `nb`
/// beta electrons in modes `n..2n`.
pub fn fixed_occupation_basis(n_spatial: usize, na: usize, nb: usize) -> Vec<u128> {
    let alpha = combinations(n_spatial, na);
    let beta = combinations(n_spatial, nb);
    let mut out = Vec::with_capacity(alpha.len() * beta.len());
    for &b in &beta {
        for &a in &alpha {
            out.push(a | (b << n_spatial));
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<u128> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    // Gosper's hack: successive k-subsets in increasing numeric order
    let mut out = Vec::new();
    let mut v: u128 = (1u128 << k) - 1;
    while v >> n == 0 {
        out.push(v);
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

fn check_hermitian(s: &PauliSum, stage: &str) -> Result<()> {
    let im = s.max_imaginary();
    if im >= HERMITICITY_TOL {
        return Err(Error::contract(format!(
            "{stage} Hamiltonian has imaginary coefficient {im:e}"
        )));
    }
    Ok(())
}

/// Freezes core orbitals, maps, reduces and tapers the Hamiltonian, then
/// screens and maps the UCCSD excitations the same way and builds the circuit.
///
/// An excitation is screened out when a term of its mapped generator fails to
/// commute with a tapering symmetry or when nothing survives tapering.
pub fn build(problem: &MolecularProblem, options: PipelineOptions) -> Result<BuiltProblem> {
    options.validate()?;
    let start = Instant::now();
    let active = freeze_core(problem, options.n_frozen)?;
    let n_modes = active.n_spin_orbitals();
    let (na, nb) = active.spin_counts();
    let fermion_hamiltonian = spin_orbital_hamiltonian(&active);
    let encoding = Encoding::new(options.encoding, n_modes)?;
    let hf_occupation = hf_bitstring(&active);

    let mapped = encoding.map(&fermion_hamiltonian)?;
    check_hermitian(&mapped, "mapped")?;
    let encoded_hf = encoding.encode(&hf_occupation)?;

    let reduce = |s: &PauliSum| -> Result<PauliSum> {
        if options.two_qubit_reduction {
            two_qubit_reduction(s, na, nb)
        } else {
            Ok(s.clone())
        }
    };
    let reduced = reduce(&mapped)?.simplify(DEFAULT_DROP_TOL);
    let reduced_hf = if options.two_qubit_reduction {
        encoded_hf.remove(&reduction_qubits(n_modes))
    } else {
        encoded_hf
    };

    let tapering = if options.tapering {
        find_z2_symmetries(&reduced).with_reference(&reduced_hf)?
    } else {
        TaperingInfo::empty(reduced.n_qubits())
    };
    let hamiltonian = taper(&reduced, &tapering)?.simplify(DEFAULT_DROP_TOL);
    check_hermitian(&hamiltonian, "tapered")?;
    let reference = tapering.taper_bitstring(&reduced_hf)?;

    let raw_excitations = uccsd_excitations(n_modes, &hf_occupation)?;
    let mut excitations = Vec::new();
    let mut mapped_excitations = Vec::new();
    for e in &raw_excitations {
        let g = reduce(&encoding.map(&e.generator(n_modes)?)?)?.simplify(DEFAULT_DROP_TOL);
        if !g.terms().iter().all(|t| tapering.commutes_with(&t.string)) {
            continue;
        }
        let tg = taper(&g, &tapering)?.simplify(DEFAULT_DROP_TOL);
        if tg.terms().iter().all(|t| t.string.is_identity()) {
            continue;
        }
        let k = excitations.len();
        excitations.push(Excitation {
            parameter_index: k,
            ..e.clone()
        });
        mapped_excitations.push(MappedExcitation {
            parameter_index: k,
            generator: tg,
        });
    }
    let raw_circuit = build_uccsd_circuit(&reference, &mapped_excitations)?;
    let raw_circuit_stats = raw_circuit.stats();
    let circuit = if options.optimize_circuit {
        raw_circuit.optimize()
    } else {
        raw_circuit
    };

    Ok(BuiltProblem {
        options,
        hf_energy: hf_energy(&active),
        active,
        fermion_hamiltonian,
        hf_occupation,
        mapped,
        reduced,
        tapering,
        hamiltonian,
        reference,
        raw_excitations,
        excitations,
        mapped_excitations,
        circuit,
        raw_circuit_stats,
        build_seconds: start.elapsed().as_secs_f64(),
    })
}
