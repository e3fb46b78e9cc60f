//! Circuit evaluation: dense statevector, shot sampling and exact diagonalization.

mod exact;
mod sampling;
mod statevector;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use exact::{
    exact_ground_energy, exact_ground_energy_in_subspace, lanczos_ground_energy, ExactMethod, ExactResult,
    MAX_DENSE_EXACT_QUBITS, MAX_SPARSE_EXACT_QUBITS,
};
pub use sampling::{expval_sampled, group_qubitwise, MeasurementGroup, SampledEstimate};
pub use statevector::{expval_direct, Statevector, DEFAULT_MAX_QUBITS};

use crate::error::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Statevector,
    Sampled,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Statevector => "statevector",
            BackendKind::Sampled => "sampled",
        })
    }
}

impl FromStr for BackendKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "statevector" | "sv" => Ok(BackendKind::Statevector),
            "sampled" | "qasm" | "shots" => Ok(BackendKind::Sampled),
            other => Err(Error::domain(format!("unknown backend '{other}'"))),
        }
    }
}

/// How energies are evaluated for a prepared circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendOptions {
    pub kind: BackendKind,
    pub shots: u64,
    pub seed: u64,
    pub max_qubits: usize,
}

impl Default for BackendOptions {
    fn default() -> Self {
        Self {
            kind: BackendKind::Statevector,
            shots: 8192,
            seed: 0,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl BackendOptions {
    /// Energy of `circuit(params)|0>`. The sampled backend draws with
    /// `seed + stream`, so repeated evaluations at one point differ only
    /// through `stream`.
    pub fn energy(
        &self,
        h: &crate::pauli::PauliSum,
        circuit: &crate::ansatz::Circuit,
        params: &[f64],
        stream: u64,
    ) -> crate::error::Result<f64> {
        match self.kind {
            BackendKind::Statevector => {
                let s = Statevector::prepare(circuit, params, self.max_qubits)?;
                expval_direct(h, &s)
            }
            BackendKind::Sampled => Ok(expval_sampled(
                h,
                circuit,
                params,
                self.shots,
                self.seed.wrapping_add(stream),
                self.max_qubits,
            )?
            .mean),
        }
    }
}
