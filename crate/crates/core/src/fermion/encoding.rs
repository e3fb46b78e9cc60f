//! Linear binary encodings of fermionic occupation vectors.
//!
//! Every encoding here is `b = A n (mod 2)` for an invertible binary matrix
//! `A`: identity for Jordan-Wigner, lower-triangular ones for parity and a
//! Fenwick tree for Bravyi-Kitaev. With
//!
//! * `U_j` the qubits flipped when `n_j` flips (column `j` of `A`),
//! * `P_j` the qubits whose parity equals `n_0 + ... + n_{j-1}`,
//! * `F_j` the qubits whose parity equals `n_j` (row `j` of `A^-1`),
//!
//! the ladder operators are `a_j = X_{U_j} Z_{P_j} (I - Z_{F_j})/2` and
//! `a†_j = X_{U_j} Z_{P_j} (I + Z_{F_j})/2`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gf2;
use super::operator::{FermionOperator, Ladder};
use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, PauliTerm, DEFAULT_DROP_TOL, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodingKind {
    #[serde(rename = "jw")]
    JordanWigner,
    #[serde(rename = "parity")]
    Parity,
    #[serde(rename = "bk")]
    BravyiKitaev,
}

impl EncodingKind {
    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::JordanWigner => "jw",
            EncodingKind::Parity => "parity",
            EncodingKind::BravyiKitaev => "bk",
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan-wigner" | "jordan_wigner" => Ok(EncodingKind::JordanWigner),
            "parity" => Ok(EncodingKind::Parity),
            "bk" | "bravyi-kitaev" | "bravyi_kitaev" => Ok(EncodingKind::BravyiKitaev),
            other => Err(Error::domain(format!("unknown encoding '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Encoding {
    kind: EncodingKind,
    n_modes: usize,
    encoder_rows: Vec<u128>,
    lowering: Vec<PauliSum>,
    raising: Vec<PauliSum>,
}

impl Encoding {
    pub fn new(kind: EncodingKind, n_modes: usize) -> Result<Self> {
        if n_modes == 0 || n_modes > MAX_QUBITS {
            return Err(Error::ResourceLimit {
                what: "fermionic modes",
                requested: n_modes,
                limit: MAX_QUBITS,
            });
        }
        let encoder_rows: Vec<u128> = (0..n_modes)
            .map(|i| match kind {
                EncodingKind::JordanWigner => 1u128 << i,
                EncodingKind::Parity => prefix_mask(i + 1),
                EncodingKind::BravyiKitaev => {
                    let len = (i + 1) & (i + 1).wrapping_neg();
                    prefix_mask(i + 1) & !prefix_mask(i + 1 - len)
                }
            })
            .collect();
        let decoder_rows = gf2::inverse(&encoder_rows, n_modes)
            .ok_or_else(|| Error::contract("encoding matrix is singular"))?;

        let mut lowering = Vec::with_capacity(n_modes);
        let mut raising = Vec::with_capacity(n_modes);
        let mut prefix_parity = 0u128;
        for j in 0..n_modes {
            let update = encoder_rows
                .iter()
                .enumerate()
                .filter(|(_, row)| (*row >> j) & 1 == 1)
                .fold(0u128, |m, (i, _)| m | (1u128 << i));
            let flip = decoder_rows[j];
            let (xz, ph) = PauliString::x_string(n_modes, update)
                .mul_unchecked(&PauliString::z_string(n_modes, prefix_parity));
            let base = PauliSum::single(PauliTerm::new(xz, ph.to_complex()));
            let zf = PauliString::z_string(n_modes, flip);
            let half = Complex64::new(0.5, 0.0);
            let proj = |sign: f64| {
                PauliSum::from_terms(
                    n_modes,
                    vec![
                        PauliTerm::new(PauliString::identity(n_modes), half),
                        PauliTerm::new(zf, half * sign),
                    ],
                )
                .expect("sizes match")
            };
            lowering.push(base.multiply(&proj(-1.0))?);
            raising.push(base.multiply(&proj(1.0))?);
            prefix_parity ^= decoder_rows[j];
        }

        Ok(Self {
            kind,
            n_modes,
            encoder_rows,
            lowering,
            raising,
        })
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Qubit image of an occupation-number basis state.
    pub fn encode(&self, occupation: &Bitstring) -> Result<Bitstring> {
        if occupation.len() != self.n_modes {
            return Err(Error::SizeMismatch {
                expected: self.n_modes,
                found: occupation.len(),
            });
        }
        let n = occupation.bits();
        let bits = self
            .encoder_rows
            .iter()
            .enumerate()
            .filter(|(_, row)| gf2::parity(*row & n))
            .fold(0u128, |m, (i, _)| m | (1u128 << i));
        Bitstring::new(self.n_modes, bits)
    }

    pub fn ladder(&self, op: Ladder) -> &PauliSum {
        if op.raising {
            &self.raising[op.mode]
        } else {
            &self.lowering[op.mode]
        }
    }

    /// Maps a fermionic operator term by term and simplifies with the default
    /// drop tolerance.
    pub fn map(&self, op: &FermionOperator) -> Result<PauliSum> {
        self.map_with_tol(op, DEFAULT_DROP_TOL)
    }

    pub fn map_with_tol(&self, op: &FermionOperator, drop_tol: f64) -> Result<PauliSum> {
        if op.n_modes() != self.n_modes {
            return Err(Error::SizeMismatch {
                expected: self.n_modes,
                found: op.n_modes(),
            });
        }
        let n = self.n_modes;
        let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
        let mut partial: Vec<(PauliString, Complex64)> = Vec::new();
        let mut next: Vec<(PauliString, Complex64)> = Vec::new();
        for term in op.terms() {
            partial.clear();
            partial.push((PauliString::identity(n), term.coefficient));
            for &l in &term.ladder {
                next.clear();
                for (s, c) in &partial {
                    for t in self.ladder(l).terms() {
                        let (p, ph) = s.mul_unchecked(&t.string);
                        next.push((p, c * t.coefficient * ph.to_complex()));
                    }
                }
                std::mem::swap(&mut partial, &mut next);
            }
            for (s, c) in partial.drain(..) {
                *acc.entry(s).or_default() += c;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= drop_tol)
            .map(|(s, c)| PauliTerm::new(s, c))
            .collect();
        PauliSum::from_terms(n, terms)
    }
}

fn prefix_mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

pub fn map_jordan_wigner(op: &FermionOperator) -> Result<PauliSum> {
    Encoding::new(EncodingKind::JordanWigner, op.n_modes())?.map(op)
}

pub fn map_parity(op: &FermionOperator) -> Result<PauliSum> {
    Encoding::new(EncodingKind::Parity, op.n_modes())?.map(op)
}

pub fn map_bravyi_kitaev(op: &FermionOperator) -> Result<PauliSum> {
    Encoding::new(EncodingKind::BravyiKitaev, op.n_modes())?.map(op)
}
