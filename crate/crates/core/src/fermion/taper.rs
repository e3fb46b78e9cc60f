//! Qubit-count reductions from conserved Z2 quantities.

use std::fmt::Write as _;

use indexmap::IndexMap;
use num_complex::Complex64;

use super::gf2;
use crate::bits::{remove_bits, Bitstring};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, PauliTerm};

/// Removes the two parity qubits of a block-ordered parity-mapped operator.
///
/// Under the parity encoding with alpha modes `0..n/2` and beta modes
/// `n/2..n`, qubit `n/2 - 1` holds the alpha-number parity and qubit `n - 1`
/// the total-number parity. Both are replaced by their eigenvalues and
/// dropped.
pub fn two_qubit_reduction(s: &PauliSum, n_alpha: usize, n_beta: usize) -> Result<PauliSum> {
    let n = s.n_qubits();
    if n < 2 || n % 2 != 0 {
        return Err(Error::contract(format!(
            "two-qubit reduction needs an even register of parity-mapped spin orbitals, got {n} qubits"
        )));
    }
    let (qa, qt) = (n / 2 - 1, n - 1);
    let sign_a = if n_alpha % 2 == 0 { 1.0 } else { -1.0 };
    let sign_t = if (n_alpha + n_beta) % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
    for t in s.terms() {
        if (t.string.x_mask() >> qa) & 1 == 1 || (t.string.x_mask() >> qt) & 1 == 1 {
            return Err(Error::contract(format!(
                "term {} flips a parity qubit; input is not a number-conserving parity-mapped operator",
                t.string
            )));
        }
        let mut c = t.coefficient;
        if (t.string.z_mask() >> qa) & 1 == 1 {
            c *= sign_a;
        }
        if (t.string.z_mask() >> qt) & 1 == 1 {
            c *= sign_t;
        }
        *acc.entry(t.string.remove_qubits(&[qa, qt])).or_default() += c;
    }
    let terms = acc.into_iter().map(|(s, c)| PauliTerm::new(s, c)).collect();
    PauliSum::from_terms(n - 2, terms)
}

/// Qubit positions dropped by [`two_qubit_reduction`] for an `n`-qubit register.
pub fn reduction_qubits(n_qubits: usize) -> [usize; 2] {
    [n_qubits / 2 - 1, n_qubits - 1]
}

/// Z-type symmetry generators of a qubit operator together with the qubits
/// they allow to be removed.
///
/// Generator `i` has a `Z` on `removed_qubits[i]` and no other generator
/// touches that qubit, so `(X_q + g)/sqrt(2)` maps `g` onto the single-qubit
/// `X_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaperingInfo {
    pub n_qubits: usize,
    pub generators: Vec<PauliString>,
    pub removed_qubits: Vec<usize>,
    pub sector: Vec<i8>,
}

impl TaperingInfo {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            generators: Vec::new(),
            removed_qubits: Vec::new(),
            sector: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Eigenvalues of every generator on a computational basis state.
    pub fn sector_of(&self, reference: &Bitstring) -> Result<Vec<i8>> {
        if reference.len() != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: reference.len(),
            });
        }
        Ok(self
            .generators
            .iter()
            .map(|g| if gf2::parity(g.z_mask() & reference.bits()) { -1 } else { 1 })
            .collect())
    }

    /// Chooses the sector containing `reference`.
    pub fn with_reference(mut self, reference: &Bitstring) -> Result<Self> {
        self.sector = self.sector_of(reference)?;
        Ok(self)
    }

    /// The reference bitstring after tapering: the removed qubits are deleted.
    pub fn taper_bitstring(&self, reference: &Bitstring) -> Result<Bitstring> {
        if reference.len() != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: reference.len(),
            });
        }
        Ok(reference.remove(&self.removed_qubits))
    }

    /// True if `p` commutes with every generator.
    pub fn commutes_with(&self, p: &PauliString) -> bool {
        self.generators.iter().all(|g| g.commutes_unchecked(p))
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.generators.iter().enumerate() {
            let sign = self.sector.get(i).map_or("?", |&s| if s < 0 { "-" } else { "+" });
            let _ = write!(out, "{}{}{} q{}", if i > 0 { ", " } else { "" }, sign, g, self.removed_qubits[i]);
        }
        out
    }
}

/// Finds a basis of Z-type Pauli strings commuting with every term of `s`.
///
/// These are the null space of the terms' X masks over GF(2). The basis is put
/// in reduced row-echelon form so each generator owns a distinct pivot qubit.
/// The sector defaults to all `+1`; use [`TaperingInfo::with_reference`].
pub fn find_z2_symmetries(s: &PauliSum) -> TaperingInfo {
    let n = s.n_qubits();
    let x_rows: Vec<u128> = s.terms().iter().map(|t| t.string.x_mask()).collect();
    let mut basis = gf2::null_space(&x_rows, n);
    let pivots = gf2::rref(&mut basis, n);
    let generators: Vec<PauliString> = basis.iter().map(|&z| PauliString::z_string(n, z)).collect();
    TaperingInfo {
        n_qubits: n,
        sector: vec![1; generators.len()],
        generators,
        removed_qubits: pivots,
    }
}

/// Number of independent Pauli strings (of any type) commuting with every term.
///
/// Only defined for registers of up to 64 qubits. Used to check that the
/// Z-type search in [`find_z2_symmetries`] is not missing symmetries.
pub fn full_symmetry_rank(s: &PauliSum) -> Option<usize> {
    let n = s.n_qubits();
    if n > 64 {
        return None;
    }
    // symplectic vector (x | z) packed as x in low n bits, z in high n bits;
    // commutation with term (tx, tz) is parity of x·tz + z·tx
    let rows: Vec<u128> = s
        .terms()
        .iter()
        .map(|t| t.string.z_mask() | (t.string.x_mask() << n))
        .collect();
    Some(gf2::null_space(&rows, 2 * n).len())
}

/// Applies the tapering Clifford for every generator, fixes each removed
/// qubit to its sector value and deletes it.
pub fn taper(s: &PauliSum, info: &TaperingInfo) -> Result<PauliSum> {
    if info.is_empty() {
        return Ok(s.clone());
    }
    if s.n_qubits() != info.n_qubits {
        return Err(Error::SizeMismatch {
            expected: info.n_qubits,
            found: s.n_qubits(),
        });
    }
    let n = info.n_qubits;
    if info.sector.len() != info.generators.len() || info.removed_qubits.len() != info.generators.len() {
        return Err(Error::contract("tapering info has inconsistent lengths"));
    }
    let sigmas: Vec<PauliString> = info
        .removed_qubits
        .iter()
        .map(|&q| PauliString::x_string(n, 1u128 << q))
        .collect();
    let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
    for t in s.terms() {
        let mut p = t.string;
        let mut c = t.coefficient;
        for (g, sigma) in info.generators.iter().zip(&sigmas) {
            if !g.commutes_unchecked(&p) {
                return Err(Error::contract(format!("term {} does not commute with symmetry {g}", t.string)));
            }
            if !sigma.commutes_unchecked(&p) {
                // U P U = P g sigma for P commuting with g and anticommuting with sigma
                let (pg, ph1) = p.mul_unchecked(g);
                let (pgs, ph2) = pg.mul_unchecked(sigma);
                p = pgs;
                c *= (ph1 * ph2).to_complex();
            }
        }
        for (i, &q) in info.removed_qubits.iter().enumerate() {
            debug_assert_eq!((p.z_mask() >> q) & 1, 0);
            if (p.x_mask() >> q) & 1 == 1 {
                c *= f64::from(info.sector[i]);
            }
        }
        let reduced = PauliString::from_masks(
            n - info.removed_qubits.len(),
            remove_bits(p.x_mask(), n, &info.removed_qubits),
            remove_bits(p.z_mask(), n, &info.removed_qubits),
        )?;
        *acc.entry(reduced).or_default() += c;
    }
    let terms = acc.into_iter().map(|(s, c)| PauliTerm::new(s, c)).collect();
    PauliSum::from_terms(n - info.removed_qubits.len(), terms)
}
