use std::fmt;

use num_complex::Complex64;

use super::circuit::{exponentiate_pauli, Angle, Circuit, Gate};
use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::fermion::{FermionOperator, Ladder};
use crate::pauli::PauliSum;

/// Largest real part tolerated in a mapped anti-Hermitian generator.
const GENERATOR_REAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExcitationKind {
    Single,
    Double,
}

/// A spin-conserving single or double excitation out of the reference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Excitation {
    pub kind: ExcitationKind,
    pub occupied: Vec<usize>,
    pub virtuals: Vec<usize>,
    pub parameter_index: usize,
}

impl Excitation {
    /// `E - E†` with `E = a†_a a_i` or `E = a†_a a†_b a_j a_i`.
    pub fn generator(&self, n_modes: usize) -> Result<FermionOperator> {
        let mut ladder: Vec<Ladder> = self.virtuals.iter().map(|&v| Ladder::create(v)).collect();
        ladder.extend(self.occupied.iter().rev().map(|&o| Ladder::annihilate(o)));
        let mut e = FermionOperator::new(n_modes);
        e.add_term(Complex64::new(1.0, 0.0), &ladder)?;
        Ok(e.sub(&e.adjoint())?.simplify(0.0))
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "p{}: {} -> {}", self.parameter_index, list(&self.occupied), list(&self.virtuals))
    }
}

/// Spin-conserving singles then doubles, each group in lexicographic order of
/// (occupied, virtual) indices. Spin orbitals are block ordered, so modes
/// below `n_spin_orbitals / 2` are alpha.
pub fn uccsd_excitations(n_spin_orbitals: usize, hf: &Bitstring) -> Result<Vec<Excitation>> {
    if hf.len() != n_spin_orbitals {
        return Err(Error::SizeMismatch {
            expected: n_spin_orbitals,
            found: hf.len(),
        });
    }
    if n_spin_orbitals % 2 != 0 {
        return Err(Error::domain("block spin ordering needs an even number of spin orbitals"));
    }
    let half = n_spin_orbitals / 2;
    let beta = |p: usize| usize::from(p >= half);
    let occ: Vec<usize> = (0..n_spin_orbitals).filter(|&p| hf.get(p)).collect();
    let virt: Vec<usize> = (0..n_spin_orbitals).filter(|&p| !hf.get(p)).collect();

    let mut out = Vec::new();
    for &i in &occ {
        for &a in virt.iter().filter(|&&a| beta(a) == beta(i)) {
            out.push((ExcitationKind::Single, vec![i], vec![a]));
        }
    }
    for (x, &i) in occ.iter().enumerate() {
        for &j in &occ[x + 1..] {
            for (y, &a) in virt.iter().enumerate() {
                for &b in &virt[y + 1..] {
                    if beta(i) + beta(j) == beta(a) + beta(b) {
                        out.push((ExcitationKind::Double, vec![i, j], vec![a, b]));
                    }
                }
            }
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(k, (kind, occupied, virtuals))| Excitation {
            kind,
            occupied,
            virtuals,
            parameter_index: k,
        })
        .collect())
}

/// `T(theta) - T(theta)†` summed over the excitations.
pub fn cluster_operator(excitations: &[Excitation], theta: &[f64], n_modes: usize) -> Result<FermionOperator> {
    if theta.len() != excitations.len() {
        return Err(Error::SizeMismatch {
            expected: excitations.len(),
            found: theta.len(),
        });
    }
    let mut op = FermionOperator::new(n_modes);
    for (e, &t) in excitations.iter().zip(theta) {
        op = op.add(&e.generator(n_modes)?.scale(Complex64::new(t, 0.0)))?;
    }
    Ok(op.simplify(0.0))
}

/// One mapped excitation generator and the parameter it is scaled by.
#[derive(Clone, Debug)]
pub struct MappedExcitation {
    pub parameter_index: usize,
    pub generator: PauliSum,
}

/// HF preparation by X gates followed by one first-order Trotter step of
/// `exp(sum_k theta_k G_k)` over the mapped generators.
///
/// A term `(i r) P` of `G_k` contributes `exp(-i (-r theta_k) P)`.
pub fn build_uccsd_circuit(reference: &Bitstring, excitations: &[MappedExcitation]) -> Result<Circuit> {
    let n = reference.len();
    let n_params = excitations.iter().map(|e| e.parameter_index + 1).max().unwrap_or(0);
    let mut c = Circuit::new(n, n_params);
    for q in reference.ones() {
        c.push(Gate::X(q))?;
    }
    for e in excitations {
        if e.generator.n_qubits() != n {
            return Err(Error::contract(format!(
                "excitation p{} is mapped onto {} qubits, the reference onto {n}",
                e.parameter_index,
                e.generator.n_qubits()
            )));
        }
        for t in e.generator.terms() {
            if t.string.is_identity() {
                continue;
            }
            if t.coefficient.re.abs() > GENERATOR_REAL_TOL {
                return Err(Error::contract(format!(
                    "generator p{} is not anti-Hermitian (term {} has real part {:e})",
                    e.parameter_index, t.string, t.coefficient.re
                )));
            }
            let angle = Angle::Param {
                index: e.parameter_index,
                multiplier: -t.coefficient.im,
            };
            c.append(&exponentiate_pauli(&t.string, angle)?)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_minimal_counts() {
        let hf = Bitstring::from_indices(4, [0, 2]).unwrap();
        let ex = uccsd_excitations(4, &hf).unwrap();
        let kinds: Vec<_> = ex.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, [ExcitationKind::Single, ExcitationKind::Single, ExcitationKind::Double]);
        assert_eq!(ex[2].occupied, [0, 2]);
        assert_eq!(ex[2].virtuals, [1, 3]);
    }

    #[test]
    fn full_register_has_no_excitations() {
        let hf = Bitstring::from_indices(4, 0..4).unwrap();
        assert!(uccsd_excitations(4, &hf).unwrap().is_empty());
    }

    #[test]
    fn zero_amplitudes_give_zero_operator() {
        let hf = Bitstring::from_indices(4, [0, 2]).unwrap();
        let ex = uccsd_excitations(4, &hf).unwrap();
        assert!(cluster_operator(&ex, &[0.0; 3], 4).unwrap().is_empty());
        assert!(cluster_operator(&ex, &[0.0; 2], 4).is_err());
    }

    #[test]
    fn generator_is_anti_hermitian() {
        let hf = Bitstring::from_indices(6, [0, 3]).unwrap();
        for e in uccsd_excitations(6, &hf).unwrap() {
            let g = e.generator(6).unwrap();
            let sum = g.add(&g.adjoint()).unwrap().simplify(1e-15);
            assert!(sum.is_empty(), "{e}");
        }
    }
}
