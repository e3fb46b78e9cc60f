//! Computational-basis bitstrings. Qubit (or mode) 0 is the least-significant bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::MAX_QUBITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bitstring {
    n_bits: usize,
    bits: u128,
}

impl Bitstring {
    pub fn new(n_bits: usize, bits: u128) -> Result<Self> {
        if n_bits > MAX_QUBITS {
            return Err(Error::ResourceLimit {
                what: "bitstring length",
                requested: n_bits,
                limit: MAX_QUBITS,
            });
        }
        if n_bits < 128 && bits >> n_bits != 0 {
            return Err(Error::domain(format!(
                "bit pattern {bits:#b} does not fit in {n_bits} bits"
            )));
        }
        Ok(Self { n_bits, bits })
    }

    pub fn zeros(n_bits: usize) -> Result<Self> {
        Self::new(n_bits, 0)
    }

    pub fn from_indices(n_bits: usize, set: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u128;
        for i in set {
            if i >= n_bits {
                return Err(Error::domain(format!("bit {i} out of range for {n_bits} bits")));
            }
            bits |= 1 << i;
        }
        Self::new(n_bits, bits)
    }

    pub fn len(&self) -> usize {
        self.n_bits
    }

    pub fn is_empty(&self) -> bool {
        self.n_bits == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.n_bits && (self.bits >> i) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_bits).filter(move |&i| self.get(i))
    }

    /// Drops the listed positions and compacts the remaining bits downward.
    pub fn remove(&self, positions: &[usize]) -> Self {
        Self {
            n_bits: self.n_bits - positions.len(),
            bits: remove_bits(self.bits, self.n_bits, positions),
        }
    }
}

/// Compacts `mask` by deleting bit positions listed in `positions`.
pub(crate) fn remove_bits(mask: u128, n_bits: usize, positions: &[usize]) -> u128 {
    let mut out = 0u128;
    let mut k = 0;
    for i in 0..n_bits {
        if positions.contains(&i) {
            continue;
        }
        if (mask >> i) & 1 == 1 {
            out |= 1 << k;
        }
        k += 1;
    }
    out
}

impl fmt::Display for Bitstring {
    /// Printed with qubit 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_bits {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remove_compacts_bits() {
        let b = Bitstring::from_indices(5, [0, 2, 4]).unwrap();
        let r = b.remove(&[1, 2]);
        assert_eq!(r.len(), 3);
        assert_eq!(r.to_string(), "101");
    }

    #[test]
    fn rejects_overflowing_pattern() {
        assert!(Bitstring::new(2, 0b100).is_err());
        assert!(Bitstring::from_indices(2, [2]).is_err());
    }
}
