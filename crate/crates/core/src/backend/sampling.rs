use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::statevector::Statevector;
use crate::ansatz::{Angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
    pub seed: u64,
}

/// Terms sharing one measurement basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementGroup {
    /// Measured axis per qubit (`I` where no member acts).
    pub basis: Vec<Axis>,
    /// `(support mask, real coefficient)` per member.
    pub terms: Vec<(u128, f64)>,
}

/// Greedy first-fit grouping into qubit-wise commuting sets, in term order.
/// Identity terms are returned separately as a constant offset.
pub fn group_qubitwise(h: &PauliSum) -> (f64, Vec<MeasurementGroup>) {
    let n = h.n_qubits();
    let mut offset = 0.0;
    let mut groups: Vec<(PauliString, MeasurementGroup)> = Vec::new();
    for t in h.terms() {
        if t.string.is_identity() {
            offset += t.coefficient.re;
            continue;
        }
        let member = (t.string.support(), t.coefficient.re);
        match groups.iter_mut().find(|(cover, _)| cover.qubitwise_commutes(&t.string).unwrap_or(false)) {
            Some((cover, g)) => {
                let x = cover.x_mask() | t.string.x_mask();
                let z = cover.z_mask() | t.string.z_mask();
                *cover = PauliString::from_masks(n, x, z).expect("same register");
                g.terms.push(member);
            }
            None => groups.push((
                t.string,
                MeasurementGroup {
                    basis: Vec::new(),
                    terms: vec![member],
                },
            )),
        }
    }
    let groups = groups
        .into_iter()
        .map(|(cover, mut g)| {
            g.basis = cover.axes();
            g
        })
        .collect();
    (offset, groups)
}

/// Shot-based estimate of `<psi|h|psi>` with `psi = circuit(params)|0>`.
///
/// Each qubit-wise commuting group is measured `shots` times after rotating
/// its basis onto Z. The stderr combines the per-group sample variances.
pub fn expval_sampled(
    h: &PauliSum,
    circuit: &Circuit,
    params: &[f64],
    shots: u64,
    seed: u64,
    max_qubits: usize,
) -> Result<SampledEstimate> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    if h.n_qubits() != circuit.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: circuit.n_qubits(),
            found: h.n_qubits(),
        });
    }
    if h.max_imaginary() > 1e-10 {
        return Err(Error::contract("sampled estimator needs real Hamiltonian coefficients"));
    }
    let state = Statevector::prepare(circuit, params, max_qubits)?;
    let (offset, groups) = group_qubitwise(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = offset;
    let mut variance = 0.0;
    for g in &groups {
        let mut rotated = state.clone();
        for (q, axis) in g.basis.iter().enumerate() {
            match axis {
                Axis::X => rotated.apply_gate(&Gate::H(q), &[])?,
                Axis::Y => rotated.apply_gate(&Gate::Rx(q, Angle::Fixed(FRAC_PI_2)), &[])?,
                _ => {}
            }
        }
        let histogram = sample_counts(&rotated.probabilities(), shots, &mut rng);
        let value = |outcome: usize| -> f64 {
            g.terms
                .iter()
                .map(|&(mask, c)| {
                    if ((outcome as u128) & mask).count_ones() & 1 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .sum()
        };
        let n = shots as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (&outcome, &k) in &histogram {
            let v = value(outcome);
            s1 += k as f64 * v;
            s2 += k as f64 * v * v;
        }
        let m = s1 / n;
        mean += m;
        if shots > 1 {
            let var = ((s2 - n * m * m) / (n - 1.0)).max(0.0);
            variance += var / n;
        }
    }
    Ok(SampledEstimate {
        mean,
        stderr: variance.sqrt(),
        shots,
        seed,
    })
}

/// Draws `shots` outcomes from `probs` and returns per-outcome counts.
fn sample_counts(probs: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> BTreeMap<usize, u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(probs.len() - 1);
        *counts.entry(idx).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliTerm;

    fn single(s: &str) -> PauliSum {
        PauliSum::single(PauliTerm::real(s.parse().unwrap(), 1.0))
    }

    #[test]
    fn deterministic_outcome_has_zero_error() {
        let mut c = Circuit::new(1, 0);
        c.push(Gate::X(0)).unwrap();
        let est = expval_sampled(&single("Z"), &c, &[], 100, 7, 30).unwrap();
        assert_eq!(est.mean, -1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn x_eigenstate() {
        let mut c = Circuit::new(1, 0);
        c.push(Gate::H(0)).unwrap();
        let est = expval_sampled(&single("X"), &c, &[], 10_000, 3, 30).unwrap();
        assert!((est.mean - 1.0).abs() <= 5.0 * est.stderr + 1e-12);
    }

    #[test]
    fn grouping_is_qubitwise() {
        let h = PauliSum::from_terms(
            2,
            ["XI", "XZ", "ZZ", "II", "IZ"]
                .iter()
                .map(|s| PauliTerm::real(s.parse().unwrap(), 1.0))
                .collect(),
        )
        .unwrap();
        let (offset, groups) = group_qubitwise(&h);
        assert_eq!(offset, 1.0);
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].basis, [Axis::X, Axis::Z]);
        assert_eq!(groups[1].basis, [Axis::Z, Axis::Z]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        let h = single("ZZ").add(&single("XI")).unwrap();
        let a = expval_sampled(&h, &c, &[], 500, 11, 30).unwrap();
        let b = expval_sampled(&h, &c, &[], 500, 11, 30).unwrap();
        assert_eq!(a, b);
    }
}
