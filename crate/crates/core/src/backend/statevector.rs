use indexmap::IndexMap;
use num_complex::Complex64;

use crate::ansatz::{Circuit, Gate, Matrix2};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Default register cap: `2^30` amplitudes take 16 GiB.
pub const DEFAULT_MAX_QUBITS: usize = 30;

/// A dense state vector; amplitude `b` belongs to the basis state whose bit
/// `q` is the value of qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn insert_zero_bit(x: usize, bit: usize) -> usize {
    let low = x & ((1usize << bit) - 1);
    ((x >> bit) << (bit + 1)) | low
}

/// In-place unnormalized Walsh-Hadamard transform:
/// `v[z] <- sum_b (-1)^{|b & z|} v[b]`.
fn walsh_hadamard(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_exact_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (p, q) = (*x, *y);
                *x = p + q;
                *y = p - q;
            }
        }
        h *= 2;
    }
}

impl Statevector {
    /// `|0...0>` under the default cap.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::zero_state_capped(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_state_capped(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        Self::basis_state_capped(n_qubits, 0, max_qubits)
    }

    pub fn basis_state_capped(n_qubits: usize, index: u128, max_qubits: usize) -> Result<Self> {
        if n_qubits > max_qubits {
            return Err(Error::ResourceLimit {
                what: "statevector qubits",
                requested: n_qubits,
                limit: max_qubits,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim as u128 {
            return Err(Error::domain(format!("basis index {index} outside a {n_qubits}-qubit register")));
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[index as usize] = c(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::domain(format!("amplitude count {dim} is not a power of two")));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: q + 1,
            });
        }
        Ok(())
    }

    fn apply_1q(&mut self, q: usize, m: Matrix2) {
        let stride = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            }
        }
    }

    fn apply_x(&mut self, q: usize) {
        let stride = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
    }

    fn apply_diag(&mut self, q: usize, d0: Complex64, d1: Complex64) {
        let stride = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.iter_mut().for_each(|a| *a *= d0);
            hi.iter_mut().for_each(|b| *b *= d1);
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (cm, tm) = (1usize << control, 1usize << target);
        let (lo, hi) = (control.min(target), control.max(target));
        // enumerate indices with the control set and the target clear
        for i in 0..self.amps.len() >> 2 {
            let j = insert_zero_bit(insert_zero_bit(i, lo), hi) | cm;
            self.amps.swap(j, j | tm);
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate, params: &[f64]) -> Result<()> {
        let (q0, q1) = gate.qubits();
        self.check_qubit(q0)?;
        if let Some(q1) = q1 {
            self.check_qubit(q1)?;
        }
        match *gate {
            Gate::X(q) => self.apply_x(q),
            Gate::Rz(q, a) => {
                let (s, co) = (a.value(params)? / 2.0).sin_cos();
                self.apply_diag(q, c(co, -s), c(co, s));
            }
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            _ => {
                let m = gate.matrix(params)?.expect("single-qubit gate");
                self.apply_1q(q0, m);
            }
        }
        Ok(())
    }

    /// Applies every gate of `circuit` with `params` bound to its slots.
    pub fn apply_circuit(&mut self, circuit: &Circuit, params: &[f64]) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: circuit.n_qubits(),
            });
        }
        if params.len() < circuit.n_parameters() {
            return Err(Error::contract(format!(
                "circuit declares {} parameters, {} bound",
                circuit.n_parameters(),
                params.len()
            )));
        }
        circuit.gates().iter().try_for_each(|g| self.apply_gate(g, params))
    }

    /// Runs `circuit` on `|0...0>`.
    pub fn prepare(circuit: &Circuit, params: &[f64], max_qubits: usize) -> Result<Self> {
        let mut s = Self::zero_state_capped(circuit.n_qubits(), max_qubits)?;
        s.apply_circuit(circuit, params)?;
        Ok(s)
    }
}

/// `sum_t c_t <s|P_t|s>` evaluated term by term without forming `P|s>`.
///
/// The imaginary residue must stay below `1e-10 * max(1, ||h||_1)`.
pub fn expval_direct(h: &PauliSum, s: &Statevector) -> Result<f64> {
    let z = expval_complex(h, s)?;
    let tol = 1e-10 * h.l1_norm().max(1.0);
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite(format!("expectation value {z}")));
    }
    if z.im.abs() > tol {
        return Err(Error::contract(format!(
            "expectation has imaginary part {:e}; operator is not Hermitian",
            z.im
        )));
    }
    Ok(z.re)
}

pub(crate) fn expval_complex(h: &PauliSum, s: &Statevector) -> Result<Complex64> {
    if h.n_qubits() != s.n_qubits {
        return Err(Error::SizeMismatch {
            expected: s.n_qubits,
            found: h.n_qubits(),
        });
    }
    let amps = &s.amps;
    let n = s.n_qubits;
    // <s|P|s> = i^{#Y} sum_b conj(s[b^x]) (-1)^{|b&z|} s[b]; terms sharing an
    // X mask share the products, and many of them share one transform
    let mut groups: IndexMap<u128, Vec<usize>> = IndexMap::new();
    for (k, t) in h.terms().iter().enumerate() {
        groups.entry(t.string.x_mask()).or_default().push(k);
    }
    let mut total = Complex64::default();
    let mut products = Vec::new();
    for (&x, members) in &groups {
        let x = x as usize;
        let weight = |k: usize| {
            let t = &h.terms()[k];
            t.coefficient * crate::pauli::Phase::from_exponent(t.string.y_count() as i32).to_complex()
        };
        if members.len() > n {
            products.clear();
            products.extend(amps.iter().enumerate().map(|(b, a)| amps[b ^ x].conj() * a));
            walsh_hadamard(&mut products);
            for &k in members {
                total += weight(k) * products[h.terms()[k].string.z_mask() as usize];
            }
        } else {
            for &k in members {
                let z = h.terms()[k].string.z_mask() as usize;
                let mut acc = Complex64::default();
                for (b, a) in amps.iter().enumerate() {
                    let v = amps[b ^ x].conj() * a;
                    if (b & z).count_ones() & 1 == 1 {
                        acc -= v;
                    } else {
                        acc += v;
                    }
                }
                total += weight(k) * acc;
            }
        }
    }
    Ok(total)
}
