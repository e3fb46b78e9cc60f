use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Largest register diagonalized densely.
pub const MAX_DENSE_EXACT_QUBITS: usize = 10;
/// Largest register handled by the matrix-free iterative path.
pub const MAX_SPARSE_EXACT_QUBITS: usize = 24;
/// Largest subspace diagonalized densely.
const MAX_DENSE_DIM: usize = 1 << MAX_DENSE_EXACT_QUBITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactMethod {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    pub energy: f64,
    pub vector: Vec<Complex64>,
    pub method: ExactMethod,
}

/// A Hermitian operator that can be applied to vectors.
trait Operator {
    fn dim(&self) -> usize;
    /// `out = A v`
    fn apply(&self, v: &[Complex64], out: &mut [Complex64]);
}

struct FullSpace<'a>(&'a PauliSum);

impl Operator for FullSpace<'_> {
    fn dim(&self) -> usize {
        1 << self.0.n_qubits()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::default());
        for t in self.0.terms() {
            let x = t.string.x_mask() as usize;
            let z = t.string.z_mask() as usize;
            let c = t.coefficient * crate::pauli::Phase::from_exponent(t.string.y_count() as i32).to_complex();
            for (b, a) in v.iter().enumerate() {
                let w = if (b & z).count_ones() & 1 == 1 { -c } else { c };
                out[b ^ x] += w * a;
            }
        }
    }
}

/// The operator restricted to the span of a set of basis states. Any
/// amplitude leaving the span is discarded, so this is exact only when the
/// span is invariant.
struct Subspace<'a> {
    h: &'a PauliSum,
    basis: &'a [u128],
    index: HashMap<u128, usize>,
}

impl Operator for Subspace<'_> {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::default());
        for t in self.h.terms() {
            for (i, &b) in self.basis.iter().enumerate() {
                let (b2, phase) = t.string.act_on_basis(b);
                if let Some(&j) = self.index.get(&b2) {
                    out[j] += t.coefficient * phase * v[i];
                }
            }
        }
    }
}

fn dense_matrix(op: &dyn Operator) -> DMatrix<Complex64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![Complex64::default(); n];
    let mut col = vec![Complex64::default(); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
        e[j] = Complex64::default();
    }
    m
}

fn dense_ground(m: DMatrix<Complex64>) -> Result<ExactResult> {
    let eig = SymmetricEigen::new(m);
    let (k, e0) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::domain("empty operator"))?;
    if !e0.is_finite() {
        return Err(Error::NonFinite("dense eigenvalue".into()));
    }
    Ok(ExactResult {
        energy: e0,
        vector: eig.eigenvectors.column(k).iter().copied().collect(),
        method: ExactMethod::Dense,
    })
}

/// Lowest eigenvalue of `h` over the full register.
///
/// Registers up to [`MAX_DENSE_EXACT_QUBITS`] are diagonalized densely, larger
/// ones up to [`MAX_SPARSE_EXACT_QUBITS`] with restarted Lanczos.
pub fn exact_ground_energy(h: &PauliSum) -> Result<ExactResult> {
    let n = h.n_qubits();
    if n <= MAX_DENSE_EXACT_QUBITS {
        dense_ground(dense_matrix(&FullSpace(h)))
    } else if n <= MAX_SPARSE_EXACT_QUBITS {
        lanczos_ground(&FullSpace(h), LANCZOS_TOL)
    } else {
        Err(Error::ResourceLimit {
            what: "exact-diagonalization qubits",
            requested: n,
            limit: MAX_SPARSE_EXACT_QUBITS,
        })
    }
}

/// Lowest eigenvalue through the iterative path regardless of size.
pub fn lanczos_ground_energy(h: &PauliSum) -> Result<ExactResult> {
    if h.n_qubits() > MAX_SPARSE_EXACT_QUBITS {
        return Err(Error::ResourceLimit {
            what: "exact-diagonalization qubits",
            requested: h.n_qubits(),
            limit: MAX_SPARSE_EXACT_QUBITS,
        });
    }
    lanczos_ground(&FullSpace(h), LANCZOS_TOL)
}

/// Lowest eigenvalue of `h` restricted to the span of `basis` (computational
/// basis states). `h` must map that span into itself, as a number-conserving
/// Jordan-Wigner Hamiltonian does for a fixed-occupation basis.
pub fn exact_ground_energy_in_subspace(h: &PauliSum, basis: &[u128]) -> Result<ExactResult> {
    if basis.is_empty() {
        return Err(Error::domain("empty subspace"));
    }
    let index: HashMap<u128, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    if index.len() != basis.len() {
        return Err(Error::domain("subspace basis has duplicate states"));
    }
    let op = Subspace { h, basis, index };
    if basis.len() <= MAX_DENSE_DIM {
        dense_ground(dense_matrix(&op))
    } else {
        lanczos_ground(&op, LANCZOS_TOL)
    }
}

/// Target residual norm `||A x - e x||` for Lanczos convergence.
const LANCZOS_TOL: f64 = 1e-7;
const LANCZOS_MAX_RESTARTS: usize = 200;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Explicitly restarted Lanczos with full reorthogonalization; each cycle
/// restarts from the current Ritz vector.
fn lanczos_ground(op: &dyn Operator, tol: f64) -> Result<ExactResult> {
    let dim = op.dim();
    if dim <= 2 {
        return dense_ground(dense_matrix(op));
    }
    // keep the Krylov basis within roughly 2 GiB
    let budget = (2usize << 30) / (16 * dim);
    let m = budget.clamp(4, 40).min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);

    let mut w = vec![Complex64::default(); dim];
    let mut best = f64::INFINITY;
    for _ in 0..LANCZOS_MAX_RESTARTS {
        let mut basis: Vec<Vec<Complex64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            op.apply(&basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let proj = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= proj * vi);
                }
            }
            let b = norm(&w);
            if j + 1 == m || b < 1e-12 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|wi| wi / b).collect());
        }
        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty tridiagonal");
        if !theta.is_finite() {
            return Err(Error::NonFinite("Lanczos Ritz value".into()));
        }
        let y = eig.eigenvectors.column(idx);
        x.iter_mut().for_each(|a| *a = Complex64::default());
        for (coef, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += *coef * vi);
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|a| *a /= nx);
        op.apply(&x, &mut w);
        let residual = w
            .iter()
            .zip(&x)
            .map(|(wi, xi)| (wi - theta * xi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let stalled = (best - theta).abs() < 1e-14 * theta.abs().max(1.0);
        best = best.min(theta);
        if residual < tol || stalled {
            return Ok(ExactResult {
                energy: theta,
                vector: x,
                method: ExactMethod::Lanczos,
            });
        }
    }
    Err(Error::domain(format!(
        "Lanczos did not converge in {LANCZOS_MAX_RESTARTS} restarts"
    )))
}
