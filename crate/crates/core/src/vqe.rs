//! Quasi-Newton outer loop over circuit parameters.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ansatz::Circuit;
use crate::backend::BackendOptions;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Armijo sufficient-decrease constant.
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub energy_tolerance: f64,
    pub max_iterations: usize,
    pub gradient_step: f64,
    /// `None` starts from all zeros.
    pub initial_parameters: Option<Vec<f64>>,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            energy_tolerance: 1e-6,
            max_iterations: 200,
            gradient_step: 1e-6,
            initial_parameters: None,
        }
    }
}

impl VqeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.energy_tolerance > 0.0) {
            return Err(Error::domain("energy tolerance must be positive"));
        }
        if !(self.gradient_step > 0.0) {
            return Err(Error::domain("gradient step must be positive"));
        }
        Ok(())
    }
}

/// A scalar function of the circuit parameters.
pub trait Objective {
    fn n_parameters(&self) -> usize;
    fn energy(&self, theta: &[f64], stream: u64) -> Result<f64>;
}

/// `<psi(theta)|H|psi(theta)>` for a parametrized circuit.
pub struct CircuitEnergy<'a> {
    pub hamiltonian: &'a PauliSum,
    pub circuit: &'a Circuit,
    pub backend: BackendOptions,
}

impl<'a> CircuitEnergy<'a> {
    pub fn new(hamiltonian: &'a PauliSum, circuit: &'a Circuit, backend: BackendOptions) -> Result<Self> {
        if hamiltonian.n_qubits() != circuit.n_qubits() {
            return Err(Error::SizeMismatch {
                expected: circuit.n_qubits(),
                found: hamiltonian.n_qubits(),
            });
        }
        Ok(Self {
            hamiltonian,
            circuit,
            backend,
        })
    }
}

impl Objective for CircuitEnergy<'_> {
    fn n_parameters(&self) -> usize {
        self.circuit.n_parameters()
    }

    fn energy(&self, theta: &[f64], stream: u64) -> Result<f64> {
        self.backend.energy(self.hamiltonian, self.circuit, theta, stream)
    }
}

/// Counts and times every evaluation of an [`Objective`].
pub struct Evaluator<'a, O: Objective + ?Sized> {
    objective: &'a O,
    evaluations: u64,
    eval_seconds: f64,
}

impl<'a, O: Objective + ?Sized> Evaluator<'a, O> {
    pub fn new(objective: &'a O) -> Self {
        Self {
            objective,
            evaluations: 0,
            eval_seconds: 0.0,
        }
    }

    pub fn n_evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Sum of per-evaluation wall times.
    pub fn eval_seconds(&self) -> f64 {
        self.eval_seconds
    }

    pub fn mean_eval_seconds(&self) -> f64 {
        if self.evaluations == 0 {
            0.0
        } else {
            self.eval_seconds / self.evaluations as f64
        }
    }

    pub fn energy_at(&mut self, theta: &[f64]) -> Result<f64> {
        let m = self.objective.n_parameters();
        if theta.len() != m {
            return Err(Error::SizeMismatch {
                expected: m,
                found: theta.len(),
            });
        }
        let start = Instant::now();
        let e = self.objective.energy(theta, self.evaluations)?;
        self.eval_seconds += start.elapsed().as_secs_f64();
        self.evaluations += 1;
        if !e.is_finite() {
            return Err(Error::NonFinite(format!("energy {e} at theta = {theta:?}")));
        }
        Ok(e)
    }

    /// Central differences `[E(theta + h e_k) - E(theta - h e_k)] / 2h`; costs
    /// `2 * len(theta)` evaluations.
    pub fn gradient_at(&mut self, theta: &[f64], step: f64) -> Result<Vec<f64>> {
        let mut shifted = theta.to_vec();
        let mut g = Vec::with_capacity(theta.len());
        for k in 0..theta.len() {
            shifted[k] = theta[k] + step;
            let plus = self.energy_at(&shifted)?;
            shifted[k] = theta[k] - step;
            let minus = self.energy_at(&shifted)?;
            shifted[k] = theta[k];
            g.push((plus - minus) / (2.0 * step));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub energy: f64,
    /// Norm of the gradient that produced this step.
    pub gradient_norm: f64,
    pub line_search_evaluations: u64,
    pub cumulative_evaluations: u64,
    pub cumulative_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy: f64,
    pub initial_energy: f64,
    pub parameters: Vec<f64>,
    /// Accepted iterations.
    pub n_energy_iterations: usize,
    pub n_evaluations: u64,
    /// Mean wall time of one energy evaluation (s).
    pub tts_1vp: f64,
    /// Mean evaluation time spent per accepted iteration (s).
    pub tts_iter: f64,
    /// Evaluation time summed over the whole run (s).
    pub tts_conv: f64,
    /// Elapsed wall clock of the run (s).
    pub wall_seconds: f64,
    pub converged: bool,
    pub line_search_failed: bool,
    pub trace: Vec<TraceRecord>,
}

impl VqeResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,energy,grad_norm,line_search_evals,cumulative_evals,cumulative_seconds\n");
        for t in &self.trace {
            out.push_str(&format!(
                "{},{:.12},{:.6e},{},{},{:.6}\n",
                t.iteration,
                t.energy,
                t.gradient_norm,
                t.line_search_evaluations,
                t.cumulative_evaluations,
                t.cumulative_seconds
            ));
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS on the inverse Hessian with Armijo backtracking.
///
/// Each iteration evaluates the gradient at the current point (`2m`
/// evaluations) and then backtracks from the quasi-Newton step. The run stops
/// when an accepted step changes the energy by less than the tolerance.
pub fn minimize<O: Objective + ?Sized>(objective: &O, config: &VqeConfig) -> Result<VqeResult> {
    config.validate()?;
    let m = objective.n_parameters();
    let mut theta = match &config.initial_parameters {
        Some(p) if p.len() != m => {
            return Err(Error::SizeMismatch {
                expected: m,
                found: p.len(),
            })
        }
        Some(p) => p.clone(),
        None => vec![0.0; m],
    };
    let start = Instant::now();
    let mut eval = Evaluator::new(objective);
    let initial_energy = eval.energy_at(&theta)?;
    let mut energy = initial_energy;
    let mut trace = Vec::new();
    let mut converged = m == 0;
    let mut line_search_failed = false;

    // inverse Hessian, row-major m x m
    let mut hinv = identity(m);
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None; // (step s, gradient at its start)

    let mut iteration = 0;
    while !converged && iteration < config.max_iterations {
        let before = eval.n_evaluations();
        let g = eval.gradient_at(&theta, config.gradient_step)?;
        let gnorm = dot(&g, &g).sqrt();

        if let Some((s, g_old)) = previous.take() {
            let y: Vec<f64> = g.iter().zip(&g_old).map(|(a, b)| a - b).collect();
            let ys = dot(&y, &s);
            if ys > 1e-18 {
                if iteration == 1 {
                    let scale = ys / dot(&y, &y);
                    hinv.iter_mut().for_each(|h| *h *= scale);
                }
                bfgs_update(&mut hinv, &s, &y, ys);
            }
        }
        if gnorm == 0.0 {
            converged = true;
            break;
        }

        let mut d: Vec<f64> = (0..m).map(|i| -dot(&hinv[i * m..(i + 1) * m], &g)).collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hinv = identity(m);
            d = g.iter().map(|x| -x).collect();
            slope = -gnorm * gnorm;
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        let mut trial = theta.clone();
        for _ in 0..MAX_BACKTRACKS {
            trial.iter_mut().zip(theta.iter().zip(&d)).for_each(|(t, (x, di))| *t = x + alpha * di);
            let e = eval.energy_at(&trial)?;
            if e <= energy + ARMIJO_C1 * alpha * slope {
                accepted = Some(e);
                break;
            }
            alpha *= 0.5;
        }
        let line_search_evaluations = eval.n_evaluations() - before - 2 * m as u64;
        let Some(e_new) = accepted else {
            line_search_failed = true;
            break;
        };

        iteration += 1;
        let s: Vec<f64> = trial.iter().zip(&theta).map(|(a, b)| a - b).collect();
        previous = Some((s, g));
        let delta = energy - e_new;
        theta.clone_from(&trial);
        energy = e_new;
        trace.push(TraceRecord {
            iteration,
            energy,
            gradient_norm: gnorm,
            line_search_evaluations,
            cumulative_evaluations: eval.n_evaluations(),
            cumulative_seconds: eval.eval_seconds(),
        });
        if delta.abs() < config.energy_tolerance {
            converged = true;
        }
    }

    let n_iter = trace.len();
    Ok(VqeResult {
        energy,
        initial_energy,
        parameters: theta,
        n_energy_iterations: n_iter,
        n_evaluations: eval.n_evaluations(),
        tts_1vp: eval.mean_eval_seconds(),
        tts_iter: if n_iter == 0 { 0.0 } else { eval.eval_seconds() / n_iter as f64 },
        tts_conv: eval.eval_seconds(),
        wall_seconds: start.elapsed().as_secs_f64(),
        converged,
        line_search_failed,
        trace,
    })
}

fn identity(m: usize) -> Vec<f64> {
    let mut h = vec![0.0; m * m];
    (0..m).for_each(|i| h[i * m + i] = 1.0);
    h
}

/// `H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T`
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], ys: f64) {
    let m = s.len();
    let rho = 1.0 / ys;
    let hy: Vec<f64> = (0..m).map(|i| dot(&h[i * m..(i + 1) * m], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..m {
        for j in 0..m {
            h[i * m + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}
