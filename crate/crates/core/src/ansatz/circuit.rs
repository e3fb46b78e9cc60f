use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};

/// Rotation angle: a constant in radians or `multiplier * theta[index]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param { index: usize, multiplier: f64 },
}

impl Angle {
    pub fn scaled(self, factor: f64) -> Angle {
        match self {
            Angle::Fixed(a) => Angle::Fixed(a * factor),
            Angle::Param { index, multiplier } => Angle::Param {
                index,
                multiplier: multiplier * factor,
            },
        }
    }

    pub fn param_index(self) -> Option<usize> {
        match self {
            Angle::Fixed(_) => None,
            Angle::Param { index, .. } => Some(index),
        }
    }

    /// Resolves the angle against bound parameters.
    pub fn value(self, params: &[f64]) -> Result<f64> {
        match self {
            Angle::Fixed(a) => Ok(a),
            Angle::Param { index, multiplier } => params
                .get(index)
                .map(|t| t * multiplier)
                .ok_or_else(|| Error::contract(format!("parameter p{index} is unbound"))),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Fixed(a) => write!(f, "{a:?}"),
            Angle::Param { index, multiplier } => write!(f, "p{index}*{multiplier:?}"),
        }
    }
}

impl FromStr for Angle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix('p') {
            let (idx, mult) = rest
                .split_once('*')
                .ok_or_else(|| Error::domain(format!("bad parameter angle '{s}'")))?;
            let index = idx
                .parse()
                .map_err(|_| Error::domain(format!("bad parameter index in '{s}'")))?;
            let multiplier = mult
                .parse()
                .map_err(|_| Error::domain(format!("bad multiplier in '{s}'")))?;
            Ok(Angle::Param { index, multiplier })
        } else {
            s.parse()
                .map(Angle::Fixed)
                .map_err(|_| Error::domain(format!("bad angle '{s}'")))
        }
    }
}

/// Row-major single-qubit unitary.
pub type Matrix2 = [[Complex64; 2]; 2];

const IDENTITY2: Matrix2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// True if `m` is a global phase times the identity.
fn is_phase_identity(m: &Matrix2, tol: f64) -> bool {
    m[0][1].norm() < tol && m[1][0].norm() < tol && (m[0][0] - m[1][1]).norm() < tol
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Rx(usize, Angle),
    Ry(usize, Angle),
    Rz(usize, Angle),
    Cnot { control: usize, target: usize },
    /// A fixed single-qubit unitary, produced by fusing runs of gates.
    U(usize, Matrix2),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::H(_) => "H",
            Gate::Rx(..) => "RX",
            Gate::Ry(..) => "RY",
            Gate::Rz(..) => "RZ",
            Gate::Cnot { .. } => "CNOT",
            Gate::U(..) => "U",
        }
    }

    /// Matrix of a single-qubit gate with its angle resolved.
    pub fn matrix(&self, params: &[f64]) -> Result<Option<Matrix2>> {
        let c = Complex64::new;
        Ok(Some(match *self {
            Gate::X(_) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Gate::H(_) => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::Rx(_, a) => {
                let (s, co) = (a.value(params)? / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            Gate::Ry(_, a) => {
                let (s, co) = (a.value(params)? / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            Gate::Rz(_, a) => {
                let (s, co) = (a.value(params)? / 2.0).sin_cos();
                [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
            }
            Gate::U(_, m) => m,
            Gate::Cnot { .. } => return Ok(None),
        }))
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) | Gate::U(q, _) => {
                (q, None)
            }
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (q0, q1) = self.qubits();
        write!(f, "{} {q0}", self.name())?;
        if let Some(q1) = q1 {
            write!(f, " {q1}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {a}")?;
        }
        if let Gate::U(_, m) = self {
            for z in m.iter().flatten() {
                write!(f, " {:?} {:?}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CircuitStats {
    pub n_gates: usize,
    pub n_cnot: usize,
    pub depth: usize,
    pub n_parameters: usize,
}

impl CircuitStats {
    pub fn cnot_fraction(&self) -> f64 {
        if self.n_gates == 0 {
            0.0
        } else {
            self.n_cnot as f64 / self.n_gates as f64
        }
    }
}

/// Ordered gate list over a fixed register with symbolic parameter slots.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_parameters: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_parameters: usize) -> Self {
        Self {
            n_qubits,
            n_parameters,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_parameters(&self) -> usize {
        self.n_parameters
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (q0, q1) = gate.qubits();
        for q in std::iter::once(q0).chain(q1) {
            if q >= self.n_qubits {
                return Err(Error::SizeMismatch {
                    expected: self.n_qubits,
                    found: q + 1,
                });
            }
        }
        if q1 == Some(q0) {
            return Err(Error::domain(format!("CNOT control equals target ({q0})")));
        }
        if let Some(k) = gate.angle().and_then(Angle::param_index) {
            if k >= self.n_parameters {
                return Err(Error::contract(format!(
                    "parameter p{k} exceeds declared count {}",
                    self.n_parameters
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, widening the parameter count if needed.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.n_parameters = self.n_parameters.max(other.n_parameters);
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn stats(&self) -> CircuitStats {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        let mut n_cnot = 0;
        for g in &self.gates {
            let (q0, q1) = g.qubits();
            let d = match q1 {
                Some(q1) => {
                    n_cnot += 1;
                    let d = level[q0].max(level[q1]) + 1;
                    level[q1] = d;
                    d
                }
                None => level[q0] + 1,
            };
            level[q0] = d;
            depth = depth.max(d);
        }
        CircuitStats {
            n_gates: self.gates.len(),
            n_cnot,
            depth,
            n_parameters: self.n_parameters,
        }
    }

    /// Removes pairs of identical CNOTs that become adjacent on their qubits,
    /// repeating until none remain.
    pub fn cancel_adjacent_cnots(&self) -> Circuit {
        let mut out: Vec<Gate> = Vec::with_capacity(self.gates.len());
        // index into `out` of the last surviving gate on each qubit
        let mut last: Vec<Option<usize>> = vec![None; self.n_qubits];
        let mut removed: Vec<bool> = Vec::new();
        for g in &self.gates {
            if let Gate::Cnot { control, target } = *g {
                if let (Some(a), Some(b)) = (last[control], last[target]) {
                    if a == b && !removed[a] && out[a] == *g {
                        removed[a] = true;
                        last[control] = previous_on(&out, &removed, a, control);
                        last[target] = previous_on(&out, &removed, a, target);
                        continue;
                    }
                }
            }
            let idx = out.len();
            out.push(*g);
            removed.push(false);
            let (q0, q1) = g.qubits();
            last[q0] = Some(idx);
            if let Some(q1) = q1 {
                last[q1] = Some(idx);
            }
        }
        Circuit {
            n_qubits: self.n_qubits,
            n_parameters: self.n_parameters,
            gates: out
                .into_iter()
                .zip(removed)
                .filter_map(|(g, r)| (!r).then_some(g))
                .collect(),
        }
    }

    /// Fuses every maximal run of fixed single-qubit gates into one gate
    /// (dropping runs that multiply to a global phase) and cancels adjacent
    /// CNOT pairs, until neither changes the circuit. The result equals the
    /// input up to a global phase.
    pub fn optimize(&self) -> Circuit {
        let mut current = self.clone();
        loop {
            let next = current.fuse_single_qubit_runs().cancel_adjacent_cnots();
            if next.len() == current.len() {
                return next;
            }
            current = next;
        }
    }

    fn fuse_single_qubit_runs(&self) -> Circuit {
        struct Run {
            matrix: Matrix2,
            first: Gate,
            count: usize,
        }
        let mut out = Vec::with_capacity(self.gates.len());
        let mut pending: Vec<Option<Run>> = (0..self.n_qubits).map(|_| None).collect();
        let flush = |run: Option<Run>, q: usize, out: &mut Vec<Gate>| {
            if let Some(r) = run {
                if r.count == 1 {
                    out.push(r.first);
                } else if !is_phase_identity(&r.matrix, 1e-12) {
                    out.push(Gate::U(q, r.matrix));
                }
            }
        };
        for g in &self.gates {
            let fixed = g.angle().map_or(true, |a| a.param_index().is_none());
            match g.qubits() {
                (q, None) if fixed => {
                    let m = g.matrix(&[]).expect("fixed angle").expect("single-qubit gate");
                    let run = pending[q].get_or_insert(Run {
                        matrix: IDENTITY2,
                        first: *g,
                        count: 0,
                    });
                    run.matrix = mat_mul(&m, &run.matrix);
                    run.count += 1;
                }
                (q0, q1) => {
                    flush(pending[q0].take(), q0, &mut out);
                    if let Some(q1) = q1 {
                        flush(pending[q1].take(), q1, &mut out);
                    }
                    out.push(*g);
                }
            }
        }
        for (q, run) in pending.into_iter().enumerate() {
            flush(run, q, &mut out);
        }
        Circuit {
            n_qubits: self.n_qubits,
            n_parameters: self.n_parameters,
            gates: out,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {} parameters {}\n", self.n_qubits, self.n_parameters);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty circuit text"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (n_qubits, n_parameters) = match h.as_slice() {
            ["#", "qubits", nq, "parameters", np] => (
                nq.parse().map_err(|_| Error::parse(1, "bad qubit count"))?,
                np.parse().map_err(|_| Error::parse(1, "bad parameter count"))?,
            ),
            _ => return Err(Error::parse(1, "expected `# qubits N parameters M` header")),
        };
        let mut c = Circuit::new(n_qubits, n_parameters);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let f: Vec<&str> = line.split_whitespace().collect();
            let q = |i: usize| -> Result<usize> {
                f.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, format!("bad qubit field in '{line}'")))
            };
            let a = |i: usize| -> Result<Angle> {
                f.get(i)
                    .ok_or_else(|| Error::parse(line_no, "missing angle"))?
                    .parse()
                    .map_err(|e: Error| Error::parse(line_no, e.to_string()))
            };
            let gate = match f[0] {
                "X" => Gate::X(q(1)?),
                "H" => Gate::H(q(1)?),
                "RX" => Gate::Rx(q(1)?, a(2)?),
                "RY" => Gate::Ry(q(1)?, a(2)?),
                "RZ" => Gate::Rz(q(1)?, a(2)?),
                "CNOT" => Gate::Cnot {
                    control: q(1)?,
                    target: q(2)?,
                },
                "U" => {
                    let v: Vec<f64> = f[2..]
                        .iter()
                        .map(|t| t.parse())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::parse(line_no, format!("bad matrix entry in '{line}'")))?;
                    if v.len() != 8 {
                        return Err(Error::parse(line_no, "U needs 8 matrix entries"));
                    }
                    let z = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
                    Gate::U(q(1)?, [[z(0), z(1)], [z(2), z(3)]])
                }
                other => return Err(Error::parse(line_no, format!("unknown gate '{other}'"))),
            };
            c.push(gate).map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        Ok(c)
    }
}

fn previous_on(out: &[Gate], removed: &[bool], before: usize, q: usize) -> Option<usize> {
    (0..before).rev().find(|&i| {
        if removed[i] {
            return false;
        }
        let (a, b) = out[i].qubits();
        a == q || b == Some(q)
    })
}

/// Circuit for `exp(-i * angle * P)`.
///
/// X axes are rotated with H and Y axes with RX(+pi/2) / RX(-pi/2). A CNOT
/// ladder then collects the parity onto the highest qubit in the support,
/// where RZ(2 * angle) is applied, and the ladder and basis changes are undone.
pub fn exponentiate_pauli(p: &PauliString, angle: Angle) -> Result<Circuit> {
    if p.is_identity() {
        return Err(Error::domain("cannot exponentiate the identity string"));
    }
    let n_params = angle.param_index().map_or(0, |k| k + 1);
    let mut c = Circuit::new(p.n_qubits(), n_params);
    let support: Vec<usize> = (0..p.n_qubits()).filter(|&q| p.axis(q) != Axis::I).collect();
    for &q in &support {
        match p.axis(q) {
            Axis::X => c.push(Gate::H(q))?,
            Axis::Y => c.push(Gate::Rx(q, Angle::Fixed(FRAC_PI_2)))?,
            _ => {}
        }
    }
    for w in support.windows(2) {
        c.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        })?;
    }
    c.push(Gate::Rz(*support.last().expect("non-identity"), angle.scaled(2.0)))?;
    for w in support.windows(2).rev() {
        c.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        })?;
    }
    for &q in &support {
        match p.axis(q) {
            Axis::X => c.push(Gate::H(q))?,
            Axis::Y => c.push(Gate::Rx(q, Angle::Fixed(-FRAC_PI_2)))?,
            _ => {}
        }
    }
    Ok(c)
}
