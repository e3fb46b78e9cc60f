//! Independent reference implementations used by the integration tests and
//! the acceptance suite. Nothing here calls the library's matrix builders.
#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use vqebench::ansatz::{Circuit, Gate};
use vqebench::chem::{MolecularIntegrals, MolecularProblem};
use vqebench::fermion::{FermionOperator, Ladder};
use vqebench::{Axis, PauliString, PauliSum};

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures_dir().join(rel)
}

/// Every fixture in the repository, sorted.
pub fn all_fixtures() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for mol in std::fs::read_dir(fixtures_dir()).unwrap() {
        let dir = mol.unwrap().path();
        if !dir.is_dir() {
            continue;
        }
        for f in std::fs::read_dir(&dir).unwrap() {
            let p = f.unwrap().path();
            if p.extension().is_some_and(|x| x == "fcidump") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn mat2(a: [[Complex64; 2]; 2]) -> CMat {
    CMat::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

pub fn axis_matrix(axis: Axis) -> CMat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    mat2(match axis {
        Axis::I => [[l, o], [o, l]],
        Axis::X => [[o, l], [l, o]],
        Axis::Y => [[o, -i], [i, o]],
        Axis::Z => [[l, o], [o, -l]],
    })
}

/// Tensor product with `factors[q]` acting on qubit `q`; qubit 0 is the
/// least significant index bit.
pub fn tensor(factors: &[CMat]) -> CMat {
    let mut out = CMat::from_element(1, 1, c(1.0, 0.0));
    for f in factors.iter().rev() {
        out = out.kronecker(f);
    }
    out
}

pub fn pauli_matrix(p: &PauliString) -> CMat {
    let factors: Vec<CMat> = (0..p.n_qubits()).map(|q| axis_matrix(p.axis(q))).collect();
    tensor(&factors)
}

pub fn pauli_sum_matrix(s: &PauliSum) -> CMat {
    let dim = 1usize << s.n_qubits();
    let mut out = CMat::zeros(dim, dim);
    for t in s.terms() {
        out += pauli_matrix(&t.string) * t.coefficient;
    }
    out
}

/// `exp(-i theta P) = cos(theta) I - i sin(theta) P`, valid since `P^2 = I`.
pub fn pauli_exponential(p: &PauliString, theta: f64) -> CMat {
    let dim = 1usize << p.n_qubits();
    CMat::identity(dim, dim) * c(theta.cos(), 0.0) - pauli_matrix(p) * c(0.0, theta.sin())
}

fn single_qubit_oracle(g: &Gate, params: &[f64]) -> CMat {
    let angle = |a: &vqebench::ansatz::Angle| a.value(params).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate::X(_) => axis_matrix(Axis::X),
        Gate::H(_) => mat2([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
        Gate::Rx(_, a) => {
            let t = angle(a) / 2.0;
            mat2([[c(t.cos(), 0.0), c(0.0, -t.sin())], [c(0.0, -t.sin()), c(t.cos(), 0.0)]])
        }
        Gate::Ry(_, a) => {
            let t = angle(a) / 2.0;
            mat2([[c(t.cos(), 0.0), c(-t.sin(), 0.0)], [c(t.sin(), 0.0), c(t.cos(), 0.0)]])
        }
        Gate::Rz(_, a) => {
            let t = angle(a) / 2.0;
            mat2([[Complex64::from_polar(1.0, -t), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, t)]])
        }
        Gate::U(_, m) => mat2(*m),
        Gate::Cnot { .. } => unreachable!(),
    }
}

/// Full-register matrix of one gate, from tensor products.
pub fn gate_unitary(g: &Gate, n: usize, params: &[f64]) -> CMat {
    let id = || axis_matrix(Axis::I);
    match *g {
        Gate::Cnot { control, target } => {
            let (p0, p1) = (
                mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]),
                mat2([[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]),
            );
            let mut off: Vec<CMat> = (0..n).map(|_| id()).collect();
            off[control] = p0;
            let mut on: Vec<CMat> = (0..n).map(|_| id()).collect();
            on[control] = p1;
            on[target] = axis_matrix(Axis::X);
            tensor(&off) + tensor(&on)
        }
        _ => {
            let (q, _) = g.qubits();
            let mut f: Vec<CMat> = (0..n).map(|_| id()).collect();
            f[q] = single_qubit_oracle(g, params);
            tensor(&f)
        }
    }
}

pub fn circuit_unitary(circuit: &Circuit, params: &[f64]) -> CMat {
    let n = circuit.n_qubits();
    let mut u = CMat::identity(1 << n, 1 << n);
    for g in circuit.gates() {
        u = gate_unitary(g, n, params) * u;
    }
    u
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `min_phi max |a - e^{i phi} b|` approximated by aligning the largest entry.
pub fn max_abs_diff_up_to_phase(a: &CMat, b: &CMat) -> f64 {
    let (k, _) = b.iter().enumerate().fold((0, 0.0), |(bk, bv), (k, z)| {
        if z.norm() > bv {
            (k, z.norm())
        } else {
            (bk, bv)
        }
    });
    let phase = a.as_slice()[k] / b.as_slice()[k];
    let phase = phase / phase.norm();
    max_abs_diff(a, &(b * phase))
}

pub fn sorted_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Applies a product of ladder operators (rightmost first) to an occupation
/// state, returning the resulting state and sign, or `None` if it vanishes.
pub fn apply_ladders(ladders: &[Ladder], mut state: u128) -> Option<(u128, f64)> {
    let mut sign = 1.0;
    for l in ladders.iter().rev() {
        let bit = 1u128 << l.mode;
        let occupied = state & bit != 0;
        if occupied == l.raising {
            return None;
        }
        if (state & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        state ^= bit;
    }
    Some((state, sign))
}

/// Matrix of a fermion operator in the occupation basis (bit `j` of the index
/// is the occupation of mode `j`).
pub fn fermion_matrix(op: &FermionOperator) -> CMat {
    let dim = 1usize << op.n_modes();
    let mut m = CMat::zeros(dim, dim);
    for t in op.terms() {
        for col in 0..dim {
            if let Some((row, sign)) = apply_ladders(&t.ladder, col as u128) {
                m[(row as usize, col)] += t.coefficient * sign;
            }
        }
    }
    m
}

fn word_matrix(ladder: &[Ladder], n_modes: usize) -> CMat {
    let dim = 1usize << n_modes;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        if let Some((row, sign)) = apply_ladders(ladder, col as u128) {
            m[(row as usize, col)] += c(sign, 0.0);
        }
    }
    m
}

/// Random Hermitian fermion operator made of arbitrary-order ladder words of
/// length 2 or 4, each added with its adjoint. Also returns the oracle matrix
/// built from the raw words, before any normal ordering.
pub fn random_hermitian_fermion(rng: &mut impl Rng, n_modes: usize, n_words: usize) -> (FermionOperator, CMat) {
    let dim = 1usize << n_modes;
    let mut op = FermionOperator::new(n_modes);
    let constant = rng.gen_range(-1.0..1.0);
    op.add_constant(c(constant, 0.0));
    let mut matrix = CMat::identity(dim, dim) * c(constant, 0.0);
    for _ in 0..n_words {
        let len = if rng.gen_bool(0.5) { 2 } else { 4 };
        let word: Vec<Ladder> = (0..len)
            .map(|_| Ladder {
                mode: rng.gen_range(0..n_modes),
                raising: rng.gen_bool(0.5),
            })
            .collect();
        let adjoint: Vec<Ladder> = word.iter().rev().map(|l| l.adjoint()).collect();
        let w = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        op.add_term(w, &word).unwrap();
        op.add_term(w.conj(), &adjoint).unwrap();
        matrix += word_matrix(&word, n_modes) * w + word_matrix(&adjoint, n_modes) * w.conj();
    }
    (op, matrix)
}

/// Random real integrals with the 8-fold permutational symmetry.
pub fn random_problem(rng: &mut impl Rng, n_spatial: usize, n_electrons: usize) -> MolecularProblem {
    let mut ints = MolecularIntegrals::zeros(n_spatial);
    ints.core_energy = rng.gen_range(-1.0..1.0);
    for p in 0..n_spatial {
        for q in 0..=p {
            // a dominant increasing diagonal keeps the aufbau determinant sensible
            let base = if p == q { -2.0 + p as f64 } else { 0.0 };
            ints.set_one_body(p, q, base + rng.gen_range(-0.3..0.3));
        }
    }
    for p in 0..n_spatial {
        for q in 0..=p {
            for r in 0..n_spatial {
                for s in 0..=r {
                    if (p, q) >= (r, s) {
                        let base = if p == q && r == s { 0.5 } else { 0.0 };
                        ints.set_two_body(p, q, r, s, base + rng.gen_range(-0.1..0.1));
                    }
                }
            }
        }
    }
    MolecularProblem::new(ints, n_electrons, (n_electrons % 2) as i32).unwrap()
}

/// Ground energy by determinant-basis FCI straight from the spatial integrals,
/// using physicist-ordered spin-orbital integrals
/// `<PQ|RS> = (pr|qs) delta(sP,sR) delta(sQ,sS)`.
pub fn determinant_fci(p: &MolecularProblem) -> f64 {
    let n = p.n_spatial();
    let m = 2 * n;
    let (na, nb) = p.spin_counts();
    let ints = &p.integrals;
    let spatial = |k: usize| k % n;
    let spin = |k: usize| k / n;
    let dets: Vec<u128> = (0..1u128 << m)
        .filter(|d| {
            let alpha = d & ((1u128 << n) - 1);
            (alpha.count_ones() as usize, (d >> n).count_ones() as usize) == (na, nb)
        })
        .collect();
    let index: std::collections::HashMap<u128, usize> = dets.iter().enumerate().map(|(i, d)| (*d, i)).collect();
    let mut h = DMatrix::<f64>::zeros(dets.len(), dets.len());
    for (col, &d) in dets.iter().enumerate() {
        h[(col, col)] += ints.core_energy;
        for a in 0..m {
            for b in 0..m {
                if spin(a) != spin(b) {
                    continue;
                }
                let v = ints.one_body(spatial(a), spatial(b));
                if let Some((out, s)) = apply_ladders(&[Ladder::create(a), Ladder::annihilate(b)], d) {
                    h[(index[&out], col)] += v * s;
                }
            }
        }
        for pp in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        if spin(pp) != spin(r) || spin(q) != spin(s) {
                            continue;
                        }
                        let v = ints.two_body(spatial(pp), spatial(r), spatial(q), spatial(s));
                        if v == 0.0 {
                            continue;
                        }
                        let ops = [
                            Ladder::create(pp),
                            Ladder::create(q),
                            Ladder::annihilate(s),
                            Ladder::annihilate(r),
                        ];
                        if let Some((out, sg)) = apply_ladders(&ops, d) {
                            h[(index[&out], col)] += 0.5 * v * sg;
                        }
                    }
                }
            }
        }
    }
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// HF determinant energy from the Slater rules on spin orbitals.
pub fn slater_hf_energy(p: &MolecularProblem) -> f64 {
    let (na, nb) = p.spin_counts();
    let ints = &p.integrals;
    let occ: Vec<(usize, usize)> = (0..na).map(|i| (i, 0)).chain((0..nb).map(|i| (i, 1))).collect();
    let mut e = ints.core_energy;
    for &(i, _) in &occ {
        e += ints.one_body(i, i);
    }
    for (x, &(i, si)) in occ.iter().enumerate() {
        for &(j, sj) in &occ[x + 1..] {
            e += ints.two_body(i, i, j, j);
            if si == sj {
                e -= ints.two_body(i, j, j, i);
            }
        }
    }
    e
}

/// `||v||_inf` of a real vector difference.
pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
