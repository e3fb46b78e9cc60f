//! Molecular integrals and the classical reference problem.
//!
//! Two-electron integrals are stored in chemist notation `(pq|rs)` for the
//! whole life of a [`MolecularIntegrals`]; the only conversion to the
//! physicist ordering of `a†a†aa` happens in [`spin_orbital_hamiltonian`].
//!
//! Spin orbitals are block ordered: spatial orbital `p` maps to spin orbital
//! `p` (alpha) and `p + n_spatial` (beta).

mod fcidump;
mod fixture;

pub use fcidump::{parse_fcidump, write_fcidump};
pub use fixture::{load_fixture, Fixture, FixtureMetadata};

use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::fermion::{FermionOperator, Ladder};

/// Spatial-orbital integrals over `n_spatial` orbitals.
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularIntegrals {
    n_spatial: usize,
    pub core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl MolecularIntegrals {
    pub fn zeros(n_spatial: usize) -> Self {
        Self {
            n_spatial,
            core_energy: 0.0,
            one_body: vec![0.0; n_spatial * n_spatial],
            two_body: vec![0.0; n_spatial.pow(4)],
        }
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    #[inline]
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_spatial + q]
    }

    #[inline]
    fn eri_index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n_spatial + q) * self.n_spatial + r) * self.n_spatial + s
    }

    /// Chemist-notation `(pq|rs)`.
    #[inline]
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body[self.eri_index(p, q, r, s)]
    }

    /// Sets `h_pq = h_qp = value`.
    pub fn set_one_body(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_spatial;
        self.one_body[p * n + q] = value;
        self.one_body[q * n + p] = value;
    }

    /// Sets `(pq|rs)` and its seven permutational partners.
    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let idx = self.eri_index(a, b, c, d);
            self.two_body[idx] = value;
        }
    }

    /// Maximum deviation from `h_pq = h_qp` and from 8-fold ERI symmetry.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.n_spatial;
        let mut err: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                err = err.max((self.one_body(p, q) - self.one_body(q, p)).abs());
                for r in 0..n {
                    for s in 0..n {
                        let v = self.two_body(p, q, r, s);
                        for w in [
                            self.two_body(q, p, r, s),
                            self.two_body(p, q, s, r),
                            self.two_body(r, s, p, q),
                        ] {
                            err = err.max((v - w).abs());
                        }
                    }
                }
            }
        }
        err
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MolecularProblem {
    pub integrals: MolecularIntegrals,
    pub n_electrons: usize,
    /// Twice the spin projection, `n_alpha - n_beta`.
    pub ms2: i32,
    pub label: String,
    pub n_frozen: usize,
}

impl MolecularProblem {
    pub fn new(integrals: MolecularIntegrals, n_electrons: usize, ms2: i32) -> Result<Self> {
        let p = Self {
            integrals,
            n_electrons,
            ms2,
            label: String::new(),
            n_frozen: 0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.integrals.n_spatial();
        if n == 0 {
            return Err(Error::domain("problem has no orbitals"));
        }
        if self.n_electrons > 2 * n {
            return Err(Error::domain(format!(
                "{} electrons do not fit in {n} spatial orbitals",
                self.n_electrons
            )));
        }
        if (self.n_electrons as i64 - self.ms2 as i64).rem_euclid(2) != 0
            || self.ms2.unsigned_abs() as usize > self.n_electrons
        {
            return Err(Error::domain(format!(
                "MS2={} inconsistent with {} electrons",
                self.ms2, self.n_electrons
            )));
        }
        let (na, nb) = self.spin_counts();
        if na > n || nb > n {
            return Err(Error::domain("spin occupation exceeds orbital count"));
        }
        Ok(())
    }

    pub fn n_spatial(&self) -> usize {
        self.integrals.n_spatial()
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial()
    }

    /// `(n_alpha, n_beta)`.
    pub fn spin_counts(&self) -> (usize, usize) {
        let n = self.n_electrons as i64;
        let na = (n + self.ms2 as i64) / 2;
        let nb = (n - self.ms2 as i64) / 2;
        (na.max(0) as usize, nb.max(0) as usize)
    }
}

/// Folds the `n_frozen` lowest spatial orbitals (doubly occupied) into the
/// core energy and an effective one-body operator.
pub fn freeze_core(p: &MolecularProblem, n_frozen: usize) -> Result<MolecularProblem> {
    let (na, nb) = p.spin_counts();
    if n_frozen > na.min(nb) {
        return Err(Error::domain(format!(
            "cannot freeze {n_frozen} orbitals: only {} are doubly occupied",
            na.min(nb)
        )));
    }
    if n_frozen == 0 {
        return Ok(p.clone());
    }
    let ints = &p.integrals;
    let n = ints.n_spatial();
    let m = n - n_frozen;
    if m == 0 {
        return Err(Error::domain("freezing every orbital leaves no active space"));
    }
    let frozen = 0..n_frozen;

    let mut core = ints.core_energy;
    for c in frozen.clone() {
        core += 2.0 * ints.one_body(c, c);
        for d in frozen.clone() {
            core += 2.0 * ints.two_body(c, c, d, d) - ints.two_body(c, d, d, c);
        }
    }

    let mut out = MolecularIntegrals::zeros(m);
    out.core_energy = core;
    for i in 0..m {
        for j in 0..=i {
            let (p_, q_) = (i + n_frozen, j + n_frozen);
            let mut h = ints.one_body(p_, q_);
            for c in frozen.clone() {
                h += 2.0 * ints.two_body(p_, q_, c, c) - ints.two_body(p_, c, c, q_);
            }
            out.set_one_body(i, j, h);
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = ints.two_body(i + n_frozen, j + n_frozen, k + n_frozen, l + n_frozen);
                    let idx = out.eri_index(i, j, k, l);
                    out.two_body[idx] = v;
                }
            }
        }
    }

    Ok(MolecularProblem {
        integrals: out,
        n_electrons: p.n_electrons - 2 * n_frozen,
        ms2: p.ms2,
        label: p.label.clone(),
        n_frozen: p.n_frozen + n_frozen,
    })
}

/// Aufbau occupation: `n_alpha` lowest alpha and `n_beta` lowest beta orbitals.
pub fn hf_bitstring(p: &MolecularProblem) -> Bitstring {
    let n = p.n_spatial();
    let (na, nb) = p.spin_counts();
    Bitstring::from_indices(2 * n, (0..na).chain(n..n + nb))
        .expect("occupation validated against orbital count")
}

/// Energy of the aufbau determinant.
pub fn hf_energy(p: &MolecularProblem) -> f64 {
    let ints = &p.integrals;
    let (na, nb) = p.spin_counts();
    let mut e = ints.core_energy;
    for i in 0..na {
        e += ints.one_body(i, i);
    }
    for i in 0..nb {
        e += ints.one_body(i, i);
    }
    let pair = |occ_a: usize, occ_b: usize, same_spin: bool| -> f64 {
        let mut s = 0.0;
        for i in 0..occ_a {
            for j in 0..occ_b {
                s += ints.two_body(i, i, j, j);
                if same_spin {
                    s -= ints.two_body(i, j, j, i);
                }
            }
        }
        s
    };
    e += 0.5 * (pair(na, na, true) + pair(nb, nb, true) + 2.0 * pair(na, nb, false));
    e
}

/// Second-quantized Hamiltonian over `2 n_spatial` block-ordered spin orbitals:
/// `sum h_pq a†_p a_q + 1/2 sum (pq|rs) a†_p a†_r a_s a_q` (spin summed).
pub fn spin_orbital_hamiltonian(p: &MolecularProblem) -> FermionOperator {
    let ints = &p.integrals;
    let n = ints.n_spatial();
    let mut op = FermionOperator::new(2 * n);
    op.add_constant(ints.core_energy.into());
    let spin = |orb: usize, beta: bool| if beta { orb + n } else { orb };

    for a in 0..n {
        for b in 0..n {
            let h = ints.one_body(a, b);
            if h == 0.0 {
                continue;
            }
            for beta in [false, true] {
                op.add_term(
                    h.into(),
                    &[Ladder::create(spin(a, beta)), Ladder::annihilate(spin(b, beta))],
                )
                .expect("modes in range");
            }
        }
    }

    for pp in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = ints.two_body(pp, q, r, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in [false, true] {
                        for tau in [false, true] {
                            let (ps, qs) = (spin(pp, sigma), spin(q, sigma));
                            let (rt, st) = (spin(r, tau), spin(s, tau));
                            if ps == rt || qs == st {
                                continue;
                            }
                            op.add_term(
                                (0.5 * v).into(),
                                &[
                                    Ladder::create(ps),
                                    Ladder::create(rt),
                                    Ladder::annihilate(st),
                                    Ladder::annihilate(qs),
                                ],
                            )
                            .expect("modes in range");
                        }
                    }
                }
            }
        }
    }
    op.simplify(0.0)
}
