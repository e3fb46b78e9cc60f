use std::fmt;

use indexmap::IndexMap;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub raising: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, raising: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, raising: false }
    }

    pub fn adjoint(self) -> Self {
        Self {
            mode: self.mode,
            raising: !self.raising,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.raising {
            write!(f, "{}^", self.mode)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionTerm {
    pub coefficient: Complex64,
    pub ladder: Vec<Ladder>,
}

/// Weighted sum of normal-ordered ladder-operator products.
///
/// Normal order: all raising operators left of all lowering operators, with
/// descending mode index inside each group. The empty product is the constant.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: IndexMap<Vec<Ladder>, Complex64>,
}

impl FermionOperator {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            terms: IndexMap::new(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(&self) -> Complex64 {
        self.terms.get(&Vec::new()).copied().unwrap_or_default()
    }

    pub fn add_constant(&mut self, c: Complex64) {
        *self.terms.entry(Vec::new()).or_default() += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = FermionTerm> + '_ {
        self.terms.iter().map(|(l, c)| FermionTerm {
            coefficient: *c,
            ladder: l.clone(),
        })
    }

    /// Adds `coefficient * ladder[0] ladder[1] ...` after normal ordering it.
    pub fn add_term(&mut self, coefficient: Complex64, ladder: &[Ladder]) -> Result<()> {
        if let Some(op) = ladder.iter().find(|op| op.mode >= self.n_modes) {
            return Err(Error::SizeMismatch {
                expected: self.n_modes,
                found: op.mode + 1,
            });
        }
        let mut ordered = Vec::new();
        normal_order(ladder.to_vec(), coefficient, &mut ordered);
        for (l, c) in ordered {
            *self.terms.entry(l).or_default() += c;
        }
        Ok(())
    }

    pub fn add(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check(other)?;
        let mut out = self.clone();
        for (l, c) in &other.terms {
            *out.terms.entry(l.clone()).or_default() += *c;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> FermionOperator {
        FermionOperator {
            n_modes: self.n_modes,
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c * factor)).collect(),
        }
    }

    pub fn sub(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn multiply(&self, other: &FermionOperator) -> Result<FermionOperator> {
        self.check(other)?;
        let mut out = FermionOperator::new(self.n_modes);
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                let mut l = la.clone();
                l.extend_from_slice(lb);
                out.add_term(ca * cb, &l)?;
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::new(self.n_modes);
        for (l, c) in &self.terms {
            let rev: Vec<Ladder> = l.iter().rev().map(|op| op.adjoint()).collect();
            out.add_term(c.conj(), &rev).expect("same mode range");
        }
        out
    }

    /// Drops terms with `|c| <= tol` (`tol = 0` removes exact zeros only).
    pub fn simplify(&self, tol: f64) -> FermionOperator {
        FermionOperator {
            n_modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(l, c)| (l.clone(), *c))
                .collect(),
        }
    }

    /// Largest coefficient magnitude of `self - self†`.
    pub fn hermiticity_error(&self) -> f64 {
        let diff = self.sub(&self.adjoint()).expect("same size");
        diff.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check(&self, other: &FermionOperator) -> Result<()> {
        if self.n_modes != other.n_modes {
            return Err(Error::SizeMismatch {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        Ok(())
    }
}

pub fn is_normal_ordered(ladder: &[Ladder]) -> bool {
    ladder.windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        match (a.raising, b.raising) {
            (true, false) => true,
            (false, true) => false,
            _ => a.mode > b.mode,
        }
    })
}

/// Bubble sort into normal order, emitting contraction terms from
/// `a_p a†_p = 1 - a†_p a_p` along the way.
fn normal_order(mut ops: Vec<Ladder>, coefficient: Complex64, out: &mut Vec<(Vec<Ladder>, Complex64)>) {
    let mut coeff = coefficient;
    for i in 1..ops.len() {
        for j in (1..=i).rev() {
            let (left, right) = (ops[j - 1], ops[j]);
            if right.raising && !left.raising {
                ops.swap(j - 1, j);
                if right.mode == left.mode {
                    let mut contracted = ops[..j - 1].to_vec();
                    contracted.extend_from_slice(&ops[j + 1..]);
                    normal_order(contracted, coeff, out);
                }
                coeff = -coeff;
            } else if right.raising == left.raising {
                if right.mode == left.mode {
                    // a_p a_p = 0
                    return;
                }
                if right.mode > left.mode {
                    ops.swap(j - 1, j);
                    coeff = -coeff;
                }
            }
        }
    }
    out.push((ops, coeff));
}
