//! Pauli strings and weighted Pauli sums.
//!
//! A string is stored as an `(x, z)` bitmask pair, one bit per qubit:
//! `I = (0,0)`, `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`. The operator it denotes
//! is the plain tensor product of the single-qubit matrices (no hidden phase),
//! so acting on a basis state gives
//! `P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can describe.
pub const MAX_QUBITS: usize = 128;

/// Largest register [`PauliSum::to_matrix`] will materialize.
pub const MAX_DENSE_QUBITS: usize = 14;

/// Default coefficient magnitude below which simplification drops a term (Ha).
pub const DEFAULT_DROP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    fn bits(self) -> (bool, bool) {
        match self {
            Axis::I => (false, false),
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Axis::I,
            (true, false) => Axis::X,
            (true, true) => Axis::Y,
            (false, true) => Axis::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// A power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i32) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

fn low_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u128,
    z: u128,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { n_qubits, x: 0, z: 0 }
    }

    pub fn from_masks(n_qubits: usize, x: u128, z: u128) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::ResourceLimit {
                what: "Pauli string length",
                requested: n_qubits,
                limit: MAX_QUBITS,
            });
        }
        let m = low_mask(n_qubits);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::domain("Pauli mask has bits beyond n_qubits"));
        }
        Ok(Self { n_qubits, x, z })
    }

    pub fn from_axes(axes: &[Axis]) -> Result<Self> {
        let mut s = Self::from_masks(axes.len(), 0, 0)?;
        for (q, &a) in axes.iter().enumerate() {
            s = s.with_axis(q, a);
        }
        Ok(s)
    }

    /// Single non-identity axis on qubit `q`.
    pub fn single(n_qubits: usize, q: usize, axis: Axis) -> Self {
        assert!(q < n_qubits);
        Self::identity(n_qubits).with_axis(q, axis)
    }

    pub fn z_string(n_qubits: usize, mask: u128) -> Self {
        Self { n_qubits, x: 0, z: mask & low_mask(n_qubits) }
    }

    pub fn x_string(n_qubits: usize, mask: u128) -> Self {
        Self { n_qubits, x: mask & low_mask(n_qubits), z: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u128 {
        self.x
    }

    pub fn z_mask(&self) -> u128 {
        self.z
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn axis(&self, q: usize) -> Axis {
        Axis::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn axes(&self) -> Vec<Axis> {
        (0..self.n_qubits).map(|q| self.axis(q)).collect()
    }

    pub fn with_axis(mut self, q: usize, axis: Axis) -> Self {
        assert!(q < self.n_qubits);
        let (x, z) = axis.bits();
        let bit = 1u128 << q;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        self
    }

    fn check_size(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Returns `(r, phase)` with `self * other = phase * r` as matrices.
    pub fn multiply(&self, other: &PauliString) -> Result<(PauliString, Phase)> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> (PauliString, Phase) {
        let (ax, az) = (self.x & !self.z, !self.x & self.z);
        let ay = self.x & self.z;
        let (bx, bz) = (other.x & !other.z, !other.x & other.z);
        let by = other.x & other.z;
        // XY = iZ, YZ = iX, ZX = iY and the reversed products carry -i.
        let plus = ((ax & by) | (ay & bz) | (az & bx)).count_ones() as i32;
        let minus = ((ay & bx) | (az & by) | (ax & bz)).count_ones() as i32;
        (
            PauliString {
                n_qubits: self.n_qubits,
                x: self.x ^ other.x,
                z: self.z ^ other.z,
            },
            Phase::from_exponent(plus - minus),
        )
    }

    /// Full (matrix) commutation.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// True iff on every qubit the axes agree or one of them is `I`.
    pub fn qubitwise_commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_size(other)?;
        let both = self.support() & other.support();
        Ok((self.x ^ other.x) & both == 0 && (self.z ^ other.z) & both == 0)
    }

    /// Deletes the listed qubits, which must carry `I` or be handled by the caller.
    pub(crate) fn remove_qubits(&self, positions: &[usize]) -> PauliString {
        use crate::bits::remove_bits;
        PauliString {
            n_qubits: self.n_qubits - positions.len(),
            x: remove_bits(self.x, self.n_qubits, positions),
            z: remove_bits(self.z, self.n_qubits, positions),
        }
    }

    /// Matrix element phase for `P|b>`: returns `(b ^ x, i^{#Y} (-1)^{|b&z|})`.
    #[inline]
    pub fn act_on_basis(&self, b: u128) -> (u128, Complex64) {
        let sign = ((b & self.z).count_ones() % 2) as i32 * 2;
        let ph = Phase::from_exponent(self.y_count() as i32 + sign);
        (b ^ self.x, ph.to_complex())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            write!(f, "{}", self.axis(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Character `i` of the input is the axis on qubit `i`.
    fn from_str(s: &str) -> Result<Self> {
        let axes = s
            .chars()
            .map(|c| match c {
                'I' | 'i' => Ok(Axis::I),
                'X' | 'x' => Ok(Axis::X),
                'Y' | 'y' => Ok(Axis::Y),
                'Z' | 'z' => Ok(Axis::Z),
                other => Err(Error::parse(0, format!("bad Pauli axis '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if axes.is_empty() {
            return Err(Error::parse(0, "empty Pauli string"));
        }
        PauliString::from_axes(&axes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    pub string: PauliString,
    pub coefficient: Complex64,
}

impl PauliTerm {
    pub fn new(string: PauliString, coefficient: Complex64) -> Self {
        Self { string, coefficient }
    }

    pub fn real(string: PauliString, coefficient: f64) -> Self {
        Self::new(string, Complex64::new(coefficient, 0.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    pub fn identity(n_qubits: usize, coefficient: f64) -> Self {
        Self {
            n_qubits,
            terms: vec![PauliTerm::real(PauliString::identity(n_qubits), coefficient)],
        }
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.string.n_qubits() != n_qubits) {
            return Err(Error::SizeMismatch {
                expected: n_qubits,
                found: t.string.n_qubits(),
            });
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn single(term: PauliTerm) -> Self {
        Self {
            n_qubits: term.string.n_qubits(),
            terms: vec![term],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: PauliTerm) -> Result<()> {
        if term.string.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: term.string.n_qubits(),
            });
        }
        self.terms.push(term);
        Ok(())
    }

    /// Merges duplicate strings (first-occurrence order) and drops terms with
    /// `|coefficient| < drop_tol`.
    pub fn simplify(&self, drop_tol: f64) -> PauliSum {
        let mut acc: IndexMap<PauliString, Complex64> = IndexMap::with_capacity(self.terms.len());
        for t in &self.terms {
            *acc.entry(t.string).or_insert(Complex64::new(0.0, 0.0)) += t.coefficient;
        }
        PauliSum {
            n_qubits: self.n_qubits,
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.norm() >= drop_tol)
                .map(|(s, c)| PauliTerm::new(s, c))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.string, t.coefficient * factor))
                .collect(),
        }
    }

    /// Concatenation without simplification.
    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(PauliSum { n_qubits: self.n_qubits, terms })
    }

    /// Operator product `self * other`, merged but not tolerance-filtered.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let (s, ph) = a.string.mul_unchecked(&b.string);
                *acc.entry(s).or_insert(Complex64::new(0.0, 0.0)) +=
                    a.coefficient * b.coefficient * ph.to_complex();
            }
        }
        Ok(PauliSum {
            n_qubits: self.n_qubits,
            terms: acc.into_iter().map(|(s, c)| PauliTerm::new(s, c)).collect(),
        })
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.string, t.coefficient.conj()))
                .collect(),
        }
    }

    /// Largest `|Im(c)|` over terms; zero for a Hermitian sum in normal form.
    pub fn max_imaginary(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_real(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.re.abs()).fold(0.0, f64::max)
    }

    /// Coefficient of the all-identity string (after merging).
    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.string.is_identity())
            .map(|t| t.coefficient)
            .sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.norm()).sum()
    }

    /// Dense `2^n x 2^n` matrix; row/column index bit `q` is qubit `q`.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit {
                what: "dense Pauli-sum matrix qubits",
                requested: self.n_qubits,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            for col in 0..dim {
                let (row, ph) = t.string.act_on_basis(col as u128);
                m[(row as usize, col)] += t.coefficient * ph;
            }
        }
        Ok(m)
    }

    /// One line per term: `<coeff_re> <coeff_im> <axes-string>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{} {} {}\n", t.coefficient.re, t.coefficient.im, t.string));
        }
        out
    }

    /// Inverse of [`PauliSum::render`]. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        let mut n_qubits = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(idx + 1, "expected `<re> <im> <axes>`"));
            }
            let re: f64 = fields[0]
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("bad real part '{}'", fields[0])))?;
            let im: f64 = fields[1]
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("bad imaginary part '{}'", fields[1])))?;
            let string: PauliString = fields[2].parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(idx + 1, message),
                other => other,
            })?;
            match n_qubits {
                None => n_qubits = Some(string.n_qubits()),
                Some(n) if n != string.n_qubits() => {
                    return Err(Error::parse(idx + 1, "inconsistent string lengths"));
                }
                _ => {}
            }
            terms.push(PauliTerm::new(string, Complex64::new(re, im)));
        }
        let n = n_qubits.ok_or_else(|| Error::parse(0, "no terms"))?;
        PauliSum::from_terms(n, terms)
    }
}

/// Element-wise free function form of [`PauliString::multiply`].
pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> Result<(PauliString, Phase)> {
    a.multiply(b)
}

pub fn qubitwise_commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.qubitwise_commutes(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Kronecker-product oracle, qubit 0 as least-significant factor.
    fn kron_matrix(s: &PauliString) -> DMatrix<Complex64> {
        let single = |a: Axis| -> DMatrix<Complex64> {
            let z = c(0.0, 0.0);
            let o = c(1.0, 0.0);
            let i = c(0.0, 1.0);
            match a {
                Axis::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
                Axis::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
                Axis::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
                Axis::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            }
        };
        let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
        for q in (0..s.n_qubits()).rev() {
            m = m.kronecker(&single(s.axis(q)));
        }
        m
    }

    fn all_strings(n: usize) -> Vec<PauliString> {
        let mut out = Vec::new();
        for code in 0..(1usize << (2 * n)) {
            let axes: Vec<Axis> = (0..n)
                .map(|q| match (code >> (2 * q)) & 3 {
                    0 => Axis::I,
                    1 => Axis::X,
                    2 => Axis::Y,
                    _ => Axis::Z,
                })
                .collect();
            out.push(PauliString::from_axes(&axes).unwrap());
        }
        out
    }

    fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
        (a - b).iter().all(|e| e.norm() < tol)
    }

    #[test]
    fn single_qubit_products() {
        let x: PauliString = "X".parse().unwrap();
        let y: PauliString = "Y".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(pauli_multiply(&x, &y).unwrap(), (z, Phase::I));
        assert_eq!(pauli_multiply(&z, &z).unwrap(), (PauliString::identity(1), Phase::ONE));
    }

    #[test]
    fn two_qubit_product_xz_zx() {
        let a: PauliString = "XZ".parse().unwrap();
        let b: PauliString = "ZX".parse().unwrap();
        let (r, ph) = pauli_multiply(&a, &b).unwrap();
        assert_eq!(r.to_string(), "YY");
        let lhs = kron_matrix(&a) * kron_matrix(&b);
        let rhs = kron_matrix(&r) * ph.to_complex();
        assert!(close(&lhs, &rhs, 1e-14));
        assert_eq!(ph, Phase::ONE);
    }

    #[test]
    fn multiply_size_mismatch() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(matches!(a.multiply(&b), Err(Error::SizeMismatch { .. })));
        assert!(a.qubitwise_commutes(&b).is_err());
    }

    #[test]
    fn exhaustive_products_match_matrices_two_qubits() {
        let strings = all_strings(2);
        for a in &strings {
            for b in &strings {
                let (r, ph) = a.multiply(b).unwrap();
                let lhs = kron_matrix(a) * kron_matrix(b);
                assert!(close(&lhs, &(kron_matrix(&r) * ph.to_complex()), 1e-14), "{a} * {b}");
                // multiplying back by b (its own inverse) recovers a
                let (back, ph2) = r.multiply(b).unwrap();
                assert_eq!(back, *a);
                let total = ph * ph2;
                assert!(close(
                    &kron_matrix(a),
                    &(kron_matrix(&back) * total.to_complex()),
                    1e-14
                ));
            }
        }
    }

    #[test]
    fn to_matrix_matches_kron_oracle() {
        for s in all_strings(3) {
            let m = PauliSum::single(PauliTerm::real(s, 1.0)).to_matrix().unwrap();
            assert!(close(&m, &kron_matrix(&s), 1e-15), "{s}");
        }
    }

    #[test]
    fn to_matrix_basics() {
        let id = PauliSum::identity(1, 2.5).to_matrix().unwrap();
        assert_eq!(id, DMatrix::from_diagonal_element(2, 2, c(2.5, 0.0)));
        let z = PauliSum::single(PauliTerm::real("Z".parse().unwrap(), 1.0))
            .to_matrix()
            .unwrap();
        assert_eq!(z[(0, 0)], c(1.0, 0.0));
        assert_eq!(z[(1, 1)], c(-1.0, 0.0));
        assert!(PauliSum::zero(15).to_matrix().is_err());
    }

    #[test]
    fn eq7_shape_all_ones_spectrum() {
        // g0 I + g1 Z0 + g2 Z1 + g3 Z0Z1 + g4 X0X1 + g5 Y0Y1, all g = 1.
        let terms = ["II", "ZI", "IZ", "ZZ", "XX", "YY"]
            .iter()
            .map(|s| PauliTerm::real(s.parse().unwrap(), 1.0))
            .collect();
        let m = PauliSum::from_terms(2, terms).unwrap().to_matrix().unwrap();
        assert!(close(&m, &m.adjoint(), 1e-15));
        // By hand: |00> -> 1+1+1+1 = 4; |11> -> 1-1-1+1 = 0;
        // {|01>,|10>} block: diag 1-1+1-1 = 0 (ZI on |01> = -1, IZ = +1),
        // off-diagonal XX + YY = 2, so eigenvalues +2, -2.
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [-2.0, 0.0, 2.0, 4.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn simplify_merges_and_drops() {
        let x: PauliString = "X".parse().unwrap();
        let s = PauliSum::from_terms(1, vec![PauliTerm::real(x, 1.0), PauliTerm::real(x, 2.0)]).unwrap();
        let r = s.simplify(DEFAULT_DROP_TOL);
        assert_eq!(r.terms(), &[PauliTerm::real(x, 3.0)]);
        let tiny = PauliSum::single(PauliTerm::real("Z".parse().unwrap(), 1e-13));
        assert!(tiny.simplify(1e-12).is_empty());
    }

    #[test]
    fn qubitwise_examples() {
        let p = |s: &str| s.parse::<PauliString>().unwrap();
        assert!(qubitwise_commutes(&p("XI"), &p("XZ")).unwrap());
        assert!(!qubitwise_commutes(&p("XX"), &p("YY")).unwrap());
        // XX and YY commute as matrices but not qubit-wise.
        assert!(p("XX").commutes(&p("YY")).unwrap());
    }

    #[test]
    fn qubitwise_exhaustive_two_qubits() {
        // Qubit-wise commutation == every single-qubit factor pair commutes as 2x2 matrices.
        let strings = all_strings(2);
        for a in &strings {
            for b in &strings {
                let mut expected = true;
                for q in 0..2 {
                    let ma = kron_matrix(&PauliString::single(1, 0, a.axis(q)));
                    let mb = kron_matrix(&PauliString::single(1, 0, b.axis(q)));
                    if !close(&(&ma * &mb), &(&mb * &ma), 1e-15) {
                        expected = false;
                    }
                }
                assert_eq!(a.qubitwise_commutes(b).unwrap(), expected, "{a} {b}");
                let full = close(
                    &(kron_matrix(a) * kron_matrix(b)),
                    &(kron_matrix(b) * kron_matrix(a)),
                    1e-15,
                );
                assert_eq!(a.commutes(b).unwrap(), full);
            }
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let text = "0.5 0 XIZY\n-1.25 0.125 IIII\n";
        let s = PauliSum::parse_text(text).unwrap();
        assert_eq!(s.n_qubits(), 4);
        assert_eq!(s.render(), "0.5 0 XIZY\n-1.25 0.125 IIII\n");
        assert!(PauliSum::parse_text("0.5 0 XQ").is_err());
        assert!(PauliSum::parse_text("0.5 XI").is_err());
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        (0u128..(1 << n), 0u128..(1 << n))
            .prop_map(move |(x, z)| PauliString::from_masks(n, x, z).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn products_match_matrix_oracle(n in 1usize..=4, seed in any::<u64>()) {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            use rand::Rng;
            let lim = 1u128 << n;
            let a = PauliString::from_masks(n, rng.gen_range(0..lim), rng.gen_range(0..lim)).unwrap();
            let b = PauliString::from_masks(n, rng.gen_range(0..lim), rng.gen_range(0..lim)).unwrap();
            let (r, ph) = a.multiply(&b).unwrap();
            let lhs = kron_matrix(&a) * kron_matrix(&b);
            prop_assert!(close(&lhs, &(kron_matrix(&r) * ph.to_complex()), 1e-13));
            let (back, ph2) = r.multiply(&b).unwrap();
            prop_assert_eq!(back, a);
            prop_assert!(close(&kron_matrix(&a), &(kron_matrix(&back) * (ph * ph2).to_complex()), 1e-13));
        }

        #[test]
        fn simplify_preserves_matrix(
            strings in proptest::collection::vec(arb_string(3), 5),
            coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        ) {
            let terms: Vec<PauliTerm> = strings.iter().zip(&coeffs)
                .map(|(s, &(re, im))| PauliTerm::new(*s, c(re, im)))
                .collect();
            let raw = PauliSum::from_terms(3, terms).unwrap();
            let simple = raw.simplify(1e-12);
            let dropped = raw.len() - simple.len();
            let diff = raw.to_matrix().unwrap() - simple.to_matrix().unwrap();
            let tol = 1e-12 * (dropped.max(1) as f64);
            prop_assert!(diff.iter().all(|e| e.norm() <= tol));
            let mut seen = std::collections::HashSet::new();
            prop_assert!(simple.terms().iter().all(|t| seen.insert(t.string)));
        }
    }
}
