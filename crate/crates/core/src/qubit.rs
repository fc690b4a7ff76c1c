//! Polarization qubits: pure four-qubit states, density matrices and Pauli strings.
//!
//! Qubit `k` is output mode `e, f, g, h` for `k = 0..4`. Basis index bit
//! `3 - k` holds qubit `k`, with `H = 0` (the `+1` eigenstate of `sigma_z`) and
//! `V = 1`, so index 3 is `|HHVV>`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::fock::Polarization;
use crate::{Error, Result};

pub const N_QUBITS: usize = 4;
pub const DIM: usize = 16;

/// Basis index of a polarization 4-tuple ordered `(e, f, g, h)`.
pub fn basis_index(pols: [Polarization; 4]) -> usize {
    pols.iter()
        .fold(0, |acc, p| (acc << 1) | usize::from(*p == Polarization::V))
}

/// `"HHVV"`-style label of a basis index over `n` qubits.
pub fn basis_label(index: usize, n: usize) -> String {
    (0..n)
        .map(|k| if index >> (n - 1 - k) & 1 == 0 { 'H' } else { 'V' })
        .collect()
}

/// Normalized pure state of the four output qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState4 {
    amps: [C64; DIM],
}

impl QubitState4 {
    /// Checks normalization to `1e-12`.
    pub fn new(amps: [C64; DIM]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(QubitState4 { amps })
    }

    /// Rescales to unit norm.
    pub fn normalizing(mut amps: [C64; DIM]) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroProbability);
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(QubitState4 { amps })
    }

    pub fn amplitudes(&self) -> &[C64; DIM] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QubitState4) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|`, insensitive to global phase.
    pub fn overlap(&self, other: &QubitState4) -> f64 {
        self.inner(other).norm()
    }

    /// Multiplies by the global phase that makes the largest-magnitude
    /// amplitude real and positive. Near-ties (within `1e-12`) go to the
    /// lowest index.
    pub fn with_canonical_phase(mut self) -> Self {
        let max = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if let Some(pivot) = self.amps.iter().find(|a| a.norm() >= max - 1e-12) {
            let phase = pivot.conj() / pivot.norm();
            self.amps.iter_mut().for_each(|a| *a *= phase);
        }
        self
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.amps)
    }

    /// Applies a unitary on the full 16-dimensional space.
    pub fn transformed(&self, u: &DMatrix<C64>) -> QubitState4 {
        let v = u * DVector::from_column_slice(&self.amps);
        let mut amps = [C64::default(); DIM];
        amps.copy_from_slice(v.as_slice());
        QubitState4 { amps }
    }
}

/// Density matrix on `n` qubits, Hermitian and of unit trace to `1e-9`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub const TOL: f64 = 1e-9;

    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() || !n.is_power_of_two() || n < 2 {
            return Err(Error::InvalidDensity(format!(
                "shape {}x{} is not a square power of two",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > Self::TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max |rho - rho^dag| = {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > Self::TOL || tr.im.abs() > Self::TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        Ok(DensityMatrix { m })
    }

    /// `|psi><psi|` for a normalized amplitude vector.
    pub fn from_pure(amps: &[C64]) -> Self {
        let v = DVector::from_column_slice(amps);
        DensityMatrix { m: &v * v.adjoint() }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        DensityMatrix {
            m: DMatrix::identity(d, d) / C64::from(d as f64),
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// `<psi|rho|psi>`.
    pub fn expectation_pure(&self, amps: &[C64]) -> f64 {
        let v = DVector::from_column_slice(amps);
        (v.adjoint() * &self.m * &v)[(0, 0)].re
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> DensityMatrix {
        DensityMatrix {
            m: &self.m * C64::from(w) + &other.m * C64::from(1.0 - w),
        }
    }

    /// White noise: `(1 - q) rho + q I / d`.
    pub fn depolarized(&self, q: f64) -> DensityMatrix {
        self.mix(&DensityMatrix::maximally_mixed(self.n_qubits()), 1.0 - q)
    }

    /// Eigenvalues in ascending order together with eigenvectors (columns).
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = nalgebra::SymmetricEigen::new(self.m.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// Reduced state of the qubits in `keep` (ascending qubit positions).
    pub fn partial_trace(&self, keep: &[usize]) -> DensityMatrix {
        let n = self.n_qubits();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let dk = 1 << k;
        // global index from (kept bits, traced bits); qubit q sits at bit n-1-q
        let compose = |kept: usize, rest: usize| -> usize {
            let mut idx = 0;
            for (j, &q) in keep.iter().enumerate() {
                idx |= (kept >> (k - 1 - j) & 1) << (n - 1 - q);
            }
            for (j, &q) in traced.iter().enumerate() {
                idx |= (rest >> (traced.len() - 1 - j) & 1) << (n - 1 - q);
            }
            idx
        };
        let m = DMatrix::from_fn(dk, dk, |r, c| {
            (0..1usize << traced.len())
                .map(|t| self.m[(compose(r, t), compose(c, t))])
                .sum()
        });
        DensityMatrix { m }
    }
}

/// A four-qubit state, pure or mixed.
pub trait FourQubit {
    /// `Tr(rho P)` for a four-qubit Pauli string.
    fn expectation(&self, p: PauliString) -> C64;
    /// Squared norm (pure) or trace (mixed).
    fn weight(&self) -> f64;
    /// `<v|rho|v>`.
    fn probability_of(&self, v: &[C64; DIM]) -> f64;
    fn density(&self) -> DensityMatrix;
    /// Qubit count of the underlying object; 4 for valid inputs.
    fn qubits(&self) -> usize;
}

impl FourQubit for QubitState4 {
    fn expectation(&self, p: PauliString) -> C64 {
        pauli_expectation(&self.amps, &p.0)
    }

    fn weight(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn probability_of(&self, v: &[C64; DIM]) -> f64 {
        v.iter()
            .zip(&self.amps)
            .map(|(b, a)| b.conj() * a)
            .sum::<C64>()
            .norm_sqr()
    }

    fn density(&self) -> DensityMatrix {
        self.to_density()
    }

    fn qubits(&self) -> usize {
        N_QUBITS
    }
}

impl FourQubit for DensityMatrix {
    fn expectation(&self, p: PauliString) -> C64 {
        pauli_expectation_density(&self.m, &p.0)
    }

    fn weight(&self) -> f64 {
        self.m.trace().re
    }

    fn probability_of(&self, v: &[C64; DIM]) -> f64 {
        self.expectation_pure(v)
    }

    fn density(&self) -> DensityMatrix {
        self.clone()
    }

    fn qubits(&self) -> usize {
        self.n_qubits()
    }
}

/// Single-qubit Pauli operator; `I` is written `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => '0',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c {
            '0' => Some(Pauli::I),
            'x' => Some(Pauli::X),
            'y' => Some(Pauli::Y),
            'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn basis(self) -> Option<Basis> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Basis::X),
            Pauli::Y => Some(Basis::Y),
            Pauli::Z => Some(Basis::Z),
        }
    }
}

/// Tensor product of four Pauli operators, e.g. `0x0x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(pub [Pauli; 4]);

impl PauliString {
    /// All 256 strings in lexicographic order of `0 < x < y < z`.
    pub fn all() -> impl Iterator<Item = PauliString> {
        (0..256).map(PauliString::from_index)
    }

    /// Index in `0..256`, slot 0 most significant.
    pub fn index(self) -> usize {
        self.0.iter().fold(0, |acc, p| acc * 4 + *p as usize)
    }

    pub fn from_index(i: usize) -> PauliString {
        let mut ps = [Pauli::I; 4];
        for (k, p) in ps.iter_mut().enumerate() {
            *p = Pauli::ALL[(i >> (2 * (3 - k))) & 3];
        }
        PauliString(ps)
    }

    /// Applies a permutation of slots: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permuted(self, perm: [usize; 4]) -> PauliString {
        PauliString(perm.map(|k| self.0[k]))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ps: Vec<Pauli> = s
            .chars()
            .map(Pauli::from_symbol)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("'{s}' is not a Pauli string over 0,x,y,z")))?;
        let arr: [Pauli; 4] = ps
            .try_into()
            .map_err(|_| Error::Parse(format!("'{s}' must have 4 symbols")))?;
        Ok(PauliString(arr))
    }
}

/// `<psi| P_0 (x) ... (x) P_{n-1} |psi>` for an `n`-qubit amplitude vector.
pub fn pauli_expectation(amps: &[C64], paulis: &[Pauli]) -> C64 {
    let n = paulis.len();
    debug_assert_eq!(amps.len(), 1 << n);
    let (flip, phase) = pauli_action(paulis);
    (0..amps.len())
        .map(|i| amps[i ^ flip].conj() * phase(i) * amps[i])
        .sum()
}

/// `Tr(rho P_0 (x) ... (x) P_{n-1})`.
pub fn pauli_expectation_density(rho: &DMatrix<C64>, paulis: &[Pauli]) -> C64 {
    let (flip, phase) = pauli_action(paulis);
    (0..rho.nrows()).map(|i| rho[(i, i ^ flip)] * phase(i)).sum()
}

/// Dense matrix of a four-qubit Pauli string.
pub fn pauli_matrix(p: PauliString) -> DMatrix<C64> {
    let (flip, phase) = pauli_action(&p.0);
    let mut m = DMatrix::zeros(DIM, DIM);
    for j in 0..DIM {
        m[(j ^ flip, j)] = phase(j);
    }
    m
}

/// `P |i> = phase(i) |i ^ flip>`.
fn pauli_action(paulis: &[Pauli]) -> (usize, impl Fn(usize) -> C64 + '_) {
    let n = paulis.len();
    let flip = paulis.iter().enumerate().fold(0, |acc, (k, p)| {
        acc | (usize::from(matches!(p, Pauli::X | Pauli::Y)) << (n - 1 - k))
    });
    let phase = move |i: usize| {
        let mut ph = C64::new(1.0, 0.0);
        for (k, p) in paulis.iter().enumerate() {
            let bit = i >> (n - 1 - k) & 1;
            let sign = if bit == 0 { 1.0 } else { -1.0 };
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Y => ph *= C64::new(0.0, sign),
                Pauli::Z => ph *= sign,
            }
        }
        ph
    };
    (flip, phase)
}

/// Local measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn symbol(self) -> char {
        match self {
            Basis::X => 'x',
            Basis::Y => 'y',
            Basis::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Basis> {
        match c {
            'x' => Some(Basis::X),
            'y' => Some(Basis::Y),
            'z' => Some(Basis::Z),
            _ => None,
        }
    }

    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    /// Eigenvector with eigenvalue `+1` (`plus = true`) or `-1`, over `(|H>, |V>)`.
    pub fn eigenvector(self, plus: bool) -> [C64; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = if plus { 1.0 } else { -1.0 };
        match self {
            Basis::Z if plus => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            Basis::Z => [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            Basis::X => [C64::new(r, 0.0), C64::new(s * r, 0.0)],
            Basis::Y => [C64::new(r, 0.0), C64::new(0.0, s * r)],
        }
    }
}

/// Local bases for the four qubits, written like `xzyz`.
///
/// Outcome index `o` in `0..16` has bit `3 - k` clear when qubit `k` gave the
/// `+1` eigenvalue; its label is a string like `+-+-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasurementSetting(pub [Basis; 4]);

impl MeasurementSetting {
    /// All 81 settings, lexicographic in `x < y < z`.
    pub fn all() -> Vec<MeasurementSetting> {
        (0..81).map(MeasurementSetting::from_index).collect()
    }

    pub fn index(self) -> usize {
        self.0.iter().fold(0, |acc, b| acc * 3 + *b as usize)
    }

    pub fn from_index(mut i: usize) -> MeasurementSetting {
        let mut bases = [Basis::X; 4];
        for k in (0..4).rev() {
            bases[k] = Basis::ALL[i % 3];
            i /= 3;
        }
        MeasurementSetting(bases)
    }

    /// Whether every non-identity slot of `p` matches this setting's basis.
    pub fn covers(self, p: PauliString) -> bool {
        p.0.iter().zip(self.0).all(|(q, b)| *q == Pauli::I || *q == b.pauli())
    }

    /// Product eigenvector of outcome `o`.
    pub fn outcome_vector(self, o: usize) -> [C64; DIM] {
        let vecs: [[C64; 2]; 4] = std::array::from_fn(|k| self.0[k].eigenvector(o >> (3 - k) & 1 == 0));
        std::array::from_fn(|i| (0..4).map(|k| vecs[k][i >> (3 - k) & 1]).product())
    }

    /// `+-1` value of the Pauli string `p` on outcome `o` (`p` must be covered).
    pub fn eigenvalue(p: PauliString, o: usize) -> f64 {
        let flips = (0..4).filter(|&k| p.0[k] != Pauli::I && o >> (3 - k) & 1 == 1).count();
        if flips % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

pub fn outcome_label(o: usize) -> String {
    (0..4).map(|k| if o >> (3 - k) & 1 == 0 { '+' } else { '-' }).collect()
}

pub fn parse_outcome(s: &str) -> Result<usize> {
    if s.chars().count() != 4 {
        return Err(Error::Parse(format!("outcome '{s}' must have 4 signs")));
    }
    s.chars().try_fold(0, |acc, c| match c {
        '+' => Ok(acc << 1),
        '-' => Ok(acc << 1 | 1),
        _ => Err(Error::Parse(format!("outcome '{s}' must use only + and -"))),
    })
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{}", b.symbol()))
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bases: Vec<Basis> = s
            .chars()
            .map(Basis::from_symbol)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse(format!("setting '{s}' must use only x, y, z")))?;
        let arr: [Basis; 4] = bases
            .try_into()
            .map_err(|_| Error::Parse(format!("setting '{s}' must have 4 bases")))?;
        Ok(MeasurementSetting(arr))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for MeasurementSetting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Kronecker product of a list of square matrices, first factor most significant.
pub fn kron_all(factors: &[DMatrix<C64>]) -> DMatrix<C64> {
    factors
        .iter()
        .fold(DMatrix::from_element(1, 1, C64::new(1.0, 0.0)), |acc, f| {
            acc.kronecker(f)
        })
}
