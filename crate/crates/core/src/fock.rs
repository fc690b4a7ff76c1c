//! Bosonic Fock states over a finite register of labeled optical modes.
//!
//! States are stored as maps from occupation vectors to complex amplitudes in
//! the orthonormal number basis, with `(a^dag)^n |vac> = sqrt(n!) |n>`.
//! Linear optical elements act by substituting every creation operator
//! `a_k^dag -> sum_l U[l, k] a_l^dag` in the operator polynomial that builds
//! the state, and re-expanding the result into occupation vectors.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Amplitudes with magnitude below this are dropped after every operation.
pub const PRUNE_EPS: f64 = 1e-14;

/// Unitarity tolerance for [`ModeTransform`], measured as `max |U^dag U - I|`.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spatial {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl Spatial {
    pub const ALL: [Spatial; 8] = [
        Spatial::A,
        Spatial::B,
        Spatial::C,
        Spatial::D,
        Spatial::E,
        Spatial::F,
        Spatial::G,
        Spatial::H,
    ];

    pub fn letter(self) -> char {
        match self {
            Spatial::A => 'a',
            Spatial::B => 'b',
            Spatial::C => 'c',
            Spatial::D => 'd',
            Spatial::E => 'e',
            Spatial::F => 'f',
            Spatial::G => 'g',
            Spatial::H => 'h',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];
}

/// One optical mode: a spatial path and a polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub spatial: Spatial,
    pub polarization: Polarization,
}

impl ModeLabel {
    pub const fn new(spatial: Spatial, polarization: Polarization) -> Self {
        ModeLabel { spatial, polarization }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pol = match self.polarization {
            Polarization::H => 'H',
            Polarization::V => 'V',
        };
        write!(f, "{}{}", self.spatial.letter(), pol)
    }
}

/// Ordered list of distinct modes; fixes the index order of occupation vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    modes: Vec<ModeLabel>,
}

impl Register {
    pub fn new(modes: Vec<ModeLabel>) -> Result<Self> {
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::DuplicateMode(m.to_string()));
            }
        }
        Ok(Register { modes })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn index_of(&self, mode: ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| *m == mode)
            .ok_or_else(|| Error::UnknownMode(mode.to_string()))
    }
}

/// Occupation number of each register mode.
pub type Occupation = Vec<u8>;

/// A pure state of photons in the register's modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    register: Register,
    terms: BTreeMap<Occupation, C64>,
}

fn sqrt_factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product::<f64>().sqrt()
}

impl FockState {
    /// The vacuum `|0, ..., 0>`.
    pub fn vacuum(register: Register) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; register.len()], C64::new(1.0, 0.0));
        FockState { register, terms }
    }

    /// A state with no terms; returned by failed post-selections.
    pub fn empty(register: Register) -> Self {
        FockState {
            register,
            terms: BTreeMap::new(),
        }
    }

    /// Builds `sum_j c_j prod_m (a_m^dag) |vac>` from monomials of creation
    /// operators (a mode may repeat within a monomial). Not renormalized.
    pub fn from_monomials(register: Register, monomials: &[(C64, Vec<ModeLabel>)]) -> Result<Self> {
        let mut terms: BTreeMap<Occupation, C64> = BTreeMap::new();
        for (coeff, ops) in monomials {
            let mut occ = vec![0u8; register.len()];
            for m in ops {
                occ[register.index_of(*m)?] += 1;
            }
            let weight: f64 = occ.iter().map(|&n| sqrt_factorial(n)).product();
            *terms.entry(occ).or_default() += coeff * weight;
        }
        Ok(Self::from_terms(register, terms))
    }

    /// Wraps a raw occupation-basis expansion, pruning negligible amplitudes.
    ///
    /// Panics if an occupation vector has the wrong length.
    pub fn from_terms(register: Register, mut terms: BTreeMap<Occupation, C64>) -> Self {
        assert!(
            terms.keys().all(|occ| occ.len() == register.len()),
            "occupation vector length differs from register size"
        );
        terms.retain(|_, a| a.norm() >= PRUNE_EPS);
        FockState { register, terms }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occupation: &[u8]) -> C64 {
        self.terms.get(occupation).copied().unwrap_or_default()
    }

    /// Amplitude of the occupation given as `(mode, photons)` pairs; modes
    /// not listed are empty.
    pub fn amplitude_of(&self, occupied: &[(ModeLabel, u8)]) -> Result<C64> {
        let mut occ = vec![0u8; self.register.len()];
        for &(m, n) in occupied {
            occ[self.register.index_of(m)?] = n;
        }
        Ok(self.amplitude(&occ))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroProbability);
        }
        for a in self.terms.values_mut() {
            *a /= norm;
        }
        Ok(self)
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        for a in self.terms.values_mut() {
            *a *= factor;
        }
        self.terms.retain(|_, a| a.norm() >= PRUNE_EPS);
        self
    }

    /// Coherent sum of two states on the same register.
    pub fn add(&self, other: &FockState) -> Result<FockState> {
        if self.register != other.register {
            return Err(Error::RegisterMismatch);
        }
        let mut terms = self.terms.clone();
        for (occ, a) in &other.terms {
            *terms.entry(occ.clone()).or_default() += a;
        }
        Ok(Self::from_terms(self.register.clone(), terms))
    }

    /// Total photon number of every term, or `None` if it is not definite.
    pub fn photon_number(&self) -> Option<u32> {
        let mut counts = self.terms.keys().map(|occ| occ.iter().map(|&n| n as u32).sum::<u32>());
        let first = counts.next()?;
        counts.all(|n| n == first).then_some(first)
    }

    pub fn apply(&self, t: &ModeTransform) -> Result<FockState> {
        apply_transform(self, t)
    }
}

/// A unitary acting on the creation operators of a subset of the register.
///
/// Column `k` of `matrix` is the image of `affected[k]`:
/// `a_k^dag -> sum_l matrix[(l, k)] a_l^dag`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeTransform {
    matrix: DMatrix<C64>,
    affected: Vec<ModeLabel>,
}

impl ModeTransform {
    pub fn new(matrix: DMatrix<C64>, affected: Vec<ModeLabel>) -> Result<Self> {
        let n = affected.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::TransformShape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                modes: n,
            });
        }
        for (i, m) in affected.iter().enumerate() {
            if affected[..i].contains(m) {
                return Err(Error::DuplicateMode(m.to_string()));
            }
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation.is_nan() || deviation > UNITARY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARY_TOL,
            });
        }
        Ok(ModeTransform { matrix, affected })
    }

    pub fn identity(affected: Vec<ModeLabel>) -> Self {
        let n = affected.len();
        ModeTransform {
            matrix: DMatrix::identity(n, n),
            affected,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn affected(&self) -> &[ModeLabel] {
        &self.affected
    }

    /// `other` applied after `self`, as a single transform (matrix `other * self`).
    pub fn then(&self, other: &ModeTransform) -> Result<ModeTransform> {
        if self.affected != other.affected {
            return Err(Error::RegisterMismatch);
        }
        ModeTransform::new(&other.matrix * &self.matrix, self.affected.clone())
    }
}

fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    let gram = u.adjoint() * u;
    let n = u.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

/// Applies a linear mode transformation by operator substitution.
pub fn apply_transform(state: &FockState, t: &ModeTransform) -> Result<FockState> {
    let idx: Vec<usize> = t
        .affected
        .iter()
        .map(|m| state.register.index_of(*m))
        .collect::<Result<_>>()?;
    let m = idx.len();
    // image of each affected creation operator, as (target slot, coefficient)
    let images: Vec<Vec<(usize, C64)>> = (0..m)
        .map(|k| {
            (0..m)
                .filter_map(|l| {
                    let c = t.matrix[(l, k)];
                    (c.norm() > 0.0).then_some((l, c))
                })
                .collect()
        })
        .collect();

    let mut out: BTreeMap<Occupation, C64> = BTreeMap::new();
    for (occ, &amp) in &state.terms {
        let mut base = occ.clone();
        let mut coeff = amp;
        for &i in &idx {
            coeff /= sqrt_factorial(occ[i]);
            base[i] = 0;
        }
        // polynomial in the affected creation operators, keyed by exponents
        let mut poly: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
        poly.insert(vec![0; m], coeff);
        for (k, &i) in idx.iter().enumerate() {
            for _ in 0..occ[i] {
                let mut next: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
                for (exps, c) in &poly {
                    for &(l, u) in &images[k] {
                        let mut e = exps.clone();
                        e[l] += 1;
                        *next.entry(e).or_default() += c * u;
                    }
                }
                poly = next;
            }
        }
        for (exps, c) in poly {
            let mut full = base.clone();
            let mut weight = 1.0;
            for (l, &i) in idx.iter().enumerate() {
                full[i] = exps[l];
                weight *= sqrt_factorial(exps[l]);
            }
            *out.entry(full).or_default() += c * weight;
        }
    }
    Ok(FockState::from_terms(state.register.clone(), out))
}

/// Required photon count per spatial mode, summed over polarizations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DetectionPattern(pub BTreeMap<Spatial, u32>);

impl DetectionPattern {
    pub fn one_per(modes: &[Spatial]) -> Self {
        DetectionPattern(modes.iter().map(|&s| (s, 1)).collect())
    }

    pub fn matches(&self, register: &Register, occupation: &[u8]) -> bool {
        self.0.iter().all(|(&spatial, &want)| {
            let got: u32 = register
                .modes()
                .iter()
                .zip(occupation)
                .filter(|(m, _)| m.spatial == spatial)
                .map(|(_, &n)| n as u32)
                .sum();
            got == want
        })
    }
}

/// Keeps the component matching `pattern`.
///
/// Returns the renormalized component and its squared norm (the success
/// probability). A pattern no term satisfies yields an empty state and
/// probability 0.
pub fn postselect(state: &FockState, pattern: &DetectionPattern) -> Result<(FockState, f64)> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm });
    }
    let kept: BTreeMap<Occupation, C64> = state
        .terms
        .iter()
        .filter(|(occ, _)| pattern.matches(&state.register, occ))
        .map(|(occ, a)| (occ.clone(), *a))
        .collect();
    let kept = FockState::from_terms(state.register.clone(), kept);
    let probability = kept.norm_sqr();
    if probability == 0.0 {
        return Ok((FockState::empty(state.register.clone()), 0.0));
    }
    Ok((kept.normalized()?, probability))
}

/// `<s1|s2>` in the orthonormal occupation basis.
pub fn overlap(s1: &FockState, s2: &FockState) -> Result<C64> {
    if s1.register != s2.register {
        return Err(Error::RegisterMismatch);
    }
    Ok(s1.terms.iter().map(|(occ, a)| a.conj() * s2.amplitude(occ)).sum())
}
