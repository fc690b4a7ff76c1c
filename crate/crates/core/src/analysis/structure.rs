use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::family::state_at;
use crate::qubit::{QubitState4, DIM};
use crate::{Error, Result};

/// 3-tangle at or below this value labels a state W-class.
pub const TANGLE_THRESHOLD: f64 = 1e-6;

/// Haar-random element of U(2).
pub fn haar_unitary(rng: &mut impl Rng) -> Matrix2<C64> {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0], q[1]) / n;
    let b = C64::new(q[2], q[3]) / n;
    let phase = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    Matrix2::new(a, -b.conj(), b, a.conj()) * phase
}

/// `(U_0 (x) U_1 (x) U_2 (x) U_3) |amps>`.
pub fn apply_local(amps: &[C64; DIM], ops: &[Matrix2<C64>; 4]) -> [C64; DIM] {
    let mut v = *amps;
    for (k, u) in ops.iter().enumerate() {
        let bit = 1 << (3 - k);
        for i in (0..DIM).filter(|i| i & bit == 0) {
            let (x0, x1) = (v[i], v[i | bit]);
            v[i] = u[(0, 0)] * x0 + u[(0, 1)] * x1;
            v[i | bit] = u[(1, 0)] * x0 + u[(1, 1)] * x1;
        }
    }
    v
}

/// `|1 - |<psi| U_0 (x) ... (x) U_3 |psi>||`.
pub fn lu_deviation(state: &QubitState4, ops: &[Matrix2<C64>; 4]) -> f64 {
    let moved = apply_local(state.amplitudes(), ops);
    let ip: C64 = state.amplitudes().iter().zip(&moved).map(|(a, b)| a.conj() * b).sum();
    (1.0 - ip.norm()).abs()
}

/// Largest [`lu_deviation`] of `Psi(gamma)` under `trials` Haar-random `U^(x)4`.
pub fn lu_invariance_check(gamma: f64, trials: usize, seed: u64) -> Result<f64> {
    lu_invariance_check_in_frame(gamma, &[Matrix2::identity(); 4], trials, seed)
}

/// As [`lu_invariance_check`], with qubit `k` acted on by `F_k U F_k^dag`.
pub fn lu_invariance_check_in_frame(gamma: f64, frame: &[Matrix2<C64>; 4], trials: usize, seed: u64) -> Result<f64> {
    let state = state_at(gamma)?.state;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let u = haar_unitary(&mut rng);
        let ops: [Matrix2<C64>; 4] = std::array::from_fn(|k| frame[k] * u * frame[k].adjoint());
        worst = worst.max(lu_deviation(&state, &ops));
    }
    Ok(worst)
}

/// `4 |d1 - 2 d2 + 4 d3|`, Cayley's hyperdeterminant form; amplitude index `4i + 2j + k`.
pub fn three_tangle(a: &[C64; 8]) -> f64 {
    let d1 =
        a[0] * a[0] * a[7] * a[7] + a[1] * a[1] * a[6] * a[6] + a[2] * a[2] * a[5] * a[5] + a[4] * a[4] * a[3] * a[3];
    let d2 = a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1];
    let d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
    4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TripartiteClass {
    W,
    Ghz,
}

impl TripartiteClass {
    pub fn from_tangle(tangle: f64) -> Self {
        if tangle <= TANGLE_THRESHOLD {
            TripartiteClass::W
        } else {
            TripartiteClass::Ghz
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProjectionBasis {
    /// `{|H>, |V>}`
    HV,
    /// `{|+>, |->}`
    PM,
}

/// `First` is `H` or `+`, `Second` is `V` or `-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProjectionOutcome {
    First,
    Second,
}

impl ProjectionBasis {
    fn vector(self, outcome: ProjectionOutcome) -> [C64; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = if outcome == ProjectionOutcome::First { 1.0 } else { -1.0 };
        match (self, outcome) {
            (ProjectionBasis::HV, ProjectionOutcome::First) => [C64::new(1.0, 0.0), C64::default()],
            (ProjectionBasis::HV, ProjectionOutcome::Second) => [C64::default(), C64::new(1.0, 0.0)],
            (ProjectionBasis::PM, _) => [C64::new(r, 0.0), C64::new(s * r, 0.0)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionResult {
    /// Normalized state of qubits `e, f, g`.
    pub state: [C64; 8],
    pub probability: f64,
    pub tangle: f64,
    pub class: TripartiteClass,
}

/// Measures qubit `h` of `D4(2)` and classifies the remaining three qubits.
pub fn dicke_projection(basis: ProjectionBasis, outcome: ProjectionOutcome) -> Result<ProjectionResult> {
    let dicke = state_at(PI / 12.0)?.state;
    let v = basis.vector(outcome);
    let amps = dicke.amplitudes();
    let mut state: [C64; 8] = std::array::from_fn(|i| v[0].conj() * amps[2 * i] + v[1].conj() * amps[2 * i + 1]);
    let probability: f64 = state.iter().map(|a| a.norm_sqr()).sum();
    if probability == 0.0 {
        return Err(Error::ZeroProbability);
    }
    state.iter_mut().for_each(|a| *a /= probability.sqrt());
    let tangle = three_tangle(&state);
    Ok(ProjectionResult {
        state,
        probability,
        tangle,
        class: TripartiteClass::from_tangle(tangle),
    })
}
