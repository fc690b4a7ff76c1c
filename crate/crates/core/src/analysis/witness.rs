use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{check_input, correlations::fidelity};
use crate::family::state_at;
use crate::qubit::{FourQubit, QubitState4, DIM};
use crate::Result;

/// A cut of the four qubits into two non-empty groups; `side` holds the
/// qubits on the side that contains qubit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    side: u8,
}

impl Bipartition {
    /// The four one-vs-three cuts followed by the three two-vs-two cuts.
    pub fn all() -> [Bipartition; 7] {
        [0b1000, 0b0100, 0b0010, 0b0001, 0b1100, 0b1010, 0b1001].map(|mask: u8| {
            // normalize so the side containing qubit 0 is stored
            let side = if mask & 0b1000 != 0 { mask } else { !mask & 0b1111 };
            Bipartition { side }
        })
    }

    fn qubits(self, on_side: bool) -> Vec<usize> {
        (0..4).filter(|k| (self.side >> (3 - k) & 1 == 1) == on_side).collect()
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |qs: Vec<usize>| -> String { qs.iter().map(|&k| ['e', 'f', 'g', 'h'][k]).collect() };
        write!(f, "{}|{}", names(self.qubits(true)), names(self.qubits(false)))
    }
}

/// Singular values of the amplitude matrix reshaped across `cut`, descending.
pub fn schmidt_coefficients(amps: &[C64; DIM], cut: Bipartition) -> Vec<f64> {
    let a = cut.qubits(true);
    let b = cut.qubits(false);
    let index = |ra: usize, rb: usize| -> usize {
        let mut idx = 0;
        for (j, &q) in a.iter().enumerate() {
            idx |= (ra >> (a.len() - 1 - j) & 1) << (3 - q);
        }
        for (j, &q) in b.iter().enumerate() {
            idx |= (rb >> (b.len() - 1 - j) & 1) << (3 - q);
        }
        idx
    };
    let m = DMatrix::from_fn(1 << a.len(), 1 << b.len(), |r, c| amps[index(r, c)]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Largest squared Schmidt coefficient over all seven cuts, with the cut
/// that attains it (earliest in [`Bipartition::all`] on ties).
pub fn max_schmidt_overlap(state: &QubitState4) -> (f64, Bipartition) {
    let mut best = (f64::NEG_INFINITY, Bipartition::all()[0]);
    for cut in Bipartition::all() {
        let s = schmidt_coefficients(state.amplitudes(), cut)[0].powi(2);
        if s > best.0 + 1e-15 {
            best = (s, cut);
        }
    }
    best
}

/// `c(gamma)`: maximal squared overlap of `Psi(gamma)` with any biseparable state.
pub fn biseparable_bound(gamma: f64) -> Result<f64> {
    Ok(max_schmidt_overlap(&state_at(gamma)?.state).0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub c: f64,
    pub fidelity: f64,
    pub witness_value: f64,
    pub detected: bool,
}

impl WitnessReport {
    pub fn new(c: f64, fidelity: f64) -> Self {
        let witness_value = c - fidelity;
        WitnessReport {
            c,
            fidelity,
            witness_value,
            detected: witness_value < 0.0,
        }
    }
}

/// `Tr(W rho)` for `W = c(gamma) 1 - |Psi(gamma)><Psi(gamma)|`.
pub fn witness_report(state: &impl FourQubit, gamma: f64) -> Result<WitnessReport> {
    Ok(WitnessReport::new(biseparable_bound(gamma)?, fidelity(state, gamma)?))
}

/// `Tr(W rho_pair)` with `W = 1/2 - |psi+><psi+|` on the pairs `(e, f)` and `(g, h)`.
pub fn pairwise_witness(state: &impl FourQubit) -> Result<(f64, f64)> {
    check_input(state)?;
    let rho = state.density();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let psi_plus = [C64::default(), C64::new(r, 0.0), C64::new(r, 0.0), C64::default()];
    let value = |keep: [usize; 2]| 0.5 - rho.partial_trace(&keep).expectation_pure(&psi_plus);
    Ok((value([0, 1]), value([2, 3])))
}
