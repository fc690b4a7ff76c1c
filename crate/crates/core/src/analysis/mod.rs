//! Correlation tensor, fidelity, entanglement witnesses, measurement-setting
//! covers and structural checks on the family.

mod correlations;
mod cover;
mod structure;
mod witness;

pub use correlations::{
    class_moduli, correlation_classes, correlation_sweep, correlations, fidelity, CorrelationClass, CorrelationTensor,
    ZERO_TOL,
};
pub use cover::{fidelity_from_settings, greedy_cover, setting_cover, SettingCover, MAX_SETTINGS};
pub use structure::{
    apply_local, dicke_projection, haar_unitary, lu_deviation, lu_invariance_check, lu_invariance_check_in_frame,
    three_tangle, ProjectionBasis, ProjectionOutcome, ProjectionResult, TripartiteClass, TANGLE_THRESHOLD,
};
pub use witness::{
    biseparable_bound, max_schmidt_overlap, pairwise_witness, schmidt_coefficients, witness_report, Bipartition,
    WitnessReport,
};

use crate::qubit::{FourQubit, N_QUBITS};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-9;

fn check_input(state: &impl FourQubit) -> Result<()> {
    if state.qubits() != N_QUBITS {
        return Err(Error::InvalidDensity(format!(
            "expected 4 qubits, got {}",
            state.qubits()
        )));
    }
    let w = state.weight();
    if (w - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm: w });
    }
    Ok(())
}
