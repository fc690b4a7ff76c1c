use serde::Serialize;

use super::check_input;
use super::correlations::{correlations, ZERO_TOL};
use crate::family::state_at;
use crate::qubit::{FourQubit, MeasurementSetting, PauliString, DIM};
use crate::{Error, Result};

/// Largest cover accepted for a family member.
pub const MAX_SETTINGS: usize = 21;

/// Local settings whose outcome statistics fix every non-zero correlation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SettingCover {
    pub gamma: f64,
    /// Non-zero correlations of `Psi(gamma)`, in index order.
    pub terms: Vec<PauliString>,
    /// Settings in the order the greedy pass picked them.
    pub settings: Vec<MeasurementSetting>,
    /// For each setting, the non-zero terms it measures.
    pub covered_terms: Vec<Vec<PauliString>>,
}

/// Greedy set cover of `terms`: repeatedly takes the setting that covers the
/// most uncovered terms, the lowest-indexed one on ties.
pub fn greedy_cover(terms: &[PauliString]) -> Vec<MeasurementSetting> {
    let all = MeasurementSetting::all();
    let mut uncovered: Vec<PauliString> = terms.to_vec();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let (best, gain) = all
            .iter()
            .map(|s| (*s, uncovered.iter().filter(|t| s.covers(**t)).count()))
            .fold((all[0], 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if gain == 0 {
            break;
        }
        uncovered.retain(|t| !best.covers(*t));
        chosen.push(best);
    }
    chosen
}

/// Greedy setting cover for the fidelity of `Psi(gamma)`.
pub fn setting_cover(gamma: f64) -> Result<SettingCover> {
    let t = correlations(&state_at(gamma)?.state)?;
    let terms: Vec<PauliString> = t.nonzero(ZERO_TOL).into_iter().map(|(p, _)| p).collect();
    let settings = greedy_cover(&terms);
    if settings.len() > MAX_SETTINGS {
        return Err(Error::CoverTooLarge(settings.len()));
    }
    let covered_terms = settings
        .iter()
        .map(|s| terms.iter().copied().filter(|t| s.covers(*t)).collect())
        .collect();
    Ok(SettingCover {
        gamma,
        terms,
        settings,
        covered_terms,
    })
}

/// Fidelity to `Psi(cover.gamma)` using only the outcome probabilities of the
/// cover's settings: each term is read off the first setting that covers it.
pub fn fidelity_from_settings(state: &impl FourQubit, cover: &SettingCover) -> Result<f64> {
    check_input(state)?;
    let target = correlations(&state_at(cover.gamma)?.state)?;
    let probs: Vec<[f64; DIM]> = cover
        .settings
        .iter()
        .map(|s| std::array::from_fn(|o| state.probability_of(&s.outcome_vector(o))))
        .collect();
    let mut sum = 0.0;
    for &term in &cover.terms {
        let k = cover
            .settings
            .iter()
            .position(|s| s.covers(term))
            .ok_or_else(|| Error::MissingSetting(format!("for term {term}")))?;
        let value: f64 = (0..DIM)
            .map(|o| probs[k][o] * MeasurementSetting::eigenvalue(term, o))
            .sum();
        sum += target.get(term) * value;
    }
    Ok(sum / 16.0)
}
