//! Noise on the ideal pipeline: multi-pair emission with lossy detection,
//! partially distinguishable photons, and white noise.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::{full_register, propagate, second_order_terms, spdc_pairs, standard_elements, OUTPUTS};
use crate::family::state_at;
use crate::fock::FockState;
use crate::qubit::{basis_index, DensityMatrix, DIM};
use crate::{check_gamma, Error, Result};

/// Largest supported pair-generation strength.
pub const MAX_PAIR_PROBABILITY: f64 = 0.2;

/// Source and detection parameters; the default is the ideal set-up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Squeezing parameter `tau` of the down-conversion source.
    pub pair_probability: f64,
    /// Per-photon detection efficiency at each output mode.
    pub efficiency: f64,
    /// Weight of the indistinguishable-photon part.
    pub visibility: f64,
    /// White-noise fraction `q`.
    pub depolarizing: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            pair_probability: 0.0,
            efficiency: 1.0,
            visibility: 1.0,
            depolarizing: 0.0,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, range| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::ParameterOutOfRange { name, value, range })
            }
        };
        let t = self.pair_probability;
        check(
            "pair_probability",
            t,
            (0.0..=MAX_PAIR_PROBABILITY).contains(&t),
            "[0, 0.2]",
        )?;
        let e = self.efficiency;
        check("efficiency", e, e > 0.0 && e <= 1.0, "(0, 1]")?;
        let v = self.visibility;
        check("visibility", v, (0.0..=1.0).contains(&v), "[0, 1]")?;
        let q = self.depolarizing;
        check("depolarizing", q, (0.0..=1.0).contains(&q), "[0, 1]")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: NoiseConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Probability of exactly `n` pairs, `(n + 1) tanh^(2n) tau / cosh^4 tau`.
pub fn pair_number_probability(tau: f64, n: u32) -> f64 {
    f64::from(n + 1) * tau.tanh().powi(2 * n as i32) / tau.cosh().powi(4)
}

/// Fourfold events with two- and three-pair emission and lossy detectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HigherOrderReport {
    /// Fidelity of the post-selected mixed state to `Psi(gamma)`.
    pub fidelity: f64,
    /// Fourfold event probability per pulse.
    pub rate_weight: f64,
    /// Share of fourfold events that come from three pairs.
    pub higher_order_fraction: f64,
}

fn binomial(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Fourfold part of a propagated state after independent loss of each
/// photon at the output modes, grouped by the orthogonal record of lost
/// photons (one sub-normalized pure component per record).
fn lossy_fourfold_components(state: &FockState, efficiency: f64) -> Vec<[C64; DIM]> {
    let reg = state.register();
    let outputs: Vec<Option<usize>> = reg
        .modes()
        .iter()
        .map(|m| OUTPUTS.iter().position(|&s| s == m.spatial))
        .collect();
    let mut groups: BTreeMap<Vec<u8>, [C64; DIM]> = BTreeMap::new();
    for (occ, amp) in state.terms() {
        // enumerate how many photons each mode loses
        let mut lost = vec![0u8; occ.len()];
        loop {
            let mut pols = [None; 4];
            let mut ok = true;
            let mut factor = 1.0;
            for (m, (&n, &l)) in occ.iter().zip(&lost).enumerate() {
                let kept = n - l;
                match outputs[m] {
                    Some(k) => {
                        factor *=
                            (binomial(n, l) * efficiency.powi(i32::from(kept)) * (1.0 - efficiency).powi(i32::from(l)))
                                .sqrt();
                        if kept > 1 || (kept == 1 && pols[k].is_some()) {
                            ok = false;
                        } else if kept == 1 {
                            pols[k] = Some(reg.modes()[m].polarization);
                        }
                    }
                    // photons outside the outputs are never detected
                    None => ok &= l == 0,
                }
            }
            if ok && factor > 0.0 && pols.iter().all(Option::is_some) {
                let env: Vec<u8> = (0..occ.len())
                    .map(|m| if outputs[m].is_some() { lost[m] } else { occ[m] })
                    .collect();
                let v = groups.entry(env).or_insert([C64::default(); DIM]);
                v[basis_index(pols.map(|p| p.expect("checked")))] += amp * factor;
            }
            // next loss pattern, odometer style
            let mut m = 0;
            while m < occ.len() && (outputs[m].is_none() || lost[m] == occ[m]) {
                if outputs[m].is_some() {
                    lost[m] = 0;
                }
                m += 1;
            }
            if m == occ.len() {
                break;
            }
            lost[m] += 1;
        }
    }
    groups.into_values().collect()
}

/// `sum_k |v_k><v_k|`.
fn mixture(components: &[[C64; DIM]]) -> DMatrix<C64> {
    components.iter().fold(DMatrix::zeros(DIM, DIM), |acc, v| {
        let v = DVector::from_column_slice(v);
        acc + &v * v.adjoint()
    })
}

/// Unnormalized fourfold operator per pulse and its split into the two-pair
/// and three-pair contributions.
fn fourfold_operator(gamma: f64, cfg: &NoiseConfig) -> Result<(DMatrix<C64>, f64, f64)> {
    check_gamma(gamma)?;
    cfg.validate()?;
    let elements = standard_elements(gamma);
    let tau = cfg.pair_probability;
    let eta = cfg.efficiency;
    let two = propagate(&spdc_pairs(2, full_register())?, &elements)?;
    let rho2: DMatrix<C64> = mixture(&lossy_fourfold_components(&two, eta));
    let three = propagate(&spdc_pairs(3, full_register())?, &elements)?;
    let rho3: DMatrix<C64> = mixture(&lossy_fourfold_components(&three, eta));
    // P(3) / P(2), so that weights stay finite at tau = 0
    let ratio = 4.0 / 3.0 * tau.tanh().powi(2);
    let w2 = rho2.trace().re;
    let w3 = ratio * rho3.trace().re;
    Ok((rho2 + rho3 * C64::from(ratio), w2, w3))
}

/// Fidelity and event weight of the fourfold state with up to three pairs
/// emitted and each output photon detected with probability `efficiency`.
pub fn higher_order_fourfolds(gamma: f64, cfg: &NoiseConfig) -> Result<HigherOrderReport> {
    let (rho, w2, w3) = fourfold_operator(gamma, cfg)?;
    let total = w2 + w3;
    if total == 0.0 {
        return Err(Error::ZeroProbability);
    }
    let target = state_at(gamma)?.state;
    let rho = DensityMatrix::new(rho / C64::from(total))?;
    Ok(HigherOrderReport {
        fidelity: rho.expectation_pure(target.amplitudes()),
        rate_weight: pair_number_probability(cfg.pair_probability, 2) * total,
        higher_order_fraction: w3 / total,
    })
}

/// Fourfold state when the photons of the three second-order source terms
/// cannot interfere: their outcome probabilities add instead of amplitudes.
pub fn distinguishable_density(gamma: f64) -> Result<DensityMatrix> {
    check_gamma(gamma)?;
    let elements = standard_elements(gamma);
    let mut rho = DMatrix::zeros(DIM, DIM);
    for (_, term) in second_order_terms(&full_register()) {
        let out = propagate(&term, &elements)?;
        rho += mixture(&lossy_fourfold_components(&out, 1.0));
    }
    let tr = rho.trace().re;
    if tr == 0.0 {
        return Err(Error::ZeroProbability);
    }
    DensityMatrix::new(rho / C64::from(tr))
}

/// `V |Psi><Psi| + (1 - V) rho_dist`.
pub fn visibility_noise(gamma: f64, visibility: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::ParameterOutOfRange {
            name: "visibility",
            value: visibility,
            range: "[0, 1]",
        });
    }
    let ideal = state_at(gamma)?.state.to_density();
    if visibility == 1.0 {
        return Ok(ideal);
    }
    Ok(ideal.mix(&distinguishable_density(gamma)?, visibility))
}

/// All configured noise on `Psi(gamma)`: the two-pair part is degraded by
/// the visibility, three-pair events are added with their relative weight,
/// and white noise is mixed in last.
pub fn noisy_state(gamma: f64, cfg: &NoiseConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    let two_pair = visibility_noise(gamma, cfg.visibility)?;
    let rho = if cfg.pair_probability > 0.0 && cfg.efficiency < 1.0 {
        let (full, w2, w3) = fourfold_operator(gamma, cfg)?;
        let ideal_part = state_at(gamma)?.state.to_density().into_matrix() * C64::from(w2);
        let three_pair = full - ideal_part;
        DensityMatrix::new((two_pair.into_matrix() * C64::from(w2) + three_pair) / C64::from(w2 + w3))?
    } else {
        two_pair
    };
    Ok(rho.depolarized(cfg.depolarizing))
}
