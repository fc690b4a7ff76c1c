//! Simulated 81-setting tomography: Poissonian counts, linear inversion and
//! projection onto physical density matrices.

mod io;

pub use io::{density_from_json, density_to_json, read_counts_csv, write_counts_csv};

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{fidelity, pairwise_witness, witness_report, WitnessReport};
use crate::imperfections::{noisy_state, NoiseConfig};
use crate::qubit::{pauli_matrix, DensityMatrix, FourQubit, MeasurementSetting, PauliString, DIM};
use crate::{Error, Result};

/// Number of local settings, `3^4`.
pub const N_SETTINGS: usize = 81;

/// Born-rule probabilities of the 16 outcomes of `setting`.
pub fn outcome_probabilities(state: &impl FourQubit, setting: MeasurementSetting) -> [f64; DIM] {
    std::array::from_fn(|o| state.probability_of(&setting.outcome_vector(o)))
}

/// Counts of one setting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub setting: MeasurementSetting,
    pub counts: [u64; DIM],
    /// Mean number of events the setting was run for.
    pub expected_total: f64,
}

/// Draws Poisson counts with mean `shots * p` for every outcome of all 81
/// settings. Setting `k` uses stream `k` of a ChaCha8 generator seeded with
/// `seed`, so the result does not depend on scheduling.
pub fn simulate_counts(state: &(impl FourQubit + Sync), shots: u64, seed: u64) -> Result<Vec<CountRecord>> {
    if shots == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "shots",
            value: 0.0,
            range: ">= 1",
        });
    }
    let n = shots as f64;
    Ok(MeasurementSetting::all()
        .into_par_iter()
        .map(|setting| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(setting.index() as u64);
            let probs = outcome_probabilities(state, setting);
            let counts = probs.map(|p| {
                let mean = n * p.max(0.0);
                if mean > 0.0 {
                    Poisson::new(mean).expect("positive finite mean").sample(&mut rng) as u64
                } else {
                    0
                }
            });
            CountRecord {
                setting,
                counts,
                expected_total: n,
            }
        })
        .collect())
}

/// Relative outcome frequencies for each of the 81 settings, by setting index.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable {
    freqs: Vec<[f64; DIM]>,
}

impl FrequencyTable {
    /// Pools the records per setting; every setting must be present with a
    /// non-zero total.
    pub fn from_records(records: &[CountRecord]) -> Result<Self> {
        let mut totals = vec![[0u64; DIM]; N_SETTINGS];
        let mut seen = [false; N_SETTINGS];
        for r in records {
            let k = r.setting.index();
            seen[k] = true;
            for (t, c) in totals[k].iter_mut().zip(r.counts) {
                *t += c;
            }
        }
        let mut freqs = Vec::with_capacity(N_SETTINGS);
        for (k, counts) in totals.iter().enumerate() {
            let setting = MeasurementSetting::from_index(k);
            if !seen[k] {
                return Err(Error::MissingSetting(setting.to_string()));
            }
            let sum: u64 = counts.iter().sum();
            if sum == 0 {
                return Err(Error::EmptySetting(setting.to_string()));
            }
            freqs.push(counts.map(|c| c as f64 / sum as f64));
        }
        Ok(FrequencyTable { freqs })
    }

    /// Infinite-shot frequencies.
    pub fn exact(state: &impl FourQubit) -> Self {
        FrequencyTable {
            freqs: MeasurementSetting::all()
                .into_iter()
                .map(|s| outcome_probabilities(state, s))
                .collect(),
        }
    }

    pub fn get(&self, setting: MeasurementSetting) -> &[f64; DIM] {
        &self.freqs[setting.index()]
    }

    /// Estimate of `<P>`, averaged over every setting that measures `P`.
    pub fn expectation(&self, p: PauliString) -> f64 {
        let (sum, n) =
            MeasurementSetting::all()
                .into_iter()
                .filter(|s| s.covers(p))
                .fold((0.0, 0usize), |(sum, n), s| {
                    let f = self.get(s);
                    let v: f64 = (0..DIM).map(|o| f[o] * MeasurementSetting::eigenvalue(p, o)).sum();
                    (sum + v, n + 1)
                });
        sum / n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    LinearInversion,
    PhysicalProjection,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::LinearInversion => "linear",
            Method::PhysicalProjection => "physical",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Method::LinearInversion),
            "physical" => Ok(Method::PhysicalProjection),
            _ => Err(Error::Parse(format!(
                "unknown method '{s}' (expected linear or physical)"
            ))),
        }
    }
}

/// `(1/16) sum_P <P> P` from the table.
pub fn linear_inversion(table: &FrequencyTable) -> Result<DensityMatrix> {
    let mut m = DMatrix::zeros(DIM, DIM);
    for p in PauliString::all() {
        m += pauli_matrix(p) * C64::from(table.expectation(p));
    }
    DensityMatrix::new(m / C64::from(DIM as f64))
}

/// Nearest unit-trace positive semidefinite matrix in Frobenius norm,
/// together with the negative-eigenvalue mass of the input.
///
/// The eigenvalues are projected onto the probability simplex: shifted by a
/// common amount and clipped at zero.
pub fn project_physical(rho: &DensityMatrix) -> (DensityMatrix, f64) {
    let (values, vectors) = rho.eigen();
    let negative_mass: f64 = values.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut theta = 0.0;
    let mut cum = 0.0;
    for (k, &mu) in sorted.iter().enumerate() {
        cum += mu;
        let t = (cum - 1.0) / (k + 1) as f64;
        if mu - t > 0.0 {
            theta = t;
        }
    }
    let clipped: Vec<f64> = values.iter().map(|v| (v - theta).max(0.0)).collect();
    let d = rho.dim();
    let diag = DMatrix::from_fn(d, d, |r, c| if r == c { C64::from(clipped[r]) } else { C64::default() });
    let m = &vectors * diag * vectors.adjoint();
    // enforce exact Hermiticity against rounding
    let m = (&m + m.adjoint()) * C64::from(0.5);
    (
        DensityMatrix::new(m).expect("simplex projection keeps unit trace"),
        negative_mass,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub rho: DensityMatrix,
    pub method: Method,
    /// Negative-eigenvalue mass of the linear-inversion estimate.
    pub negative_mass: f64,
    pub linear: DensityMatrix,
}

pub fn reconstruct_table(table: &FrequencyTable, method: Method) -> Result<Reconstruction> {
    let linear = linear_inversion(table)?;
    let (projected, negative_mass) = project_physical(&linear);
    let rho = match method {
        Method::LinearInversion => linear.clone(),
        Method::PhysicalProjection => projected,
    };
    Ok(Reconstruction {
        rho,
        method,
        negative_mass,
        linear,
    })
}

pub fn reconstruct(records: &[CountRecord], method: Method) -> Result<Reconstruction> {
    reconstruct_table(&FrequencyTable::from_records(records)?, method)
}

/// End-to-end result of a simulated tomography run.
#[derive(Clone, Debug, PartialEq)]
pub struct TomographyReport {
    pub witness: WitnessReport,
    /// Pair witnesses on `(e, f)` and `(g, h)` of the reconstructed state.
    pub pairwise: (f64, f64),
    pub reconstruction: Reconstruction,
    /// Simulated counts; `None` for exact frequencies.
    pub records: Option<Vec<CountRecord>>,
    /// Fidelity of the noisy input state itself.
    pub true_fidelity: f64,
}

/// Noisy `Psi(gamma)` -> counts (or exact frequencies when `shots` is `None`)
/// -> reconstruction -> fidelity and witness against `Psi(gamma)`.
pub fn reconstruct_and_report(
    gamma: f64,
    noise: &NoiseConfig,
    shots: Option<u64>,
    seed: u64,
    method: Method,
) -> Result<TomographyReport> {
    let state = noisy_state(gamma, noise)?;
    let records = shots.map(|n| simulate_counts(&state, n, seed)).transpose()?;
    let table = match &records {
        Some(r) => FrequencyTable::from_records(r)?,
        None => FrequencyTable::exact(&state),
    };
    let reconstruction = reconstruct_table(&table, method)?;
    let witness = witness_report(&reconstruction.rho, gamma)?;
    if method == Method::PhysicalProjection {
        let before = fidelity(&reconstruction.linear, gamma)?;
        assert!(
            before - witness.fidelity <= reconstruction.negative_mass + 1e-12,
            "projection lost more fidelity than the negative mass"
        );
    }
    Ok(TomographyReport {
        witness,
        pairwise: pairwise_witness(&reconstruction.rho)?,
        true_fidelity: fidelity(&state, gamma)?,
        reconstruction,
        records,
    })
}
