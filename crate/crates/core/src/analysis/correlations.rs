use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::check_input;
use crate::family::state_at;
use crate::qubit::{FourQubit, PauliString};
use crate::{check_gamma, Error, Result};

/// Entries below this modulus count as zero.
pub const ZERO_TOL: f64 = 1e-10;
const CLASS_TOL: f64 = 1e-10;

/// `T_ijkl = <s_i (x) s_j (x) s_k (x) s_l>` for all 256 Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    values: [f64; 256],
}

impl CorrelationTensor {
    pub fn get(&self, p: PauliString) -> f64 {
        self.values[p.index()]
    }

    /// Values in [`PauliString::all`] order.
    pub fn values(&self) -> &[f64; 256] {
        &self.values
    }

    /// Entries with `|T| > tol`, in index order.
    pub fn nonzero(&self, tol: f64) -> Vec<(PauliString, f64)> {
        PauliString::all()
            .map(|p| (p, self.get(p)))
            .filter(|(_, v)| v.abs() > tol)
            .collect()
    }

    /// `(1/16) sum T^2`, which is the purity.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / 16.0
    }
}

/// Full correlation tensor of a normalized four-qubit state.
pub fn correlations(state: &impl FourQubit) -> Result<CorrelationTensor> {
    check_input(state)?;
    let mut values = [0.0; 256];
    for p in PauliString::all() {
        values[p.index()] = state.expectation(p).re;
    }
    Ok(CorrelationTensor { values })
}

/// The five modulus classes of non-zero correlations of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CorrelationClass {
    I,
    II,
    III,
    IV,
    V,
}

// slot permutations generating the symmetry group of the family
const GENERATORS: [[usize; 4]; 3] = [[2, 3, 0, 1], [1, 0, 2, 3], [0, 1, 3, 2]];

impl CorrelationClass {
    pub const ALL: [CorrelationClass; 5] = [
        CorrelationClass::I,
        CorrelationClass::II,
        CorrelationClass::III,
        CorrelationClass::IV,
        CorrelationClass::V,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CorrelationClass::I => "i",
            CorrelationClass::II => "ii",
            CorrelationClass::III => "iii",
            CorrelationClass::IV => "iv",
            CorrelationClass::V => "v",
        }
    }

    /// Entry whose modulus is reported for the class.
    pub fn representative(self) -> PauliString {
        self.seeds()[0].parse().expect("seed strings are valid")
    }

    fn seeds(self) -> &'static [&'static str] {
        match self {
            CorrelationClass::I => &["zzzz", "0000", "xxxx", "yyyy"],
            CorrelationClass::II => &["0z0z", "xyxy"],
            CorrelationClass::III => &["00zz", "xxyy"],
            CorrelationClass::IV => &["0x0x", "0y0y", "zxzx", "zyzy"],
            CorrelationClass::V => &["00xx", "00yy", "zzxx", "zzyy"],
        }
    }

    /// All members: the orbits of the seed entries under the pair swap and
    /// the swaps inside each pair.
    pub fn members(self) -> Vec<PauliString> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<PauliString> = self
            .seeds()
            .iter()
            .map(|s| s.parse().expect("seed strings are valid"))
            .collect();
        while let Some(p) = stack.pop() {
            if seen.insert(p) {
                stack.extend(GENERATORS.iter().map(|&g| p.permuted(g)));
            }
        }
        seen.into_iter().collect()
    }

    pub fn of(p: PauliString) -> Option<CorrelationClass> {
        CorrelationClass::ALL.into_iter().find(|c| c.members().contains(&p))
    }
}

impl fmt::Display for CorrelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `|T|` of each class representative.
pub fn class_moduli(state: &impl FourQubit) -> [f64; 5] {
    CorrelationClass::ALL.map(|c| state.expectation(c.representative()).re.abs())
}

/// Class moduli of the family member at `gamma`, checking that every member
/// of each class has the same modulus.
pub fn correlation_classes(gamma: f64) -> Result<[f64; 5]> {
    check_gamma(gamma)?;
    let t = correlations(&state_at(gamma)?.state)?;
    let mut out = [0.0; 5];
    for (slot, class) in CorrelationClass::ALL.into_iter().enumerate() {
        let rep = class.representative();
        let vr = t.get(rep).abs();
        for m in class.members() {
            let vm = t.get(m).abs();
            if (vm - vr).abs() > CLASS_TOL {
                return Err(Error::ClassMismatch {
                    class: class.label(),
                    a: rep.to_string(),
                    va: vr,
                    b: m.to_string(),
                    vb: vm,
                });
            }
        }
        out[slot] = vr;
    }
    Ok(out)
}

/// [`correlation_classes`] over many angles, in input order.
pub fn correlation_sweep(gammas: &[f64]) -> Result<Vec<[f64; 5]>> {
    gammas.par_iter().map(|&g| correlation_classes(g)).collect()
}

/// `<Psi(gamma)|rho|Psi(gamma)>`.
pub fn fidelity(state: &impl FourQubit, gamma: f64) -> Result<f64> {
    check_input(state)?;
    let target = state_at(gamma)?.state;
    Ok(state.probability_of(target.amplitudes()))
}
