//! The optical set-up: down-conversion source, wave plates, polarizing beam
//! splitter, balanced beam splitters and fourfold post-selection.
//!
//! Conventions (all element matrices map input to output creation operators):
//!
//! * half-wave plate at angle `theta`: Jones matrix `[[cos 2t, sin 2t], [sin 2t, -cos 2t]]`;
//! * balanced splitter `c -> (e, f)`: `c^dag -> (e^dag + i f^dag) / sqrt 2`;
//! * polarizing splitter: `H` is transmitted (`a -> c`, `b -> d`) with
//!   coefficient 1, `V` is reflected (`a -> d`, `b -> c`) with coefficient `i`.
//!
//! With these choices the post-selected state equals the closed form of
//! [`family`](crate::family) amplitude by amplitude, signs included.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::fock::{postselect, DetectionPattern, FockState, ModeLabel, ModeTransform, Polarization, Register, Spatial};
use crate::qubit::{basis_index, QubitState4, DIM};
use crate::{check_gamma, Error, Result};

use Polarization::{H, V};

/// Detected output modes, one per qubit.
pub const OUTPUTS: [Spatial; 4] = [Spatial::E, Spatial::F, Spatial::G, Spatial::H];

/// One optical element of the pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Element {
    HalfWavePlate {
        mode: Spatial,
        angle: f64,
    },
    /// Overlaps `a` and `b` into `c` and `d`.
    PolarizingBeamSplitter,
    BeamSplitter {
        input: Spatial,
        outputs: (Spatial, Spatial),
    },
}

impl Element {
    pub fn transform(&self) -> ModeTransform {
        let m = ModeLabel::new;
        let c = |re: f64, im: f64| C64::new(re, im);
        let built = match *self {
            Element::HalfWavePlate { mode, angle } => {
                let (c2, s2) = ((2.0 * angle).cos(), (2.0 * angle).sin());
                ModeTransform::new(
                    DMatrix::from_row_slice(2, 2, &[c(c2, 0.0), c(s2, 0.0), c(s2, 0.0), c(-c2, 0.0)]),
                    vec![m(mode, H), m(mode, V)],
                )
            }
            Element::PolarizingBeamSplitter => {
                use Spatial::{A, B, C, D};
                let modes = vec![m(A, H), m(A, V), m(B, H), m(B, V), m(C, H), m(C, V), m(D, H), m(D, V)];
                // (input, output, coefficient); the c,d -> a,b half only completes the unitary
                let routes = [
                    (0, 4, c(1.0, 0.0)),
                    (1, 7, c(0.0, 1.0)),
                    (2, 6, c(1.0, 0.0)),
                    (3, 5, c(0.0, 1.0)),
                    (4, 0, c(1.0, 0.0)),
                    (5, 3, c(0.0, 1.0)),
                    (6, 2, c(1.0, 0.0)),
                    (7, 1, c(0.0, 1.0)),
                ];
                let mut u = DMatrix::zeros(8, 8);
                for (from, to, coeff) in routes {
                    u[(to, from)] = coeff;
                }
                ModeTransform::new(u, modes)
            }
            Element::BeamSplitter {
                input,
                outputs: (o1, o2),
            } => {
                let r = FRAC_1_SQRT_2;
                let mut modes = Vec::with_capacity(6);
                let mut u = DMatrix::zeros(6, 6);
                for (p, pol) in [H, V].into_iter().enumerate() {
                    modes.extend([m(input, pol), m(o1, pol), m(o2, pol)]);
                    let o = 3 * p;
                    // input -> (o1 + i o2)/sqrt2, o1 -> (i o1 + o2)/sqrt2, o2 -> input
                    u[(o + 1, o)] = c(r, 0.0);
                    u[(o + 2, o)] = c(0.0, r);
                    u[(o + 1, o + 1)] = c(0.0, r);
                    u[(o + 2, o + 1)] = c(r, 0.0);
                    u[(o, o + 2)] = c(1.0, 0.0);
                }
                ModeTransform::new(u, modes)
            }
        };
        built.expect("element matrices are unitary by construction")
    }
}

/// Wave-plate angle plus the element list and detection pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    gamma: f64,
    pub elements: Vec<Element>,
    pub pattern: DetectionPattern,
}

impl PipelineConfig {
    /// The standard set-up for wave-plate angle `gamma` in `[0, pi/4]`.
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(PipelineConfig {
            gamma,
            elements: standard_elements(gamma),
            pattern: DetectionPattern::one_per(&OUTPUTS),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

pub fn standard_elements(gamma: f64) -> Vec<Element> {
    vec![
        Element::HalfWavePlate {
            mode: Spatial::A,
            angle: gamma,
        },
        Element::PolarizingBeamSplitter,
        Element::HalfWavePlate {
            mode: Spatial::C,
            angle: FRAC_PI_4,
        },
        Element::BeamSplitter {
            input: Spatial::C,
            outputs: (Spatial::E, Spatial::F),
        },
        Element::BeamSplitter {
            input: Spatial::D,
            outputs: (Spatial::G, Spatial::H),
        },
    ]
}

/// Every spatial mode `a..h` in both polarizations.
pub fn full_register() -> Register {
    let modes = Spatial::ALL
        .into_iter()
        .flat_map(|s| [ModeLabel::new(s, H), ModeLabel::new(s, V)])
        .collect();
    Register::new(modes).expect("distinct by construction")
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// The normalized `n`-pair emission
/// `(a_H^dag b_V^dag + a_V^dag b_H^dag)^n |vac> / (n! sqrt(n + 1))` on `register`.
pub fn spdc_pairs(n: u32, register: Register) -> Result<FockState> {
    let a = |p| ModeLabel::new(Spatial::A, p);
    let b = |p| ModeLabel::new(Spatial::B, p);
    let norm = 1.0 / ((1..=n).map(f64::from).product::<f64>() * f64::from(n + 1).sqrt());
    let monomials: Vec<(C64, Vec<ModeLabel>)> = (0..=n)
        .map(|k| {
            let mut ops = Vec::with_capacity(2 * n as usize);
            for _ in 0..k {
                ops.extend([a(H), b(V)]);
            }
            for _ in k..n {
                ops.extend([a(V), b(H)]);
            }
            (C64::from(binomial(n, k) * norm), ops)
        })
        .collect();
    FockState::from_monomials(register, &monomials)
}

/// The second-order emission
/// `[(a_H b_V)^2 + (a_V b_H)^2 + 2 a_H a_V b_H b_V] |vac> / (2 sqrt 3)`.
pub fn spdc_second_order() -> FockState {
    spdc_pairs(2, full_register()).expect("source modes are in the register")
}

/// The three monomials of the second-order source, each with its coefficient.
pub fn second_order_terms(register: &Register) -> [(&'static str, FockState); 3] {
    let a = |p| ModeLabel::new(Spatial::A, p);
    let b = |p| ModeLabel::new(Spatial::B, p);
    let k = C64::from(1.0 / (2.0 * 3f64.sqrt()));
    let term = |coeff: C64, ops: Vec<ModeLabel>| {
        FockState::from_monomials(register.clone(), &[(coeff, ops)]).expect("source modes are in the register")
    };
    [
        ("(aH bV)^2", term(k, vec![a(H), b(V), a(H), b(V)])),
        ("(aV bH)^2", term(k, vec![a(V), b(H), a(V), b(H)])),
        ("2 aH aV bH bV", term(k * 2.0, vec![a(H), a(V), b(H), b(V)])),
    ]
}

/// Pushes `state` through `elements` in order.
pub fn propagate(state: &FockState, elements: &[Element]) -> Result<FockState> {
    elements
        .iter()
        .try_fold(state.clone(), |s, el| s.apply(&el.transform()))
}

/// The (unnormalized) component of `state` matching `pattern`.
pub fn detected_component(state: &FockState, pattern: &DetectionPattern) -> FockState {
    FockState::from_terms(
        state.register().clone(),
        state
            .terms()
            .filter(|(occ, _)| pattern.matches(state.register(), occ))
            .map(|(o, a)| (o.clone(), *a))
            .collect(),
    )
}

/// Amplitudes of a state with one photon in each of `e, f, g, h`.
///
/// Terms that do not fit that pattern are an error.
pub fn fourfold_amplitudes(state: &FockState) -> Result<[C64; DIM]> {
    let reg = state.register();
    let mut amps = [C64::default(); DIM];
    for (occ, a) in state.terms() {
        let mut pols = [None; 4];
        for (mode, &n) in reg.modes().iter().zip(occ) {
            if n == 0 {
                continue;
            }
            let slot = OUTPUTS.iter().position(|&s| s == mode.spatial);
            match (slot, n) {
                (Some(k), 1) if pols[k].is_none() => pols[k] = Some(mode.polarization),
                _ => return Err(Error::InvalidDensity("term is not one photon per output mode".into())),
            }
        }
        let pols = pols.map(|p| p.expect("each output mode holds a photon"));
        amps[basis_index(pols)] += a;
    }
    Ok(amps)
}

/// Post-selected four-qubit state and its success probability.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOutput {
    pub state: QubitState4,
    pub probability: f64,
}

/// Runs the source through the configured elements and post-selects.
///
/// The returned state carries the canonical global phase of
/// [`QubitState4::with_canonical_phase`].
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutput> {
    let out = propagate(&spdc_second_order(), &cfg.elements)?;
    let (kept, probability) = postselect(&out, &cfg.pattern)?;
    if probability == 0.0 {
        return Err(Error::ZeroProbability);
    }
    let state = QubitState4::normalizing(fourfold_amplitudes(&kept)?)?.with_canonical_phase();
    Ok(PipelineOutput { state, probability })
}

/// Contribution of one source monomial to the fourfold outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct TermContribution {
    pub label: &'static str,
    /// Unnormalized fourfold amplitudes, on the scale of the full normalized source.
    pub amplitudes: [C64; DIM],
    /// Euclidean norm of `amplitudes`.
    pub magnitude: f64,
}

/// Splits the fourfold amplitude into the contributions of the three
/// monomials of the second-order source.
pub fn interference_terms(gamma: f64) -> Result<Vec<TermContribution>> {
    let cfg = PipelineConfig::new(gamma)?;
    second_order_terms(&full_register())
        .into_iter()
        .map(|(label, term)| {
            let out = propagate(&term, &cfg.elements)?;
            let kept = detected_component(&out, &cfg.pattern);
            let amplitudes = fourfold_amplitudes(&kept)?;
            let magnitude = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            Ok(TermContribution {
                label,
                amplitudes,
                magnitude,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::overlap;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn source_is_normalized_with_expected_amplitudes() {
        let s = spdc_second_order();
        assert!(close(s.norm_sqr(), 1.0, 1e-14));
        assert!(close(overlap(&s, &s).unwrap().re, 1.0, 1e-14));
        let m = |sp, p| ModeLabel::new(sp, p);
        let third = s
            .amplitude_of(&[
                (m(Spatial::A, H), 1),
                (m(Spatial::A, V), 1),
                (m(Spatial::B, H), 1),
                (m(Spatial::B, V), 1),
            ])
            .unwrap();
        assert!(close(third.re, 1.0 / 3f64.sqrt(), 1e-15) && third.im == 0.0);
        let first = s.amplitude_of(&[(m(Spatial::A, H), 2), (m(Spatial::B, V), 2)]).unwrap();
        assert!(close(first.re, 1.0 / 3f64.sqrt(), 1e-15));
        assert_eq!(s.photon_number(), Some(4));
    }

    #[test]
    fn pair_emission_orders_are_normalized() {
        for n in 0..=3 {
            let s = spdc_pairs(n, full_register()).unwrap();
            assert!(close(s.norm_sqr(), 1.0, 1e-14), "n = {n}");
            assert_eq!(s.photon_number(), Some(2 * n));
        }
    }

    #[test]
    fn element_transforms_are_unitary() {
        for el in standard_elements(0.3) {
            let u = el.transform().matrix().clone();
            let n = u.nrows();
            assert!((u.adjoint() * &u - DMatrix::<C64>::identity(n, n)).norm() < 1e-14);
        }
    }

    #[test]
    fn anchor_probabilities() {
        for (g, p) in [
            (0.0, 1.0 / 12.0),
            (PI / 8.0, 1.0 / 24.0),
            (PI / 12.0, 1.0 / 32.0),
            (PI / 4.0, 0.25),
        ] {
            let out = run_pipeline(&PipelineConfig::new(g).unwrap()).unwrap();
            assert!(close(out.probability, p, 1e-12), "gamma {g}: {}", out.probability);
        }
    }

    #[test]
    fn gamma_zero_gives_product_of_bell_pairs() {
        let out = run_pipeline(&PipelineConfig::new(0.0).unwrap()).unwrap();
        // HVHV, HVVH, VHHV, VHVH at 1/2 each
        for idx in [5, 6, 9, 10] {
            assert!((out.state.amplitude(idx) - C64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_pi_over_8_gives_ghz() {
        let out = run_pipeline(&PipelineConfig::new(PI / 8.0).unwrap()).unwrap();
        for idx in [3, 12] {
            assert!((out.state.amplitude(idx) - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_gamma() {
        assert!(matches!(PipelineConfig::new(-0.1), Err(Error::GammaOutOfRange { .. })));
        assert!(matches!(PipelineConfig::new(1.0), Err(Error::GammaOutOfRange { .. })));
    }

    #[test]
    fn interference_decomposition() {
        let at0 = interference_terms(0.0).unwrap();
        assert!(at0[0].magnitude < 1e-12 && at0[1].magnitude < 1e-12 && at0[2].magnitude > 0.1);
        let at8 = interference_terms(PI / 8.0).unwrap();
        assert!(at8[2].magnitude < 1e-12);
        assert!(at8[0].magnitude > 0.1 && at8[1].magnitude > 0.1);
        let at12 = interference_terms(PI / 12.0).unwrap();
        assert!(at12.iter().all(|t| t.magnitude > 1e-3));
        // the contributions add up to the fourfold amplitude, whose squared norm is p(gamma)
        let total: f64 = (0..DIM)
            .map(|i| at12.iter().map(|t| t.amplitudes[i]).sum::<C64>().norm_sqr())
            .sum();
        assert!(close(total, 1.0 / 32.0, 1e-12));
    }
}
