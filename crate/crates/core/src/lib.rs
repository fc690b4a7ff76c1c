//! Linear-optics simulation of a tunable family of four-photon entangled states.
//!
//! A second-order down-conversion source is pushed through a half-wave plate
//! at angle `gamma`, a polarizing beam splitter, a half-wave plate at `pi/4`
//! and two 50/50 splitters. Conditioning on one photon in each output mode
//! `e, f, g, h` yields
//!
//! ```text
//! |Psi(gamma)> = alpha(gamma) |psi+>|psi+> + sqrt(1 - alpha^2) |GHZ>
//! ```
//!
//! The crate derives that state from the Fock-space simulation ([`circuit`]),
//! provides the closed form ([`family`]), and analyzes the family
//! ([`analysis`]), including simulated tomography ([`tomo`]) and noise
//! models ([`imperfections`]).

pub mod analysis;
pub mod circuit;
pub mod error;
pub mod family;
pub mod fock;
pub mod imperfections;
pub mod qubit;
pub mod tomo;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

use std::f64::consts::FRAC_PI_4;

/// Upper end of the tuning range of the wave-plate angle.
pub const GAMMA_MAX: f64 = FRAC_PI_4;

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    // allow a few ulps of slack so that grids built as k * (pi/4) / n hit the endpoint
    if gamma.is_finite() && (-1e-15..=GAMMA_MAX + 1e-15).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::GammaOutOfRange { gamma })
    }
}

/// `n` equally spaced angles spanning `[0, pi/4]` inclusive.
pub fn gamma_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    GAMMA_MAX
                } else {
                    GAMMA_MAX * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
