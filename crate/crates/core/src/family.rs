//! Closed form of the family `alpha |psi+>|psi+> + sqrt(1 - alpha^2) |GHZ>`,
//! its distinguished members, and the crossing points of its correlation classes.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analysis::{class_moduli, CorrelationClass};
use crate::qubit::{QubitState4, DIM};
use crate::{check_gamma, Error, Result, GAMMA_MAX};

/// Fourfold success probability `(5 - 4 cos 4g + 3 cos 8g) / 48`.
pub fn probability(gamma: f64) -> f64 {
    (5.0 - 4.0 * (4.0 * gamma).cos() + 3.0 * (8.0 * gamma).cos()) / 48.0
}

/// `alpha(g) = 2 cos 4g / sqrt(48 p(g))`.
pub fn alpha(gamma: f64) -> f64 {
    2.0 * (4.0 * gamma).cos() / (48.0 * probability(gamma)).sqrt()
}

/// `sqrt(1 - alpha^2)`, evaluated as `sqrt 8 sin^2 2g / sqrt(48 p)` to stay
/// accurate where `alpha` is close to 1.
pub fn ghz_weight(gamma: f64) -> f64 {
    8f64.sqrt() * (2.0 * gamma).sin().powi(2) / (48.0 * probability(gamma)).sqrt()
}

/// `|psi+> (x) |psi+>` with `|psi+> = (|HV> + |VH>)/sqrt 2`.
pub fn bell_pair_product() -> [C64; DIM] {
    let mut amps = [C64::default(); DIM];
    for idx in [0b0101, 0b0110, 0b1001, 0b1010] {
        amps[idx] = C64::new(0.5, 0.0);
    }
    amps
}

/// `(|HHVV> + |VVHH>)/sqrt 2`.
pub fn ghz() -> [C64; DIM] {
    let mut amps = [C64::default(); DIM];
    amps[0b0011] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[0b1100] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps
}

fn superpose(bell_weight: f64, ghz_weight: f64) -> [C64; DIM] {
    let (b, g) = (bell_pair_product(), ghz());
    std::array::from_fn(|i| b[i] * bell_weight + g[i] * ghz_weight)
}

/// Family member with amplitude `alpha` (any `|alpha| <= 1`).
pub fn state_for_alpha(alpha: f64) -> Result<QubitState4> {
    if alpha.is_nan() || alpha.abs() > 1.0 {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha,
            range: "[-1, 1]",
        });
    }
    QubitState4::new(superpose(alpha, (1.0 - alpha * alpha).sqrt()))
}

/// A point of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyPoint {
    pub gamma: f64,
    pub alpha: f64,
    pub probability: f64,
    pub state: QubitState4,
}

/// The family member at wave-plate angle `gamma`.
pub fn state_at(gamma: f64) -> Result<FamilyPoint> {
    check_gamma(gamma)?;
    let alpha = alpha(gamma);
    Ok(FamilyPoint {
        gamma,
        alpha,
        probability: probability(gamma),
        state: QubitState4::normalizing(superpose(alpha, ghz_weight(gamma)))?,
    })
}

/// Monotone piece of `alpha(gamma)`: `[0, pi/8]` (alpha >= 0) or `[pi/8, pi/4]` (alpha <= 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    First,
    Second,
}

impl Branch {
    fn name(self) -> &'static str {
        match self {
            Branch::First => "first",
            Branch::Second => "second",
        }
    }
}

/// Inverts `alpha(gamma)` on one branch by bisection.
pub fn gamma_for_alpha(target: f64, branch: Branch) -> Result<f64> {
    if target == 0.0 {
        return Ok(FRAC_PI_8);
    }
    let (mut lo, mut hi) = match branch {
        Branch::First => (0.0, FRAC_PI_8),
        Branch::Second => (FRAC_PI_8, GAMMA_MAX),
    };
    // alpha decreases on [0, pi/4]
    let (a_hi_end, a_lo_end) = (alpha(lo), alpha(hi));
    if !(target <= a_hi_end + 1e-15 && target >= a_lo_end - 1e-15) {
        return Err(Error::NoSolution {
            alpha: target,
            branch: branch.name(),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if alpha(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The nine distinguished states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StateName {
    BellPairProduct,
    Sa,
    Sb,
    Psi4Plus,
    ScPlus,
    Dicke,
    Ghz,
    ScMinus,
    Psi4Minus,
}

impl fmt::Display for StateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateName::BellPairProduct => "psi+psi+",
            StateName::Sa => "S^a",
            StateName::Sb => "S^b",
            StateName::Psi4Plus => "Psi4+",
            StateName::ScPlus => "S^c+",
            StateName::Dicke => "D4(2)",
            StateName::Ghz => "GHZ",
            StateName::ScMinus => "S^c-",
            StateName::Psi4Minus => "Psi4-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: StateName,
    pub gamma: f64,
    pub alpha: f64,
}

/// The nine distinguished states ordered by `gamma`.
pub fn catalog() -> Vec<CatalogEntry> {
    let s3 = 3f64.sqrt();
    let sa = ((3.0 + s3) / 6.0).sqrt();
    let sc = ((3.0 - s3) / 6.0).sqrt();
    let by_alpha = |name, a: f64, branch| CatalogEntry {
        name,
        gamma: gamma_for_alpha(a, branch).expect("catalog amplitudes lie on their branch"),
        alpha: a,
    };
    let exact = |name, gamma: f64, a: f64| CatalogEntry { name, gamma, alpha: a };
    let mut entries = vec![
        exact(StateName::BellPairProduct, 0.0, 1.0),
        by_alpha(StateName::Sa, sa, Branch::First),
        by_alpha(StateName::Sb, FRAC_1_SQRT_2, Branch::First),
        by_alpha(StateName::Psi4Plus, (1.0f64 / 3.0).sqrt(), Branch::First),
        by_alpha(StateName::ScPlus, sc, Branch::First),
        exact(StateName::Dicke, PI / 12.0, (2.0f64 / 3.0).sqrt()),
        exact(StateName::Ghz, FRAC_PI_8, 0.0),
        by_alpha(StateName::ScMinus, -sc, Branch::Second),
        exact(StateName::Psi4Minus, FRAC_PI_4, -(1.0f64 / 3.0).sqrt()),
    ];
    entries.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    entries
}

pub fn catalog_entry(name: StateName) -> CatalogEntry {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .expect("every name is catalogued")
}

/// Point where two correlation classes have equal modulus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub gamma: f64,
    pub classes: (CorrelationClass, CorrelationClass),
    /// Common modulus of the two classes at `gamma`.
    pub value: f64,
}

/// Grid spacing for bracketing crossings.
pub const CROSSING_GRID_STEP: f64 = 1e-4;
const ROOT_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-8;
const TOUCH_TOL: f64 = 1e-9;
const EDGE_TOL: f64 = 1e-6;

fn class_values(gamma: f64) -> [f64; 5] {
    let state =
        QubitState4::normalizing(superpose(alpha(gamma), ghz_weight(gamma))).expect("family states are non-zero");
    class_moduli(&state)
}

/// All `gamma` in `(0, pi/4)`, at least `1e-6` from either end, where two of the five correlation classes meet.
///
/// Transversal crossings are bracketed by sign changes on a grid of spacing
/// [`CROSSING_GRID_STEP`] and bisected to `1e-10`. Touching points (where the
/// difference reaches zero without changing sign, as at the GHZ state) are
/// grid-local minima of `|difference|` refined by golden-section search and
/// kept when the difference there is below `1e-9`.
pub fn find_crossings() -> Vec<Crossing> {
    let n = (GAMMA_MAX / CROSSING_GRID_STEP).ceil() as usize;
    let h = GAMMA_MAX / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let values: Vec<[f64; 5]> = grid.iter().map(|&g| class_values(g)).collect();

    let mut out = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            let diff = |g: f64| {
                let v = class_values(g);
                v[i] - v[j]
            };
            let d: Vec<f64> = values.iter().map(|v| v[i] - v[j]).collect();
            let mut roots: Vec<f64> = Vec::new();
            for k in 1..n {
                if d[k] == 0.0 {
                    roots.push(grid[k]);
                } else if d[k] * d[k + 1] < 0.0 {
                    roots.push(bisect(&diff, grid[k], grid[k + 1]));
                }
            }
            if d[0] * d[1] < 0.0 {
                roots.push(bisect(&diff, grid[0], grid[1]));
            }
            for k in 1..n {
                let (a, b, c) = (d[k - 1].abs(), d[k].abs(), d[k + 1].abs());
                let is_min = b <= a && b <= c && a > 1e-12 && c > 1e-12;
                if !is_min || roots.iter().any(|&r| (r - grid[k]).abs() <= 2.0 * h) {
                    continue;
                }
                let g = golden_min(|x| diff(x).abs(), grid[k - 1], grid[k + 1]);
                if diff(g).abs() <= TOUCH_TOL {
                    roots.push(g);
                }
            }
            roots.sort_by(f64::total_cmp);
            roots.dedup_by(|a, b| (*a - *b).abs() < DEDUP_TOL);
            for g in roots {
                // classes also meet at the endpoints themselves; those are not crossings
                if g <= EDGE_TOL || g >= GAMMA_MAX - EDGE_TOL {
                    continue;
                }
                let v = class_values(g);
                out.push(Crossing {
                    gamma: g,
                    classes: (CorrelationClass::ALL[i], CorrelationClass::ALL[j]),
                    value: 0.5 * (v[i] + v[j]),
                });
            }
        }
    }
    out.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.classes.cmp(&b.classes)));
    out
}

/// Distinct crossing angles (crossings of several pairs at one angle merged).
pub fn crossing_angles(crossings: &[Crossing]) -> Vec<f64> {
    let mut gammas: Vec<f64> = crossings.iter().map(|c| c.gamma).collect();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
    gammas
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > ROOT_TOL * 1e-3 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-14 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}
