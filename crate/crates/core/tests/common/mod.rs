// Independent reference computations used by the integration tests. Nothing
// here goes through the Pauli-action, SVD or cover code of the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Closed-form family member built from explicit basis kets.
pub fn closed_form(gamma: f64) -> Vec<C64> {
    let p = (5.0 - 4.0 * (4.0 * gamma).cos() + 3.0 * (8.0 * gamma).cos()) / 48.0;
    let alpha = 2.0 * (4.0 * gamma).cos() / (48.0 * p).sqrt();
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let mut v = vec![c(0.0); 16];
    for label in ["HVHV", "HVVH", "VHHV", "VHVH"] {
        v[ket_index(label)] += c(alpha / 2.0);
    }
    for label in ["HHVV", "VVHH"] {
        v[ket_index(label)] += c(beta / 2f64.sqrt());
    }
    v
}

pub fn closed_form_probability(gamma: f64) -> f64 {
    (5.0 - 4.0 * (4.0 * gamma).cos() + 3.0 * (8.0 * gamma).cos()) / 48.0
}

pub fn ket_index(label: &str) -> usize {
    label.chars().fold(0, |acc, ch| acc * 2 + usize::from(ch == 'V'))
}

pub fn pauli_2x2(symbol: char) -> DMatrix<C64> {
    let i = C64::new(0.0, 1.0);
    match symbol {
        '0' => DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]),
        'x' => DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        'y' => DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
        'z' => DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
        _ => panic!("bad symbol {symbol}"),
    }
}

/// Explicit Kronecker product of four single-qubit Paulis.
pub fn pauli_kron(term: &str) -> DMatrix<C64> {
    term.chars().fold(DMatrix::from_element(1, 1, c(1.0)), |acc, s| {
        acc.kronecker(&pauli_2x2(s))
    })
}

pub fn all_terms() -> Vec<String> {
    let s = ['0', 'x', 'y', 'z'];
    let mut out = Vec::new();
    for a in s {
        for b in s {
            for cc in s {
                for d in s {
                    out.push([a, b, cc, d].iter().collect());
                }
            }
        }
    }
    out
}

pub fn expectation_brute(amps: &[C64], term: &str) -> f64 {
    let v = DVector::from_column_slice(amps);
    (v.adjoint() * pauli_kron(term) * &v)[(0, 0)].re
}

pub fn expectation_brute_density(rho: &DMatrix<C64>, term: &str) -> f64 {
    (rho * pauli_kron(term)).trace().re
}

/// The 40 caption entries closed under the pair swap and the in-pair swaps.
pub fn caption_orbit(seeds: &[&str]) -> BTreeSet<String> {
    let perms: [[usize; 4]; 3] = [[2, 3, 0, 1], [1, 0, 2, 3], [0, 1, 3, 2]];
    let mut seen = BTreeSet::new();
    let mut stack: Vec<String> = seeds.iter().map(|s| s.to_string()).collect();
    while let Some(t) = stack.pop() {
        if seen.insert(t.clone()) {
            let chars: Vec<char> = t.chars().collect();
            for p in perms {
                stack.push(p.iter().map(|&k| chars[k]).collect());
            }
        }
    }
    seen
}

pub fn class_seeds() -> [Vec<&'static str>; 5] {
    [
        vec!["0000", "xxxx", "yyyy", "zzzz"],
        vec!["0z0z", "xyxy"],
        vec!["00zz", "xxyy"],
        vec!["0x0x", "0y0y", "zxzx", "zyzy"],
        vec!["00xx", "00yy", "zzxx", "zzyy"],
    ]
}

/// Bipartitions as lists of qubits on the first side.
pub fn cuts() -> Vec<Vec<usize>> {
    vec![vec![0], vec![1], vec![2], vec![3], vec![0, 1], vec![0, 2], vec![0, 3]]
}

fn reshape(amps: &[C64], side: &[usize]) -> DMatrix<C64> {
    let other: Vec<usize> = (0..4).filter(|q| !side.contains(q)).collect();
    DMatrix::from_fn(1 << side.len(), 1 << other.len(), |r, col| {
        let mut idx = 0;
        for (j, &q) in side.iter().enumerate() {
            idx |= (r >> (side.len() - 1 - j) & 1) << (3 - q);
        }
        for (j, &q) in other.iter().enumerate() {
            idx |= (col >> (other.len() - 1 - j) & 1) << (3 - q);
        }
        amps[idx]
    })
}

/// Largest `|<a (x) b|psi>|^2` across one cut by alternating maximization
/// over `a` and `b` (power iteration on `M M^dag`), from several starts.
pub fn max_product_overlap(amps: &[C64], side: &[usize], rng: &mut impl Rng) -> f64 {
    let m = reshape(amps, side);
    let mut best: f64 = 0.0;
    for _ in 0..8 {
        let mut a = random_vector(m.nrows(), rng);
        for _ in 0..500 {
            let b = normalize(m.adjoint() * &a);
            a = normalize(&m * b);
        }
        let value = (m.adjoint() * &a).norm_squared();
        best = best.max(value);
    }
    best
}

pub fn max_biseparable_overlap(amps: &[C64], rng: &mut impl Rng) -> f64 {
    cuts()
        .iter()
        .map(|cut| max_product_overlap(amps, cut, rng))
        .fold(0.0, f64::max)
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> DVector<C64> {
    normalize(DVector::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }))
}

fn normalize(v: DVector<C64>) -> DVector<C64> {
    let n = v.norm();
    v / c(n)
}

/// `|<phi_A (x) phi_B|psi>|^2` for a random cut and random states on each side.
pub fn random_biseparable_overlap(amps: &[C64], rng: &mut impl Rng) -> f64 {
    let all = cuts();
    let side = &all[rng.random_range(0..all.len())];
    let m = reshape(amps, side);
    let a = random_vector(m.nrows(), rng);
    let b = random_vector(m.ncols(), rng);
    (a.adjoint() * &m * b.map(|z| z.conj()))[(0, 0)].norm_sqr()
}

/// Random pure product state of four qubits.
pub fn random_product(rng: &mut impl Rng) -> Vec<C64> {
    let qs: Vec<DVector<C64>> = (0..4).map(|_| random_vector(2, rng)).collect();
    (0..16)
        .map(|i| (0..4).map(|k| qs[k][i >> (3 - k) & 1]).product())
        .collect()
}

fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let e = nalgebra::SymmetricEigen::new(m.clone());
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|x| c(x.max(0.0).sqrt())));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &DMatrix<C64>) -> f64 {
    let yy = pauli_2x2('y').kronecker(&pauli_2x2('y'));
    let tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let s = hermitian_sqrt(rho);
    let r = &s * tilde * &s;
    let r = (&r + r.adjoint()) * c(0.5);
    let e = nalgebra::SymmetricEigen::new(r);
    let mut l: Vec<f64> = e.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// 3-tangle from monogamy: `C^2_{A(BC)} - C^2_{AB} - C^2_{AC}`.
pub fn tangle_by_monogamy(psi: &[C64; 8]) -> f64 {
    let v = DVector::from_column_slice(psi);
    let rho = &v * v.adjoint();
    let idx = |a: usize, b: usize, cc: usize| 4 * a + 2 * b + cc;
    let rho_a: DMatrix<C64> = DMatrix::from_fn(2, 2, |r, col| {
        (0..4)
            .map(|t| rho[(idx(r, t >> 1, t & 1), idx(col, t >> 1, t & 1))])
            .sum()
    });
    let det = (rho_a[(0, 0)] * rho_a[(1, 1)] - rho_a[(0, 1)] * rho_a[(1, 0)]).re;
    // trace out one of B, C
    let rho_ab: DMatrix<C64> = DMatrix::from_fn(4, 4, |r, col| {
        (0..2)
            .map(|t| rho[(idx(r >> 1, r & 1, t), idx(col >> 1, col & 1, t))])
            .sum()
    });
    let rho_ac: DMatrix<C64> = DMatrix::from_fn(4, 4, |r, col| {
        (0..2)
            .map(|t| rho[(idx(r >> 1, t, r & 1), idx(col >> 1, t, col & 1))])
            .sum()
    });
    4.0 * det - concurrence(&rho_ab).powi(2) - concurrence(&rho_ac).powi(2)
}

/// Settings (strings over x, y, z) that measure `term`.
pub fn setting_covers(setting: &str, term: &str) -> bool {
    setting.chars().zip(term.chars()).all(|(s, t)| t == '0' || s == t)
}

pub fn all_settings() -> Vec<String> {
    all_terms().into_iter().filter(|t| !t.contains('0')).collect()
}

/// Size of a minimum cover by depth-first branch and bound, branching on the
/// uncovered term with fewest covering settings.
pub fn minimum_cover_size(terms: &[String]) -> usize {
    fn search(uncovered: &[String], settings: &[String], depth: usize, best: &mut usize) {
        if uncovered.is_empty() {
            *best = (*best).min(depth);
            return;
        }
        if depth + 1 >= *best {
            return;
        }
        let pivot = uncovered
            .iter()
            .min_by_key(|t| settings.iter().filter(|s| setting_covers(s, t)).count())
            .expect("non-empty");
        for s in settings.iter().filter(|s| setting_covers(s, pivot)) {
            let rest: Vec<String> = uncovered.iter().filter(|t| !setting_covers(s, t)).cloned().collect();
            search(&rest, settings, depth + 1, best);
        }
    }
    let settings = all_settings();
    let mut best = usize::MAX;
    search(terms, &settings, 0, &mut best);
    best
}

/// Random pure state that is a product across a random bipartition.
pub fn random_biseparable_state(rng: &mut impl Rng) -> Vec<C64> {
    let all = cuts();
    let side = &all[rng.random_range(0..all.len())];
    let other: Vec<usize> = (0..4).filter(|q| !side.contains(q)).collect();
    let a = random_vector(1 << side.len(), rng);
    let b = random_vector(1 << other.len(), rng);
    (0..16)
        .map(|idx: usize| {
            let pick = |qs: &[usize]| qs.iter().fold(0, |acc, &q| acc * 2 + (idx >> (3 - q) & 1));
            a[pick(side)] * b[pick(&other)]
        })
        .collect()
}
