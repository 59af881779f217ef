#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semigroup_isoform::numeric::{c64, hermitian_eigen, inverse, ComplexMatrix, ToleranceConfig, C64};
use semigroup_isoform::semigroup::{closure, GeneratorInput, SemigroupSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows)
}

pub fn close(gens: Vec<ComplexMatrix>) -> SemigroupSet {
    close_with(gens, &ToleranceConfig::exact())
}

pub fn close_with(gens: Vec<ComplexMatrix>, cfg: &ToleranceConfig) -> SemigroupSet {
    closure(&GeneratorInput::new("test", gens).unwrap(), cfg).unwrap()
}

/// Gaussian integer matrix with entries in `[-r, r] + i[-r, r]`.
pub fn gaussian_integer(rng: &mut ChaCha8Rng, n: usize, r: i32, complex: bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re = rng.gen_range(-r..=r) as f64;
        let im = if complex { rng.gen_range(-r..=r) as f64 } else { 0.0 };
        c64(re, im)
    })
}

/// Integer matrix with determinant one: unit lower times unit upper.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let l = ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => c64(1.0, 0.0),
        std::cmp::Ordering::Greater => c64(rng.gen_range(-1..=1) as f64, 0.0),
        std::cmp::Ordering::Less => C64::default(),
    });
    let u = ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => c64(1.0, 0.0),
        std::cmp::Ordering::Less => c64(rng.gen_range(-1..=1) as f64, 0.0),
        std::cmp::Ordering::Greater => C64::default(),
    });
    &l * &u
}

pub fn conjugate(m: &ComplexMatrix, t: &ComplexMatrix) -> ComplexMatrix {
    &(m * t) * &inverse(m).unwrap()
}

/// Seeded generator set at `n ∈ {2, 3}` drawn from a mix of families, some
/// always reducible (shared triangular structure, commuting sets, direct
/// sums) and some usually irreducible (generic or sparse 0/1 sets).
pub fn oracle_case(seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = rng(seed);
    let n = 2 + (seed % 2) as usize;
    let count = rng.gen_range(1..=3);
    match seed % 5 {
        0 => (0..count).map(|_| gaussian_integer(&mut rng, n, 2, true)).collect(),
        1 => {
            // common invariant subspace span(e_1..e_d), moved by M
            let d = rng.gen_range(1..n);
            let m = unimodular(&mut rng, n);
            (0..count)
                .map(|_| {
                    let mut t = gaussian_integer(&mut rng, n, 2, true);
                    for i in d..n {
                        for j in 0..d {
                            t[(i, j)] = C64::default();
                        }
                    }
                    conjugate(&m, &t)
                })
                .collect()
        }
        2 => {
            // polynomials in one matrix commute
            let a = gaussian_integer(&mut rng, n, 2, true);
            (0..count)
                .map(|_| {
                    let c: [f64; 3] = [0, 1, 2].map(|_| rng.gen_range(-2..=2) as f64);
                    let a2 = &a * &a;
                    &(&ComplexMatrix::identity(n).scale_real(c[0]) + &a.scale_real(c[1])) + &a2.scale_real(c[2])
                })
                .collect()
        }
        3 => {
            let m = unimodular(&mut rng, n);
            (0..count)
                .map(|_| {
                    let mut t = gaussian_integer(&mut rng, n, 2, false);
                    for j in 1..n {
                        t[(0, j)] = C64::default();
                        t[(j, 0)] = C64::default();
                    }
                    conjugate(&m, &t)
                })
                .collect()
        }
        _ => (0..count.max(2))
            .map(|_| ComplexMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(0..=1) as f64, 0.0)))
            .collect(),
    }
}

/// Roots of the characteristic polynomial by Durand–Kerner iteration.
/// Independent of the crate's eigen-solver on purpose.
pub fn char_roots(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.rows();
    // coefficients of det(zI - A) from the Faddeev–LeVerrier recursion
    let mut coeffs = vec![c64(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &ComplexMatrix::identity(n).scale(coeffs[k - 1]);
        let c = -(a * &m).trace() / k as f64;
        coeffs.push(c);
    }
    let eval = |z: C64| horner(&coeffs, z);
    let scale = 1.0 + a.max_abs() * n as f64;
    let seed = c64(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|i| seed.powu(i as u32) * scale).collect();
    for _ in 0..2000 {
        let prev = roots.clone();
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(c64(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            if denom.norm() > 0.0 {
                let z = roots[i];
                roots[i] = z - eval(z) / denom;
            }
        }
        let moved = roots.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if moved < 1e-15 * scale {
            break;
        }
    }
    // a root of multiplicity p is only located to ε^{1/p}, but it is a simple
    // root of the (p−1)-th derivative, where Newton converges quadratically
    roots
        .iter()
        .map(|z| {
            let cluster: Vec<C64> = roots.iter().copied().filter(|w| (w - z).norm() <= 1e-3 * scale).collect();
            let mut d = coeffs.clone();
            for _ in 1..cluster.len() {
                d = derivative(&d);
            }
            let dd = derivative(&d);
            let mut x = cluster.iter().sum::<C64>() / cluster.len() as f64;
            for _ in 0..50 {
                let slope = horner(&dd, x);
                if slope.norm() == 0.0 {
                    break;
                }
                let step = horner(&d, x) / slope;
                x -= step;
                if step.norm() <= 1e-16 * scale {
                    break;
                }
            }
            x
        })
        .collect()
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().fold(C64::default(), |acc, &c| acc * z + c)
}

/// Derivative of a polynomial given highest degree first.
fn derivative(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    coeffs[..deg].iter().enumerate().map(|(i, &c)| c * (deg - i) as f64).collect()
}

/// Smallest `‖Σ (A_i − λ_i)v‖`-type residual over unit `v` for one tuple of
/// shifts: square root of the least eigenvalue of `Σ (A_i − λ_i)*(A_i − λ_i)`.
fn common_kernel_residual(mats: &[ComplexMatrix], shifts: &[C64]) -> f64 {
    let n = mats[0].rows();
    let mut g = ComplexMatrix::zeros(n, n);
    for (a, &l) in mats.iter().zip(shifts) {
        let d = a - &ComplexMatrix::identity(n).scale(l);
        g = &g + &(&d.adjoint() * &d);
    }
    let (w, _) = hermitian_eigen(&g).unwrap();
    w.into_iter().fold(f64::INFINITY, f64::min).max(0.0).sqrt()
}

/// Least common-eigenvector residual over all tuples of eigenvalues.
fn best_common_eigenvector(mats: &[ComplexMatrix]) -> f64 {
    let spectra: Vec<Vec<C64>> = mats.iter().map(char_roots).collect();
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; mats.len()];
    loop {
        let shifts: Vec<C64> = idx.iter().zip(&spectra).map(|(&i, s)| s[i]).collect();
        best = best.min(common_kernel_residual(mats, &shifts));
        let mut p = 0;
        loop {
            if p == idx.len() {
                return best;
            }
            idx[p] += 1;
            if idx[p] < spectra[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict {
    pub reducible: bool,
    /// Smallest relative residual found; reducible iff at most 1e-6.
    pub residual: f64,
}

/// Brute-force invariant-subspace search for `n ≤ 3`, where every proper
/// nonzero subspace has dimension 1 or `n − 1`. A line is invariant iff it is
/// spanned by a common eigenvector; a hyperplane `W` is invariant iff `W^⊥`
/// is invariant under the adjoints. A common eigenvector lies in
/// `⋂ ker(A_i − λ_i)` for some tuple of eigenvalues, so all tuples are tried.
pub fn invariant_subspace_oracle(mats: &[ComplexMatrix]) -> OracleVerdict {
    let n = mats[0].rows();
    assert!(n <= 3, "oracle only covers n ≤ 3");
    let scale = mats.iter().map(|a| a.max_abs()).fold(1.0, f64::max);
    let adj: Vec<ComplexMatrix> = mats.iter().map(ComplexMatrix::adjoint).collect();
    let residual = best_common_eigenvector(mats).min(best_common_eigenvector(&adj)) / scale;
    OracleVerdict {
        reducible: residual <= 1e-6,
        residual,
    }
}

/// Matrix with the given unimodular phases and a nilpotent Jordan block of
/// size `nil`, moved by a seeded invertible matrix of bounded conditioning.
pub fn bounded_power_matrix(seed: u64) -> (ComplexMatrix, usize) {
    let mut rng = rng(seed);
    let n = rng.gen_range(2..=5);
    let uni = rng.gen_range(1..=n);
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..uni {
        // mix of rational and irrational turns
        let theta = if rng.gen_bool(0.5) {
            std::f64::consts::TAU * rng.gen_range(0..6) as f64 / 6.0
        } else {
            rng.gen_range(0.1..6.0)
        };
        d[(i, i)] = C64::from_polar(1.0, theta);
    }
    for i in uni..n.saturating_sub(1) {
        if rng.gen_bool(0.5) {
            d[(i, i + 1)] = c64(1.0, 0.0);
        }
    }
    let m = semigroup_isoform::corpus::random_conjugator(n, seed);
    (conjugate(&m, &d), uni)
}
