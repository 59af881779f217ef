//! Complex Schur decomposition by Householder reduction to Hessenberg form
//! followed by single-shift QR iteration with Givens rotations.
//!
//! This is the only iterative eigen-solver in the crate; singular values,
//! Hermitian eigenproblems and spectral projections are all derived from it.
//! The computed Schur form is backward stable: `Q T Q*` equals the input up
//! to a perturbation of order `n · ε · ‖A‖_F`.

use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Iteration budget per unit of dimension.
pub const ITERATIONS_PER_DIM: usize = 100;

/// `A = Q T Q*` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Moves the diagonal entry at `from` to position `to` (`to < from`) by
    /// adjacent unitary swaps, keeping `Q T Q*` invariant.
    pub fn move_up(&mut self, from: usize, to: usize) {
        let mut k = from;
        while k > to {
            self.swap_adjacent(k - 1);
            k -= 1;
        }
    }

    /// Swaps diagonal entries `k` and `k+1`.
    fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.rows();
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        let (c, s) = givens(self.t[(k, k + 1)], t22 - t11);
        // rows k, k+1 for columns right of the 2x2 block
        for j in (k + 2)..n {
            let x = self.t[(k, j)];
            let y = self.t[(k + 1, j)];
            self.t[(k, j)] = x * c + s * y;
            self.t[(k + 1, j)] = y * c - s.conj() * x;
        }
        // columns k, k+1 for rows above the block
        let sc = s.conj();
        for i in 0..k {
            let x = self.t[(i, k)];
            let y = self.t[(i, k + 1)];
            self.t[(i, k)] = x * c + sc * y;
            self.t[(i, k + 1)] = y * c - sc.conj() * x;
        }
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
        for i in 0..n {
            let x = self.q[(i, k)];
            let y = self.q[(i, k + 1)];
            self.q[(i, k)] = x * c + sc * y;
            self.q[(i, k + 1)] = y * c - sc.conj() * x;
        }
    }
}

/// Rotation `[c s; -s̄ c]` (c real) mapping `(f, g)` to `(r, 0)`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    let af = f.norm();
    let ag = g.norm();
    if ag == 0.0 {
        return (1.0, c64(0.0, 0.0));
    }
    if af == 0.0 {
        return (0.0, g.conj() / ag);
    }
    let r = af.hypot(ag);
    (af / r, (f / af) * g.conj() / r)
}

#[inline]
fn cabs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let alpha_norm = ((k + 1)..n)
            .map(|i| h[(i, k)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            c64(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * alpha_norm;
        let mut v: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2vv*) H on rows k+1..n
        for j in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(a, va)| va.conj() * h[(k + 1 + a, j)])
                .sum();
            for (a, va) in v.iter().enumerate() {
                h[(k + 1 + a, j)] -= va * dot * 2.0;
            }
        }
        // H <- H (I - 2vv*) and Q <- Q (I - 2vv*) on columns k+1..n
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let dot: C64 = v
                    .iter()
                    .enumerate()
                    .map(|(a, va)| m[(i, k + 1 + a)] * va)
                    .sum();
                for (a, va) in v.iter().enumerate() {
                    m[(i, k + 1 + a)] -= dot * va.conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = c64(0.0, 0.0);
        }
    }
}

/// Eigenvalue of the trailing 2x2 block closer to its last diagonal entry.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let l1 = d + half + disc;
    let l2 = d + half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition of a square matrix.
pub fn schur(a: &ComplexMatrix) -> Result<Schur> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("schur of a non-square matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    hessenberg(&mut h, &mut q);
    if n < 2 {
        return Ok(Schur { q, t: h });
    }

    let budget = ITERATIONS_PER_DIM * n;
    let eps = f64::EPSILON;
    let smallnum = f64::MIN_POSITIVE * (n as f64 / eps);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n; // active window is [lo, hi)
    let mut rotations: Vec<(f64, C64)> = Vec::with_capacity(n);

    while hi > 1 {
        // locate the start of the trailing unreduced block
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = cabs1(h[(lo, lo - 1)]);
            if sub <= smallnum {
                h[(lo, lo - 1)] = c64(0.0, 0.0);
                break;
            }
            let mut tst = cabs1(h[(lo - 1, lo - 1)]) + cabs1(h[(lo, lo)]);
            if tst == 0.0 {
                tst = (lo.saturating_sub(1)..hi.min(lo + 2))
                    .map(|i| cabs1(h[(i, i)]))
                    .sum::<f64>()
                    .max(1.0);
            }
            if sub <= eps * tst {
                h[(lo, lo - 1)] = c64(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            hi -= 1;
            its = 0;
            continue;
        }
        if total >= budget {
            return Err(Error::Convergence { budget });
        }
        total += 1;
        its += 1;

        let shift = if its % 10 == 0 {
            // exceptional shift to break symmetric stalls (e.g. permutations)
            let d = h[(hi - 1, hi - 1)];
            let sub = h[(hi - 1, hi - 2)].norm();
            d + c64(0.75 * sub, 0.4 * sub)
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };

        for i in lo..hi {
            h[(i, i)] -= shift;
        }
        rotations.clear();
        for k in lo..hi - 1 {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = y * c - s.conj() * x;
            }
            h[(k + 1, k)] = c64(0.0, 0.0);
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            let sc = s.conj();
            let last_row = (k + 2).min(hi - 1);
            for i in 0..=last_row {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * sc;
                h[(i, k + 1)] = y * c - x * s;
            }
            for i in 0..n {
                let x = q[(i, k)];
                let y = q[(i, k + 1)];
                q[(i, k)] = x * c + y * sc;
                q[(i, k + 1)] = y * c - x * s;
            }
        }
        for i in lo..hi {
            h[(i, i)] += shift;
        }
    }

    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = c64(0.0, 0.0);
        }
    }
    Ok(Schur { q, t: h })
}

/// All `n` eigenvalues with algebraic multiplicity, in Schur order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    Ok(schur(a)?.eigenvalues())
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// the unitary matrix of eigenvectors (columns).
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let herm = h.hermitian_part();
    let mut s = schur(&herm)?;
    let n = herm.rows();
    // selection sort on the diagonal using Schur swaps keeps Q consistent
    for target in 0..n {
        let mut best = target;
        for i in target + 1..n {
            if s.t[(i, i)].re < s.t[(best, best)].re {
                best = i;
            }
        }
        if best != target {
            s.move_up(best, target);
        }
    }
    let values = (0..n).map(|i| s.t[(i, i)].re).collect();
    Ok((values, s.q))
}

/// Spectral radius `max |λ|`.
pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    fn reconstruct(s: &Schur) -> ComplexMatrix {
        &(&s.q * &s.t) * &s.q.adjoint()
    }

    #[test]
    fn diagonal_eigenvalues() {
        let d = ComplexMatrix::diag(&[c64(1.0, 0.0), c64(0.5, 0.0)]);
        let ev = sorted_by_re(eigenvalues(&d).unwrap());
        assert!((ev[0] - c64(0.5, 0.0)).norm() < 1e-14);
        assert!((ev[1] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn nilpotent_unit_has_zero_spectrum() {
        let ev = eigenvalues(&ComplexMatrix::unit(2, 0, 1)).unwrap();
        assert!(ev.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn rank_one_idempotent_column() {
        // characteristic polynomial λ² − λ
        let t = ComplexMatrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]);
        let ev = sorted_by_re(eigenvalues(&t).unwrap());
        assert!(ev[0].norm() < 1e-14);
        assert!((ev[1] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cyclic_permutation_converges() {
        // a symmetric stall case for unshifted or pure Wilkinson QR
        let n = 5;
        let p = ComplexMatrix::from_fn(n, n, |i, j| {
            if j == (i + 1) % n {
                c64(1.0, 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        let s = schur(&p).unwrap();
        assert!((&reconstruct(&s) - &p).frobenius_norm() < 1e-12);
        for z in s.eigenvalues() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(5) - c64(1.0, 0.0)).norm() < 1e-11);
        }
    }

    #[test]
    fn swap_preserves_decomposition() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| c64((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2));
        let mut s = schur(&a).unwrap();
        let before = s.eigenvalues();
        s.move_up(3, 0);
        assert!((&reconstruct(&s) - &a).frobenius_norm() < 1e-11);
        assert!((s.t[(0, 0)] - before[3]).norm() < 1e-12);
        for i in 1..4 {
            for j in 0..i {
                assert_eq!(s.t[(i, j)], c64(0.0, 0.0));
            }
        }
    }

    #[test]
    fn hermitian_eigen_is_sorted_and_orthonormal() {
        let h = ComplexMatrix::from_rows(&[
            vec![c64(2.0, 0.0), c64(1.0, 1.0), c64(0.0, 0.0)],
            vec![c64(1.0, -1.0), c64(3.0, 0.0), c64(0.5, 0.0)],
            vec![c64(0.0, 0.0), c64(0.5, 0.0), c64(-1.0, 0.0)],
        ])
        .unwrap();
        let (vals, v) = hermitian_eigen(&h).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let vv = &v.adjoint() * &v;
        assert!((&vv - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);
        let rebuilt = &(&v * &ComplexMatrix::diag(&vals.iter().map(|x| c64(*x, 0.0)).collect::<Vec<_>>())) * &v.adjoint();
        assert!((&rebuilt - &h).frobenius_norm() < 1e-12);
    }
}
