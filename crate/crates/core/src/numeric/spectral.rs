//! Splitting a matrix into its unimodular and strictly-contractive spectral
//! parts.
//!
//! The Schur form is reordered so that eigenvalue clusters are contiguous
//! (unimodular clusters first), then block-diagonalized by a sequence of
//! triangular Sylvester solves. Spectral projections and nilpotent parts are
//! read off the resulting block structure.

use num_complex::Complex64;

use super::decomp::inverse;
use super::eigen::{schur, Schur};
use super::matrix::{c64, ComplexMatrix, C64};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// Width of the band `(1 − AMBIGUITY_FACTOR·spec_tol, 1 − spec_tol)` in which
/// an eigenvalue modulus is neither clearly unimodular nor clearly inside
/// the disk.
pub const AMBIGUITY_FACTOR: f64 = 100.0;

/// One eigenvalue cluster with its spectral projection and nilpotent part.
#[derive(Debug, Clone)]
pub struct SpectralComponent {
    pub eigenvalue: Complex64,
    pub multiplicity: usize,
    pub projection: ComplexMatrix,
    pub nilpotent: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct SpectralSplit {
    /// `U` block: diagonal unitary when `unitary_diagonalized`.
    pub unitary_part: ComplexMatrix,
    /// `R` block, spectral radius below `1 − spec_tol`.
    pub contraction_part: ComplexMatrix,
    /// Columns: a basis of the unimodular spectral subspace, then of the
    /// contractive one. `T = basis · diag(U, R) · basis⁻¹`.
    pub basis: ComplexMatrix,
    pub basis_inverse: ComplexMatrix,
    pub unimodular: Vec<SpectralComponent>,
    pub inner: Vec<SpectralComponent>,
    pub unitary_diagonalized: bool,
    /// Largest strictly-upper residue found in a unimodular cluster.
    pub unimodular_nilpotent_residual: f64,
}

impl SpectralSplit {
    pub fn unimodular_rank(&self) -> usize {
        self.unitary_part.rows()
    }

    /// Sum of the unimodular spectral projections: the idempotent that a
    /// subsequence of powers converges to when the unimodular part is
    /// diagonalizable.
    pub fn unimodular_projection(&self) -> ComplexMatrix {
        let n = self.basis.rows();
        let a = self.unimodular_rank();
        let left = self.basis.submatrix(0, 0, n, a);
        let right = self.basis_inverse.submatrix(0, 0, a, n);
        &left * &right
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::block_diagonal(&[
            self.unitary_part.clone(),
            self.contraction_part.clone(),
        ]);
        &(&self.basis * &d) * &self.basis_inverse
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Class {
    Unimodular,
    Inner,
}

/// Single-linkage clustering of `values` at distance `tol`; returns a
/// cluster id per value.
fn cluster(values: &[C64], tol: f64) -> Vec<usize> {
    let n = values.len();
    let mut id: Vec<usize> = (0..n).collect();
    fn find(id: &mut [usize], mut i: usize) -> usize {
        while id[i] != i {
            id[i] = id[id[i]];
            i = id[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut id, i), find(&mut id, j));
                if a != b {
                    id[a.max(b)] = a.min(b);
                }
            }
        }
    }
    (0..n).map(|i| find(&mut id, i)).collect()
}

/// Solves `A X − X B = C` for upper-triangular `A` (s×s) and `B` (t×t).
fn triangular_sylvester(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    let s = a.rows();
    let t = b.rows();
    let mut x = ComplexMatrix::zeros(s, t);
    for j in 0..t {
        let mut rhs: Vec<C64> = (0..s).map(|i| c[(i, j)]).collect();
        for l in 0..j {
            let blj = b[(l, j)];
            for (i, r) in rhs.iter_mut().enumerate() {
                *r += x[(i, l)] * blj;
            }
        }
        let shift = b[(j, j)];
        for i in (0..s).rev() {
            let mut acc = rhs[i];
            for k in i + 1..s {
                acc -= a[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = acc / (a[(i, i)] - shift);
        }
    }
    x
}

/// Unimodular / contractive spectral split of `t`.
pub fn spectral_split(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SpectralSplit> {
    t.validate_element()?;
    let n = t.rows();
    let mut schur_form: Schur = schur(t)?;
    let eigs = schur_form.eigenvalues();

    let outside: Vec<C64> = eigs
        .iter()
        .copied()
        .filter(|z| z.norm() > 1.0 + cfg.spec_tol)
        .collect();
    if !outside.is_empty() {
        return Err(Error::OutsideUnitDisk { eigenvalues: outside });
    }
    let ambiguous: Vec<C64> = eigs
        .iter()
        .copied()
        .filter(|z| {
            let r = z.norm();
            r < 1.0 - cfg.spec_tol && r > 1.0 - AMBIGUITY_FACTOR * cfg.spec_tol
        })
        .collect();
    if !ambiguous.is_empty() {
        return Err(Error::SpectralAmbiguity { eigenvalues: ambiguous });
    }

    let class_of = |z: &C64| {
        if z.norm() >= 1.0 - cfg.spec_tol {
            Class::Unimodular
        } else {
            Class::Inner
        }
    };
    let inner_tol = cfg.spec_tol.sqrt();
    let unimodular_tol = inner_tol * 0.1;
    let uni_idx: Vec<usize> = (0..n).filter(|&i| class_of(&eigs[i]) == Class::Unimodular).collect();
    let inner_idx: Vec<usize> = (0..n).filter(|&i| class_of(&eigs[i]) == Class::Inner).collect();

    // group ids as (class order, representative sort key)
    let mut group_key: Vec<(usize, f64, f64, usize)> = vec![(0, 0.0, 0.0, 0); n];
    for (class_rank, idx, tol) in [(0usize, &uni_idx, unimodular_tol), (1, &inner_idx, inner_tol)] {
        let vals: Vec<C64> = idx.iter().map(|&i| eigs[i]).collect();
        let ids = cluster(&vals, tol);
        for (pos, &i) in idx.iter().enumerate() {
            let rep = vals[ids[pos]];
            // unimodular: by argument; inner: by decreasing modulus then argument
            let (k1, k2) = if class_rank == 0 {
                (rep.arg(), 0.0)
            } else {
                (-rep.norm(), rep.arg())
            };
            group_key[i] = (class_rank, k1, k2, idx[ids[pos]]);
        }
    }
    // distinct groups in target order
    let mut groups: Vec<(usize, f64, f64, usize)> = group_key.clone();
    groups.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
    groups.dedup();
    let rank_of = |key: &(usize, f64, f64, usize)| groups.iter().position(|g| g == key).unwrap();
    let mut ranks: Vec<usize> = group_key.iter().map(rank_of).collect();

    // stable reorder of the Schur form by group rank
    for target in 0..n {
        let mut best = target;
        for i in target + 1..n {
            if ranks[i] < ranks[best] {
                best = i;
            }
        }
        if best != target {
            schur_form.move_up(best, target);
            let r = ranks.remove(best);
            ranks.insert(target, r);
        }
    }

    // block-diagonalize
    let mut sizes: Vec<usize> = Vec::new();
    for (i, r) in ranks.iter().enumerate() {
        if i == 0 || *r != ranks[i - 1] {
            sizes.push(1);
        } else {
            *sizes.last_mut().unwrap() += 1;
        }
    }
    let mut r_form = schur_form.t.clone();
    let mut z = ComplexMatrix::identity(n);
    let mut offset = 0;
    for &s in &sizes {
        let rest = n - offset - s;
        if rest > 0 {
            let a = r_form.submatrix(offset, offset, s, s);
            let b = r_form.submatrix(offset + s, offset + s, rest, rest);
            let c = r_form.submatrix(offset, offset + s, s, rest).scale_real(-1.0);
            let x = triangular_sylvester(&a, &b, &c);
            r_form.set_submatrix(offset, offset + s, &ComplexMatrix::zeros(s, rest));
            let zx = &z.submatrix(0, offset, n, s) * &x;
            for i in 0..n {
                for j in 0..rest {
                    z[(i, offset + s + j)] += zx[(i, j)];
                }
            }
        }
        offset += s;
    }
    let basis = &schur_form.q * &z;
    let basis_inverse = &inverse(&z)? * &schur_form.q.adjoint();

    let scale = t.frobenius_norm().max(1.0);
    let mut unimodular = Vec::new();
    let mut inner = Vec::new();
    let mut offset = 0;
    let mut residual: f64 = 0.0;
    let uni_count = uni_idx.len();
    for &s in &sizes {
        let block = r_form.submatrix(offset, offset, s, s);
        let mean: C64 = block.trace() / s as f64;
        let nil_block = &block - &ComplexMatrix::identity(s).scale(mean);
        let left = basis.submatrix(0, offset, n, s);
        let right = basis_inverse.submatrix(offset, 0, s, n);
        let projection = &left * &right;
        let nilpotent = &(&left * &nil_block) * &right;
        let component = SpectralComponent {
            eigenvalue: mean,
            multiplicity: s,
            projection,
            nilpotent,
        };
        if offset < uni_count {
            let mut strict = 0.0f64;
            for i in 0..s {
                for j in i + 1..s {
                    strict = strict.max(block[(i, j)].norm());
                }
            }
            residual = residual.max(strict);
            unimodular.push(component);
        } else {
            inner.push(component);
        }
        offset += s;
    }

    let diagonalizable = residual <= cfg.eq_tol * scale;
    let mut unitary_part = r_form.submatrix(0, 0, uni_count, uni_count);
    if diagonalizable {
        for i in 0..uni_count {
            for j in 0..uni_count {
                if i != j {
                    unitary_part[(i, j)] = c64(0.0, 0.0);
                }
            }
        }
    }
    let contraction_part = r_form.submatrix(uni_count, uni_count, n - uni_count, n - uni_count);

    Ok(SpectralSplit {
        unitary_part,
        contraction_part,
        basis,
        basis_inverse,
        unimodular,
        inner,
        unitary_diagonalized: diagonalizable,
        unimodular_nilpotent_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::decomp::op_norm;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::exact()
    }

    #[test]
    fn already_split_diagonal() {
        let w = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let t = ComplexMatrix::diag(&[w, c64(0.5, 0.0)]);
        let s = spectral_split(&t, &cfg()).unwrap();
        assert_eq!(s.unitary_part.rows(), 1);
        assert!((s.unitary_part[(0, 0)] - w).norm() < 1e-14);
        assert!((s.contraction_part[(0, 0)] - c64(0.5, 0.0)).norm() < 1e-14);
        assert!((&s.basis - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn unitary_input_has_empty_contraction() {
        let u = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let s = spectral_split(&u, &cfg()).unwrap();
        assert_eq!(s.contraction_part.rows(), 0);
        assert!(s.unitary_diagonalized);
        assert!(op_norm(&(&s.reconstruct() - &u)) < 1e-12);
        for i in 0..2 {
            assert!((s.unitary_part[(i, i)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_triangular_needs_nontrivial_basis() {
        // eigenvectors by hand: λ=1 → (1,0); λ=1/2 → (2,−1)
        let t = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.5]]);
        let s = spectral_split(&t, &cfg()).unwrap();
        assert!((s.unitary_part[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-13);
        assert!((s.contraction_part[(0, 0)] - c64(0.5, 0.0)).norm() < 1e-13);
        assert!((&s.basis - &ComplexMatrix::identity(2)).frobenius_norm() > 0.1);
        let v = s.basis.column(1);
        // second basis vector is parallel to (2, −1)
        assert!((v[0] * c64(-1.0, 0.0) - v[1] * c64(2.0, 0.0)).norm() < 1e-12);
        assert!(op_norm(&(&s.reconstruct() - &t)) < 10.0 * cfg().eq_tol);
    }

    #[test]
    fn projections_and_nilpotents() {
        // conjugated diag(1, J_2(0.3)) with a Jordan block
        let j = ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, 0.3, 1.0], &[0.0, 0.0, 0.3]]);
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]]);
        let mi = inverse(&m).unwrap();
        let t = &(&m * &j) * &mi;
        let s = spectral_split(&t, &cfg()).unwrap();
        assert_eq!(s.unimodular.len(), 1);
        assert_eq!(s.inner.len(), 1);
        let f = &s.inner[0].projection;
        let nn = &s.inner[0].nilpotent;
        assert!(op_norm(&(&(f * f) - f)) < 1e-9);
        assert!(op_norm(&(&(f * nn) - &(nn * f))) < 1e-9);
        assert!(op_norm(&nn.pow(3)) < 1e-9);
        assert!(op_norm(&(&s.reconstruct() - &t)) < 1e-8);
        let p = s.unimodular_projection();
        assert!(op_norm(&(&(&p * &p) - &p)) < 1e-9);
    }

    #[test]
    fn rejects_eigenvalues_outside_disk_or_ambiguous() {
        let big = ComplexMatrix::diag(&[c64(2.0, 0.0)]);
        assert!(matches!(spectral_split(&big, &cfg()), Err(Error::OutsideUnitDisk { .. })));
        let near = ComplexMatrix::diag(&[c64(1.0 - 10.0 * cfg().spec_tol, 0.0)]);
        assert!(matches!(spectral_split(&near, &cfg()), Err(Error::SpectralAmbiguity { .. })));
    }
}
