use super::eigen::hermitian_eigen;
use super::matrix::{c64, ComplexMatrix, C64};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P A = L U`.
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("LU of a non-square matrix".into()));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= scale * f64::EPSILON * n as f64 {
                return Err(Error::Singular { pivot });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let cols: Vec<Vec<C64>> = (0..b.cols()).map(|j| self.solve_vec(&b.column(j))).collect();
        ComplexMatrix::from_columns(b.rows(), &cols)
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve(&ComplexMatrix::identity(self.lu.rows()))
    }

    pub fn determinant(&self) -> C64 {
        let n = self.lu.rows();
        let mut det = c64(1.0, 0.0);
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        // parity of the permutation
        let mut seen = vec![false; n];
        let mut sign = 1.0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        det * sign
    }
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(Lu::new(a)?.inverse())
}

/// Sweep budget for the one-sided Jacobi iteration; convergence is
/// quadratic, so this is never reached on finite input.
const JACOBI_SWEEPS: usize = 60;

/// Singular values in descending order, by one-sided (Hestenes) Jacobi
/// rotations on the columns. Small singular values keep high relative
/// accuracy, unlike the square roots of the eigenvalues of `T*T`.
pub fn singular_values(t: &ComplexMatrix) -> Result<Vec<f64>> {
    let a = if t.rows() >= t.cols() { t.clone() } else { t.adjoint() };
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let tol = f64::EPSILON * m.max(1) as f64;
    let mut converged = false;
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let tn = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + tn * tn).sqrt();
                let s = c * tn;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let yq = *y * phase.conj();
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            budget: JACOBI_SWEEPS,
        });
    }
    let mut s: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(t: &ComplexMatrix) -> f64 {
    if t.rows() == 0 || t.cols() == 0 || t.is_zero() {
        return 0.0;
    }
    match singular_values(t) {
        Ok(s) => s[0],
        // Frobenius norm is a valid upper bound if the iteration ever fails
        Err(_) => t.frobenius_norm(),
    }
}

/// `‖T‖ ≤ tol` in operator norm, using the bounds `‖T‖ ≤ ‖T‖_F ≤ √r ‖T‖`
/// to avoid the eigen-solver when possible.
pub fn op_norm_le(t: &ComplexMatrix, tol: f64) -> bool {
    let f = t.frobenius_norm();
    if f <= tol {
        return true;
    }
    let r = t.rows().min(t.cols()).max(1) as f64;
    if f > tol * r.sqrt() {
        return false;
    }
    op_norm(t) <= tol
}

/// Operator-norm distance `‖A − B‖`.
pub fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    op_norm(&(a - b))
}

/// Matrix equality in the crate's sense: `‖A − B‖ ≤ tol`.
pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    op_norm_le(&(a - b), tol)
}

/// Number of singular values above `rank_tol`.
pub fn rank_numeric(t: &ComplexMatrix, cfg: &ToleranceConfig) -> usize {
    if t.is_zero() {
        return 0;
    }
    match singular_values(t) {
        Ok(s) => s.iter().filter(|&&v| v > cfg.rank_tol).count(),
        Err(_) => orthonormal_column_basis(t, cfg.rank_tol).cols(),
    }
}

/// Principal square root of a Hermitian positive definite matrix.
pub fn matrix_sqrt_pd(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("square root of a non-square matrix".into()));
    }
    let residual = op_norm(&(m - &m.adjoint()));
    if residual > cfg.eq_tol * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let (vals, v) = hermitian_eigen(m)?;
    let min = vals.first().copied().unwrap_or(0.0);
    if min <= cfg.rank_tol {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let roots: Vec<C64> = vals.iter().map(|x| c64(x.sqrt(), 0.0)).collect();
    let s = &(&v * &ComplexMatrix::diag(&roots)) * &v.adjoint();
    Ok(s.hermitian_part())
}

/// Orthonormal basis (as columns) of the null space of `k`, taken from the
/// eigenvectors of `K*K` whose singular values are at most
/// `tol · max(1, ‖K‖)`.
pub fn null_space(k: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let gram = &k.adjoint() * k;
    let (vals, v) = hermitian_eigen(&gram)?;
    let sigma_max = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    let thresh = tol * sigma_max.max(1.0);
    let cols: Vec<Vec<C64>> = vals
        .iter()
        .enumerate()
        .filter(|(_, &val)| val.max(0.0).sqrt() <= thresh)
        .map(|(j, _)| v.column(j))
        .collect();
    Ok(ComplexMatrix::from_columns(k.cols(), &cols))
}

/// Orthonormal basis of the column space by modified Gram–Schmidt with
/// re-orthogonalization; a column is kept if its residual norm exceeds
/// `tol · max(1, ‖column‖)`.
pub fn orthonormal_column_basis(a: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for j in 0..a.cols() {
        let col = a.column(j);
        if let Some(v) = orthogonalize_against(&basis, &col, tol) {
            basis.push(v);
        }
    }
    ComplexMatrix::from_columns(a.rows(), &basis)
}

/// Projects `x` off an orthonormal `basis` (two passes) and returns the
/// normalized residual, or `None` when it is below tolerance.
pub fn orthogonalize_against(basis: &[Vec<C64>], x: &[C64], tol: f64) -> Option<Vec<C64>> {
    let norm0 = vec_norm(x);
    if norm0 == 0.0 {
        return None;
    }
    let mut r = x.to_vec();
    for _ in 0..2 {
        for b in basis {
            let dot: C64 = b.iter().zip(&r).map(|(bi, ri)| bi.conj() * ri).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= dot * bi;
            }
        }
    }
    let nr = vec_norm(&r);
    if nr <= tol * norm0.max(1.0) {
        return None;
    }
    Some(r.into_iter().map(|z| z / nr).collect())
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::exact()
    }

    #[test]
    fn op_norm_identity_is_one() {
        assert!((op_norm(&ComplexMatrix::identity(2)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn op_norm_matches_closed_form_2x2() {
        // oracle: σ_max² is the larger root of λ² − tr(G)λ + det(G) for G = TᵀT
        let t = ComplexMatrix::from_real(&[&[1.0, -2.0], &[0.0, -1.0]]);
        let (a, b, d) = (1.0, -2.0, 5.0); // G = [[1,-2],[-2,5]]
        let tr: f64 = a + d;
        let det = a * d - b * b;
        let oracle = ((tr + (tr * tr - 4.0 * det).sqrt()) / 2.0).sqrt();
        assert!((oracle - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!((op_norm(&t) - oracle).abs() < 1e-12);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_numeric(&ComplexMatrix::zeros(3, 3), &cfg()), 0);
        let e11 = ComplexMatrix::unit(2, 0, 0);
        assert_eq!(rank_numeric(&e11.kron(&ComplexMatrix::identity(2)), &cfg()), 2);
        let t = ComplexMatrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(rank_numeric(&t, &cfg()), 1);
    }

    #[test]
    fn sqrt_of_diagonal_and_identity() {
        let i = ComplexMatrix::identity(3);
        assert!((&matrix_sqrt_pd(&i, &cfg()).unwrap() - &i).frobenius_norm() < 1e-14);
        let d = ComplexMatrix::from_real(&[&[4.0, 0.0], &[0.0, 9.0]]);
        let expect = ComplexMatrix::from_real(&[&[2.0, 0.0], &[0.0, 3.0]]);
        assert!((&matrix_sqrt_pd(&d, &cfg()).unwrap() - &expect).frobenius_norm() < 1e-13);
    }

    #[test]
    fn sqrt_matches_trace_determinant_formula() {
        // oracle for 2x2 PD: √M = (M + √det·I) / √(tr + 2√det)
        let m = ComplexMatrix::from_real(&[&[1.0, -1.0], &[-1.0, 3.0]]);
        let sdet = (1.0f64 * 3.0 - 1.0).sqrt();
        let denom = (4.0 + 2.0 * sdet).sqrt();
        let oracle = (&m + &ComplexMatrix::identity(2).scale_real(sdet)).scale_real(1.0 / denom);
        let s = matrix_sqrt_pd(&m, &cfg()).unwrap();
        assert!((&s - &oracle).frobenius_norm() < 1e-13);
        assert!(op_norm(&(&(&s * &s) - &m)) <= cfg().eq_tol);
    }

    #[test]
    fn sqrt_rejects_non_hermitian_and_indefinite() {
        let nh = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(matrix_sqrt_pd(&nh, &cfg()), Err(Error::NotHermitian { .. })));
        let ind = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert!(matches!(
            matrix_sqrt_pd(&ind, &cfg()),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ComplexMatrix::from_real(&[&[2.0, 1.0], &[0.0, 1.0]]);
        let lu = Lu::new(&m).unwrap();
        assert!((lu.determinant() - c64(2.0, 0.0)).norm() < 1e-14);
        let inv = lu.inverse();
        assert!((&(&m * &inv) - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
        assert!(matches!(Lu::new(&ComplexMatrix::unit(2, 0, 1)), Err(Error::Singular { .. })));
    }

    #[test]
    fn null_space_of_rank_one() {
        let k = ComplexMatrix::from_real(&[&[1.0, 1.0], &[2.0, 2.0]]);
        let ns = null_space(&k, 1e-6).unwrap();
        assert_eq!(ns.cols(), 1);
        assert!((&k * &ns).frobenius_norm() < 1e-12);
    }

    #[test]
    fn tiny_singular_values_keep_relative_accuracy() {
        // diag(1, 1e-10) rotated on both sides
        let c = 0.6;
        let sn = 0.8;
        let q = ComplexMatrix::from_real(&[&[c, -sn], &[sn, c]]);
        let d = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 1e-10]]);
        let t = &(&q * &d) * &q.transpose();
        let s = singular_values(&t).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!((s[1] - 1e-10).abs() < 1e-20 * 1e4);
    }

    #[test]
    fn singular_values_of_wide_matrix() {
        let t = ComplexMatrix::from_real(&[&[3.0, 0.0, 4.0]]);
        let s = singular_values(&t).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 5.0).abs() < 1e-14);
    }
}
