use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{
    c64, hermitian_eigen, inverse, matrix_sqrt_pd, null_space, op_norm, singular_values, ComplexMatrix,
    ToleranceConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitarizationMethod {
    GramAverage,
    FixedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitarizationResult {
    /// Hermitian positive definite `S_g`.
    pub similarity: ComplexMatrix,
    /// `S_g·g·S_g⁻¹` for every sample element, in input order.
    pub group_sample: Vec<ComplexMatrix>,
    /// Largest `‖U*U − I‖` over the images.
    pub residual: f64,
    pub method: UnitarizationMethod,
}

fn images(s: &ComplexMatrix, sample: &[ComplexMatrix]) -> Result<(Vec<ComplexMatrix>, f64)> {
    let s_inv = inverse(s)?;
    let id = ComplexMatrix::identity(s.rows());
    let imgs: Vec<ComplexMatrix> = sample.iter().map(|g| &(s * g) * &s_inv).collect();
    let residual = imgs
        .iter()
        .map(|u| op_norm(&(&(&u.adjoint() * u) - &id)))
        .fold(0.0, f64::max);
    Ok((imgs, residual))
}

/// Orthonormal (Frobenius) basis of the `k×k` Hermitian matrices as a real
/// vector space: `E_ii`, `(E_ij + E_ji)/√2`, `i(E_ij − E_ji)/√2`.
fn hermitian_basis(k: usize) -> Vec<ComplexMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        out.push(ComplexMatrix::unit(k, i, i));
        for j in i + 1..k {
            let sym = &ComplexMatrix::unit(k, i, j) + &ComplexMatrix::unit(k, j, i);
            let skew = &ComplexMatrix::unit(k, i, j) - &ComplexMatrix::unit(k, j, i);
            out.push(sym.scale_real(h));
            out.push(skew.scale(c64(0.0, h)));
        }
    }
    out
}

fn real_parts(m: &ComplexMatrix) -> impl Iterator<Item = f64> + '_ {
    m.as_slice().iter().flat_map(|z| [z.re, z.im])
}

/// Fixed-point fallback: the Hermitian `X` with `g*Xg = X` for every sample
/// element form a real subspace; project the Gram mean onto it, normalize
/// `trace X = k` and require `X ≻ 0`.
fn fixed_point(sample: &[ComplexMatrix], gram: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let k = gram.rows();
    let basis = hermitian_basis(k);
    let rows_per = 2 * k * k;
    let mut system = ComplexMatrix::zeros(rows_per * sample.len(), basis.len());
    for (c, h) in basis.iter().enumerate() {
        for (gi, g) in sample.iter().enumerate() {
            let r = &(&(&g.adjoint() * h) * g) - h;
            for (ri, v) in real_parts(&r).enumerate() {
                system[(gi * rows_per + ri, c)] = c64(v, 0.0);
            }
        }
    }
    // the system is real, so real and imaginary parts of null vectors are
    // null vectors too; re-orthonormalize them over the reals
    let ns = null_space(&system, cfg.eq_tol.sqrt())?;
    let mut coeffs: Vec<Vec<f64>> = Vec::new();
    for j in 0..ns.cols() {
        let col = ns.column(j);
        for part in [col.iter().map(|z| z.re).collect::<Vec<f64>>(), col.iter().map(|z| z.im).collect()] {
            let mut v = part;
            for _ in 0..2 {
                for b in &coeffs {
                    let d: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                    v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                coeffs.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
    }
    if coeffs.is_empty() {
        return Err(Error::NotABoundedGroup("no invariant Hermitian form".into()));
    }
    let gram_coords: Vec<f64> = basis
        .iter()
        .map(|h| (&h.adjoint() * gram).trace().re)
        .collect();
    let mut x = ComplexMatrix::zeros(k, k);
    for b in &coeffs {
        let w: f64 = b.iter().zip(&gram_coords).map(|(p, q)| p * q).sum();
        for (bc, h) in b.iter().zip(&basis) {
            x = &x + &h.scale_real(w * bc);
        }
    }
    let tr = x.trace().re;
    if !(tr > 0.0) {
        return Err(Error::NotABoundedGroup("invariant form has nonpositive trace".into()));
    }
    let x = x.scale_real(k as f64 / tr).hermitian_part();
    let (vals, _) = hermitian_eigen(&x)?;
    let min = vals.first().copied().unwrap_or(0.0);
    if min <= cfg.rank_tol {
        return Err(Error::NotABoundedGroup(format!(
            "invariant form is not positive definite (min eigenvalue {min:e})"
        )));
    }
    Ok(x)
}

/// Finds a Hermitian `S_g ≻ 0` making every sample element unitary.
///
/// Gram averaging `S_g = (mean g*g)^{1/2}` is exact when the sample is the
/// whole group; otherwise the fixed-point fallback is tried.
pub fn unitarize_group(sample: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<UnitarizationResult> {
    let first = sample
        .first()
        .ok_or_else(|| Error::InvalidInput("empty group sample".into()))?;
    let k = first.rows();
    for (index, g) in sample.iter().enumerate() {
        if g.rows() != k || !g.is_square() {
            return Err(Error::DimensionMismatch(format!("sample element {index} is not {k}×{k}")));
        }
        let sigma_min = singular_values(g)?.last().copied().unwrap_or(0.0);
        if sigma_min <= cfg.rank_tol {
            return Err(Error::SingularGroupElement { index, sigma_min });
        }
    }
    let mut gram = ComplexMatrix::zeros(k, k);
    for g in sample {
        gram = &gram + &(&g.adjoint() * g);
    }
    let gram = gram.scale_real(1.0 / sample.len() as f64).hermitian_part();
    let tol = 10.0 * cfg.eq_tol;

    let s = matrix_sqrt_pd(&gram, cfg)?;
    let (imgs, residual) = images(&s, sample)?;
    if residual <= tol {
        return Ok(UnitarizationResult {
            similarity: s,
            group_sample: imgs,
            residual,
            method: UnitarizationMethod::GramAverage,
        });
    }

    let x = fixed_point(sample, &gram, cfg)?;
    let s = matrix_sqrt_pd(&x, cfg)?;
    let (imgs, residual) = images(&s, sample)?;
    if residual > tol {
        return Err(Error::NotABoundedGroup(format!(
            "images are not unitary (residual {residual:e})"
        )));
    }
    Ok(UnitarizationResult {
        similarity: s,
        group_sample: imgs,
        residual,
        method: UnitarizationMethod::FixedPoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c64;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::exact()
    }

    #[test]
    fn plus_minus_identity_is_already_unitary() {
        let i = ComplexMatrix::identity(2);
        let r = unitarize_group(&[i.clone(), i.scale_real(-1.0)], &cfg()).unwrap();
        assert!(op_norm(&(&r.similarity - &i)) < 1e-12);
        assert_eq!(r.method, UnitarizationMethod::GramAverage);
    }

    #[test]
    fn involution_is_unitarized() {
        let g = ComplexMatrix::from_real(&[&[1.0, -2.0], &[0.0, -1.0]]);
        assert!(op_norm(&(&(&g * &g) - &ComplexMatrix::identity(2))) == 0.0);
        let r = unitarize_group(&[ComplexMatrix::identity(2), g], &cfg()).unwrap();
        let m = ComplexMatrix::from_real(&[&[1.0, -1.0], &[-1.0, 3.0]]);
        assert!(op_norm(&(&(&r.similarity * &r.similarity) - &m)) < 1e-12);
        assert!(r.residual <= 1e-9);
        let u = &r.group_sample[1];
        assert!(op_norm(&(&(&u.adjoint() * u) - &ComplexMatrix::identity(2))) < 1e-9);
    }

    #[test]
    fn diagonal_unitaries_need_no_change() {
        let w = c64(0.0, 1.0);
        let sample: Vec<ComplexMatrix> = (0..4)
            .map(|p| ComplexMatrix::diag(&[w.powu(p), w.powu(3 * p)]))
            .collect();
        let r = unitarize_group(&sample, &cfg()).unwrap();
        assert!(op_norm(&(&r.similarity - &ComplexMatrix::identity(2))) < 1e-12);
    }

    #[test]
    fn partial_sample_uses_fixed_point() {
        // conjugated order-4 rotation, only three of its four elements given
        let rot = ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let m = ComplexMatrix::from_real(&[&[2.0, 1.0], &[0.0, 1.0]]);
        let mi = inverse(&m).unwrap();
        let g = &(&m * &rot) * &mi;
        let sample = vec![ComplexMatrix::identity(2), g.clone(), g.pow(2)];
        let r = unitarize_group(&sample, &cfg()).unwrap();
        assert_eq!(r.method, UnitarizationMethod::FixedPoint);
        assert!(r.residual <= 1e-8);
        let (vals, _) = hermitian_eigen(&r.similarity).unwrap();
        assert!(vals[0] > 0.0);
    }

    #[test]
    fn singular_element_is_rejected() {
        let sample = vec![ComplexMatrix::identity(2), ComplexMatrix::unit(2, 0, 0)];
        assert!(matches!(
            unitarize_group(&sample, &cfg()),
            Err(Error::SingularGroupElement { index: 1, .. })
        ));
    }

    #[test]
    fn growing_element_is_not_a_bounded_group() {
        let j = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let sample = vec![ComplexMatrix::identity(2), j.clone(), j.pow(2)];
        assert!(matches!(
            unitarize_group(&sample, &cfg()),
            Err(Error::NotABoundedGroup(_))
        ));
    }
}
