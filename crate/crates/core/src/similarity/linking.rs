use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{op_norm, ComplexMatrix, ToleranceConfig};
use crate::semigroup::{product_probe, SemigroupSet};

/// A nonzero element of `P_j·S·P_1` in block layout, with
/// `y*y = α·I_k = yy*` for its `(j,1)` block `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkingIsometry {
    /// Zero-based block index `j ≥ 1`.
    pub index: usize,
    /// `P_j·T·P_1` for the probed element `T`.
    pub y: ComplexMatrix,
    pub alpha: f64,
    /// Worst of `‖y*y − αI‖` and `‖yy* − αI‖`.
    pub residual: f64,
}

impl LinkingIsometry {
    /// The `(j,1)` block of `y`.
    pub fn block(&self, k: usize) -> ComplexMatrix {
        self.y.block(self.index, 0, k)
    }
}

/// Links block `j` to block `0` in a set already in block form
/// (`P_i = E_ii ⊗ I_k`, block groups unitary).
///
/// The proportionality tolerance is `10·eq_tol·max(1, α)`: α is only
/// bounded by the conditioning of the earlier stages.
pub fn find_linking(s: &SemigroupSet, m: usize, k: usize, j: usize, cfg: &ToleranceConfig) -> Result<LinkingIsometry> {
    if j == 0 || j >= m || m * k != s.dim() {
        return Err(Error::InvalidInput(format!("no link index {j} for {m} blocks of size {k}")));
    }
    let id = ComplexMatrix::identity(k);
    let pj = ComplexMatrix::unit(m, j, j).kron(&id);
    let p1 = ComplexMatrix::unit(m, 0, 0).kron(&id);
    let t = product_probe(&pj, s, &p1).ok_or(Error::NoLink { j })?;
    let y = &(&pj * t) * &p1;
    let blk = y.block(j, 0, k);
    let alpha = op_norm(&blk).powi(2);
    let scaled = id.scale_real(alpha);
    let residual = op_norm(&(&(&blk.adjoint() * &blk) - &scaled)).max(op_norm(&(&(&blk * &blk.adjoint()) - &scaled)));
    if residual > 10.0 * cfg.eq_tol * alpha.max(1.0) {
        return Err(Error::LinkNotProportional { j, residual });
    }
    Ok(LinkingIsometry {
        index: j,
        y,
        alpha,
        residual,
    })
}

/// `L = diag(I_k, y_2, …, y_m)`. Conjugating by `L⁻¹·(·)·L` turns the
/// `(j,1)` block of every link into exactly `I_k`.
pub fn linking_similarity(links: &[LinkingIsometry], m: usize, k: usize, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    if links.len() + 1 != m {
        return Err(Error::InvalidInput(format!("{} links for {m} blocks", links.len())));
    }
    let mut blocks = vec![ComplexMatrix::identity(k)];
    for (pos, link) in links.iter().enumerate() {
        if link.index != pos + 1 {
            return Err(Error::InvalidInput(format!("link {pos} has index {}", link.index)));
        }
        let b = link.block(k);
        // y*y = αI, so the smallest singular value is √α
        if link.alpha.sqrt() <= cfg.rank_tol {
            return Err(Error::Singular { pivot: link.alpha.sqrt() });
        }
        blocks.push(b);
    }
    Ok(ComplexMatrix::block_diagonal(&blocks))
}

/// Inverse of a linking similarity, using `y⁻¹ = y*/α`.
pub(crate) fn linking_inverse(links: &[LinkingIsometry], k: usize) -> ComplexMatrix {
    let mut blocks = vec![ComplexMatrix::identity(k)];
    blocks.extend(links.iter().map(|l| l.block(k).adjoint().scale_real(1.0 / l.alpha)));
    ComplexMatrix::block_diagonal(&blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::inverse;
    use crate::semigroup::{closure, GeneratorInput};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::exact()
    }

    #[test]
    fn scalar_units_link_by_e21() {
        let gens = vec![
            ComplexMatrix::unit(2, 0, 0),
            ComplexMatrix::unit(2, 0, 1),
            ComplexMatrix::unit(2, 1, 0),
        ];
        let s = closure(&GeneratorInput::new("s0", gens).unwrap(), &cfg()).unwrap();
        let l = find_linking(&s, 2, 1, 1, &cfg()).unwrap();
        assert_eq!(l.y, ComplexMatrix::unit(2, 1, 0));
        assert!((l.alpha - 1.0).abs() < 1e-15);
        let sim = linking_similarity(&[l], 2, 1, &cfg()).unwrap();
        assert_eq!(sim, ComplexMatrix::identity(2));
    }

    #[test]
    fn block_unitary_link() {
        let v = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let i2 = ComplexMatrix::identity(2);
        let members = vec![
            ComplexMatrix::unit(2, 0, 0).kron(&i2),
            ComplexMatrix::unit(2, 1, 1).kron(&i2),
            ComplexMatrix::unit(2, 1, 0).kron(&v),
            ComplexMatrix::unit(2, 0, 1).kron(&v.adjoint()),
        ];
        let s = SemigroupSet::from_matrices(4, members, &cfg(), true, 1).unwrap();
        let l = find_linking(&s, 2, 2, 1, &cfg()).unwrap();
        assert!((l.alpha - 1.0).abs() < 1e-15);
        assert_eq!(l.block(2), v);
        let sim = linking_similarity(&[l.clone()], 2, 2, &cfg()).unwrap();
        assert_eq!(sim, ComplexMatrix::block_diagonal(&[i2.clone(), v.clone()]));
        let inv = linking_inverse(&[l], 2);
        assert!(op_norm(&(&inv - &inverse(&sim).unwrap())) < 1e-15);
    }

    #[test]
    fn scaled_link_is_proportional() {
        let y = ComplexMatrix::unit(2, 1, 0).scale_real(3.0);
        let s = SemigroupSet::from_matrices(2, vec![y], &cfg(), true, 1).unwrap();
        let l = find_linking(&s, 2, 1, 1, &cfg()).unwrap();
        assert!((l.alpha - 9.0).abs() < 1e-12);
    }

    #[test]
    fn missing_link_is_an_error() {
        let s = SemigroupSet::from_matrices(2, vec![ComplexMatrix::unit(2, 0, 0)], &cfg(), true, 1).unwrap();
        assert!(matches!(find_linking(&s, 2, 1, 1, &cfg()), Err(Error::NoLink { j: 1 })));
    }

    #[test]
    fn non_proportional_link_is_reported() {
        let i2 = ComplexMatrix::identity(2);
        let y = ComplexMatrix::unit(2, 1, 0).kron(&ComplexMatrix::diag(&[
            crate::numeric::c64(1.0, 0.0),
            crate::numeric::c64(2.0, 0.0),
        ]));
        let s = SemigroupSet::from_matrices(4, vec![y, ComplexMatrix::unit(2, 0, 0).kron(&i2)], &cfg(), true, 1).unwrap();
        assert!(matches!(
            find_linking(&s, 2, 2, 1, &cfg()),
            Err(Error::LinkNotProportional { j: 1, .. })
        ));
    }
}
