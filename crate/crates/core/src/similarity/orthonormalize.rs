use crate::error::{Error, Result};
use crate::numeric::{inverse, orthonormal_column_basis, ComplexMatrix, ToleranceConfig};
use crate::structure::IdempotentFamily;

/// Change of basis `B` with `B·P_j·B⁻¹ = E_jj ⊗ I_k` for every member.
///
/// The columns of `B⁻¹` are orthonormal bases of the ranges `range(P_j)`,
/// stacked in family order. Disjointness (`P_i P_j = 0`) makes `P_j` vanish
/// on the other ranges, so the image is exactly block-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthonormalization {
    pub b: ComplexMatrix,
    pub b_inv: ComplexMatrix,
}

pub fn orthonormalize_family(f: &IdempotentFamily, cfg: &ToleranceConfig) -> Result<Orthonormalization> {
    let n = f
        .members
        .first()
        .map(ComplexMatrix::rows)
        .ok_or(Error::NoIdempotents)?;
    let k = f.common_rank;
    if !f.spans_space || f.len() * k != n {
        return Err(Error::FamilyDoesNotSpan {
            members: f.len(),
            rank: k,
            span_rank: f.span_rank,
            dim: n,
        });
    }
    let mut bases = Vec::with_capacity(f.len());
    for (j, p) in f.members.iter().enumerate() {
        let q = orthonormal_column_basis(p, cfg.rank_tol);
        if q.cols() != k {
            return Err(Error::InvalidInput(format!(
                "family member {j} has a range of dimension {}, expected {k}",
                q.cols()
            )));
        }
        bases.push(q);
    }
    let b_inv = ComplexMatrix::hstack(&bases)?;
    let b = inverse(&b_inv)?;
    Ok(Orthonormalization { b, b_inv })
}
