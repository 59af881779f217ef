use serde::Serialize;

use crate::numeric::{op_norm, op_norm_le, ComplexMatrix, ToleranceConfig};
use crate::semigroup::SemigroupSet;
use crate::structure::minimal_nonzero_rank;

/// Worst of `‖(T*T)² − T*T‖`, `‖T*T − (T*T)*‖` and the same for `TT*`.
pub fn partial_isometry_residual(t: &ComplexMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for g in [&t.adjoint() * t, t * &t.adjoint()] {
        worst = worst.max(op_norm(&(&(&g * &g) - &g)));
        worst = worst.max(op_norm(&(&g - &g.adjoint())));
    }
    worst
}

/// `T*T` and `TT*` are both orthogonal projections within `eq_tol`.
pub fn is_partial_isometry(t: &ComplexMatrix, cfg: &ToleranceConfig) -> (bool, f64) {
    let r = partial_isometry_residual(t);
    (r <= cfg.eq_tol, r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockCell {
    Empty,
    /// `label` is the position of the matching reference unitary, if any.
    Unitary { label: Option<usize> },
    NotUnitary { residual: f64 },
}

impl BlockCell {
    pub fn is_empty(&self) -> bool {
        matches!(self, BlockCell::Empty)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPattern {
    pub m: usize,
    pub k: usize,
    /// Row-major `m×m` occupancy.
    pub occupancy: Vec<Vec<BlockCell>>,
    /// Every nonempty block is unitary and each block row and column has at
    /// most one of them.
    pub valid: bool,
    pub error: Option<String>,
}

/// Classifies each `k×k` block of `t` as empty (`‖B‖ ≤ rank_tol`), unitary
/// (`‖B*B − I‖ ≤ eq_tol`, labelled by the nearest reference within
/// `eq_tol`) or neither.
pub fn block_pattern(
    t: &ComplexMatrix,
    m: usize,
    k: usize,
    reference: &[ComplexMatrix],
    cfg: &ToleranceConfig,
) -> BlockPattern {
    let id = ComplexMatrix::identity(k);
    let mut error = None;
    let occupancy: Vec<Vec<BlockCell>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let b = t.block(i, j, k);
                    if op_norm_le(&b, cfg.rank_tol) {
                        return BlockCell::Empty;
                    }
                    let residual = op_norm(&(&(&b.adjoint() * &b) - &id));
                    if residual > cfg.eq_tol {
                        error.get_or_insert_with(|| {
                            format!("block ({i},{j}) is neither zero nor unitary (residual {residual:e})")
                        });
                        return BlockCell::NotUnitary { residual };
                    }
                    let label = reference
                        .iter()
                        .map(|u| op_norm(&(&b - u)))
                        .enumerate()
                        .filter(|(_, d)| *d <= cfg.eq_tol)
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .map(|(l, _)| l);
                    BlockCell::Unitary { label }
                })
                .collect()
        })
        .collect();
    let rows_ok = occupancy.iter().all(|r| r.iter().filter(|c| !c.is_empty()).count() <= 1);
    let cols_ok = (0..m).all(|j| occupancy.iter().filter(|r| !r[j].is_empty()).count() <= 1);
    if error.is_none() && !(rows_ok && cols_ok) {
        error = Some("a block row or column has more than one nonzero block".into());
    }
    BlockPattern {
        m,
        k,
        valid: error.is_none(),
        occupancy,
        error,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub all_partial_isometries: bool,
    pub worst_partial_isometry_residual: f64,
    /// Every `E_ij ⊗ U` (U in the sample) is within `eq_tol` of an element.
    pub sandwich_lower: bool,
    pub missing_lower: usize,
    /// Every element has a valid block pattern.
    pub sandwich_upper: bool,
    pub upper_violations: usize,
    pub minimal_rank: Option<usize>,
    pub minimal_rank_matches_k: bool,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.all_partial_isometries && self.sandwich_lower && self.sandwich_upper && self.minimal_rank_matches_k
    }
}

/// Checks `S₀⁽ᵐ⁾(𝒰) ⊆ S ⊆ S₁⁽ᵐ⁾(𝒰)` on the sampled set, the partial
/// isometry property of every element and the minimal nonzero rank.
pub fn verify_sandwich(
    s: &SemigroupSet,
    m: usize,
    k: usize,
    group: &[ComplexMatrix],
    cfg: &ToleranceConfig,
) -> VerificationReport {
    let residuals: Vec<f64> = s.elements().iter().map(partial_isometry_residual).collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);

    let mut missing_lower = 0;
    for i in 0..m {
        for j in 0..m {
            for u in group {
                if !s.contains(&ComplexMatrix::unit(m, i, j).kron(u)) {
                    missing_lower += 1;
                }
            }
        }
    }
    let upper_violations = s
        .elements()
        .iter()
        .filter(|t| !block_pattern(t, m, k, group, cfg).valid)
        .count();
    let minimal_rank = minimal_nonzero_rank(s).ok();
    VerificationReport {
        all_partial_isometries: worst <= cfg.eq_tol,
        worst_partial_isometry_residual: worst,
        sandwich_lower: missing_lower == 0,
        missing_lower,
        sandwich_upper: upper_violations == 0,
        upper_violations,
        minimal_rank,
        minimal_rank_matches_k: minimal_rank == Some(k),
    }
}
