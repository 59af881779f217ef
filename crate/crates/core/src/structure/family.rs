use serde::Serialize;

use super::idempotents::find_idempotents;
use crate::error::{Error, Result};
use crate::numeric::{op_norm_le, rank_numeric, ComplexMatrix};
use crate::semigroup::SemigroupSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdempotentFamily {
    pub members: Vec<ComplexMatrix>,
    pub common_rank: usize,
    /// `Σ range(P_i) = ℂⁿ`.
    pub spans_space: bool,
    /// Rank of the stacked ranges.
    pub span_rank: usize,
    /// No other idempotent has range inside that of a member; checked per
    /// member by range containment.
    pub minimality_witnessed: bool,
    pub containment_minimal: Vec<bool>,
    pub closure_derived: Vec<bool>,
}

impl IdempotentFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `range(q) ⊆ range(p)`.
fn range_contained(q: &ComplexMatrix, p: &ComplexMatrix, rank_p: usize, s: &SemigroupSet) -> bool {
    let stacked = ComplexMatrix::hstack(&[p.clone(), q.clone()]).expect("same row count");
    rank_numeric(&stacked, s.config()) == rank_p
}

/// Greedy maximal family of pairwise disjoint idempotents of minimal rank.
///
/// Candidates are the idempotents of minimal numerical rank, members before
/// closure-derived ones, each group in canonical order; a candidate joins
/// if `‖PQ‖, ‖QP‖ ≤ eq_tol` against every chosen member.
pub fn maximal_disjoint_family(s: &SemigroupSet) -> Result<IdempotentFamily> {
    let cfg = s.config();
    let idems = find_idempotents(s);
    if idems.is_empty() {
        return Err(Error::NoIdempotents);
    }
    let ranks: Vec<usize> = idems.iter().map(|i| rank_numeric(&i.matrix, cfg)).collect();
    let k = *ranks.iter().min().expect("nonempty");
    let mut order: Vec<usize> = (0..idems.len()).filter(|&i| ranks[i] == k).collect();
    order.sort_by_key(|&i| idems[i].closure_derived);

    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        let p = &idems[i].matrix;
        let disjoint = chosen.iter().all(|&j| {
            let q = &idems[j].matrix;
            op_norm_le(&(p * q), cfg.eq_tol) && op_norm_le(&(q * p), cfg.eq_tol)
        });
        if disjoint {
            chosen.push(i);
        }
    }

    let members: Vec<ComplexMatrix> = chosen.iter().map(|&i| idems[i].matrix.clone()).collect();
    let span_rank = rank_numeric(&ComplexMatrix::hstack(&members)?, cfg);
    let containment_minimal: Vec<bool> = chosen
        .iter()
        .map(|&i| {
            let p = &idems[i].matrix;
            idems.iter().enumerate().all(|(j, q)| {
                j == i || op_norm_le(&(&q.matrix - p), cfg.eq_tol) || !range_contained(&q.matrix, p, k, s)
            })
        })
        .collect();
    Ok(IdempotentFamily {
        common_rank: k,
        spans_space: span_rank == s.dim(),
        span_rank,
        minimality_witnessed: containment_minimal.iter().all(|&b| b),
        containment_minimal,
        closure_derived: chosen.iter().map(|&i| idems[i].closure_derived).collect(),
        members,
    })
}

/// Smallest numerical rank among the nonzero elements.
pub fn minimal_nonzero_rank(s: &SemigroupSet) -> Result<usize> {
    s.nonzero_elements()
        .map(|x| rank_numeric(x, s.config()))
        .filter(|&r| r > 0)
        .min()
        .ok_or(Error::NoNonzeroElements)
}
