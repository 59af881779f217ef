//! Irreducibility, idempotents, disjoint families and the spectral and
//! norm conditions characterizing similarity to partial isometries.

mod conditions;
mod family;
mod idempotents;
mod irreducible;

pub use conditions::{
    analyze, check_condition_ii, check_condition_iii, ConditionII, ConditionIII, ConditionReport, SpectralWitness,
};
pub use family::{maximal_disjoint_family, minimal_nonzero_rank, IdempotentFamily};
pub use idempotents::{find_idempotents, idempotent_residual, idempotents_commute, CommuteVerdict, Idempotent};
pub use irreducible::{algebra_basis, commutant, is_irreducible, is_irreducible_matrices, IrreducibilityVerdict};
