//! Ground-truth checks and builders for the canonical block semigroups.

mod builders;
mod example26;
mod groups;
mod instances;
mod verify;

pub use builders::{build_s0, build_s1, conjugate_set, random_conjugator, s1_generators};
pub use example26::build_example_26;
pub use groups::{finite_group, FiniteGroup, GROUP_NAMES};
pub use instances::{generate, standard_corpus, CorpusInstance, CorpusKind, CorpusRequest};
pub use verify::{
    block_pattern, is_partial_isometry, partial_isometry_residual, verify_sandwich, BlockCell, BlockPattern,
    VerificationReport,
};
