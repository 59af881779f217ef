//! Explicit similarity to a semigroup of partial isometries.

mod build;
mod linking;
mod orthonormalize;
mod unitarize;

pub use build::{
    build_similarity, build_similarity_unchecked, require_preconditions, SimilarityFactors, SimilarityResult,
};
pub use linking::{find_linking, linking_similarity, LinkingIsometry};
pub use orthonormalize::{orthonormalize_family, Orthonormalization};
pub use unitarize::{unitarize_group, UnitarizationMethod, UnitarizationResult};
