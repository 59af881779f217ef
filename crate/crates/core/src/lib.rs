pub mod cli;
pub mod corpus;
pub mod error;
pub mod numeric;
pub mod semigroup;
pub mod similarity;
pub mod structure;

pub use error::{Error, Result};
