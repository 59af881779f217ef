use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage of the similarity construction, attached to propagated errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Family,
    Orthonormalize,
    BlockUnitarize,
    Linking,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Family => "maximal-disjoint-family",
            Stage::Orthonormalize => "orthonormalize-family",
            Stage::BlockUnitarize => "block-unitarize",
            Stage::Linking => "linking",
            Stage::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("eigenvalue iteration did not converge within {budget} iterations")]
    Convergence { budget: usize },

    #[error("matrix is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("ambiguous eigenvalue moduli near the unit circle: {eigenvalues:?}")]
    SpectralAmbiguity { eigenvalues: Vec<Complex64> },

    #[error("eigenvalues outside the closed unit disk: {eigenvalues:?}")]
    OutsideUnitDisk { eigenvalues: Vec<Complex64> },

    #[error("powers are unbounded: ||T^{power}|| = {norm:e} exceeds {limit:e}")]
    UnboundedPowers { power: u64, norm: f64, limit: f64 },

    #[error("unimodular part is not diagonalizable (nilpotent residual {residual:e})")]
    NonDiagonalizableUnimodular { residual: f64 },

    #[error("matrix is not an element of the semigroup set")]
    NotInSet,

    #[error("input matrix {index} is not idempotent (residual {residual:e})")]
    NotIdempotent { index: usize, residual: f64 },

    #[error("no idempotents found; increase the closure budget")]
    NoIdempotents,

    #[error("semigroup has no nonzero elements")]
    NoNonzeroElements,

    #[error("sample element {index} is singular (min singular value {sigma_min:e})")]
    SingularGroupElement { index: usize, sigma_min: f64 },

    #[error("sample is not a bounded group: {0}")]
    NotABoundedGroup(String),

    #[error("no nonzero element of P_{j} S P_1 in the sampled set")]
    NoLink { j: usize },

    #[error("link for block {j} is not proportional to a partial isometry (residual {residual:e})")]
    LinkNotProportional { j: usize, residual: f64 },

    #[error(
        "disjoint idempotent family does not span: {members} members of rank {rank} span {span_rank} of {dim} dimensions"
    )]
    FamilyDoesNotSpan {
        members: usize,
        rank: usize,
        span_rank: usize,
        dim: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("construction failed: element {index} has residual {residual:e}")]
    ConstructionFailed { index: usize, residual: f64 },

    #[error("element {index}: {source}")]
    Element {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            source: Box::new(e),
        }
    }

    pub(crate) fn element(index: usize) -> impl FnOnce(Error) -> Error {
        move |e| Error::Element {
            index,
            source: Box::new(e),
        }
    }

    /// Innermost error beneath any stage or element tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } | Error::Element { source, .. } => source.root(),
            e => e,
        }
    }
}
