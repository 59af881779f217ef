//! Command surface: documents, exit codes and the `closure`, `analyze`,
//! `similarize` and `gen-corpus` commands.

mod args;
mod commands;
mod document;

use std::fmt;

pub use args::{run, Cli, Command, CorpusArgs, InputArgs};
pub use commands::{
    analyze_document, closure_document, cmd_analyze, cmd_closure, cmd_gen_corpus, cmd_similarize, gen_corpus_document,
    similarize_document,
};
pub use document::{
    parse_document, read_matrix_file, to_json, write_atomic, AnalysisDocument, ClosureDocument, ClosureInfo,
    ClosureSummary, CorpusMetadata, FailureRecord, LinkSummary, MatrixFileDocument, Metadata, NamedMatrix,
    SimilarityDocument, Timings, ToleranceOverrides, FORMAT_VERSION,
};

use crate::error::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success,
    /// Unreadable or malformed input, bad arguments, I/O failure.
    Parse,
    /// A numerical kernel failed (eigen-iteration budget and the like).
    Numeric,
    /// The similarity construction or its preconditions failed.
    ConstructionFailed,
    /// The disjoint idempotent family does not span the space.
    Inconsistent,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        match self {
            ExitCode::Success => 0,
            ExitCode::Parse => 2,
            ExitCode::Numeric => 3,
            ExitCode::ConstructionFailed => 4,
            ExitCode::Inconsistent => 5,
        }
    }

    pub(crate) fn from_code(code: i32) -> Self {
        match code {
            0 => ExitCode::Success,
            2 => ExitCode::Parse,
            3 => ExitCode::Numeric,
            5 => ExitCode::Inconsistent,
            _ => ExitCode::ConstructionFailed,
        }
    }

    /// Classifies a library error; `otherwise` covers errors that are not
    /// input, convergence or spanning failures.
    pub fn for_error(e: &Error, otherwise: ExitCode) -> ExitCode {
        match e.root() {
            Error::Convergence { .. } => ExitCode::Numeric,
            Error::FamilyDoesNotSpan { .. } => ExitCode::Inconsistent,
            Error::InvalidInput(_) | Error::DimensionMismatch(_) | Error::NonFinite | Error::InvalidTolerance(_) => {
                ExitCode::Parse
            }
            _ => otherwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn new(code: ExitCode, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub(crate) fn from_library(e: &Error, otherwise: ExitCode) -> Self {
        CliError::new(ExitCode::for_error(e, otherwise), e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Sizes the global thread pool from `SEMIGROUP_ISOFORM_THREADS`, if set.
pub fn configure_threads_from_env() -> Result<Option<usize>, CliError> {
    let Ok(raw) = std::env::var("SEMIGROUP_ISOFORM_THREADS") else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::new(ExitCode::Parse, format!("SEMIGROUP_ISOFORM_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new(ExitCode::Parse, format!("cannot configure thread pool: {e}")))?;
    Ok(Some(n))
}
