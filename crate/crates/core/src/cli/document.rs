use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::{CliError, ExitCode};
use crate::corpus::{CorpusRequest, VerificationReport};
use crate::numeric::{ComplexMatrix, ToleranceConfig};
use crate::similarity::{LinkingIsometry, SimilarityFactors, UnitarizationMethod};
use crate::structure::ConditionReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

impl ToleranceOverrides {
    /// `self` takes precedence over `fallback`.
    pub fn or(self, fallback: ToleranceOverrides) -> ToleranceOverrides {
        ToleranceOverrides {
            eq_tol: self.eq_tol.or(fallback.eq_tol),
            spec_tol: self.spec_tol.or(fallback.spec_tol),
            rank_tol: self.rank_tol.or(fallback.rank_tol),
            cap: self.cap.or(fallback.cap),
        }
    }

    pub fn apply(self, base: ToleranceConfig) -> ToleranceConfig {
        ToleranceConfig {
            eq_tol: self.eq_tol.unwrap_or(base.eq_tol),
            spec_tol: self.spec_tol.unwrap_or(base.spec_tol),
            rank_tol: self.rank_tol.unwrap_or(base.rank_tol),
            closure_cap: self.cap.unwrap_or(base.closure_cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub entries: ComplexMatrix,
}

/// Provenance of a generated corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusMetadata {
    pub request: CorpusRequest,
    /// The matrices list every element rather than generators.
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<CorpusMetadata>,
}

/// Input document: a named list of `dim×dim` matrices, each row-major with
/// entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFileDocument {
    pub format_version: u32,
    pub dim: usize,
    pub matrices: Vec<NamedMatrix>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl MatrixFileDocument {
    pub fn new(label: impl Into<String>, dim: usize, prefix: &str, matrices: Vec<ComplexMatrix>) -> Self {
        MatrixFileDocument {
            format_version: FORMAT_VERSION,
            dim,
            matrices: matrices
                .into_iter()
                .enumerate()
                .map(|(i, entries)| NamedMatrix {
                    name: format!("{prefix}{i}"),
                    entries,
                })
                .collect(),
            metadata: Metadata {
                label: label.into(),
                ..Metadata::default()
            },
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::new(ExitCode::Parse, msg));
        if self.format_version != FORMAT_VERSION {
            return bad(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            ));
        }
        if self.dim == 0 {
            return bad("dim must be positive".into());
        }
        if self.matrices.is_empty() {
            return bad("matrix list is empty".into());
        }
        for m in &self.matrices {
            if m.entries.rows() != self.dim || m.entries.cols() != self.dim {
                return bad(format!(
                    "matrix {:?} is {}×{}, expected {}×{}",
                    m.name,
                    m.entries.rows(),
                    m.entries.cols(),
                    self.dim,
                    self.dim
                ));
            }
            if !m.entries.is_finite() {
                return bad(format!("matrix {:?} has non-finite entries", m.name));
            }
        }
        Ok(())
    }

    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        self.matrices.iter().map(|m| m.entries.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureInfo {
    pub element_count: usize,
    pub saturated: bool,
    pub max_word_length: usize,
    pub contains_zero: bool,
    /// Power-limit idempotents of an unsaturated closure.
    pub limit_points: Vec<ComplexMatrix>,
}

/// Output of `closure`: readable again as a [`MatrixFileDocument`], with
/// the elements as its matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureDocument {
    pub format_version: u32,
    pub dim: usize,
    pub matrices: Vec<NamedMatrix>,
    pub metadata: Metadata,
    pub tolerances: ToleranceConfig,
    pub closure: ClosureInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkSummary {
    pub index: usize,
    pub alpha: f64,
    pub residual: f64,
}

impl From<&LinkingIsometry> for LinkSummary {
    fn from(l: &LinkingIsometry) -> Self {
        LinkSummary {
            index: l.index,
            alpha: l.alpha,
            residual: l.residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityDocument {
    pub similarity: ComplexMatrix,
    pub inverse: ComplexMatrix,
    pub block_count: usize,
    pub block_size: usize,
    pub unitary_group_sample: Vec<ComplexMatrix>,
    pub family: Vec<ComplexMatrix>,
    pub factors: SimilarityFactors,
    pub block_methods: Vec<UnitarizationMethod>,
    pub links: Vec<LinkSummary>,
    pub worst_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    pub message: String,
    /// Disjoint family found before a spanning failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<ComplexMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_rank: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub closure_ms: f64,
    pub analysis_ms: f64,
    pub similarity_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureSummary {
    pub element_count: usize,
    pub saturated: bool,
    pub max_word_length: usize,
    pub contains_zero: bool,
    pub limit_point_count: usize,
}

/// Output of `analyze` and `similarize`. Timings come last so documents
/// can be compared with them stripped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisDocument {
    pub format_version: u32,
    pub command: String,
    pub label: String,
    pub dim: usize,
    pub tolerances: ToleranceConfig,
    pub closure: ClosureSummary,
    pub report: ConditionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity: Option<SimilarityDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureRecord>,
    pub timings: Timings,
}

impl AnalysisDocument {
    pub fn exit_code(&self) -> ExitCode {
        match &self.failure {
            None => ExitCode::Success,
            Some(f) => ExitCode::from_code(f.exit_code),
        }
    }

    /// Serialization with the timings zeroed, for determinism checks.
    pub fn to_json_without_timings(&self) -> String {
        let mut d = self.clone();
        d.timings = Timings::default();
        to_json(&d).expect("documents serialize")
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::new(ExitCode::Parse, format!("cannot serialize document: {e}")))
}

pub fn parse_document<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::new(
            ExitCode::Parse,
            format!("{origin}: line {}, column {}: {e}", e.line(), e.column()),
        )
    })
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFileDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(ExitCode::Parse, format!("cannot read {}: {e}", path.display())))?;
    let doc: MatrixFileDocument = parse_document(&text, &path.display().to_string())?;
    doc.validate()?;
    Ok(doc)
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so readers never observe a partial document.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::new(ExitCode::Parse, format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c64;

    #[test]
    fn matrices_round_trip_bit_exactly() {
        let m = ComplexMatrix::from_rows(&[
            vec![c64(0.1, -1.0 / 3.0), c64(1e-300, 2.0f64.sqrt())],
            vec![c64(-0.0, 5e-324), c64(std::f64::consts::PI, -1.7976931348623157e308)],
        ])
        .unwrap();
        let doc = MatrixFileDocument::new("rt", 2, "g", vec![m.clone()]);
        let text = to_json(&doc).unwrap();
        let back: MatrixFileDocument = parse_document(&text, "mem").unwrap();
        let a: Vec<u64> = m.as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
        let b: Vec<u64> = back.matrices[0]
            .entries
            .as_slice()
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_document::<MatrixFileDocument>("{\n  \"dim\": 2,\n  oops", "f.json").unwrap_err();
        assert_eq!(e.code, ExitCode::Parse);
        assert!(e.message.contains("line 3"), "{}", e.message);
    }

    #[test]
    fn validation() {
        let mut doc = MatrixFileDocument::new("v", 2, "g", vec![ComplexMatrix::identity(2)]);
        doc.validate().unwrap();
        doc.matrices.clear();
        assert!(doc.validate().is_err());
        let doc = MatrixFileDocument::new("v", 3, "g", vec![ComplexMatrix::identity(2)]);
        assert!(doc.validate().is_err());
        let mut doc = MatrixFileDocument::new("v", 2, "g", vec![ComplexMatrix::identity(2)]);
        doc.format_version = 2;
        assert!(doc.validate().is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let flags = ToleranceOverrides {
            eq_tol: Some(1e-7),
            ..Default::default()
        };
        let file = ToleranceOverrides {
            eq_tol: Some(1e-5),
            cap: Some(50),
            ..Default::default()
        };
        let cfg = flags.or(file).apply(ToleranceConfig::exact());
        assert_eq!(cfg.eq_tol, 1e-7);
        assert_eq!(cfg.closure_cap, 50);
        assert_eq!(cfg.spec_tol, 1e-6);
    }
}
