use std::path::Path;
use std::time::Instant;

use super::document::{
    read_matrix_file, AnalysisDocument, ClosureDocument, ClosureInfo, ClosureSummary, CorpusMetadata, FailureRecord,
    LinkSummary, MatrixFileDocument, SimilarityDocument, Timings, ToleranceOverrides, FORMAT_VERSION,
};
use super::{CliError, ExitCode};
use crate::corpus::{generate, CorpusRequest};
use crate::error::Error;
use crate::numeric::ToleranceConfig;
use crate::semigroup::{closure, GeneratorInput, SemigroupSet};
use crate::similarity::{build_similarity_unchecked, require_preconditions};
use crate::structure::{analyze, maximal_disjoint_family};

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn config_for(doc: &MatrixFileDocument, flags: ToleranceOverrides) -> Result<ToleranceConfig, CliError> {
    let cfg = flags.or(doc.metadata.tolerances).apply(ToleranceConfig::exact());
    cfg.validate().map_err(|e| CliError::new(ExitCode::Parse, e.to_string()))?;
    Ok(cfg)
}

fn close(doc: &MatrixFileDocument, cfg: &ToleranceConfig) -> Result<SemigroupSet, CliError> {
    doc.validate()?;
    let input = GeneratorInput {
        dim: doc.dim,
        generators: doc.matrices(),
        label: doc.metadata.label.clone(),
    };
    closure(&input, cfg).map_err(|e| CliError::from_library(&e, ExitCode::Numeric))
}

/// Closure of the document's matrices.
pub fn closure_document(doc: &MatrixFileDocument, flags: ToleranceOverrides) -> Result<ClosureDocument, CliError> {
    let cfg = config_for(doc, flags)?;
    let s = close(doc, &cfg)?;
    let mut out = MatrixFileDocument::new(doc.metadata.label.clone(), s.dim(), "e", s.elements().to_vec());
    out.metadata.tolerances = flags.or(doc.metadata.tolerances);
    Ok(ClosureDocument {
        format_version: FORMAT_VERSION,
        dim: s.dim(),
        matrices: out.matrices,
        metadata: out.metadata,
        tolerances: cfg,
        closure: ClosureInfo {
            element_count: s.len(),
            saturated: s.saturated(),
            max_word_length: s.max_word_length(),
            contains_zero: s.contains_zero(),
            limit_points: s.limit_points().to_vec(),
        },
    })
}

fn summary(s: &SemigroupSet) -> ClosureSummary {
    ClosureSummary {
        element_count: s.len(),
        saturated: s.saturated(),
        max_word_length: s.max_word_length(),
        contains_zero: s.contains_zero(),
        limit_point_count: s.limit_points().len(),
    }
}

fn analysis(
    command: &str,
    doc: &MatrixFileDocument,
    flags: ToleranceOverrides,
) -> Result<(AnalysisDocument, SemigroupSet), CliError> {
    let cfg = config_for(doc, flags)?;
    let t0 = Instant::now();
    let s = close(doc, &cfg)?;
    let closure_ms = ms(t0);
    let t1 = Instant::now();
    let report = analyze(&s).map_err(|e| CliError::from_library(&e, ExitCode::Numeric))?;
    let analysis_ms = ms(t1);
    let out = AnalysisDocument {
        format_version: FORMAT_VERSION,
        command: command.to_string(),
        label: doc.metadata.label.clone(),
        dim: s.dim(),
        tolerances: cfg,
        closure: summary(&s),
        report,
        similarity: None,
        verification: None,
        failure: None,
        timings: Timings {
            closure_ms,
            analysis_ms,
            similarity_ms: 0.0,
        },
    };
    Ok((out, s))
}

/// Closure, irreducibility and conditions (ii) and (iii).
pub fn analyze_document(doc: &MatrixFileDocument, flags: ToleranceOverrides) -> Result<AnalysisDocument, CliError> {
    analysis("analyze", doc, flags).map(|(d, _)| d)
}

/// Analysis followed by the similarity construction. Construction failures
/// are recorded in the document's `failure` field (exit 4, or 5 for a
/// non-spanning family) rather than returned as errors.
pub fn similarize_document(doc: &MatrixFileDocument, flags: ToleranceOverrides) -> Result<AnalysisDocument, CliError> {
    let (mut out, s) = analysis("similarize", doc, flags)?;
    let t = Instant::now();
    let result = require_preconditions(&out.report.irreducible, &out.report.condition_ii, s.dim())
        .and_then(|_| build_similarity_unchecked(&s));
    out.timings.similarity_ms = ms(t);
    match result {
        Ok(r) => {
            out.verification = Some(r.verification.clone());
            out.similarity = Some(SimilarityDocument {
                similarity: r.similarity,
                inverse: r.inverse,
                block_count: r.block_count,
                block_size: r.block_size,
                unitary_group_sample: r.unitary_group_sample,
                family: r.family.members,
                factors: r.factors,
                block_methods: r.block_methods,
                links: r.links.iter().map(LinkSummary::from).collect(),
                worst_residual: r.worst_residual,
            });
        }
        Err(e) => {
            // input was validated already, so anything but convergence or a
            // spanning failure is a construction failure
            let code = match e.root() {
                Error::Convergence { .. } => ExitCode::Numeric,
                Error::FamilyDoesNotSpan { .. } => ExitCode::Inconsistent,
                _ => ExitCode::ConstructionFailed,
            };
            if code == ExitCode::Numeric {
                return Err(CliError::from_library(&e, code));
            }
            let (family, span_rank) = match e.root() {
                Error::FamilyDoesNotSpan { span_rank, .. } => (
                    maximal_disjoint_family(&s).ok().map(|f| f.members),
                    Some(*span_rank),
                ),
                _ => (None, None),
            };
            out.failure = Some(FailureRecord {
                exit_code: code.code(),
                stage: match &e {
                    Error::Stage { stage, .. } => Some(stage.to_string()),
                    Error::Precondition(_) => Some("precondition".into()),
                    _ => None,
                },
                message: e.to_string(),
                family,
                span_rank,
            });
        }
    }
    Ok(out)
}

/// Deterministic corpus document for a request.
pub fn gen_corpus_document(req: &CorpusRequest) -> Result<MatrixFileDocument, CliError> {
    let inst = generate(req).map_err(|e| CliError::new(ExitCode::Parse, e.to_string()))?;
    let prefix = if inst.complete { "e" } else { "g" };
    let mut doc = MatrixFileDocument::new(inst.label, inst.dim, prefix, inst.matrices);
    doc.metadata.corpus = Some(CorpusMetadata {
        request: req.clone(),
        complete: inst.complete,
        block_count: inst.blocks.map(|b| b.0),
        block_size: inst.blocks.map(|b| b.1),
        conjugator: inst.conjugator,
    });
    Ok(doc)
}

pub fn cmd_closure(input: &Path, flags: ToleranceOverrides) -> Result<ClosureDocument, CliError> {
    closure_document(&read_matrix_file(input)?, flags)
}

pub fn cmd_analyze(input: &Path, flags: ToleranceOverrides) -> Result<AnalysisDocument, CliError> {
    analyze_document(&read_matrix_file(input)?, flags)
}

pub fn cmd_similarize(input: &Path, flags: ToleranceOverrides) -> Result<AnalysisDocument, CliError> {
    similarize_document(&read_matrix_file(input)?, flags)
}

pub fn cmd_gen_corpus(req: &CorpusRequest) -> Result<MatrixFileDocument, CliError> {
    gen_corpus_document(req)
}
