use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::limits::{detect_limit_points_with, LimitOptions};
use super::set::{canonical_cmp, snap_zero, MatrixIndex, SemigroupSet};
use crate::error::{Error, Result};
use crate::numeric::{op_norm, ComplexMatrix, ToleranceConfig};

/// Frontier elements multiplied per batch; bounds the memory held by
/// candidate products without affecting the result.
const FRONTIER_CHUNK: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInput {
    pub dim: usize,
    pub generators: Vec<ComplexMatrix>,
    pub label: String,
}

impl GeneratorInput {
    pub fn new(label: impl Into<String>, generators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = generators
            .first()
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::InvalidInput("generator list is empty".into()))?;
        let g = GeneratorInput {
            dim,
            generators,
            label: label.into(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::InvalidInput("generator list is empty".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (i, g) in self.generators.iter().enumerate() {
            g.validate_element()?;
            if g.rows() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator {i} is {}×{}, expected {}×{}",
                    g.rows(),
                    g.cols(),
                    self.dim,
                    self.dim
                )));
            }
        }
        Ok(())
    }
}

pub(crate) struct Saturation {
    pub elements: Vec<ComplexMatrix>,
    pub saturated: bool,
    pub max_word_length: usize,
}

/// Breadth-first saturation of `seeds` under right multiplication by
/// `gens`. Products are evaluated in parallel; insertion is sequential in
/// a fixed order so the result does not depend on the thread count.
pub(crate) fn saturate(
    dim: usize,
    seeds: Vec<ComplexMatrix>,
    gens: &[ComplexMatrix],
    cfg: &ToleranceConfig,
) -> Saturation {
    let cap = cfg.closure_cap;
    let mut index = MatrixIndex::new(dim, cfg.eq_tol);
    let mut elements: Vec<ComplexMatrix> = Vec::new();

    let mut seeds: Vec<ComplexMatrix> = seeds.into_iter().map(|m| snap_zero(m, cfg.rank_tol)).collect();
    seeds.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
    let mut capped = false;
    for s in seeds {
        if index.find(&s, &elements).is_some() {
            continue;
        }
        if elements.len() >= cap {
            capped = true;
            break;
        }
        index.insert(&s, elements.len());
        elements.push(s);
    }
    if capped {
        return Saturation {
            elements,
            saturated: false,
            max_word_length: 1,
        };
    }

    let mut frontier: Vec<usize> = (0..elements.len()).collect();
    let mut max_word_length = usize::from(!elements.is_empty());

    while !frontier.is_empty() {
        let mut pending: Vec<ComplexMatrix> = Vec::new();
        let mut pending_index = MatrixIndex::new(dim, cfg.eq_tol);

        'chunks: for chunk in frontier.chunks(FRONTIER_CHUNK) {
            let novel: Vec<ComplexMatrix> = chunk
                .par_iter()
                .flat_map_iter(|&w| gens.iter().map(move |g| (w, g)))
                .filter_map(|(w, g)| {
                    let p = snap_zero(&elements[w] * g, cfg.rank_tol);
                    index.find(&p, &elements).is_none().then_some(p)
                })
                .collect();
            for p in novel {
                if pending_index.find(&p, &pending).is_some() {
                    continue;
                }
                if elements.len() + pending.len() >= cap {
                    capped = true;
                    break 'chunks;
                }
                pending_index.insert(&p, pending.len());
                pending.push(p);
            }
        }

        pending.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
        frontier = (elements.len()..elements.len() + pending.len()).collect();
        if !pending.is_empty() {
            max_word_length += 1;
        }
        for p in pending {
            index.insert(&p, elements.len());
            elements.push(p);
        }
        if capped {
            break;
        }
    }

    Saturation {
        elements,
        saturated: !capped,
        max_word_length,
    }
}

/// Power-limit idempotents of the non-nilpotent members of an unsaturated
/// sample. Members whose powers look unbounded are skipped.
pub(crate) fn sampled_limit_points(elements: &[ComplexMatrix], cfg: &ToleranceConfig) -> Vec<ComplexMatrix> {
    let bound = elements.iter().map(op_norm).fold(0.0, f64::max);
    let opts = LimitOptions {
        bound: Some(bound),
        include_zero: false,
    };
    let found: Vec<Vec<ComplexMatrix>> = elements
        .par_iter()
        .map(|t| detect_limit_points_with(t, &opts, cfg).unwrap_or_default())
        .collect();
    let dim = elements.first().map_or(0, ComplexMatrix::rows);
    let mut index = MatrixIndex::new(dim, cfg.eq_tol);
    let mut out: Vec<ComplexMatrix> = Vec::new();
    for p in found.into_iter().flatten() {
        if index.find(&p, &out).is_none() {
            index.insert(&p, out.len());
            out.push(p);
        }
    }
    out.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
    out
}

/// Multiplicative closure of the generators, truncated at
/// `cfg.closure_cap` elements.
///
/// An unsaturated result also carries the power-limit idempotents of its
/// members, which belong to the norm closure but are never reached by
/// finite products.
pub fn closure(gens: &GeneratorInput, cfg: &ToleranceConfig) -> Result<SemigroupSet> {
    cfg.validate()?;
    gens.validate()?;
    let run = saturate(gens.dim, gens.generators.clone(), &gens.generators, cfg);
    let limits = if run.saturated {
        Vec::new()
    } else {
        sampled_limit_points(&run.elements, cfg)
    };
    Ok(SemigroupSet::assemble(
        gens.dim,
        run.elements,
        cfg,
        run.saturated,
        run.max_word_length,
        limits,
    ))
}
