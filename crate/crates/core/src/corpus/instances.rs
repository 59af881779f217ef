use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::builders::{build_s0, random_conjugator, s1_generators};
use super::example26::build_example_26;
use super::groups::finite_group;
use crate::error::{Error, Result};
use crate::numeric::{inverse, ComplexMatrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusKind {
    S0,
    S1,
    Example26,
    ConjugatedS1,
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusKind::S0 => "s0",
            CorpusKind::S1 => "s1",
            CorpusKind::Example26 => "example26",
            CorpusKind::ConjugatedS1 => "conjugated-s1",
        })
    }
}

impl FromStr for CorpusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s0" => Ok(CorpusKind::S0),
            "s1" => Ok(CorpusKind::S1),
            "example26" => Ok(CorpusKind::Example26),
            "conjugated-s1" => Ok(CorpusKind::ConjugatedS1),
            other => Err(Error::InvalidInput(format!(
                "unknown corpus kind {other:?}; expected s0, s1, example26 or conjugated-s1"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRequest {
    pub kind: CorpusKind,
    pub m: usize,
    pub group: String,
    /// Rotation angle of the example kind.
    pub t: f64,
    pub depth: usize,
    pub seed: u64,
}

impl CorpusRequest {
    pub fn new(kind: CorpusKind, m: usize, group: &str) -> Self {
        CorpusRequest {
            kind,
            m,
            group: group.to_string(),
            t: 1.0,
            depth: 0,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn name(&self) -> String {
        match self.kind {
            CorpusKind::Example26 => format!("example26-t{}-d{}", self.t, self.depth),
            CorpusKind::ConjugatedS1 => format!("conjugated-s1-m{}-{}-seed{}", self.m, self.group, self.seed),
            kind => format!("{kind}-m{}-{}", self.m, self.group),
        }
    }
}

/// A generated corpus instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusInstance {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<ComplexMatrix>,
    /// `matrices` lists every element (`s0`) rather than generators.
    pub complete: bool,
    /// Block parameters `(m, k)` and the block group, for structured kinds.
    pub blocks: Option<(usize, usize)>,
    pub group: Vec<ComplexMatrix>,
    pub conjugator: Option<ComplexMatrix>,
}

/// Builds the matrices of a corpus instance: every element for `s0`, a
/// generating set for `s1` and `conjugated-s1` (whose full element count
/// grows like `m!·|𝒰|^m`), and the generators for `example26`.
pub fn generate(req: &CorpusRequest) -> Result<CorpusInstance> {
    let cfg = ToleranceConfig::exact();
    if req.kind == CorpusKind::Example26 {
        let g = build_example_26(req.t, req.depth)?;
        return Ok(CorpusInstance {
            label: req.name(),
            dim: g.dim,
            matrices: g.generators,
            complete: false,
            blocks: None,
            group: Vec::new(),
            conjugator: None,
        });
    }
    if req.m == 0 {
        return Err(Error::InvalidInput("block count m must be positive".into()));
    }
    let group = finite_group(&req.group)?;
    let n = req.m * group.k;
    let (matrices, complete, conjugator) = match req.kind {
        CorpusKind::S0 => (build_s0(req.m, &group.elements, &cfg)?.elements().to_vec(), true, None),
        CorpusKind::S1 => {
            // validates the group the same way build_s1 would
            build_s0(1, &group.elements, &cfg)?;
            (s1_generators(req.m, &group), false, None)
        }
        CorpusKind::ConjugatedS1 => {
            let m = random_conjugator(n, req.seed);
            let mi = inverse(&m)?;
            let gens = s1_generators(req.m, &group)
                .iter()
                .map(|t| &(&m * t) * &mi)
                .collect();
            (gens, false, Some(m))
        }
        CorpusKind::Example26 => unreachable!(),
    };
    Ok(CorpusInstance {
        label: req.name(),
        dim: n,
        matrices,
        complete,
        blocks: Some((req.m, group.k)),
        group: group.elements,
        conjugator,
    })
}

/// The fixed regression corpus: matrix-unit sets, partial-permutation
/// semigroups over each kind of block group, seeded conjugates of them, and
/// the rotation example.
pub fn standard_corpus() -> Vec<CorpusRequest> {
    let mut out = vec![
        CorpusRequest::new(CorpusKind::S0, 2, "trivial"),
        CorpusRequest::new(CorpusKind::S0, 2, "c4"),
        CorpusRequest::new(CorpusKind::S0, 1, "quaternion8"),
    ];
    for m in 1..=3 {
        for g in ["trivial", "c2", "dihedral8"] {
            out.push(CorpusRequest::new(CorpusKind::S1, m, g));
        }
    }
    for m in 1..=3 {
        for (i, g) in ["trivial", "c3", "quaternion8"].iter().enumerate() {
            out.push(CorpusRequest::new(CorpusKind::ConjugatedS1, m, g).with_seed((10 * m + i) as u64));
        }
    }
    out.push(CorpusRequest::new(CorpusKind::Example26, 0, "trivial"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip() {
        for k in [CorpusKind::S0, CorpusKind::S1, CorpusKind::Example26, CorpusKind::ConjugatedS1] {
            assert_eq!(k.to_string().parse::<CorpusKind>().unwrap(), k);
        }
        assert!("s2".parse::<CorpusKind>().is_err());
    }

    #[test]
    fn s0_trivial_has_five_elements() {
        let inst = generate(&CorpusRequest::new(CorpusKind::S0, 2, "trivial")).unwrap();
        assert_eq!(inst.matrices.len(), 5);
        assert!(inst.complete);
        assert_eq!(inst.blocks, Some((2, 1)));
    }

    #[test]
    fn conjugated_instances_are_seeded() {
        let r = CorpusRequest::new(CorpusKind::ConjugatedS1, 2, "c3").with_seed(5);
        assert_eq!(generate(&r).unwrap(), generate(&r).unwrap());
        assert_ne!(generate(&r).unwrap(), generate(&r.clone().with_seed(6)).unwrap());
    }

    #[test]
    fn standard_corpus_generates() {
        let names: Vec<String> = standard_corpus().iter().map(CorpusRequest::name).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
        for r in standard_corpus() {
            generate(&r).unwrap();
        }
    }
}
