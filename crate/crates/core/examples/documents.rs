//! The document layer used by the command-line tool, driven in memory:
//! generate a corpus instance, analyze it, and print the JSON report.
//!
//! cargo run --example documents [-- <kind> <m> <group> <seed>]

use semigroup_isoform::cli::{analyze_document, gen_corpus_document, similarize_document, to_json, ToleranceOverrides};
use semigroup_isoform::corpus::{CorpusKind, CorpusRequest};

fn main() {
    let mut args = std::env::args().skip(1);
    let kind: CorpusKind = args.next().map_or(CorpusKind::ConjugatedS1, |a| a.parse().expect("unknown kind"));
    let m: usize = args.next().map_or(2, |a| a.parse().expect("m must be an integer"));
    let group = args.next().unwrap_or_else(|| "c4".into());
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed must be an integer"));

    let req = CorpusRequest::new(kind, m, &group).with_seed(seed);
    let doc = gen_corpus_document(&req).unwrap_or_else(|e| panic!("{e}"));
    println!("{} with {} matrices of size {}", doc.metadata.label, doc.matrices.len(), doc.dim);

    let flags = ToleranceOverrides {
        cap: Some(2000),
        ..ToleranceOverrides::default()
    };
    let analysis = analyze_document(&doc, flags).unwrap_or_else(|e| panic!("{e}"));
    println!(
        "irreducible {}, (ii) {}, (iii) {}",
        analysis.report.irreducible.irreducible, analysis.report.condition_ii.holds, analysis.report.condition_iii.holds
    );

    let sim = similarize_document(&doc, flags).unwrap_or_else(|e| panic!("{e}"));
    println!("exit code {}", sim.exit_code().code());
    print!("{}", to_json(&sim).unwrap_or_else(|e| panic!("{e}")));
}
