//! End to end: hide a partial-permutation semigroup behind a random
//! similarity, then recover a similarity that turns it back into partial
//! isometries and read off the block count, block size and block group.
//!
//! cargo run --example similarize [-- <m> <group> <seed>]

use semigroup_isoform::corpus::{finite_group, random_conjugator, s1_generators};
use semigroup_isoform::numeric::{inverse, ToleranceConfig};
use semigroup_isoform::semigroup::{closure, GeneratorInput};
use semigroup_isoform::similarity::build_similarity;
use semigroup_isoform::structure::analyze;

fn main() -> semigroup_isoform::Result<()> {
    let mut args = std::env::args().skip(1);
    let m: usize = args.next().map_or(2, |a| a.parse().expect("m must be an integer"));
    let name = args.next().unwrap_or_else(|| "quaternion8".into());
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed must be an integer"));

    let group = finite_group(&name)?;
    let n = m * group.k;
    let c = random_conjugator(n, seed);
    let ci = inverse(&c)?;
    let gens = s1_generators(m, &group).iter().map(|t| &(&c * t) * &ci).collect();
    let s = closure(&GeneratorInput::new(format!("conjugated {name}"), gens)?, &ToleranceConfig::exact())?;
    println!("{n}×{n} semigroup with {} elements", s.len());

    let report = analyze(&s)?;
    println!(
        "irreducible {}, (ii) {}, (iii) {} with c1 = {:.4}, c2 = {:.4}",
        report.irreducible.irreducible,
        report.condition_ii.holds,
        report.condition_iii.holds,
        report.condition_iii.c1,
        report.condition_iii.c2
    );

    let r = build_similarity(&s)?;
    println!(
        "recovered m = {}, k = {}; worst partial-isometry residual {:.1e}",
        r.block_count, r.block_size, r.worst_residual
    );
    println!("block group sample ({} elements):", r.unitary_group_sample.len());
    for u in &r.unitary_group_sample {
        println!("{u:?}");
    }
    println!("sandwich checks pass: {}", r.verification.all_ok());
    Ok(())
}
