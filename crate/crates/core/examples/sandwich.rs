//! Checks that a semigroup sits between its matrix-unit core and the
//! partial-permutation pattern, block by block.
//!
//! cargo run --example sandwich

use semigroup_isoform::corpus::{build_s1, finite_group, verify_sandwich, GROUP_NAMES};
use semigroup_isoform::numeric::ToleranceConfig;

fn main() -> semigroup_isoform::Result<()> {
    let cfg = ToleranceConfig::exact();
    println!("{:>11} {:>2} {:>2} {:>6}  lower upper pi   rank", "group", "m", "k", "size");
    for m in 1..=3 {
        for name in GROUP_NAMES {
            let group = finite_group(name)?;
            let s = build_s1(m, &group.elements, &cfg)?;
            let r = verify_sandwich(&s, m, group.k, &group.elements, &cfg);
            println!(
                "{name:>11} {m:>2} {:>2} {:>6}  {:<5} {:<5} {:<5} {:?}",
                group.k,
                s.len(),
                r.sandwich_lower,
                r.sandwich_upper,
                r.all_partial_isometries,
                r.minimal_rank
            );
        }
    }
    Ok(())
}
