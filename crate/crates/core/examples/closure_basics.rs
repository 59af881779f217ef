//! Multiplicative closure of a generator set, exact and capped.
//!
//! cargo run --example closure_basics

use semigroup_isoform::numeric::{c64, ComplexMatrix, ToleranceConfig};
use semigroup_isoform::semigroup::{closure, GeneratorInput};

fn main() -> semigroup_isoform::Result<()> {
    let cfg = ToleranceConfig::exact();

    // matrix units E11, E12, E21 close to all four units plus zero
    let gens = vec![ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 0, 1), ComplexMatrix::unit(2, 1, 0)];
    let s = closure(&GeneratorInput::new("matrix units", gens)?, &cfg)?;
    println!("matrix units: {} elements, saturated = {}, longest word = {}", s.len(), s.saturated(), s.max_word_length());
    for t in s.elements() {
        println!("{t:?}");
    }

    // a contraction never closes exactly; the cap stops the search and the
    // set carries the power limits of its members instead
    let t = ComplexMatrix::diag(&[c64(0.0, 1.0), c64(0.9, 0.0)]);
    let s = closure(&GeneratorInput::new("rotation + contraction", vec![t])?, &cfg.with_cap(50))?;
    println!(
        "diag(i, 0.9) with cap 50: {} elements, saturated = {}, {} limit point(s)",
        s.len(),
        s.saturated(),
        s.limit_points().len()
    );
    for p in s.limit_points() {
        println!("limit {p:?}");
    }
    Ok(())
}
