//! The rotation semigroup generated by [[e^{it},0],[e^{it},0]] and
//! [[0,e^{it}],[0,e^{it}]]: every member is similar to a partial isometry,
//! powers stay bounded, yet the closure holds two idempotents that do not
//! commute, so no single similarity works for the whole semigroup.
//!
//! cargo run --example rotation_semigroup [-- <t> <cap>]

use semigroup_isoform::corpus::build_example_26;
use semigroup_isoform::numeric::{distance, ComplexMatrix, ToleranceConfig};
use semigroup_isoform::semigroup::closure;
use semigroup_isoform::structure::analyze;

fn main() -> semigroup_isoform::Result<()> {
    let mut args = std::env::args().skip(1);
    let t: f64 = args.next().map_or(1.0, |a| a.parse().expect("t must be a number"));
    let cap: usize = args.next().map_or(2000, |a| a.parse().expect("cap must be an integer"));

    let input = build_example_26(t, 0)?;
    let s = closure(&input, &ToleranceConfig::exact().with_cap(cap))?;
    println!("t = {t}: sampled {} elements (saturated = {})", s.len(), s.saturated());

    let a0 = ComplexMatrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]);
    let b0 = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 1.0]]);
    for (name, p) in [("[[1,0],[1,0]]", &a0), ("[[0,1],[0,1]]", &b0)] {
        let d = s.elements().iter().map(|x| distance(x, p)).fold(f64::INFINITY, f64::min);
        println!("nearest sampled element to {name}: {d:.2e}");
    }

    let report = analyze(&s)?;
    let ii = &report.condition_ii;
    let iii = &report.condition_iii;
    println!("(ii) spectra in {{0}} ∪ 𝕋: {}, member idempotents commute: {}", ii.spectra_ok, ii.idempotents_commute);
    println!("(iii) c1 = {:.12}, c2 = {:.12}, holds: {}", iii.c1, iii.c2, iii.holds);
    println!("closure idempotents commute: {:?}", ii.closure_idempotents_commute);
    if let Some([p, q]) = &ii.closure_commute_witness {
        println!("non-commuting pair:\n{p:?}\n{q:?}");
    }
    Ok(())
}
