//! Idempotents hiding in the powers of a single matrix.
//!
//! cargo run --example limit_idempotents

use semigroup_isoform::numeric::{c64, inverse, rank_numeric, spectral_split, ComplexMatrix, ToleranceConfig, C64};
use semigroup_isoform::semigroup::detect_limit_points;

fn main() -> semigroup_isoform::Result<()> {
    let cfg = ToleranceConfig::exact();
    let cases = [
        ("diag(1, 1/2)", ComplexMatrix::diag(&[c64(1.0, 0.0), c64(0.5, 0.0)])),
        ("diag(-1, 1/2)", ComplexMatrix::diag(&[c64(-1.0, 0.0), c64(0.5, 0.0)])),
        ("[[1,1],[0,1/2]]", ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.5]])),
        ("E12", ComplexMatrix::unit(2, 0, 1)),
    ];
    for (name, t) in cases {
        show(name, &t, &cfg)?;
    }

    // an irrational rotation next to a nilpotent, in a skewed basis: no
    // power is ever idempotent, but a subsequence converges to the spectral
    // projection of the unimodular part
    let d = ComplexMatrix::from_rows(&[
        vec![C64::from_polar(1.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
        vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
    ])?;
    let m = ComplexMatrix::from_real(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]]);
    let t = &(&m * &d) * &inverse(&m)?;
    let split = spectral_split(&t, &cfg)?;
    println!("skewed rotation: {} unimodular eigenvalue(s)", split.unimodular_rank());
    show("skewed rotation", &t, &cfg)
}

fn show(name: &str, t: &ComplexMatrix, cfg: &ToleranceConfig) -> semigroup_isoform::Result<()> {
    let points = detect_limit_points(t, cfg)?;
    println!("{name}: {} limit idempotent(s)", points.len());
    for p in points {
        let defect = semigroup_isoform::numeric::op_norm(&(&(&p * &p) - &p));
        println!("  rank {} ‖P² − P‖ = {defect:.1e}\n{p:?}", rank_numeric(&p, cfg));
    }
    Ok(())
}
