//! Making a bounded group unitary by a single similarity.
//!
//! cargo run --example unitarize

use semigroup_isoform::corpus::{finite_group, random_conjugator, GROUP_NAMES};
use semigroup_isoform::numeric::{inverse, op_norm, ComplexMatrix, ToleranceConfig};
use semigroup_isoform::similarity::unitarize_group;

fn main() -> semigroup_isoform::Result<()> {
    let cfg = ToleranceConfig::exact();

    // g = [[1,-2],[0,-1]] squares to I; the Gram mean of {I, g} is
    // [[1,-1],[-1,3]] and its square root unitarizes g
    let g = ComplexMatrix::from_real(&[&[1.0, -2.0], &[0.0, -1.0]]);
    let r = unitarize_group(&[ComplexMatrix::identity(2), g.clone()], &cfg)?;
    let u = &(&r.similarity * &g) * &inverse(&r.similarity)?;
    println!("S = {:?}", r.similarity);
    println!("S g S⁻¹ = {u:?}");
    println!("method {:?}, residual {:.1e}", r.method, r.residual);

    for name in GROUP_NAMES {
        let group = finite_group(name)?;
        let c = random_conjugator(group.k, 1);
        let ci = inverse(&c)?;
        let skewed: Vec<ComplexMatrix> = group.elements.iter().map(|x| &(&c * x) * &ci).collect();
        let worst_before = skewed.iter().map(op_norm).fold(0.0, f64::max);
        let r = unitarize_group(&skewed, &cfg)?;
        println!(
            "{name:>11} (order {}): max ‖h‖ before {worst_before:.3}, unitarity residual after {:.1e}",
            group.order(),
            r.residual
        );
    }
    Ok(())
}
