//! Irreducibility by dimension count, with an invariant subspace when the
//! answer is no.
//!
//! cargo run --example irreducibility

use semigroup_isoform::numeric::{ComplexMatrix, ToleranceConfig};
use semigroup_isoform::structure::is_irreducible_matrices;

fn show(label: &str, mats: &[ComplexMatrix]) -> semigroup_isoform::Result<()> {
    let v = is_irreducible_matrices(mats, &ToleranceConfig::exact())?;
    let n = mats[0].rows();
    println!("{label}: algebra dimension {} of {}, irreducible = {}", v.span_dim, n * n, v.irreducible);
    if let Some(w) = &v.witness {
        println!("  invariant subspace basis {w:?}");
    }
    Ok(())
}

fn main() -> semigroup_isoform::Result<()> {
    show(
        "E11, E12, E21",
        &[ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 0, 1), ComplexMatrix::unit(2, 1, 0)],
    )?;
    show("E11 alone", &[ComplexMatrix::unit(2, 0, 0)])?;
    show(
        "upper triangular pair",
        &[
            ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]),
            ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 2.0]]),
        ],
    )?;
    // a shift and its transpose generate everything
    let shift = ComplexMatrix::from_real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
    show("3×3 shift and transpose", &[shift.clone(), shift.transpose()])?;
    // block diagonal: the first coordinate is invariant
    show(
        "direct sum",
        &[
            ComplexMatrix::from_real(&[&[2.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]),
            ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 1.0]]),
        ],
    )?;
    Ok(())
}
