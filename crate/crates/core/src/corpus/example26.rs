use crate::error::{Error, Result};
use crate::numeric::{c64, ComplexMatrix};
use crate::semigroup::GeneratorInput;

fn phase(p: usize, t: f64) -> crate::numeric::C64 {
    c64(0.0, p as f64 * t).exp()
}

/// Generators of the non-closed rotation semigroup
/// `{[[e^{int},0],[e^{imt},0]], [[0,e^{int}],[0,e^{imt}]]}`.
///
/// Depth `d` lists both column patterns for every `1 ≤ n, m ≤ d + 1`, so
/// depth 0 gives the two generators with `n = m = 1`. Every element has
/// norm `√2` and spectrum in `{0} ∪ 𝕋`; for `t/2π` irrational the closure
/// contains the non-commuting idempotents `[[1,0],[1,0]]` and
/// `[[0,1],[0,1]]`, which no finite product reaches. Irrationality is the
/// caller's responsibility.
pub fn build_example_26(t: f64, depth: usize) -> Result<GeneratorInput> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be positive and finite, got {t}")));
    }
    let z = c64(0.0, 0.0);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for n in 1..=depth + 1 {
        for m in 1..=depth + 1 {
            let (a, b) = (phase(n, t), phase(m, t));
            first.push(ComplexMatrix::from_rows(&[vec![a, z], vec![b, z]])?);
            second.push(ComplexMatrix::from_rows(&[vec![z, a], vec![z, b]])?);
        }
    }
    first.extend(second);
    GeneratorInput::new(format!("example26 t={t} depth={depth}"), first)
}
