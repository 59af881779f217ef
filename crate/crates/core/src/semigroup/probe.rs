use super::closure::saturate;
use super::set::{snap_zero, MatrixIndex, SemigroupSet};
use crate::error::{Error, Result};
use crate::numeric::{op_norm_le, ComplexMatrix, ToleranceConfig};

/// First element `T` of `s` (canonical order) with `‖A·T·B‖ > rank_tol`.
pub fn product_probe<'a>(a: &ComplexMatrix, s: &'a SemigroupSet, b: &ComplexMatrix) -> Option<&'a ComplexMatrix> {
    let n = s.dim();
    if a.cols() != n || b.rows() != n {
        return None;
    }
    let rank_tol = s.config().rank_tol;
    s.elements()
        .iter()
        .find(|t| !op_norm_le(&(&(a * *t) * b), rank_tol))
}

/// The two-sided ideal `{A·T·B : A, B ∈ S ∪ {I}}`, saturated under right
/// multiplication by the members of `S`.
///
/// The result is saturated only if `s` is and no cap was hit.
pub fn ideal(s: &SemigroupSet, t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SemigroupSet> {
    cfg.validate()?;
    if s.find(t).is_none() {
        return Err(Error::NotInSet);
    }
    let n = s.dim();
    let mut with_one: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(n)];
    with_one.extend(s.elements().iter().cloned());

    // Left multiples first, deduplicated, then right multiples.
    let mut left: Vec<ComplexMatrix> = Vec::new();
    let mut left_index = MatrixIndex::new(n, cfg.eq_tol);
    for a in &with_one {
        let p = snap_zero(a * t, cfg.rank_tol);
        if left_index.find(&p, &left).is_none() {
            left_index.insert(&p, left.len());
            left.push(p);
        }
    }
    let mut seeds: Vec<ComplexMatrix> = Vec::new();
    let mut seed_index = MatrixIndex::new(n, cfg.eq_tol);
    let mut capped = false;
    'outer: for l in &left {
        for b in &with_one {
            let p = snap_zero(l * b, cfg.rank_tol);
            if seed_index.find(&p, &seeds).is_none() {
                if seeds.len() >= cfg.closure_cap {
                    capped = true;
                    break 'outer;
                }
                seed_index.insert(&p, seeds.len());
                seeds.push(p);
            }
        }
    }

    let run = saturate(n, seeds, s.elements(), cfg);
    Ok(SemigroupSet::assemble(
        n,
        run.elements,
        cfg,
        s.saturated() && run.saturated && !capped,
        run.max_word_length,
        Vec::new(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{closure, GeneratorInput};

    fn s0() -> SemigroupSet {
        let gens = vec![
            ComplexMatrix::unit(2, 0, 0),
            ComplexMatrix::unit(2, 0, 1),
            ComplexMatrix::unit(2, 1, 0),
        ];
        closure(&GeneratorInput::new("s0", gens).unwrap(), &ToleranceConfig::exact()).unwrap()
    }

    #[test]
    fn probe_finds_linking_element() {
        let s = s0();
        let p1 = ComplexMatrix::unit(2, 0, 0);
        let e21 = ComplexMatrix::unit(2, 1, 0);
        let t = product_probe(&p1, &s, &e21).unwrap();
        assert!(!(&(&p1 * t) * &e21).is_zero());
        assert_eq!(t, &ComplexMatrix::unit(2, 0, 1));
    }

    #[test]
    fn probe_with_zero_is_absent() {
        let s = s0();
        assert!(product_probe(&ComplexMatrix::zeros(2, 2), &s, &ComplexMatrix::identity(2)).is_none());
    }

    #[test]
    fn probe_with_identity() {
        let cfg = ToleranceConfig::exact();
        let s = SemigroupSet::from_matrices(2, vec![ComplexMatrix::identity(2)], &cfg, true, 1).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(product_probe(&id, &s, &id).is_some());
    }

    #[test]
    fn ideal_examples() {
        let cfg = ToleranceConfig::exact();
        let s = s0();
        let j = ideal(&s, &ComplexMatrix::unit(2, 0, 1), &cfg).unwrap();
        assert_eq!(j.elements(), s.elements());
        assert!(j.saturated());

        let z = ideal(&s, &ComplexMatrix::zeros(2, 2), &cfg).unwrap();
        assert_eq!(z.elements(), &[ComplexMatrix::zeros(2, 2)]);

        let one = SemigroupSet::from_matrices(2, vec![ComplexMatrix::identity(2)], &cfg, true, 1).unwrap();
        let j = ideal(&one, &ComplexMatrix::identity(2), &cfg).unwrap();
        assert_eq!(j.elements(), &[ComplexMatrix::identity(2)]);

        assert!(matches!(
            ideal(&one, &ComplexMatrix::unit(2, 0, 1), &cfg),
            Err(Error::NotInSet)
        ));
    }
}
