use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::idempotents::{find_idempotents, idempotents_commute, CommuteVerdict};
use super::irreducible::{is_irreducible, IrreducibilityVerdict};
use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, op_norm, ComplexMatrix, ToleranceConfig};
use crate::semigroup::{scheduled_powers, SemigroupSet};

/// An eigenvalue outside `{0} ∪ 𝕋`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralWitness {
    pub element_index: usize,
    pub eigenvalue: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionII {
    pub holds: bool,
    pub spectra_ok: bool,
    /// Commutation of the idempotent members.
    pub idempotents_commute: bool,
    pub idempotent_count: usize,
    pub spectral_witness: Option<SpectralWitness>,
    pub commute_witness: Option<[ComplexMatrix; 2]>,
    /// Commutation once closure-derived idempotents are included; `None`
    /// when there are none.
    pub closure_idempotents_commute: Option<bool>,
    pub closure_commute_witness: Option<[ComplexMatrix; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionIII {
    pub holds: bool,
    pub c1: f64,
    pub c2: f64,
    pub idempotents_commute: bool,
    /// Powers of the sampled elements stay below `2·c2`; always true for a
    /// saturated set.
    pub norms_bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub irreducible: IrreducibilityVerdict,
    pub condition_ii: ConditionII,
    pub condition_iii: ConditionIII,
    /// Verdicts refer to an exactly closed set; false means "at sampled
    /// closure".
    pub saturated_basis: bool,
    pub config: ToleranceConfig,
}

/// Spectrum test on `T^n` instead of `T`: `σ(T^n) = σ(T)^n`, and the power
/// annihilates nilpotent parts whose eigenvalues the solver could only
/// resolve to `ε^{1/p}` for a Jordan block of size `p`.
fn spectral_violation(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Option<Complex64>> {
    let n = t.rows();
    let power = t.pow(n as u64);
    let mus = eigenvalues(&power)?;
    let bad = mus.into_iter().find(|mu| {
        let r = mu.norm();
        !(r <= cfg.spec_tol || (r - 1.0).abs() <= cfg.spec_tol)
    });
    let Some(mu) = bad else {
        return Ok(None);
    };
    // report the eigenvalue of T itself whose n-th power is closest
    let lambda = eigenvalues(t)?
        .into_iter()
        .min_by(|a, b| (a.powu(n as u32) - mu).norm().total_cmp(&(b.powu(n as u32) - mu).norm()))
        .unwrap_or(mu);
    Ok(Some(lambda))
}

fn pair(idems: &[ComplexMatrix], v: &CommuteVerdict) -> Option<[ComplexMatrix; 2]> {
    v.witness.map(|(i, j)| [idems[i].clone(), idems[j].clone()])
}

pub fn check_condition_ii(s: &SemigroupSet) -> Result<ConditionII> {
    let cfg = s.config();
    let checks: Vec<Result<Option<Complex64>>> = s.elements().par_iter().map(|t| spectral_violation(t, cfg)).collect();
    let mut spectral_witness = None;
    for (element_index, r) in checks.into_iter().enumerate() {
        if let Some(eigenvalue) = r.map_err(Error::element(element_index))? {
            spectral_witness = Some(SpectralWitness {
                element_index,
                eigenvalue,
            });
            break;
        }
    }

    let found = find_idempotents(s);
    let members: Vec<ComplexMatrix> = found
        .iter()
        .filter(|i| !i.closure_derived)
        .map(|i| i.matrix.clone())
        .collect();
    let v = idempotents_commute(&members, cfg)?;

    let (closure_commute, closure_witness) = if found.iter().any(|i| i.closure_derived) {
        let all: Vec<ComplexMatrix> = found.iter().map(|i| i.matrix.clone()).collect();
        let cv = idempotents_commute(&all, cfg)?;
        (Some(cv.commute), pair(&all, &cv))
    } else {
        (None, None)
    };

    let spectra_ok = spectral_witness.is_none();
    Ok(ConditionII {
        holds: spectra_ok && v.commute,
        spectra_ok,
        idempotents_commute: v.commute,
        idempotent_count: members.len(),
        spectral_witness,
        commute_witness: pair(&members, &v),
        closure_idempotents_commute: closure_commute,
        closure_commute_witness: closure_witness,
    })
}

/// Every power on the limit-point schedule has norm at most `limit`.
fn powers_bounded(t: &ComplexMatrix, limit: f64) -> bool {
    scheduled_powers(t).iter().all(|(_, x)| op_norm(x) <= limit)
}

pub fn check_condition_iii(s: &SemigroupSet) -> Result<ConditionIII> {
    let cfg = s.config();
    let norms: Vec<f64> = s.nonzero_elements().map(op_norm).collect();
    if norms.is_empty() {
        return Err(Error::NoNonzeroElements);
    }
    let c1 = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let c2 = norms.iter().copied().fold(0.0, f64::max);
    let norms_bounded = s.saturated()
        || s
            .elements()
            .par_iter()
            .all(|t| powers_bounded(t, 2.0 * c2));
    let members: Vec<ComplexMatrix> = find_idempotents(s)
        .into_iter()
        .filter(|i| !i.closure_derived)
        .map(|i| i.matrix)
        .collect();
    let v = idempotents_commute(&members, cfg)?;
    Ok(ConditionIII {
        holds: c1 > cfg.rank_tol && c2.is_finite() && norms_bounded && v.commute,
        c1,
        c2,
        idempotents_commute: v.commute,
        norms_bounded,
    })
}

pub fn analyze(s: &SemigroupSet) -> Result<ConditionReport> {
    Ok(ConditionReport {
        irreducible: is_irreducible(s)?,
        condition_ii: check_condition_ii(s)?,
        condition_iii: check_condition_iii(s)?,
        saturated_basis: s.saturated(),
        config: *s.config(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c64;
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
    fn matrix_units_satisfy_ii_and_iii() {
        let s = s0();
        let ii = check_condition_ii(&s).unwrap();
        assert!(ii.holds && ii.spectra_ok && ii.idempotents_commute);
        assert_eq!(ii.idempotent_count, 2);
        let iii = check_condition_iii(&s).unwrap();
        assert!(iii.holds);
        assert!((iii.c1 - 1.0).abs() < 1e-12 && (iii.c2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contraction_fails_ii() {
        let cfg = ToleranceConfig::exact();
        let t = ComplexMatrix::diag(&[c64(1.0, 0.0), c64(0.5, 0.0)]);
        let s = SemigroupSet::from_matrices(2, vec![t], &cfg, false, 1).unwrap();
        let ii = check_condition_ii(&s).unwrap();
        assert!(!ii.spectra_ok && !ii.holds);
        let w = ii.spectral_witness.unwrap();
        assert!((w.eigenvalue - c64(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn doubling_is_unbounded() {
        let cfg = ToleranceConfig::exact().with_cap(20);
        let s = closure(
            &GeneratorInput::new("2I", vec![ComplexMatrix::identity(2).scale_real(2.0)]).unwrap(),
            &cfg,
        )
        .unwrap();
        assert!(!s.saturated());
        let iii = check_condition_iii(&s).unwrap();
        assert!(!iii.norms_bounded && !iii.holds);
        assert!(iii.c2 >= 2f64.powi(20) * 0.99);
    }

    #[test]
    fn nilpotent_chain_passes_spectrum_test() {
        // conjugated 3×3 shift: eigenvalue 0 with a size-3 Jordan block
        let cfg = ToleranceConfig::exact();
        let n = ComplexMatrix::from_real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        let m = ComplexMatrix::from_real(&[&[2.0, 1.0, 0.5], &[0.0, 1.0, -1.0], &[0.3, 0.0, 1.5]]);
        let t = &(&m * &n) * &crate::numeric::inverse(&m).unwrap();
        assert!(spectral_violation(&t, &cfg).unwrap().is_none());
    }

    #[test]
    fn zero_only_set_has_no_norms() {
        let cfg = ToleranceConfig::exact();
        let s = SemigroupSet::from_matrices(2, vec![ComplexMatrix::zeros(2, 2)], &cfg, true, 1).unwrap();
        assert!(matches!(check_condition_iii(&s), Err(Error::NoNonzeroElements)));
    }
}
