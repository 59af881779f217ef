use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{op_norm, ComplexMatrix, ToleranceConfig};
use crate::semigroup::{MatrixIndex, SemigroupSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Idempotent {
    pub matrix: ComplexMatrix,
    /// `‖P² − P‖`.
    pub residual: f64,
    /// Not a member of the sampled set but a power limit of members, hence
    /// an element of its norm closure.
    pub closure_derived: bool,
}

pub fn idempotent_residual(p: &ComplexMatrix) -> f64 {
    op_norm(&(&(p * p) - p))
}

/// Nonzero idempotents: members with `‖X² − X‖ ≤ eq_tol` (canonical order),
/// followed by the closure-derived power limits of an unsaturated set that
/// are not already members.
pub fn find_idempotents(s: &SemigroupSet) -> Vec<Idempotent> {
    let cfg = s.config();
    let mut out: Vec<Idempotent> = s
        .nonzero_elements()
        .filter_map(|x| {
            let r = idempotent_residual(x);
            (r <= cfg.eq_tol).then(|| Idempotent {
                matrix: x.clone(),
                residual: r,
                closure_derived: false,
            })
        })
        .collect();
    if s.saturated() {
        return out;
    }
    let limits = if s.limit_points().is_empty() {
        crate::semigroup::sampled_limit_points(s.elements(), cfg)
    } else {
        s.limit_points().to_vec()
    };
    let mut index = MatrixIndex::new(s.dim(), cfg.eq_tol);
    let members: Vec<ComplexMatrix> = out.iter().map(|i| i.matrix.clone()).collect();
    for (i, m) in members.iter().enumerate() {
        index.insert(m, i);
    }
    for p in limits {
        if p.is_zero() || index.find(&p, &members).is_some() {
            continue;
        }
        out.push(Idempotent {
            residual: idempotent_residual(&p),
            matrix: p,
            closure_derived: true,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommuteVerdict {
    pub commute: bool,
    /// Largest `‖PQ − QP‖` over all pairs.
    pub worst_commutator: f64,
    /// First violating pair, by input position.
    pub witness: Option<(usize, usize)>,
}

/// Whether all pairs satisfy `‖PQ − QP‖ ≤ 10·eq_tol`.
///
/// Inputs must be idempotent within `10·eq_tol` (the accuracy promised for
/// power limits).
pub fn idempotents_commute(idems: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<CommuteVerdict> {
    let tol = 10.0 * cfg.eq_tol;
    for (index, p) in idems.iter().enumerate() {
        let residual = idempotent_residual(p);
        if !(residual <= tol) {
            return Err(Error::NotIdempotent { index, residual });
        }
    }
    let mut worst: f64 = 0.0;
    let mut witness = None;
    for i in 0..idems.len() {
        for j in i + 1..idems.len() {
            let c = op_norm(&idems[i].commutator(&idems[j]));
            worst = worst.max(c);
            if c > tol && witness.is_none() {
                witness = Some((i, j));
            }
        }
    }
    Ok(CommuteVerdict {
        commute: witness.is_none(),
        worst_commutator: worst,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{closure, GeneratorInput};

    #[test]
    fn idempotents_of_matrix_units() {
        let gens = vec![
            ComplexMatrix::unit(2, 0, 0),
            ComplexMatrix::unit(2, 0, 1),
            ComplexMatrix::unit(2, 1, 0),
        ];
        let s = closure(&GeneratorInput::new("s0", gens).unwrap(), &ToleranceConfig::exact()).unwrap();
        let found: Vec<ComplexMatrix> = find_idempotents(&s).into_iter().map(|i| i.matrix).collect();
        assert_eq!(found.len(), 2);
        assert!(found.contains(&ComplexMatrix::unit(2, 0, 0)));
        assert!(found.contains(&ComplexMatrix::unit(2, 1, 1)));
    }

    #[test]
    fn identity_is_its_own_idempotent() {
        let cfg = ToleranceConfig::exact();
        let s = SemigroupSet::from_matrices(3, vec![ComplexMatrix::identity(3)], &cfg, true, 1).unwrap();
        let found = find_idempotents(&s);
        assert_eq!(found.len(), 1);
        assert!(!found[0].closure_derived);
    }

    #[test]
    fn commuting_examples() {
        let cfg = ToleranceConfig::exact();
        let diag = [ComplexMatrix::unit(2, 0, 0), ComplexMatrix::unit(2, 1, 1)];
        assert!(idempotents_commute(&diag, &cfg).unwrap().commute);
        assert!(idempotents_commute(&diag[..1], &cfg).unwrap().commute);

        let a = ComplexMatrix::from_real(&[&[1.0, 0.0], &[1.0, 0.0]]);
        let b = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 1.0]]);
        let v = idempotents_commute(&[a, b], &cfg).unwrap();
        assert!(!v.commute);
        assert_eq!(v.witness, Some((0, 1)));
    }

    #[test]
    fn rejects_non_idempotent() {
        let cfg = ToleranceConfig::exact();
        let t = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            idempotents_commute(&[t], &cfg),
            Err(Error::NotIdempotent { index: 0, .. })
        ));
    }
}
