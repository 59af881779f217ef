use rayon::prelude::*;
use serde::Serialize;

use super::linking::{find_linking, linking_inverse, linking_similarity, LinkingIsometry};
use super::orthonormalize::orthonormalize_family;
use super::unitarize::{unitarize_group, UnitarizationMethod};
use crate::corpus::{block_pattern, partial_isometry_residual, verify_sandwich, VerificationReport};
use crate::error::{Error, Result, Stage};
use crate::numeric::{inverse, op_norm_le, ComplexMatrix, ToleranceConfig};
use crate::semigroup::{canonical_cmp, MatrixIndex, SemigroupSet};
use crate::structure::{
    check_condition_ii, is_irreducible, maximal_disjoint_family, ConditionII, IdempotentFamily, IrreducibilityVerdict,
};

/// The three stage factors; `S_sim = L⁻¹·D·B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityFactors {
    /// Maps each `P_j` to `E_jj ⊗ I_k`.
    pub orthonormalize: ComplexMatrix,
    /// `diag(S_1, …, S_m)` unitarizing the diagonal block groups.
    pub block_unitarize: ComplexMatrix,
    /// `L = diag(I_k, y_2, …, y_m)`; enters `S_sim` inverted.
    pub linking: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct SimilarityResult {
    /// `S_sim`: every `S_sim·T·S_sim⁻¹` is a partial isometry.
    pub similarity: ComplexMatrix,
    pub inverse: ComplexMatrix,
    pub block_count: usize,
    pub block_size: usize,
    /// Nonzero `(1,1)` blocks of the transformed set, canonical order.
    pub unitary_group_sample: Vec<ComplexMatrix>,
    pub transformed: SemigroupSet,
    pub verification: VerificationReport,
    pub family: IdempotentFamily,
    pub factors: SimilarityFactors,
    pub block_methods: Vec<UnitarizationMethod>,
    pub links: Vec<LinkingIsometry>,
    /// Worst partial-isometry residual over the transformed elements.
    pub worst_residual: f64,
}

fn conjugate_all(elements: &[ComplexMatrix], s: &ComplexMatrix, s_inv: &ComplexMatrix) -> Vec<ComplexMatrix> {
    elements.par_iter().map(|t| &(s * t) * s_inv).collect()
}

/// Distinct nonzero `(i,i)` blocks in canonical order.
fn diagonal_blocks(elements: &[ComplexMatrix], i: usize, k: usize, cfg: &ToleranceConfig) -> Vec<ComplexMatrix> {
    let mut index = MatrixIndex::new(k, cfg.eq_tol);
    let mut out: Vec<ComplexMatrix> = Vec::new();
    for t in elements {
        let b = t.block(i, i, k);
        if op_norm_le(&b, cfg.rank_tol) || index.find(&b, &out).is_some() {
            continue;
        }
        index.insert(&b, out.len());
        out.push(b);
    }
    out.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
    out
}

/// Puts the family in descending canonical order, so a family already of
/// the form `E_jj ⊗ I_k` comes out as `j = 1, 2, …` and yields `B = I`.
fn order_family(mut f: IdempotentFamily, eq_tol: f64) -> IdempotentFamily {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| canonical_cmp(&f.members[b], &f.members[a], eq_tol));
    let pick = |v: &Vec<bool>| idx.iter().map(|&i| v[i]).collect::<Vec<bool>>();
    f.containment_minimal = pick(&f.containment_minimal);
    f.closure_derived = pick(&f.closure_derived);
    f.members = idx.iter().map(|&i| f.members[i].clone()).collect();
    f
}

/// Turns failed irreducibility or condition (ii) verdicts into a
/// precondition error for the similarity construction.
pub fn require_preconditions(irr: &IrreducibilityVerdict, ii: &ConditionII, dim: usize) -> Result<()> {
    if !irr.irreducible {
        return Err(Error::Precondition(format!(
            "semigroup is reducible (algebra dimension {} < {})",
            irr.span_dim,
            dim * dim
        )));
    }
    if let Some(w) = &ii.spectral_witness {
        return Err(Error::Precondition(format!(
            "condition (ii) fails: element {} has eigenvalue {} outside {{0}} ∪ 𝕋",
            w.element_index, w.eigenvalue
        )));
    }
    if !ii.idempotents_commute {
        return Err(Error::Precondition("condition (ii) fails: idempotents do not commute".into()));
    }
    Ok(())
}

/// Similarity taking an irreducible semigroup satisfying condition (ii) to
/// partial isometries in the block form `S₀⁽ᵐ⁾(𝒰) ⊆ S ⊆ S₁⁽ᵐ⁾(𝒰)`.
///
/// Stages: disjoint family of minimal idempotents; orthonormalization of
/// their ranges; unitarization of each diagonal block group; linking of
/// block `j` to block `1` through a nonzero element of `P_j·S·P_1`;
/// verification. Stage failures are tagged with their [`Stage`].
pub fn build_similarity(s: &SemigroupSet) -> Result<SimilarityResult> {
    require_preconditions(&is_irreducible(s)?, &check_condition_ii(s)?, s.dim())?;
    build_similarity_unchecked(s)
}

/// [`build_similarity`] without the irreducibility and condition (ii)
/// checks, for callers that have already run them.
pub fn build_similarity_unchecked(s: &SemigroupSet) -> Result<SimilarityResult> {
    let cfg = s.config();
    let n = s.dim();

    let family = maximal_disjoint_family(s).map_err(Error::at(Stage::Family))?;
    let family = order_family(family, cfg.eq_tol);
    let (m, k) = (family.len(), family.common_rank);
    let orth = orthonormalize_family(&family, cfg).map_err(Error::at(Stage::Orthonormalize))?;
    let tb = conjugate_all(s.elements(), &orth.b, &orth.b_inv);

    let unitarized: Vec<_> = (0..m)
        .into_par_iter()
        .map(|i| unitarize_group(&diagonal_blocks(&tb, i, k, cfg), cfg))
        .collect::<Result<_>>()
        .map_err(Error::at(Stage::BlockUnitarize))?;
    let d = ComplexMatrix::block_diagonal(&unitarized.iter().map(|u| u.similarity.clone()).collect::<Vec<_>>());
    let d_inv = inverse(&d).map_err(Error::at(Stage::BlockUnitarize))?;
    let td = conjugate_all(&tb, &d, &d_inv);

    let linked = (|| {
        let ds = SemigroupSet::from_matrices(n, td.clone(), cfg, s.saturated(), s.max_word_length())?;
        let links = (1..m)
            .map(|j| find_linking(&ds, m, k, j, cfg))
            .collect::<Result<Vec<_>>>()?;
        let l = linking_similarity(&links, m, k, cfg)?;
        Ok((links, l))
    })();
    let (links, l) = linked.map_err(Error::at(Stage::Linking))?;
    let l_inv = linking_inverse(&links, k);
    let final_elems = conjugate_all(&td, &l_inv, &l);

    let loose = cfg.with_eq_tol(10.0 * cfg.eq_tol);
    let mut worst: f64 = 0.0;
    for (index, t) in final_elems.iter().enumerate() {
        let residual = partial_isometry_residual(t);
        worst = worst.max(residual);
        let pattern = block_pattern(t, m, k, &[], &loose);
        if residual > loose.eq_tol || !pattern.valid {
            return Err(Error::ConstructionFailed { index, residual }).map_err(Error::at(Stage::Verify));
        }
    }

    let similarity = &(&l_inv * &d) * &orth.b;
    let inverse = &(&orth.b_inv * &d_inv) * &l;
    let transformed = SemigroupSet::from_matrices(n, final_elems, cfg, s.saturated(), s.max_word_length())
        .map_err(Error::at(Stage::Verify))?;
    let group = diagonal_blocks(transformed.elements(), 0, k, cfg);
    let verification = verify_sandwich(&transformed, m, k, &group, cfg);
    Ok(SimilarityResult {
        similarity,
        inverse,
        block_count: m,
        block_size: k,
        unitary_group_sample: group,
        transformed,
        verification,
        family,
        factors: SimilarityFactors {
            orthonormalize: orth.b,
            block_unitarize: d,
            linking: l,
        },
        block_methods: unitarized.iter().map(|u| u.method).collect(),
        links,
        worst_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c64, op_norm};
    use crate::semigroup::{closure, GeneratorInput};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::exact()
    }

    fn s0() -> SemigroupSet {
        let gens = vec![
            ComplexMatrix::unit(2, 0, 0),
            ComplexMatrix::unit(2, 0, 1),
            ComplexMatrix::unit(2, 1, 0),
        ];
        closure(&GeneratorInput::new("s0", gens).unwrap(), &cfg()).unwrap()
    }

    #[test]
    fn matrix_units_need_no_similarity() {
        let r = build_similarity(&s0()).unwrap();
        assert_eq!((r.block_count, r.block_size), (2, 1));
        assert!(op_norm(&(&r.similarity - &ComplexMatrix::identity(2))) < 1e-14);
        assert_eq!(r.unitary_group_sample.len(), 1);
        assert!(r.verification.all_ok());
    }

    #[test]
    fn conjugated_s1_is_recovered() {
        // S₁⁽²⁾({1}): the partial permutation matrices of size 2
        let mut members = vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::identity(2)];
        members.push(ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]));
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            members.push(ComplexMatrix::unit(2, i, j));
        }
        let m = ComplexMatrix::from_real(&[&[2.0, 1.0], &[0.0, 1.0]]);
        let mi = inverse(&m).unwrap();
        let conj: Vec<ComplexMatrix> = members.iter().map(|t| &(&m * t) * &mi).collect();
        let s = SemigroupSet::from_matrices(2, conj, &cfg(), true, 2).unwrap();
        assert!(s.elements().iter().any(|t| partial_isometry_residual(t) > 1e-3));

        let r = build_similarity(&s).unwrap();
        assert_eq!((r.block_count, r.block_size), (2, 1));
        assert!(r.worst_residual <= 1e-8);
        for t in s.elements() {
            let img = &(&r.similarity * t) * &r.inverse;
            assert!(partial_isometry_residual(&img) <= 1e-8);
        }
        assert!(r.verification.all_ok());
        let recomposed = &(&inverse(&r.factors.linking).unwrap() * &r.factors.block_unitarize) * &r.factors.orthonormalize;
        assert!(op_norm(&(&recomposed - &r.similarity)) < 1e-12);
    }

    #[test]
    fn contraction_violates_precondition() {
        let t = ComplexMatrix::diag(&[c64(1.0, 0.0), c64(0.5, 0.0)]);
        let mut members = s0().elements().to_vec();
        members.push(t);
        let s = SemigroupSet::from_matrices(2, members, &cfg(), false, 1).unwrap();
        assert!(matches!(build_similarity(&s), Err(Error::Precondition(_))));
    }

    #[test]
    fn reducible_set_violates_precondition() {
        let s = SemigroupSet::from_matrices(2, vec![ComplexMatrix::unit(2, 0, 0)], &cfg(), true, 1).unwrap();
        assert!(matches!(build_similarity(&s), Err(Error::Precondition(_))));
    }
}
