use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::groups::FiniteGroup;
use crate::error::{Error, Result};
use crate::numeric::{c64, inverse, orthonormal_column_basis, singular_values, ComplexMatrix, ToleranceConfig};
use crate::semigroup::{MatrixIndex, SemigroupSet};

/// Checks that `group` is a nonempty list of `k×k` matrices containing
/// `I_k` and closed under products, all up to `eq_tol`.
fn check_group(group: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<usize> {
    let k = group
        .first()
        .map(ComplexMatrix::rows)
        .ok_or_else(|| Error::InvalidInput("empty group sample".into()))?;
    let mut index = MatrixIndex::new(k, cfg.eq_tol);
    for (i, g) in group.iter().enumerate() {
        g.validate_element()?;
        if g.rows() != k {
            return Err(Error::DimensionMismatch(format!("group element {i} is not {k}×{k}")));
        }
        index.insert(g, i);
    }
    if index.find(&ComplexMatrix::identity(k), group).is_none() {
        return Err(Error::InvalidInput("group sample does not contain the identity".into()));
    }
    for (i, a) in group.iter().enumerate() {
        for (j, b) in group.iter().enumerate() {
            if index.find(&(a * b), group).is_none() {
                return Err(Error::InvalidInput(format!(
                    "group sample is not closed: product of elements {i} and {j} is missing"
                )));
            }
        }
    }
    Ok(k)
}

/// `{E_ij ⊗ U : U ∈ 𝒰} ∪ {0}`.
pub fn build_s0(m: usize, group: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<SemigroupSet> {
    if m == 0 {
        return Err(Error::InvalidInput("block count must be positive".into()));
    }
    let k = check_group(group, cfg)?;
    let mut out = vec![ComplexMatrix::zeros(m * k, m * k)];
    for i in 0..m {
        for j in 0..m {
            let e = ComplexMatrix::unit(m, i, j);
            out.extend(group.iter().map(|u| e.kron(u)));
        }
    }
    SemigroupSet::from_matrices(m * k, out, cfg, true, 1)
}

/// Partial injections `{0..m} ⇀ {0..m}` as `(row, column)` lists.
fn partial_permutations(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(i: usize, m: usize, used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, m, used, cur, out);
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                cur.push((i, j));
                rec(i + 1, m, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, m, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

/// Block matrices with at most one nonzero block, taken from `𝒰`, in each
/// block row and column.
pub fn build_s1(m: usize, group: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<SemigroupSet> {
    if m == 0 {
        return Err(Error::InvalidInput("block count must be positive".into()));
    }
    let k = check_group(group, cfg)?;
    let n = m * k;
    let mut out = Vec::new();
    for pattern in partial_permutations(m) {
        let r = pattern.len();
        let mut choice = vec![0usize; r];
        loop {
            let mut t = ComplexMatrix::zeros(n, n);
            for (&(i, j), &c) in pattern.iter().zip(&choice) {
                t.set_submatrix(i * k, j * k, &group[c]);
            }
            out.push(t);
            // mixed-radix increment over block choices
            let mut pos = 0;
            while pos < r {
                choice[pos] += 1;
                if choice[pos] < group.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
    }
    SemigroupSet::from_matrices(n, out, cfg, true, 1)
}

/// A small generating set of `S₁⁽ᵐ⁾(𝒰)`: `diag(g, I, …)` for the group
/// generators, the block transposition and block cycle, and the partial
/// identity that kills the first block row.
pub fn s1_generators(m: usize, group: &FiniteGroup) -> Vec<ComplexMatrix> {
    let k = group.k;
    let id = ComplexMatrix::identity(k);
    let mut gens: Vec<ComplexMatrix> = group
        .generators
        .iter()
        .map(|g| {
            let mut blocks = vec![g.clone()];
            blocks.extend((1..m).map(|_| id.clone()));
            ComplexMatrix::block_diagonal(&blocks)
        })
        .collect();
    let perm = |f: &dyn Fn(usize) -> usize| {
        let mut p = ComplexMatrix::zeros(m, m);
        for i in 0..m {
            p[(f(i), i)] = c64(1.0, 0.0);
        }
        p.kron(&id)
    };
    if m >= 2 {
        gens.push(perm(&|i| if i < 2 { 1 - i } else { i }));
    }
    if m >= 3 {
        gens.push(perm(&|i| (i + 1) % m));
    }
    let mut partial = ComplexMatrix::zeros(m, m);
    for i in 1..m {
        partial[(i, i)] = c64(1.0, 0.0);
    }
    gens.push(partial.kron(&id));
    gens
}

/// `{M·T·M⁻¹ : T ∈ S}`, re-deduplicated.
pub fn conjugate_set(s: &SemigroupSet, m: &ComplexMatrix) -> Result<SemigroupSet> {
    if m.rows() != s.dim() || !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "conjugator is {}×{}, set has dimension {}",
            m.rows(),
            m.cols(),
            s.dim()
        )));
    }
    let sigma_min = singular_values(m)?.last().copied().unwrap_or(0.0);
    if sigma_min <= s.config().rank_tol {
        return Err(Error::Singular { pivot: sigma_min });
    }
    let mi = inverse(m)?;
    let conj: Vec<ComplexMatrix> = s.elements().iter().map(|t| &(m * t) * &mi).collect();
    SemigroupSet::from_matrices(s.dim(), conj, s.config(), s.saturated(), s.max_word_length())
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let a = ComplexMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = orthonormal_column_basis(&a, 1e-8);
        if q.cols() == n {
            return q;
        }
    }
}

/// Seeded conjugator `U₁·diag(d)·U₂` with unitary `U₁, U₂` and
/// `d_i ∈ [1/4, 4]`, so the condition number is at most 16.
pub fn random_conjugator(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u1 = random_unitary(n, &mut rng);
    let u2 = random_unitary(n, &mut rng);
    let d: Vec<_> = (0..n).map(|_| c64(4f64.powf(rng.gen_range(-1.0..=1.0)), 0.0)).collect();
    &(&u1 * &ComplexMatrix::diag(&d)) * &u2
}
