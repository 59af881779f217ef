use serde::Serialize;

use crate::error::Result;
use crate::numeric::{
    c64, null_space, op_norm, orthogonalize_against, orthonormal_column_basis, schur, ComplexMatrix,
    ToleranceConfig, C64,
};
use crate::semigroup::SemigroupSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibilityVerdict {
    pub irreducible: bool,
    /// Dimension of the algebra generated by the set.
    pub span_dim: usize,
    /// Orthonormal basis (columns) of a proper nonzero subspace invariant
    /// under every element, when one was found.
    pub witness: Option<ComplexMatrix>,
}

pub fn is_irreducible(s: &SemigroupSet) -> Result<IrreducibilityVerdict> {
    is_irreducible_matrices(s.elements(), s.config())
}

/// Burnside test: a set of `n×n` matrices is irreducible iff the algebra it
/// generates is all of `M_n`, i.e. has dimension `n²`.
pub fn is_irreducible_matrices(mats: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<IrreducibilityVerdict> {
    let n = mats.first().map_or(0, ComplexMatrix::rows);
    let basis = algebra_basis(mats, cfg.rank_tol);
    let span_dim = basis.len();
    if n > 0 && span_dim == n * n {
        return Ok(IrreducibilityVerdict {
            irreducible: true,
            span_dim,
            witness: None,
        });
    }
    let witness = if n == 0 { None } else { invariant_subspace(&basis, n, cfg)? };
    Ok(IrreducibilityVerdict {
        irreducible: false,
        span_dim,
        witness,
    })
}

/// Frobenius-orthonormal basis of the (non-unital) algebra generated by
/// `mats`: the span of the inputs, closed under pairwise products.
pub fn algebra_basis(mats: &[ComplexMatrix], tol: f64) -> Vec<ComplexMatrix> {
    let Some(first) = mats.first() else {
        return Vec::new();
    };
    let n = first.rows();
    let full = n * n;
    let mut vecs: Vec<Vec<C64>> = Vec::new();
    let to_matrix = |v: &Vec<C64>| ComplexMatrix::from_fn(n, n, |i, j| v[i * n + j]);

    let add = |m: &ComplexMatrix, vecs: &mut Vec<Vec<C64>>| -> bool {
        if vecs.len() == full {
            return false;
        }
        match orthogonalize_against(vecs, m.as_slice(), tol) {
            Some(v) => {
                vecs.push(v);
                true
            }
            None => false,
        }
    };
    for m in mats {
        add(m, &mut vecs);
        if vecs.len() == full {
            break;
        }
    }
    // Products of basis elements, until nothing new appears.
    let mut done = 0;
    while done < vecs.len() && vecs.len() < full {
        let upto = vecs.len();
        let current: Vec<ComplexMatrix> = vecs.iter().map(to_matrix).collect();
        for i in 0..upto {
            for j in 0..upto {
                if i < done && j < done {
                    continue;
                }
                add(&(&current[i] * &current[j]), &mut vecs);
            }
        }
        done = upto;
    }
    vecs.iter().map(to_matrix).collect()
}

/// Searches for a proper nonzero subspace invariant under the algebra with
/// the given basis. Tries, in order: the common kernel, the common range,
/// eigenspaces of a non-scalar commutant element, cyclic subspaces of
/// eigenvectors of a generic algebra element, and orthogonal complements of
/// the same constructions for the adjoint algebra.
fn invariant_subspace(
    basis: &[ComplexMatrix],
    n: usize,
    cfg: &ToleranceConfig,
) -> Result<Option<ComplexMatrix>> {
    if let Some(w) = search(basis, n, cfg)? {
        return Ok(Some(w));
    }
    let adj: Vec<ComplexMatrix> = basis.iter().map(ComplexMatrix::adjoint).collect();
    if let Some(w) = search(&adj, n, cfg)? {
        let comp = complement(&w, n, cfg);
        if is_proper(&comp, n) && is_invariant(basis, &comp, cfg) {
            return Ok(Some(comp));
        }
    }
    Ok(None)
}

fn search(basis: &[ComplexMatrix], n: usize, cfg: &ToleranceConfig) -> Result<Option<ComplexMatrix>> {
    let tol = cfg.rank_tol;
    let accept = |w: ComplexMatrix| (is_proper(&w, n) && is_invariant(basis, &w, cfg)).then_some(w);

    if basis.is_empty() {
        // only the zero matrix: every subspace is invariant
        let e1 = ComplexMatrix::from_columns(n, &[ComplexMatrix::unit(n, 0, 0).column(0)]);
        return Ok(is_proper(&e1, n).then_some(e1));
    }

    // Common kernel.
    let stacked = stack_rows(basis);
    if let Some(w) = accept(null_space(&stacked, tol)?) {
        return Ok(Some(w));
    }

    // Common range.
    let wide = ComplexMatrix::hstack(basis)?;
    if let Some(w) = accept(orthonormal_column_basis(&wide, tol)) {
        return Ok(Some(w));
    }

    // Eigenspaces of a non-scalar commutant element.
    let comm = commutant(basis, n, tol)?;
    for x in &comm {
        let shift = x.trace() / c64(n as f64, 0.0);
        let y = x - &ComplexMatrix::identity(n).scale(shift);
        if op_norm(&y) <= tol * op_norm(x).max(1.0) {
            continue;
        }
        for w in eigenspaces(&y, tol)? {
            if let Some(w) = accept(w) {
                return Ok(Some(w));
            }
        }
    }

    // Cyclic subspaces A·v of eigenvectors v of a generic element.
    let generic = generic_combination(basis);
    for space in eigenspaces(&generic, tol)? {
        for j in 0..space.cols() {
            let v = space.column(j);
            let images: Vec<Vec<C64>> = basis.iter().map(|b| b.mul_vec(&v)).collect();
            let img = orthonormal_column_basis(&ComplexMatrix::from_columns(n, &images), tol);
            let candidate = if img.cols() == 0 {
                ComplexMatrix::from_columns(n, &[v])
            } else {
                img
            };
            if let Some(w) = accept(candidate) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn is_proper(w: &ComplexMatrix, n: usize) -> bool {
    w.cols() > 0 && w.cols() < n
}

/// `‖(I − WW*)·A·W‖ ≤ √rank_tol·max(1, ‖A‖)` for every basis element.
fn is_invariant(basis: &[ComplexMatrix], w: &ComplexMatrix, cfg: &ToleranceConfig) -> bool {
    let n = w.rows();
    let proj = &ComplexMatrix::identity(n) - &(w * &w.adjoint());
    let tol = cfg.rank_tol.sqrt();
    basis.iter().all(|a| op_norm(&(&(&proj * a) * w)) <= tol * op_norm(a).max(1.0))
}

fn complement(w: &ComplexMatrix, n: usize, cfg: &ToleranceConfig) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..w.cols()).map(|j| w.column(j)).collect();
    let start = cols.len();
    for i in 0..n {
        if let Some(v) = orthogonalize_against(&cols, &ComplexMatrix::unit(n, i, 0).column(0), cfg.rank_tol) {
            cols.push(v);
        }
    }
    ComplexMatrix::from_columns(n, &cols[start..])
}

fn stack_rows(mats: &[ComplexMatrix]) -> ComplexMatrix {
    let n = mats[0].cols();
    let rows: Vec<Vec<C64>> = mats.iter().flat_map(|m| m.to_rows()).collect();
    ComplexMatrix::from_rows(&rows).unwrap_or_else(|_| ComplexMatrix::zeros(0, n))
}

/// Basis of `{X : XA = AX for all A in basis}` from the null space of the
/// stacked linear constraints on `vec(X)` (row-major).
pub fn commutant(basis: &[ComplexMatrix], n: usize, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let nn = n * n;
    let mut k = ComplexMatrix::zeros(basis.len() * nn, nn);
    for (b, a) in basis.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = b * nn + i * n + j;
                // (XA)_ij = Σ_l X_il A_lj ; (AX)_ij = Σ_l A_il X_lj
                for l in 0..n {
                    k[(row, i * n + l)] += a[(l, j)];
                    k[(row, l * n + j)] -= a[(i, l)];
                }
            }
        }
    }
    let ns = null_space(&k, tol)?;
    Ok((0..ns.cols())
        .map(|c| {
            let v = ns.column(c);
            ComplexMatrix::from_fn(n, n, |i, j| v[i * n + j])
        })
        .collect())
}

/// Fixed pseudo-random combination of the basis, generic enough to have
/// simple eigenvalues whenever the algebra has such elements.
fn generic_combination(basis: &[ComplexMatrix]) -> ComplexMatrix {
    const PHI: f64 = 0.618_033_988_749_894_9;
    let n = basis[0].rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, b) in basis.iter().enumerate() {
        let x = ((k + 1) as f64 * PHI).fract();
        let y = ((k + 1) as f64 * PHI * PHI).fract();
        out = &out + &b.scale(c64(0.5 + x, y - 0.5));
    }
    out
}

/// Orthonormal bases of the eigenspaces of `x`, one per eigenvalue cluster.
fn eigenspaces(x: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let n = x.rows();
    let sch = schur(x)?;
    let scale = op_norm(x).max(1.0);
    let mut reps: Vec<C64> = Vec::new();
    for l in sch.eigenvalues() {
        if !reps.iter().any(|r| (r - l).norm() <= tol.sqrt() * scale) {
            reps.push(l);
        }
    }
    let mut out = Vec::new();
    for l in reps {
        let shifted = x - &ComplexMatrix::identity(n).scale(l);
        // loose threshold: clustered eigenvalues are only accurate to √ε
        let ns = null_space(&shifted, tol.sqrt())?;
        if ns.cols() > 0 {
            out.push(ns);
        }
    }
    Ok(out)
}
