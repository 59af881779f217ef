use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numeric::{approx_eq, op_norm_le, ComplexMatrix, ToleranceConfig, C64};

/// Canonical sort key: entries quantized to a grid of pitch `eq_tol/(4n)`,
/// row-major, real part before imaginary part.
pub fn canonical_key(m: &ComplexMatrix, eq_tol: f64) -> Vec<i64> {
    let pitch = eq_tol / (4.0 * m.rows().max(1) as f64);
    let q = |x: f64| {
        let v = (x / pitch).round();
        // `as` saturates, which keeps huge entries ordered
        v as i64
    };
    m.as_slice().iter().flat_map(|z| [q(z.re), q(z.im)]).collect()
}

pub fn canonical_cmp(a: &ComplexMatrix, b: &ComplexMatrix, eq_tol: f64) -> Ordering {
    canonical_key(a, eq_tol).cmp(&canonical_key(b, eq_tol))
}

/// Proximity index for near-duplicate detection.
///
/// Each matrix is bucketed by a fixed linear functional `f` with
/// `|f(X) − f(Y)| ≤ ‖X − Y‖`, on a grid of cell size `eq_tol`. Any matrix
/// within `eq_tol` of a stored one lands in one of the 3×3 neighbouring
/// cells, where candidates are confirmed by operator-norm distance.
#[derive(Debug, Clone)]
pub struct MatrixIndex {
    eq_tol: f64,
    weights: Vec<C64>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl MatrixIndex {
    pub fn new(dim: usize, eq_tol: f64) -> Self {
        let count = dim * dim;
        const PHI: f64 = 0.618_033_988_749_894_9;
        const SQRT2_FRAC: f64 = 0.414_213_562_373_095_1;
        let mut weights: Vec<C64> = (0..count)
            .map(|k| {
                let mag = 0.5 + ((k + 1) as f64 * PHI).fract();
                let angle = std::f64::consts::TAU * ((k + 1) as f64 * SQRT2_FRAC).fract();
                C64::from_polar(mag, angle)
            })
            .collect();
        let total: f64 = weights.iter().map(|w| w.norm()).sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        MatrixIndex {
            eq_tol,
            weights,
            buckets: HashMap::new(),
        }
    }

    fn cell(&self, m: &ComplexMatrix) -> (i64, i64) {
        let f: C64 = m.as_slice().iter().zip(&self.weights).map(|(a, w)| a * w).sum();
        ((f.re / self.eq_tol).floor() as i64, (f.im / self.eq_tol).floor() as i64)
    }

    /// Index (into `store`) of a stored matrix within `eq_tol` of `m`.
    pub fn find(&self, m: &ComplexMatrix, store: &[ComplexMatrix]) -> Option<usize> {
        let (cx, cy) = self.cell(m);
        let mut best: Option<usize> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(cx + dx, cy + dy)) {
                    for &i in ids {
                        if approx_eq(&store[i], m, self.eq_tol) && best.map_or(true, |b| i < b) {
                            best = Some(i);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn insert(&mut self, m: &ComplexMatrix, id: usize) {
        let c = self.cell(m);
        self.buckets.entry(c).or_default().push(id);
    }
}

/// Replaces matrices of operator norm at most `rank_tol` by exact zero.
pub fn snap_zero(m: ComplexMatrix, rank_tol: f64) -> ComplexMatrix {
    if !m.is_zero() && op_norm_le(&m, rank_tol) {
        ComplexMatrix::zeros(m.rows(), m.cols())
    } else {
        m
    }
}

/// Deduplicated finite set of square matrices approximating a closed
/// semigroup. Elements are kept in canonical order and no two are within
/// `eq_tol` of each other.
#[derive(Debug, Clone)]
pub struct SemigroupSet {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    contains_zero: bool,
    saturated: bool,
    max_word_length: usize,
    limit_points: Vec<ComplexMatrix>,
    config: ToleranceConfig,
    index: MatrixIndex,
}

impl SemigroupSet {
    /// Builds a set from explicit members: validates, snaps near-zero
    /// matrices to zero, deduplicates in canonical order and sorts.
    pub fn from_matrices(
        dim: usize,
        matrices: Vec<ComplexMatrix>,
        cfg: &ToleranceConfig,
        saturated: bool,
        max_word_length: usize,
    ) -> Result<Self> {
        cfg.validate()?;
        for m in &matrices {
            m.validate_element()?;
            if m.rows() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "element of size {} in a set of dimension {dim}",
                    m.rows()
                )));
            }
        }
        let mut snapped: Vec<ComplexMatrix> = matrices
            .into_iter()
            .map(|m| snap_zero(m, cfg.rank_tol))
            .collect();
        snapped.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
        let mut index = MatrixIndex::new(dim, cfg.eq_tol);
        let mut elements: Vec<ComplexMatrix> = Vec::with_capacity(snapped.len());
        for m in snapped {
            if index.find(&m, &elements).is_none() {
                index.insert(&m, elements.len());
                elements.push(m);
            }
        }
        Ok(Self::assemble(dim, elements, cfg, saturated, max_word_length, Vec::new()))
    }

    /// Final assembly from already-deduplicated elements (any order).
    pub(crate) fn assemble(
        dim: usize,
        mut elements: Vec<ComplexMatrix>,
        cfg: &ToleranceConfig,
        saturated: bool,
        max_word_length: usize,
        limit_points: Vec<ComplexMatrix>,
    ) -> Self {
        elements.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
        let mut index = MatrixIndex::new(dim, cfg.eq_tol);
        for (i, m) in elements.iter().enumerate() {
            index.insert(m, i);
        }
        let contains_zero = elements.iter().any(ComplexMatrix::is_zero);
        SemigroupSet {
            dim,
            elements,
            contains_zero,
            saturated,
            max_word_length,
            limit_points,
            config: *cfg,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn max_word_length(&self) -> usize {
        self.max_word_length
    }

    /// Power-limit idempotents found for an unsaturated closure; empty for
    /// saturated sets, where such limits are already members.
    pub fn limit_points(&self) -> &[ComplexMatrix] {
        &self.limit_points
    }

    pub fn config(&self) -> &ToleranceConfig {
        &self.config
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.elements.iter().filter(|m| !m.is_zero())
    }

    /// Position of an element within `eq_tol` of `m`.
    pub fn find(&self, m: &ComplexMatrix) -> Option<usize> {
        if m.rows() != self.dim || !m.is_square() {
            return None;
        }
        self.index.find(m, &self.elements)
    }

    pub fn contains(&self, m: &ComplexMatrix) -> bool {
        self.find(m).is_some()
    }

    /// Largest distance from a pairwise product to the set (brute force);
    /// `None` if some product has no element within `tol`.
    pub fn max_product_defect(&self, tol: f64) -> Option<f64> {
        let mut worst: f64 = 0.0;
        for a in &self.elements {
            for b in &self.elements {
                let p = snap_zero(a * b, self.config.rank_tol);
                let d = self
                    .elements
                    .iter()
                    .map(|c| crate::numeric::distance(&p, c))
                    .fold(f64::INFINITY, f64::min);
                if d > tol {
                    return None;
                }
                worst = worst.max(d);
            }
        }
        Some(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c64;

    #[test]
    fn dedups_within_tolerance() {
        let cfg = ToleranceConfig::exact();
        let a = ComplexMatrix::identity(2);
        let mut b = a.clone();
        b[(0, 1)] = c64(cfg.eq_tol * 0.3, 0.0);
        let c = ComplexMatrix::unit(2, 0, 1);
        let s = SemigroupSet::from_matrices(2, vec![a.clone(), b, c.clone()], &cfg, true, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(&a));
        assert!(s.contains(&c));
    }

    #[test]
    fn snaps_tiny_to_zero() {
        let cfg = ToleranceConfig::exact();
        let tiny = ComplexMatrix::unit(2, 1, 0).scale_real(cfg.rank_tol * 0.5);
        let s = SemigroupSet::from_matrices(2, vec![tiny], &cfg, true, 1).unwrap();
        assert!(s.contains_zero());
        assert!(s.elements()[0].is_zero());
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let cfg = ToleranceConfig::exact();
        let e11 = ComplexMatrix::unit(2, 0, 0);
        let e22 = ComplexMatrix::unit(2, 1, 1);
        let z = ComplexMatrix::zeros(2, 2);
        let s = SemigroupSet::from_matrices(2, vec![e11.clone(), e22.clone(), z.clone()], &cfg, true, 1)
            .unwrap();
        assert_eq!(s.elements(), &[z, e22, e11]);
    }

    #[test]
    fn index_finds_across_cell_boundaries() {
        let cfg = ToleranceConfig::exact();
        let mut idx = MatrixIndex::new(2, cfg.eq_tol);
        let mut store = Vec::new();
        for k in 0..200 {
            let m = ComplexMatrix::identity(2).scale_real(k as f64 * 3.7e-9);
            idx.insert(&m, store.len());
            store.push(m);
        }
        for k in 0..200 {
            let probe = ComplexMatrix::identity(2).scale_real(k as f64 * 3.7e-9 + 0.4e-9);
            assert_eq!(idx.find(&probe, &store), Some(k));
        }
    }
}
