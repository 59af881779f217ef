use crate::error::{Error, Result};
use crate::numeric::{
    approx_eq, op_norm, op_norm_le, rank_numeric, spectral_split, ComplexMatrix, ToleranceConfig,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOptions {
    /// Known bound `C` on the powers of `T`; `None` uses the largest norm
    /// among the linearly scanned powers.
    pub bound: Option<f64>,
    pub include_zero: bool,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            bound: None,
            include_zero: true,
        }
    }
}

/// Exponents visited by the power scan: `1..=4n`, then `2^i` up to `64n²`.
pub fn power_schedule(n: usize) -> Vec<u64> {
    let linear = 4 * n as u64;
    let top = 64 * (n as u64) * (n as u64);
    let mut out: Vec<u64> = (1..=linear).collect();
    let mut p = 1u64;
    while p <= top {
        if p > linear {
            out.push(p);
        }
        p *= 2;
    }
    out
}

/// The powers `T^j` for `j` in [`power_schedule`], the large exponents by
/// repeated squaring.
pub fn scheduled_powers(t: &ComplexMatrix) -> Vec<(u64, ComplexMatrix)> {
    let linear = 4 * t.rows() as u64;
    let mut out: Vec<(u64, ComplexMatrix)> = Vec::new();
    let mut current = t.clone();
    for j in 1..=linear {
        if j > 1 {
            current = &current * t;
        }
        out.push((j, current.clone()));
    }
    let top = 64 * (t.rows() as u64).pow(2);
    let mut square = t.clone();
    let mut exponent = 1u64;
    while exponent * 2 <= top {
        square = &square * &square;
        exponent *= 2;
        if exponent > linear {
            out.push((exponent, square.clone()));
        }
    }
    out
}

/// Near-idempotent accumulation points of the powers of `t`, zero included.
pub fn detect_limit_points(t: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    detect_limit_points_with(t, &LimitOptions::default(), cfg)
}

/// Near-idempotent accumulation points of `{T^j}`.
///
/// Two sources are combined. The power scan keeps every visited `T^j` with
/// `‖X² − X‖ ≤ 10·eq_tol`. The spectral route returns the sum of the
/// unimodular spectral projections of `T`, which some subsequence of powers
/// converges to whenever the unimodular part is diagonalizable, even when
/// no finite power is close to it (irrational rotations).
///
/// Fails with [`Error::UnboundedPowers`] if a visited power exceeds twice
/// the bound (skipped when no bound is given and the spectrum already
/// certifies bounded powers), and propagates spectral errors for
/// eigenvalues outside the disk or in the ambiguity band.
pub fn detect_limit_points_with(
    t: &ComplexMatrix,
    opts: &LimitOptions,
    cfg: &ToleranceConfig,
) -> Result<Vec<ComplexMatrix>> {
    t.validate_element()?;
    let n = t.rows();
    let idem_tol = 10.0 * cfg.eq_tol;
    let linear = 4 * n as u64;

    let powers = scheduled_powers(t);
    let split = spectral_split(t, cfg);

    // Without a caller bound, a diagonalizable unimodular part certifies
    // bounded powers outright: T^j = B·diag(U^j, R^j)·B⁻¹ with U unitary and
    // R of spectral radius below one. The early-power heuristic would
    // otherwise misfire on conjugated irrational rotations, whose norms drift
    // quasi-periodically above anything seen in the first few powers.
    let certified = opts.bound.is_none() && matches!(&split, Ok(s) if s.unitary_diagonalized);
    if !certified {
        let limit = 2.0
            * opts.bound.unwrap_or_else(|| {
                powers
                    .iter()
                    .filter(|(j, _)| *j <= linear)
                    .map(|(_, x)| op_norm(x))
                    .fold(0.0, f64::max)
            });
        for (j, x) in &powers {
            let norm = op_norm(x);
            if !(norm <= limit) {
                return Err(Error::UnboundedPowers {
                    power: *j,
                    norm,
                    limit,
                });
            }
        }
    }

    let mut out: Vec<ComplexMatrix> = Vec::new();
    let push = |x: ComplexMatrix, out: &mut Vec<ComplexMatrix>| {
        let zero = x.is_zero() || op_norm_le(&x, cfg.rank_tol);
        if zero && !opts.include_zero {
            return;
        }
        let x = if zero { ComplexMatrix::zeros(n, n) } else { x };
        if !out.iter().any(|y| approx_eq(y, &x, idem_tol)) {
            out.push(x);
        }
    };

    let split = split?;
    if !split.unitary_diagonalized {
        return Err(Error::NonDiagonalizableUnimodular {
            residual: split.unimodular_nilpotent_residual,
        });
    }
    let p = split.unimodular_projection();
    if op_norm_le(&(&(&p * &p) - &p), idem_tol) && range_within(&p, t, cfg) {
        push(p, &mut out);
    }

    for (_, x) in powers {
        if op_norm_le(&(&(&x * &x) - &x), idem_tol) {
            push(x, &mut out);
        }
    }
    Ok(out)
}

/// `range(x) ⊆ range(t)`, by comparing numerical ranks.
fn range_within(x: &ComplexMatrix, t: &ComplexMatrix, cfg: &ToleranceConfig) -> bool {
    let Ok(stacked) = ComplexMatrix::hstack(&[t.clone(), x.clone()]) else {
        return false;
    };
    rank_numeric(&stacked, cfg) == rank_numeric(t, cfg)
}
