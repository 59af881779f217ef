use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every check.
///
/// Matrix equality is operator-norm distance at most `eq_tol`. Every verdict
/// in this crate is relative to the configuration it was computed with, so
/// reports carry a copy of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eq_tol: f64,
    pub spec_tol: f64,
    pub rank_tol: f64,
    pub closure_cap: usize,
}

impl ToleranceConfig {
    /// Defaults for corpora whose entries are exactly representable.
    pub const fn exact() -> Self {
        ToleranceConfig {
            eq_tol: 1e-9,
            spec_tol: 1e-6,
            rank_tol: 1e-6,
            closure_cap: 10_000,
        }
    }

    /// Defaults for closures sampled from long products.
    pub const fn sampled() -> Self {
        ToleranceConfig {
            eq_tol: 1e-6,
            ..Self::exact()
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.closure_cap = cap;
        self
    }

    pub fn with_eq_tol(mut self, eq_tol: f64) -> Self {
        self.eq_tol = eq_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidTolerance(format!("{name} must be positive, got {v}")))
            }
        };
        positive("eq_tol", self.eq_tol)?;
        positive("spec_tol", self.spec_tol)?;
        positive("rank_tol", self.rank_tol)?;
        if self.eq_tol > 1.0 {
            return Err(Error::InvalidTolerance(format!(
                "eq_tol must be at most 1, got {}",
                self.eq_tol
            )));
        }
        if self.closure_cap == 0 {
            return Err(Error::InvalidTolerance("closure_cap must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self::exact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ToleranceConfig::exact().validate().unwrap();
        ToleranceConfig::sampled().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ToleranceConfig::exact().with_eq_tol(0.0).validate().is_err());
        assert!(ToleranceConfig::exact().with_eq_tol(2.0).validate().is_err());
        assert!(ToleranceConfig::exact().with_cap(0).validate().is_err());
        let mut c = ToleranceConfig::exact();
        c.spec_tol = f64::NAN;
        assert!(c.validate().is_err());
    }
}
