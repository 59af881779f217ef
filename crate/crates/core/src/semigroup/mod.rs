//! Multiplicative closure of generator sets and power-limit idempotents.

mod closure;
mod limits;
mod probe;
mod set;

pub(crate) use closure::sampled_limit_points;
pub use closure::{closure, GeneratorInput};
pub use limits::{detect_limit_points, detect_limit_points_with, power_schedule, scheduled_powers, LimitOptions};
pub use probe::{ideal, product_probe};
pub use set::{canonical_cmp, canonical_key, snap_zero, MatrixIndex, SemigroupSet};
