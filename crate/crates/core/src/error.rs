//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by model validation and the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A class-count vector must hold at least one class.
    #[error("class counts must be non-empty")]
    NoClasses,

    /// Every class must hold at least one option.
    #[error("class {class} has zero options; every class must be non-empty")]
    EmptyClass { class: usize },

    /// k = 0 passed where a positive class count is required.
    #[error("k must be at least 1")]
    ZeroK,

    /// A threshold or evaluation point left the unit interval.
    #[error("value {value} outside [0, 1]")]
    OutsideUnitInterval { value: f64 },

    /// Interval arguments must satisfy 0 <= t <= s <= 1 with s > 0.
    #[error("invalid interval: t = {t}, s = {s} (need 0 <= t <= s <= 1, s > 0)")]
    InvalidInterval { t: f64, s: f64 },

    /// The density parameter t must lie in [0, 1).
    #[error("density undefined for t = {t} (need 0 <= t < 1)")]
    DensityT { t: f64 },

    /// A realization failed a structural invariant.
    #[error("invalid realization: {reason}")]
    InvalidRealization { reason: String },

    /// The two-stream construction needs a single totally ordered class.
    #[error("expected a single-class stream, got {classes} classes")]
    NotSingleClass { classes: usize },

    /// A simulation or sweep was configured with no work to do.
    #[error("threshold grid is empty")]
    EmptyGrid,

    /// Trial counts must be positive.
    #[error("trials must be at least 1")]
    ZeroTrials,

    /// Worker counts must be positive.
    #[error("workers must be at least 1")]
    ZeroWorkers,
}

pub type Result<T> = std::result::Result<T, Error>;
