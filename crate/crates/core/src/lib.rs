//! Threshold stopping strategies for the k-class alternative best-choice
//! problem.
//!
//! Options arrive on the unit time interval in `k` disjoint, totally
//! ordered classes whose sizes are unknown to the decision maker. The
//! threshold strategy σ_t observes until time `t` and then stops on the
//! first record — the first arrival that beats every earlier arrival of
//! its own class. A run is a success when the selected option is the best
//! of its class.
//!
//! The crate provides:
//!
//! - [`model`]: the arrival model and reproducible sampling;
//! - [`strategy`]: strategy execution, outcome classification, and the
//!   two-stream construction that turns one ranked stream into a
//!   best-or-worst selection problem;
//! - [`analytics`]: the threshold t_k = k^(-1/(k-1)) (1/e at k = 1), the
//!   lower-bound curve h_k, record-gap probabilities, and an exact
//!   finite-n success probability via composite Gauss–Legendre quadrature;
//! - [`montecarlo`]: a bit-reproducible parallel trial runner with
//!   common-random-number threshold sweeps;
//! - [`optimize`]: threshold search over any of the objectives.
//!
//! Everything downstream of a `(master_seed, trial_index)` pair is a pure
//! function, so simulations reproduce exactly across runs, machines, and
//! worker counts.
//!
//! ```
//! use altchoice::{
//!     exact_success_prob, optimal_threshold, simulate, ClassCounts, SimulationConfig,
//! };
//!
//! let counts = ClassCounts::new(vec![5, 5])?;
//! let t = optimal_threshold(2)?; // the 1/2-rule
//!
//! let stats = simulate(&SimulationConfig::new(counts.clone(), t, 100_000, 42)?)?;
//! let exact = exact_success_prob(&counts, t)?;
//!
//! assert!(exact.value >= 0.5);
//! assert!((stats.success_rate - exact.value).abs() < 4.0 * stats.std_err);
//! # Ok::<(), altchoice::Error>(())
//! ```

pub mod analytics;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod optimize;
pub mod quad;
pub mod strategy;

pub use analytics::{
    density_f, exact_success_prob, exact_success_prob_with_panels, lower_bound_h, no_record_bound,
    no_record_prob_exact, optimal_threshold, BoundCurve, ExactProbability, DEFAULT_QUAD_PANELS,
};
pub use error::{Error, Result};
pub use model::{sample_realization, Arrival, ClassCounts, Realization, Seed};
pub use montecarlo::{
    simulate, simulate_best_or_worst, sweep, BestOrWorstStats, SimulationConfig, SimulationStats,
};
pub use optimize::{optimize_threshold, ObjectiveSpec, OptimizeResult, SearchConfig, SearchMethod};
pub use strategy::{
    build_two_stream, run_best_or_worst, run_threshold_on_arrivals, run_threshold_strategy,
    BestOrWorstOutcome, Outcome, Stop, Target, ThresholdStrategy, TwoStreamRealization,
};
