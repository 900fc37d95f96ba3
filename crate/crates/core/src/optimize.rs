//! Threshold optimization over t in [0, 1].
//!
//! Empirical exploration only: maximizing any of the objectives says
//! nothing about optimality over all stopping rules. A coarse grid scan
//! locates the best sample; when that sample is bracketed by lower
//! neighbours, golden-section search refines it. A best sample sitting on
//! the grid boundary cannot be bracketed, so the search falls back to a
//! dense grid and flags the result.

use crate::analytics::{exact_success_prob_with_panels, lower_bound_h, DEFAULT_QUAD_PANELS};
use crate::error::Result;
use crate::model::ClassCounts;
use crate::montecarlo::{simulate, SimulationConfig};

/// What to maximize over t.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    /// The analytic lower bound h_k(t).
    AnalyticBound { k: u32 },
    /// The quadrature-computed success probability for concrete counts.
    Exact { counts: ClassCounts, panels: usize },
    /// Empirical success rate with common random numbers: every threshold
    /// is evaluated on the same per-trial realizations, so the objective
    /// is a deterministic function of t.
    MonteCarlo {
        counts: ClassCounts,
        trials: u64,
        master_seed: u64,
        workers: usize,
    },
}

impl ObjectiveSpec {
    pub fn exact(counts: ClassCounts) -> Self {
        Self::Exact {
            counts,
            panels: DEFAULT_QUAD_PANELS,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::AnalyticBound { .. } => "analytic-bound",
            Self::Exact { .. } => "exact",
            Self::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

/// Search controls. Defaults: a 33-point coarse grid, golden-section
/// refinement to an interval of width 1e-9, and a 100_001-point dense
/// grid for the non-unimodal fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub coarse_grid: usize,
    pub tolerance: f64,
    pub dense_grid: usize,
    pub max_iterations: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            coarse_grid: 33,
            tolerance: 1e-9,
            dense_grid: 100_001,
            max_iterations: 200,
        }
    }
}

/// How the reported maximizer was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    GoldenSection,
    DenseGridFallback,
}

impl SearchMethod {
    pub fn name(&self) -> &'static str {
        match self {
            Self::GoldenSection => "golden-section",
            Self::DenseGridFallback => "dense-grid-fallback",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeResult {
    pub threshold: f64,
    pub value: f64,
    pub evaluations: usize,
    pub method: SearchMethod,
    /// Set when the coarse-grid maximum was not bracketed by lower
    /// neighbours, so unimodality could not be relied on.
    pub flagged_non_unimodal: bool,
}

/// Maximize the objective over t in [0, 1].
pub fn optimize_threshold(
    objective: &ObjectiveSpec,
    search: &SearchConfig,
) -> Result<OptimizeResult> {
    // Validate eagerly so the evaluation closure cannot fail mid-search.
    match objective {
        ObjectiveSpec::AnalyticBound { k } => {
            lower_bound_h(*k, 0.0)?;
        }
        ObjectiveSpec::Exact { counts, panels } => {
            exact_success_prob_with_panels(counts, 0.0, *panels)?;
        }
        ObjectiveSpec::MonteCarlo {
            counts,
            trials,
            master_seed,
            workers,
        } => {
            SimulationConfig::new(counts.clone(), 0.0, *trials, *master_seed)?
                .with_workers(*workers)?;
        }
    }
    let eval = |t: f64| -> f64 {
        match objective {
            ObjectiveSpec::AnalyticBound { k } => lower_bound_h(*k, t).expect("validated"),
            ObjectiveSpec::Exact { counts, panels } => {
                exact_success_prob_with_panels(counts, t, *panels)
                    .expect("validated")
                    .value
            }
            ObjectiveSpec::MonteCarlo {
                counts,
                trials,
                master_seed,
                workers,
            } => {
                let cfg = SimulationConfig {
                    counts: counts.clone(),
                    threshold: t,
                    trials: *trials,
                    master_seed: *master_seed,
                    workers: *workers,
                };
                simulate(&cfg).expect("validated").success_rate
            }
        }
    };

    let grid_points = search.coarse_grid.max(3);
    let grid: Vec<(f64, f64)> = (0..grid_points)
        .map(|i| {
            let t = i as f64 / (grid_points - 1) as f64;
            (t, eval(t))
        })
        .collect();
    let mut evaluations = grid_points;
    let best = grid
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");

    if best == 0 || best == grid_points - 1 {
        // No interior bracket: scan densely instead of trusting a shape
        // the samples do not support.
        let dense = search.dense_grid.max(grid_points);
        let mut best_t = grid[best].0;
        let mut best_v = grid[best].1;
        for i in 0..dense {
            let t = i as f64 / (dense - 1) as f64;
            let v = eval(t);
            if v > best_v {
                best_t = t;
                best_v = v;
            }
        }
        evaluations += dense;
        return Ok(OptimizeResult {
            threshold: best_t,
            value: best_v,
            evaluations,
            method: SearchMethod::DenseGridFallback,
            flagged_non_unimodal: true,
        });
    }

    let (lo, hi) = (grid[best - 1].0, grid[best + 1].0);
    let (mut t_star, mut v_star, golden_evals) =
        golden_section_max(&eval, lo, hi, search.tolerance, search.max_iterations);
    evaluations += golden_evals;
    if grid[best].1 > v_star {
        t_star = grid[best].0;
        v_star = grid[best].1;
    }
    Ok(OptimizeResult {
        threshold: t_star,
        value: v_star,
        evaluations,
        method: SearchMethod::GoldenSection,
        flagged_non_unimodal: false,
    })
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Returns `(x_max, f_max, evaluations)`.
fn golden_section_max(
    f: &dyn Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tolerance: f64,
    max_iterations: usize,
) -> (f64, f64, usize) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;

    while (b - a) > tolerance && evals < max_iterations {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }

    if f1 >= f2 {
        (x1, f1, evals)
    } else {
        (x2, f2, evals)
    }
}
