//! Reproducible Monte Carlo trial runner.
//!
//! Trials are independent pure functions of `(master_seed, trial_index)`,
//! partitioned over workers by contiguous index ranges and aggregated with
//! integer counters, so the result is bit-identical for any worker count
//! or scheduling. [`sweep`] reuses the identical per-trial realization at
//! every threshold (common random numbers), which couples the curve points
//! monotonically: a trial that yields NoStop at t also yields NoStop at
//! every larger threshold.

use std::thread;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{sample_realization, ClassCounts, Seed};
use crate::strategy::{run_best_or_worst, run_threshold_on_arrivals, Outcome, Target};

/// Configuration of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub counts: ClassCounts,
    pub threshold: f64,
    pub trials: u64,
    pub master_seed: u64,
    /// Advisory worker count; any value yields identical statistics.
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(counts: ClassCounts, threshold: f64, trials: u64, master_seed: u64) -> Result<Self> {
        let cfg = Self {
            counts,
            threshold,
            trials,
            master_seed,
            workers: default_workers(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::ZeroWorkers);
        }
        self.workers = workers;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::OutsideUnitInterval {
                value: self.threshold,
            });
        }
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        if self.workers == 0 {
            return Err(Error::ZeroWorkers);
        }
        Ok(())
    }
}

fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// Aggregated outcome counts with rates and a Wald 95% confidence
/// interval on the success rate. The normal approximation is intended for
/// trial counts of 10^4 and up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationStats {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub no_stops: u64,
    pub success_rate: f64,
    pub failure_rate: f64,
    pub no_stop_rate: f64,
    pub std_err: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl SimulationStats {
    fn from_counts(trials: u64, successes: u64, failures: u64, no_stops: u64) -> Self {
        debug_assert_eq!(successes + failures + no_stops, trials);
        let n = trials as f64;
        let success_rate = successes as f64 / n;
        let std_err = (success_rate * (1.0 - success_rate) / n).sqrt();
        Self {
            trials,
            successes,
            failures,
            no_stops,
            success_rate,
            failure_rate: failures as f64 / n,
            no_stop_rate: no_stops as f64 / n,
            std_err,
            ci95_low: (success_rate - 1.96 * std_err).max(0.0),
            ci95_high: (success_rate + 1.96 * std_err).min(1.0),
        }
    }
}

/// Contiguous trial-index ranges, one per worker. Workers receive nearly
/// equal shares; the split depends only on (trials, workers).
fn partition(trials: u64, workers: usize) -> Vec<std::ops::Range<u64>> {
    let workers = workers.min(trials.max(1) as usize).max(1) as u64;
    let base = trials / workers;
    let extra = trials % workers;
    let mut ranges = Vec::with_capacity(workers as usize);
    let mut start = 0u64;
    for w in 0..workers {
        let len = base + u64::from(w < extra);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

/// Run `work` over partitioned trial ranges and collect per-worker results
/// in worker order.
fn run_partitioned<T, F>(trials: u64, workers: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync,
{
    let ranges = partition(trials, workers);
    let work = &work;
    thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| scope.spawn(move || work(range)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    })
}

/// Run independent (sample → strategy) trials and aggregate the outcomes.
pub fn simulate(cfg: &SimulationConfig) -> Result<SimulationStats> {
    cfg.validate()?;
    let tallies = run_partitioned(cfg.trials, cfg.workers, |range| {
        let mut tally = [0u64; 3];
        for trial in range {
            let r = sample_realization(&cfg.counts, Seed::new(cfg.master_seed, trial));
            match run_threshold_on_arrivals(r.arrivals(), cfg.threshold) {
                Outcome::Success(_) => tally[0] += 1,
                Outcome::Failure(_) => tally[1] += 1,
                Outcome::NoStop => tally[2] += 1,
            }
        }
        tally
    });
    let mut total = [0u64; 3];
    for t in tallies {
        total[0] += t[0];
        total[1] += t[1];
        total[2] += t[2];
    }
    Ok(SimulationStats::from_counts(
        cfg.trials, total[0], total[1], total[2],
    ))
}

/// Simulate σ_t at every threshold of a grid with common random numbers:
/// each trial's realization is sampled once and run at every threshold.
/// Output is ordered by threshold.
pub fn sweep(
    counts: &ClassCounts,
    thresholds: &[f64],
    trials_per_point: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<(f64, SimulationStats)>> {
    if thresholds.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &t in thresholds {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutsideUnitInterval { value: t });
        }
    }
    if trials_per_point == 0 {
        return Err(Error::ZeroTrials);
    }
    if workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    let mut ts = thresholds.to_vec();
    ts.sort_by(f64::total_cmp);

    let per_worker = run_partitioned(trials_per_point, workers, |range| {
        let mut tallies = vec![[0u64; 3]; ts.len()];
        for trial in range {
            let r = sample_realization(counts, Seed::new(master_seed, trial));
            for (i, &t) in ts.iter().enumerate() {
                match run_threshold_on_arrivals(r.arrivals(), t) {
                    Outcome::Success(_) => tallies[i][0] += 1,
                    Outcome::Failure(_) => tallies[i][1] += 1,
                    Outcome::NoStop => tallies[i][2] += 1,
                }
            }
        }
        tallies
    });

    let mut totals = vec![[0u64; 3]; ts.len()];
    for worker in per_worker {
        for (total, tally) in totals.iter_mut().zip(worker) {
            total[0] += tally[0];
            total[1] += tally[1];
            total[2] += tally[2];
        }
    }
    Ok(ts
        .into_iter()
        .zip(totals)
        .map(|(t, c)| {
            (
                t,
                SimulationStats::from_counts(trials_per_point, c[0], c[1], c[2]),
            )
        })
        .collect())
}

/// Aggregated best-or-worst outcomes over a single ranked stream of `n`
/// items. `degenerate` counts trials where at least one derived class was
/// empty (the pivot was the overall best and/or worst).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestOrWorstStats {
    pub trials: u64,
    pub successes: u64,
    pub best_hits: u64,
    pub worst_hits: u64,
    pub failures: u64,
    pub no_stops: u64,
    pub degenerate: u64,
    pub success_rate: f64,
    pub degenerate_rate: f64,
    pub std_err: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

/// Run best-or-worst trials on streams of `n` totally ordered items.
pub fn simulate_best_or_worst(
    n: u32,
    threshold: f64,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<BestOrWorstStats> {
    let counts = ClassCounts::new(vec![n])?;
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::OutsideUnitInterval { value: threshold });
    }
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if workers == 0 {
        return Err(Error::ZeroWorkers);
    }
    // [best, worst, failure, no-stop, degenerate]
    let tallies = run_partitioned(trials, workers, |range| {
        let mut tally = [0u64; 5];
        for trial in range {
            let r = sample_realization(&counts, Seed::new(master_seed, trial));
            let out = run_best_or_worst(
                &r,
                crate::strategy::ThresholdStrategy::new(threshold).expect("validated"),
            )
            .expect("single-class stream");
            match out.target_hit {
                Some(Target::Best) => tally[0] += 1,
                Some(Target::Worst) => tally[1] += 1,
                None => {
                    if out.outcome.is_no_stop() {
                        tally[3] += 1;
                    } else {
                        tally[2] += 1;
                    }
                }
            }
            if out.class_empty[0] || out.class_empty[1] {
                tally[4] += 1;
            }
        }
        tally
    });
    let mut total = [0u64; 5];
    for t in tallies {
        for (acc, v) in total.iter_mut().zip(t) {
            *acc += v;
        }
    }
    let [best_hits, worst_hits, failures, no_stops, degenerate] = total;
    let successes = best_hits + worst_hits;
    let nf = trials as f64;
    let success_rate = successes as f64 / nf;
    let std_err = (success_rate * (1.0 - success_rate) / nf).sqrt();
    Ok(BestOrWorstStats {
        trials,
        successes,
        best_hits,
        worst_hits,
        failures,
        no_stops,
        degenerate,
        success_rate,
        degenerate_rate: degenerate as f64 / nf,
        std_err,
        ci95_low: (success_rate - 1.96 * std_err).max(0.0),
        ci95_high: (success_rate + 1.96 * std_err).min(1.0),
    })
}
