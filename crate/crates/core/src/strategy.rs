//! Threshold strategies and the two-stream (best-or-worst) construction.
//!
//! The strategy σ_t observes until time `t`, then selects the first record
//! thereafter: the first arrival, in any class, that beats every earlier
//! arrival of its own class. An arrival exactly at the threshold is
//! eligible. If no record appears at or after the threshold, the strategy
//! never stops.

use crate::error::{Error, Result};
use crate::model::{Arrival, Realization};

/// The strategy σ_t: wait until `threshold`, then take the first record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdStrategy {
    threshold: f64,
}

impl ThresholdStrategy {
    pub fn new(threshold: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::OutsideUnitInterval { value: threshold });
        }
        Ok(Self { threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Where a strategy stopped: the selected arrival.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stop {
    pub time: f64,
    pub class_id: usize,
    pub rank: u32,
}

/// Result of running a strategy on one realization, judged at the horizon.
///
/// `Success` means the selected arrival is the maximum of its class
/// (rank 1); `Failure` means it stopped on a non-maximal record; `NoStop`
/// means no record occurred at or after the threshold, so the stopping
/// time ran to the horizon with no choice at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Success(Stop),
    Failure(Stop),
    NoStop,
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success(_))
    }

    pub fn is_no_stop(&self) -> bool {
        matches!(self, Outcome::NoStop)
    }

    pub fn stop(&self) -> Option<&Stop> {
        match self {
            Outcome::Success(s) | Outcome::Failure(s) => Some(s),
            Outcome::NoStop => None,
        }
    }
}

/// Run σ_t on arrivals already sorted by time.
///
/// The scan is online: arrivals after the stop are never inspected, so
/// truncating the input anywhere after the stop cannot change the result.
/// Smaller rank = better; an arrival is a record iff its rank beats every
/// earlier rank of its class.
pub fn run_threshold_on_arrivals(arrivals: &[Arrival], threshold: f64) -> Outcome {
    let classes = arrivals.iter().map(|a| a.class_id + 1).max().unwrap_or(0);
    let mut best_rank = vec![u32::MAX; classes];
    for a in arrivals {
        let is_record = a.rank < best_rank[a.class_id];
        if is_record && a.time >= threshold {
            let stop = Stop {
                time: a.time,
                class_id: a.class_id,
                rank: a.rank,
            };
            return if a.rank == 1 {
                Outcome::Success(stop)
            } else {
                Outcome::Failure(stop)
            };
        }
        if is_record {
            best_rank[a.class_id] = a.rank;
        }
    }
    Outcome::NoStop
}

/// Run σ_t on a realization.
pub fn run_threshold_strategy(r: &Realization, strategy: ThresholdStrategy) -> Outcome {
    run_threshold_on_arrivals(r.arrivals(), strategy.threshold())
}

/// A single totally ordered stream split around its first arrival.
///
/// The first arrival is the pivot and belongs to neither class. Every
/// later arrival that beats the pivot goes to class 0, ranked by quality
/// (rank 1 = best overall); every later arrival the pivot beats goes to
/// class 1, ranked in reverse (rank 1 = worst overall). The class maxima
/// are therefore exactly the overall-best and overall-worst items, which
/// is what makes a threshold strategy on the derived classes target
/// "best or worst of all".
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStreamRealization {
    pivot_overall_rank: u32,
    pivot_time: f64,
    arrivals: Vec<Arrival>,
    overall_ranks: Vec<u32>,
    class_sizes: [usize; 2],
    total: usize,
}

impl TwoStreamRealization {
    /// Derived arrivals in time order (pivot excluded).
    pub fn arrivals(&self) -> &[Arrival] {
        &self.arrivals
    }

    /// Overall rank (1 = best of the whole stream) of each derived
    /// arrival, aligned with [`Self::arrivals`].
    pub fn overall_ranks(&self) -> &[u32] {
        &self.overall_ranks
    }

    pub fn pivot_overall_rank(&self) -> u32 {
        self.pivot_overall_rank
    }

    pub fn pivot_time(&self) -> f64 {
        self.pivot_time
    }

    /// Sizes of derived classes 0 (better than pivot) and 1 (worse).
    pub fn class_sizes(&self) -> [usize; 2] {
        self.class_sizes
    }

    /// Which derived classes came out empty. Both entries are true for a
    /// one-item stream; entry 0 is true iff the pivot is the overall best,
    /// entry 1 iff it is the overall worst.
    pub fn empty_classes(&self) -> [bool; 2] {
        [self.class_sizes[0] == 0, self.class_sizes[1] == 0]
    }

    /// Number of items in the original stream, pivot included.
    pub fn total(&self) -> usize {
        self.total
    }
}

/// Split a single-class, totally ordered stream around its first arrival.
///
/// Rank fields of the input are read as the overall total order
/// (1 = best). A one-item stream yields a degenerate result with both
/// derived classes empty, visible through
/// [`TwoStreamRealization::empty_classes`].
pub fn build_two_stream(stream: &Realization) -> Result<TwoStreamRealization> {
    if stream.counts().k() != 1 {
        return Err(Error::NotSingleClass {
            classes: stream.counts().k(),
        });
    }
    let arr = stream.arrivals();
    let n = arr.len() as u32;
    let pivot = arr[0];
    let mut arrivals = Vec::with_capacity(arr.len() - 1);
    let mut overall_ranks = Vec::with_capacity(arr.len() - 1);
    let mut class_sizes = [0usize; 2];
    for a in &arr[1..] {
        // Better-than-pivot items are overall ranks 1..pivot-1, all of
        // them, so the within-class rank of overall rank r is r itself.
        // Worse-than-pivot items are ranks pivot+1..n, reversed.
        let (class_id, rank) = if a.rank < pivot.rank {
            (0, a.rank)
        } else {
            (1, n - a.rank + 1)
        };
        class_sizes[class_id] += 1;
        arrivals.push(Arrival {
            class_id,
            rank,
            time: a.time,
        });
        overall_ranks.push(a.rank);
    }
    Ok(TwoStreamRealization {
        pivot_overall_rank: pivot.rank,
        pivot_time: pivot.time,
        arrivals,
        overall_ranks,
        class_sizes,
        total: arr.len(),
    })
}

/// Which end of the total order a best-or-worst run hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Best,
    Worst,
}

/// Outcome of a best-or-worst run: the underlying strategy outcome on the
/// derived two-class stream, the target hit on success, and which derived
/// classes were empty (an empty class makes that target unreachable).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestOrWorstOutcome {
    pub outcome: Outcome,
    pub target_hit: Option<Target>,
    pub class_empty: [bool; 2],
}

/// Split the stream around its first arrival and run σ_t on the derived
/// two-class process. Success selects either the overall-best or the
/// overall-worst item; degenerate cases are reported, never raised.
pub fn run_best_or_worst(
    stream: &Realization,
    strategy: ThresholdStrategy,
) -> Result<BestOrWorstOutcome> {
    let two = build_two_stream(stream)?;
    let outcome = run_threshold_on_arrivals(two.arrivals(), strategy.threshold());
    let target_hit = match outcome {
        Outcome::Success(stop) => Some(if stop.class_id == 0 {
            Target::Best
        } else {
            Target::Worst
        }),
        _ => None,
    };
    Ok(BestOrWorstOutcome {
        outcome,
        target_hit,
        class_empty: two.empty_classes(),
    })
}
