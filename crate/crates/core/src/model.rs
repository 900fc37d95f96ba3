//! The k-class arrival model.
//!
//! `k` non-empty classes of options arrive on the unit time interval. All
//! arrival times are iid uniform on (0, 1), and inside each class the
//! options are uniquely ranked (rank 1 = best of its class), with the rank
//! order independent of the arrival times.
//!
//! Sampling is a pure function of `(ClassCounts, Seed)`: the same inputs
//! always reproduce the same [`Realization`], bit for bit, so trials can be
//! distributed over any number of workers without changing results.
//!
//! Only the uniform arrival model is implemented. An arrival process with a
//! general continuous distribution F reduces to it through the time change
//! u = F(t): a threshold t under F corresponds to the threshold F(t) here.

use rand::distr::Open01;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-class option counts `(n_1, ..., n_k)`; `k` is the vector length.
///
/// Validated on construction: at least one class, every class non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts(Vec<u32>);

impl ClassCounts {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::NoClasses);
        }
        if let Some(class) = counts.iter().position(|&n| n == 0) {
            return Err(Error::EmptyClass { class });
        }
        Ok(Self(counts))
    }

    /// `k` identical classes of `n` options each.
    pub fn uniform(k: usize, n: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroK);
        }
        Self::new(vec![n; k])
    }

    /// Number of classes.
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Total number of options over all classes.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }
}

/// One option: its class, its within-class rank (1 = best), and its
/// arrival time in (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrival {
    pub class_id: usize,
    pub rank: u32,
    pub time: f64,
}

/// Deterministic ordering used everywhere arrivals are sorted: ascending
/// time, ties broken by (class_id, rank). Ties between distinct arrivals
/// are a measure-zero event; the tie-break keeps sampling deterministic
/// without resampling.
fn arrival_order(a: &Arrival, b: &Arrival) -> std::cmp::Ordering {
    a.time
        .total_cmp(&b.time)
        .then(a.class_id.cmp(&b.class_id))
        .then(a.rank.cmp(&b.rank))
}

/// One sampled arrival sequence, sorted by time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    arrivals: Vec<Arrival>,
    counts: ClassCounts,
}

impl Realization {
    /// Build a realization from raw parts, checking every structural
    /// invariant: total length, per-class rank permutations, times in
    /// (0, 1), and sort order.
    pub fn new(arrivals: Vec<Arrival>, counts: ClassCounts) -> Result<Self> {
        if arrivals.len() != counts.total() {
            return Err(Error::InvalidRealization {
                reason: format!(
                    "expected {} arrivals, got {}",
                    counts.total(),
                    arrivals.len()
                ),
            });
        }
        let mut seen: Vec<Vec<bool>> = counts
            .counts()
            .iter()
            .map(|&n| vec![false; n as usize])
            .collect();
        for a in &arrivals {
            if a.class_id >= counts.k() {
                return Err(Error::InvalidRealization {
                    reason: format!("class id {} out of range", a.class_id),
                });
            }
            let n = counts.counts()[a.class_id];
            if a.rank < 1 || a.rank > n {
                return Err(Error::InvalidRealization {
                    reason: format!("rank {} out of 1..={} in class {}", a.rank, n, a.class_id),
                });
            }
            let slot = &mut seen[a.class_id][(a.rank - 1) as usize];
            if *slot {
                return Err(Error::InvalidRealization {
                    reason: format!("duplicate rank {} in class {}", a.rank, a.class_id),
                });
            }
            *slot = true;
            if !(a.time > 0.0 && a.time < 1.0) {
                return Err(Error::InvalidRealization {
                    reason: format!("arrival time {} outside (0, 1)", a.time),
                });
            }
        }
        for w in arrivals.windows(2) {
            if arrival_order(&w[0], &w[1]) != std::cmp::Ordering::Less {
                return Err(Error::InvalidRealization {
                    reason: "arrivals not sorted by (time, class, rank)".to_string(),
                });
            }
        }
        Ok(Self { arrivals, counts })
    }

    /// Arrivals in time order.
    pub fn arrivals(&self) -> &[Arrival] {
        &self.arrivals
    }

    pub fn counts(&self) -> &ClassCounts {
        &self.counts
    }

    /// Arrival time of each class maximum: entry `j` is the time of the
    /// rank-1 arrival of class `j`.
    pub fn class_maxima_times(&self) -> Vec<f64> {
        let mut times = vec![f64::NAN; self.counts.k()];
        for a in &self.arrivals {
            if a.rank == 1 {
                times[a.class_id] = a.time;
            }
        }
        times
    }
}

/// Identifies one reproducible random stream: a master seed plus a trial
/// index. The mapping to generator state is pure, and distinct trial
/// indices select independent ChaCha streams, so trials may be evaluated
/// in any order or in parallel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl Seed {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    /// The generator for this (master_seed, trial_index) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }
}

/// Draw one realization of the arrival model.
///
/// Each arrival time is iid uniform on the open interval (0, 1) (endpoints
/// excluded so a threshold can never sit on an arrival boundary), and each
/// class's ranks are an independent uniform permutation of `1..=n_j`.
/// Deterministic given the seed.
pub fn sample_realization(counts: &ClassCounts, seed: Seed) -> Realization {
    let mut rng = seed.rng();
    let mut arrivals = Vec::with_capacity(counts.total());
    let mut ranks: Vec<u32> = Vec::new();
    for (class_id, &n) in counts.counts().iter().enumerate() {
        ranks.clear();
        ranks.extend(1..=n);
        let times: Vec<f64> = (0..n).map(|_| rng.sample(Open01)).collect();
        ranks.shuffle(&mut rng);
        for (&rank, &time) in ranks.iter().zip(times.iter()) {
            arrivals.push(Arrival {
                class_id,
                rank,
                time,
            });
        }
    }
    arrivals.sort_by(arrival_order);
    Realization {
        arrivals,
        counts: counts.clone(),
    }
}
