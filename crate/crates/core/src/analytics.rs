//! Closed-form quantities and the exact finite-n success probability.
//!
//! The threshold t_k = k^(-1/(k-1)) maximizes the analytic lower bound
//! h_k(t) = (k/(k-1))(t - t^k) on the success probability of σ_t, with
//! h_k(t_k) = t_k. Both have removable singularities at k = 1, where the
//! limits are t_1 = 1/e and h_1(t) = -t·ln t.
//!
//! [`exact_success_prob`] evaluates the success probability for concrete
//! class counts by conditioning on which class maximum is selected:
//!
//! p(t) = Σ_c ∫_t^1 q_c(t,s) · Π_{j≠c} r_j(t,s) ds
//!
//! where, writing m = 1 - s, the factor for the selected class c is
//! q_c = m^(n_c - 1) + (1 - m^(n_c - 1))·(t/s) — the probability that the
//! other n_c - 1 options of class c produce no record in [t, s) — and the
//! factor for every other class j is r_j = m^(n_j) + (1 - m^(n_j))·(t/s).
//! Both are instances of [`no_record_prob_exact`] and are always >= t/s,
//! the infinite-population limit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ClassCounts;
use crate::quad;

/// Default number of quadrature panels for [`exact_success_prob`].
pub const DEFAULT_QUAD_PANELS: usize = 256;

/// The bound-maximizing threshold t_k = k^(-1/(k-1)); 1/e for k = 1.
pub fn optimal_threshold(k: u32) -> Result<f64> {
    match k {
        0 => Err(Error::ZeroK),
        1 => Ok((-1.0f64).exp()),
        _ => Ok((k as f64).powf(-1.0 / (k as f64 - 1.0))),
    }
}

/// The analytic lower bound h_k(t) = (k/(k-1))(t - t^k) on the success
/// probability of σ_t; -t·ln t for k = 1, with h(0) = 0.
pub fn lower_bound_h(k: u32, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutsideUnitInterval { value: t });
    }
    if k == 1 {
        // Endpoints pinned to +0.0 (-1.0 * ln(1.0) would yield -0.0).
        if t == 0.0 || t == 1.0 {
            return Ok(0.0);
        }
        return Ok(-t * t.ln());
    }
    let kf = k as f64;
    Ok(kf / (kf - 1.0) * (t - t.powi(k as i32)))
}

/// Conditional density of the first of `i` class maxima arriving in
/// [t, 1], given that all `i` of them arrive there:
/// f(s) = i·(1-s)^(i-1)·(1-t)^(-i) on [t, 1], zero elsewhere.
pub fn density_f(i: u32, t: f64, s: f64) -> Result<f64> {
    if i == 0 {
        return Err(Error::ZeroK);
    }
    if !(0.0..1.0).contains(&t) {
        return Err(Error::DensityT { t });
    }
    if s < t || s > 1.0 {
        return Ok(0.0);
    }
    Ok(i as f64 * (1.0 - s).powi(i as i32 - 1) * (1.0 - t).powi(-(i as i32)))
}

/// Exact probability that `n` iid uniform, uniquely ranked arrivals
/// produce no record in [t, s):
///
/// (1-s)^n + (1 - (1-s)^n)·(t/s)
///
/// Either nothing arrives in [0, s), or something does, in which case a
/// record in [t, s) occurs iff the best of those arrivals lands in
/// [t, s) — and that best arrival is uniform on [0, s). The value is
/// always >= t/s, with equality in the limit n -> infinity.
pub fn no_record_prob_exact(n: u32, t: f64, s: f64) -> Result<f64> {
    if !(0.0 <= t && t <= s && s <= 1.0 && s > 0.0) {
        return Err(Error::InvalidInterval { t, s });
    }
    let miss = (1.0 - s).powi(n as i32);
    Ok(miss + (1.0 - miss) * (t / s))
}

/// Lower bound (t/s)^i on the probability that no record of any of `i`
/// independent classes is seen on [t, s).
pub fn no_record_bound(i: u32, t: f64, s: f64) -> Result<f64> {
    if i == 0 {
        return Err(Error::ZeroK);
    }
    if !(0.0 <= t && t <= s && s <= 1.0 && s > 0.0) {
        return Err(Error::InvalidInterval { t, s });
    }
    Ok((t / s).powi(i as i32))
}

/// A quadrature-computed probability with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactProbability {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Total integrand evaluations of the reported value.
    pub quad_points: usize,
}

/// Success probability of σ_t for concrete class counts, by composite
/// Gauss–Legendre quadrature with [`DEFAULT_QUAD_PANELS`] panels.
pub fn exact_success_prob(counts: &ClassCounts, t: f64) -> Result<ExactProbability> {
    exact_success_prob_with_panels(counts, t, DEFAULT_QUAD_PANELS)
}

/// Success probability of σ_t with an explicit panel count.
pub fn exact_success_prob_with_panels(
    counts: &ClassCounts,
    t: f64,
    panels: usize,
) -> Result<ExactProbability> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutsideUnitInterval { value: t });
    }
    let ns: Vec<i32> = counts.counts().iter().map(|&n| n as i32).collect();
    let integrand = move |s: f64| success_integrand(&ns, t, s);
    let panels = panels.max(2);
    let (value, abs_error_estimate) = quad::integrate_with_error(&integrand, t, 1.0, panels);
    Ok(ExactProbability {
        value: value.clamp(0.0, 1.0),
        abs_error_estimate,
        quad_points: panels * quad::NODES_PER_PANEL,
    })
}

/// Integrand of the success-probability decomposition at the point where
/// some class maximum arrives at time s. For t = 0 the t/s terms vanish
/// identically, so they are dropped algebraically instead of evaluated.
fn success_integrand(ns: &[i32], t: f64, s: f64) -> f64 {
    let m = 1.0 - s;
    let ratio = if t == 0.0 { 0.0 } else { t / s };
    let mut sum = 0.0;
    for (c, &nc) in ns.iter().enumerate() {
        let miss = m.powi(nc - 1);
        let mut prod = miss + (1.0 - miss) * ratio;
        for (j, &nj) in ns.iter().enumerate() {
            if j != c {
                let miss = m.powi(nj);
                prod *= miss + (1.0 - miss) * ratio;
            }
        }
        sum += prod;
    }
    sum
}

/// Sampled lower-bound curve (t, h_k(t)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub k: u32,
    pub samples: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn sample(k: u32, ts: &[f64]) -> Result<Self> {
        let samples = ts
            .iter()
            .map(|&t| Ok((t, lower_bound_h(k, t)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k, samples })
    }
}
