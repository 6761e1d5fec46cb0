//! Post-selected N-fold coincidence events drawn from the collapsed fringe.
//!
//! Event phases δ₁ are i.i.d. with density proportional to
//! A_N·[1 + cos(m·δ₁)] on the requested interval, drawn by rejection against
//! a flat envelope at the density maximum 2·A_N.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detectors::MagicConfig;
use crate::error::{Error, Result};
use crate::fit::{fit_coefficients, VisibilityEstimate};
use crate::geometry::AtomChain;
use crate::grid::Interval;
use crate::rng::substream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventBatch {
    pub delta1_values: Vec<f64>,
    pub range: Interval,
    pub seed: u64,
}

/// Rejection sampler for an unnormalized density bounded by `envelope` on `range`.
pub struct RejectionSampler<F> {
    density: F,
    envelope: f64,
    range: Interval,
}

impl<F: Fn(f64) -> f64> RejectionSampler<F> {
    pub fn new(density: F, envelope: f64, range: Interval) -> Result<Self> {
        if !(envelope.is_finite() && envelope > 0.0) {
            return Err(Error::domain(format!("envelope must be positive, got {envelope}")));
        }
        Ok(Self {
            density,
            envelope,
            range,
        })
    }

    pub fn draw(&self, rng: &mut impl Rng) -> f64 {
        loop {
            let x = rng.random_range(self.range.low..=self.range.high);
            let u: f64 = rng.random();
            if u * self.envelope < (self.density)(x) {
                return x;
            }
        }
    }

    pub fn draw_n(&self, rng: &mut impl Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// Draws `n_events` coincidence phases δ₁ for the collapsing placement of `chain`.
pub fn sample_events(
    chain: &AtomChain,
    n_events: usize,
    range: Interval,
    seed: u64,
) -> Result<EventBatch> {
    if n_events == 0 {
        return Err(Error::domain("need at least one event"));
    }
    let kd = chain.kd();
    if range.low < -kd || range.high > kd {
        return Err(Error::domain(format!(
            "range [{}, {}] exceeds the reachable phases [−{kd}, {kd}]",
            range.low, range.high
        )));
    }
    let config = MagicConfig::new(chain.n_atoms())?;
    let sampler = RejectionSampler::new(
        |x| config.closed_form(x),
        2.0 * config.amplitude,
        range,
    )?;
    let mut rng = substream(seed, 0);
    Ok(EventBatch {
        delta1_values: sampler.draw_n(&mut rng, n_events),
        range,
        seed,
    })
}

/// Counts of `values` in `bins` equal-width bins over `range`; the upper edge
/// belongs to the last bin.
pub fn histogram(values: &[f64], range: Interval, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    let width = range.width() / bins as f64;
    for &v in values {
        if !range.contains(v) {
            continue;
        }
        let idx = (((v - range.low) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
}

/// Bins the events and fits a + b·cos(mδ₁) + c·sin(mδ₁) to the counts at
/// bin centres. The oscillating part is divided by the bin-averaging factor
/// sinc(m·w/2) of bins of width w.
pub fn estimate_visibility_from_events(
    batch: &EventBatch,
    fringe_multiplier: usize,
    n_bins: usize,
) -> Result<VisibilityEstimate> {
    if batch.delta1_values.is_empty() {
        return Err(Error::domain("event batch is empty"));
    }
    if fringe_multiplier == 0 || n_bins < 3 * fringe_multiplier {
        return Err(Error::domain(format!(
            "need at least {} bins for fringe multiplier {fringe_multiplier}, got {n_bins}",
            3 * fringe_multiplier.max(1)
        )));
    }
    let counts = histogram(&batch.delta1_values, batch.range, n_bins);
    let empty = counts.iter().filter(|&&c| c == 0).count();
    if 2 * empty > n_bins {
        return Err(Error::InsufficientStatistics {
            empty,
            bins: n_bins,
        });
    }
    let width = batch.range.width() / n_bins as f64;
    let centres: Vec<f64> = (0..n_bins)
        .map(|b| batch.range.low + (b as f64 + 0.5) * width)
        .collect();
    let y: Vec<f64> = counts.iter().map(|&c| c as f64).collect();

    let m = fringe_multiplier as f64;
    let half = m * width / 2.0;
    let smear = if half.abs() < 1e-12 { 1.0 } else { half.sin() / half };
    if smear.abs() < 1e-6 {
        return Err(Error::Fit(format!(
            "bins of width {width} wash out a fringe of period {}",
            2.0 * PI / m
        )));
    }
    let fit = fit_coefficients(&centres, &y, m)?;
    let scale = y.iter().cloned().fold(0.0, f64::max);
    fit.estimate(scale, 1.0 / smear)
}
