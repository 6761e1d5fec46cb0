//! Uniform sample grids over a phase interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval [low, high] in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite()) || high <= low {
            return Err(Error::domain(format!(
                "interval [{low}, {high}] is empty or not finite"
            )));
        }
        Ok(Self { low, high })
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.low && x <= self.high
    }

    /// `points` equally spaced values including both endpoints.
    pub fn linspace(&self, points: usize) -> Result<Vec<f64>> {
        linspace(self.low, self.high, points)
    }
}

/// `points` equally spaced values on [low, high], endpoints included.
pub fn linspace(low: f64, high: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::domain(format!("grid needs at least 2 points, got {points}")));
    }
    let step = (high - low) / (points - 1) as f64;
    let mut v: Vec<f64> = (0..points).map(|k| low + k as f64 * step).collect();
    v[points - 1] = high;
    Ok(v)
}
