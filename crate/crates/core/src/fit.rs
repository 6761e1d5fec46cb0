//! Linear least-squares fit of a fringe at a known frequency.
//!
//! Model: y(x) = a + b·cos(m·x) + c·sin(m·x). The visibility is √(b²+c²)/a,
//! the phase shift φ satisfies b·cos(mx) + c·sin(mx) = r·cos(mx − φ), and
//! the standard error is propagated from the residual-scaled covariance of
//! (a, b, c) to first order.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityEstimate {
    pub visibility: f64,
    pub offset: f64,
    pub phase_shift: f64,
    pub rms_residual: f64,
    pub standard_error: f64,
}

/// Fitted coefficients before they are reduced to a visibility.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HarmonicFit {
    pub coeffs: Vector3<f64>,
    pub covariance: Matrix3<f64>,
    pub rms_residual: f64,
}

pub(crate) fn fit_coefficients(x: &[f64], y: &[f64], frequency: f64) -> Result<HarmonicFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!(
            "{} abscissae but {} values",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {n}")));
    }
    let mut normal = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for (&xi, &yi) in x.iter().zip(y) {
        let (s, c) = (frequency * xi).sin_cos();
        let row = Vector3::new(1.0, c, s);
        normal += row * row.transpose();
        rhs += row * yi;
    }
    let inverse = normal
        .try_inverse()
        .ok_or_else(|| Error::Fit("design matrix is singular".into()))?;
    let coeffs = inverse * rhs;

    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let (s, c) = (frequency * xi).sin_cos();
            let r = yi - (coeffs[0] + coeffs[1] * c + coeffs[2] * s);
            r * r
        })
        .sum();
    let dof = (n - 3) as f64;
    Ok(HarmonicFit {
        coeffs,
        covariance: inverse * (rss / dof),
        rms_residual: (rss / n as f64).sqrt(),
    })
}

impl HarmonicFit {
    /// Reduces the fit to a visibility. `gain` rescales the oscillating
    /// coefficients (b, c) before the ratio is formed.
    pub(crate) fn estimate(&self, scale: f64, gain: f64) -> Result<VisibilityEstimate> {
        let a = self.coeffs[0];
        let b = self.coeffs[1] * gain;
        let c = self.coeffs[2] * gain;
        if a.is_nan() || a <= 1e-12 * scale {
            return Err(Error::Fit(format!(
                "fitted offset {a:e} vanishes; no fringe to normalize"
            )));
        }
        let r = b.hypot(c);
        let cov = self.covariance;
        let standard_error = if r > 0.0 {
            let grad = Vector3::new(-r / (a * a), b / (a * r) * gain, c / (a * r) * gain);
            (grad.transpose() * cov * grad)[0].max(0.0).sqrt()
        } else {
            ((cov[(1, 1)] + cov[(2, 2)]) * gain * gain).max(0.0).sqrt() / a
        };
        Ok(VisibilityEstimate {
            visibility: r / a,
            offset: a,
            phase_shift: c.atan2(b),
            rms_residual: self.rms_residual,
            standard_error,
        })
    }
}

/// Fits y = a + b·cos(m·x) + c·sin(m·x) and reports the visibility √(b²+c²)/a.
pub fn fit_harmonic(x: &[f64], y: &[f64], frequency: f64) -> Result<VisibilityEstimate> {
    let fit = fit_coefficients(x, y, frequency)?;
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    fit.estimate(scale, 1.0)
}
