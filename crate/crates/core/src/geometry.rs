//! Emitter chain geometry and far-field feasibility estimates.
//!
//! Atoms sit on a one-dimensional equidistant chain centred on the origin.
//! Detector directions are described by the angle θ measured from the
//! normal to the chain axis, and enter every correlation function only
//! through the phase δ = kd·sin θ. All chain geometry is stored as the
//! dimensionless ratio d/λ; SI lengths appear only in [`FeasibilityParams`].

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack on the |θ| ≤ π/2 bound so that 90° converted from degrees is accepted.
const ANGLE_SLACK: f64 = 1e-12;

fn check_angle(theta: f64, what: &str) -> Result<()> {
    if !theta.is_finite() || theta.abs() > FRAC_PI_2 + ANGLE_SLACK {
        return Err(Error::domain(format!(
            "{what} must satisfy |θ| ≤ π/2, got {theta}"
        )));
    }
    Ok(())
}

/// A linear chain of `n_atoms` equidistant emitters with spacing d/λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomChain {
    n_atoms: usize,
    spacing_over_lambda: f64,
}

impl AtomChain {
    pub fn new(n_atoms: usize, spacing_over_lambda: f64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::domain("chain needs at least one atom"));
        }
        if !(spacing_over_lambda.is_finite() && spacing_over_lambda > 0.0) {
            return Err(Error::domain(format!(
                "spacing d/λ must be finite and positive, got {spacing_over_lambda}"
            )));
        }
        Ok(Self {
            n_atoms,
            spacing_over_lambda,
        })
    }

    /// Chain with d = λ, for which δ ranges over [−2π, 2π].
    pub fn unit_spacing(n_atoms: usize) -> Result<Self> {
        Self::new(n_atoms, 1.0)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn spacing_over_lambda(&self) -> f64 {
        self.spacing_over_lambda
    }

    /// kd = 2π·d/λ, the largest reachable detector phase.
    pub fn kd(&self) -> f64 {
        TAU * self.spacing_over_lambda
    }

    /// Atom offsets from the chain centre in units of d:
    /// −(N−1)/2, …, (N−1)/2.
    pub fn positions(&self) -> Vec<f64> {
        let centre = (self.n_atoms as f64 - 1.0) / 2.0;
        (0..self.n_atoms).map(|a| a as f64 - centre).collect()
    }
}

/// Atom positions (the j-vector) of `chain`, in units of d.
pub fn atom_positions(chain: &AtomChain) -> Vec<f64> {
    chain.positions()
}

/// δ = kd·sin θ for a detector at angle `theta` from the chain normal.
pub fn phase_from_angle(chain: &AtomChain, theta: f64) -> Result<f64> {
    check_angle(theta, "detector angle")?;
    Ok(chain.kd() * theta.sin())
}

/// Inverse of [`phase_from_angle`]: the angle at which a detector sees phase δ.
pub fn angle_from_phase(chain: &AtomChain, phase: f64) -> Result<f64> {
    let kd = chain.kd();
    if !phase.is_finite() || phase.abs() > kd * (1.0 + ANGLE_SLACK) {
        return Err(Error::domain(format!(
            "phase {phase} is outside the reachable range [−{kd}, {kd}]"
        )));
    }
    Ok((phase / kd).clamp(-1.0, 1.0).asin())
}

/// Δδ = kd·cos θ·Δθ, the phase blur of a detector with angular acceptance Δθ.
pub fn phase_resolution(chain: &AtomChain, theta: f64, delta_theta: f64) -> Result<f64> {
    check_angle(theta, "detector angle")?;
    if !(delta_theta.is_finite() && delta_theta >= 0.0) {
        return Err(Error::domain(format!(
            "angular uncertainty must be non-negative, got {delta_theta}"
        )));
    }
    Ok(chain.kd() * theta.cos() * delta_theta)
}

/// Physical set-up used for far-field and phase-noise budgets. Lengths in metres,
/// angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityParams {
    /// Detector aperture s.
    pub detector_size: f64,
    pub theta: f64,
    pub delta_theta: f64,
    /// Interatomic spacing d.
    pub d: f64,
    pub delta_d: f64,
    /// Optical wavelength λ.
    pub lambda: f64,
    /// Relative wavenumber uncertainty Δk/k.
    pub delta_k_rel: f64,
}

impl FeasibilityParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [("d", self.d), ("lambda", self.lambda)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("detector_size", self.detector_size),
            ("delta_theta", self.delta_theta),
            ("delta_d", self.delta_d),
            ("delta_k_rel", self.delta_k_rel),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        check_angle(self.theta, "theta")
    }

    /// The reference set-up: d = 5 μm, λ = 800 nm, θ = 30° ± 0.1°,
    /// Δd = 0.1 μm, Δk/k = 1e-7, with the given detector size.
    pub fn reference(detector_size: f64) -> Self {
        Self {
            detector_size,
            theta: 30f64.to_radians(),
            delta_theta: 0.1f64.to_radians(),
            d: 5e-6,
            delta_d: 0.1e-6,
            lambda: 800e-9,
            delta_k_rel: 1e-7,
        }
    }

    /// True when everything except the detector size matches [`Self::reference`].
    pub fn is_reference(&self) -> bool {
        let r = Self::reference(self.detector_size);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
        close(self.theta, r.theta)
            && close(self.delta_theta, r.delta_theta)
            && close(self.d, r.d)
            && close(self.delta_d, r.delta_d)
            && close(self.lambda, r.lambda)
            && close(self.delta_k_rel, r.delta_k_rel)
    }

    /// Wavenumber k = 2π/λ in rad/m.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.lambda
    }

    pub fn chain(&self, n_atoms: usize) -> Result<AtomChain> {
        AtomChain::new(n_atoms, self.d / self.lambda)
    }
}

/// Smallest detector distance L = safety·s·N·d/λ for which a detector of size s
/// resolves the N-fold fringe.
pub fn min_farfield_distance(
    params: &FeasibilityParams,
    n_atoms: usize,
    safety_factor: f64,
) -> Result<f64> {
    params.validate()?;
    if n_atoms == 0 {
        return Err(Error::domain("chain needs at least one atom"));
    }
    if !(safety_factor.is_finite() && safety_factor >= 1.0) {
        return Err(Error::domain(format!(
            "safety factor must be ≥ 1, got {safety_factor}"
        )));
    }
    Ok(safety_factor * params.detector_size * n_atoms as f64 * params.d / params.lambda)
}
