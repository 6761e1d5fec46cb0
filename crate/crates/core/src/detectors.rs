//! Detector placements that collapse G(N) to a single cosine in δ₁.
//!
//! Detector 2 mirrors detector 1 (δ₂ = −δ₁). The remaining detectors sit at
//! alternating fixed phases ±2π/m, starting with +2π/m at detector 3, where
//! m = N for even N and m = N+1 for odd N. At these placements
//!
//! ```text
//! G(N)(δ₁) = A_N·[1 + cos(m·δ₁)]
//! ```
//!
//! with full contrast. No closed expression for A_N is used; it is obtained
//! by evaluating G(N) at δ₁ = 0.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::correlation::{g_n, DetectorSet};
use crate::error::{Error, Result};
use crate::geometry::AtomChain;
use crate::grid::linspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Fringe multiplier m: N for even N, N+1 for odd N.
pub fn fringe_multiplier(n: usize) -> usize {
    match Parity::of(n) {
        Parity::Even => n,
        Parity::Odd => n + 1,
    }
}

fn fixed_phases(n: usize, multiplier: usize, delta1: f64) -> DetectorSet {
    let step = TAU / multiplier as f64;
    let mut phases = Vec::with_capacity(n);
    phases.push(delta1);
    phases.push(-delta1);
    // detectors 3, 5, ... take +2π/m; 4, 6, ... take −2π/m
    for detector in 3..=n {
        phases.push(if detector % 2 == 1 { step } else { -step });
    }
    DetectorSet::new(phases).expect("finite phases")
}

/// Collapsing placement for even `n` ≥ 2.
pub fn magic_config_even(n: usize, delta1: f64) -> Result<DetectorSet> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "even placement needs an even N ≥ 2, got {n}"
        )));
    }
    check_phase(delta1)?;
    Ok(fixed_phases(n, n, delta1))
}

/// Collapsing placement for odd `n` ≥ 3.
pub fn magic_config_odd(n: usize, delta1: f64) -> Result<DetectorSet> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "odd placement needs an odd N ≥ 3, got {n}"
        )));
    }
    check_phase(delta1)?;
    Ok(fixed_phases(n, n + 1, delta1))
}

fn check_phase(delta1: f64) -> Result<()> {
    if !delta1.is_finite() {
        return Err(Error::domain(format!("δ₁ = {delta1} is not finite")));
    }
    Ok(())
}

fn check_parity(n: usize, parity: Parity) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!(
            "collapsing placements need N ≥ 2, got {n}"
        )));
    }
    if Parity::of(n) != parity {
        return Err(Error::domain(format!("N = {n} does not have parity {parity:?}")));
    }
    Ok(())
}

/// A_N = G(N)(magic placement, δ₁ = 0) / 2.
pub fn derive_amplitude(n: usize, parity: Parity) -> Result<f64> {
    check_parity(n, parity)?;
    let chain = AtomChain::unit_spacing(n)?;
    let phases = fixed_phases(n, fringe_multiplier(n), 0.0);
    Ok(g_n(&chain, &phases)?.value() / 2.0)
}

/// The collapsing placement for a given N together with its fringe law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagicConfig {
    pub n: usize,
    pub parity: Parity,
    pub fringe_multiplier: usize,
    pub amplitude: f64,
}

impl MagicConfig {
    pub fn new(n: usize) -> Result<Self> {
        let parity = Parity::of(n);
        let amplitude = derive_amplitude(n, parity)?;
        Ok(Self {
            n,
            parity,
            fringe_multiplier: fringe_multiplier(n),
            amplitude,
        })
    }

    pub fn phases(&self, delta1: f64) -> Result<DetectorSet> {
        match self.parity {
            Parity::Even => magic_config_even(self.n, delta1),
            Parity::Odd => magic_config_odd(self.n, delta1),
        }
    }

    /// A_N·[1 + cos(m·δ₁)].
    pub fn closed_form(&self, delta1: f64) -> f64 {
        closed_form(self, delta1)
    }

    /// Fringe period 2π/m in δ₁.
    pub fn period(&self) -> f64 {
        TAU / self.fringe_multiplier as f64
    }
}

/// A_N·[1 + cos(m·δ₁)] for the given placement.
pub fn closed_form(config: &MagicConfig, delta1: f64) -> f64 {
    config.amplitude * (1.0 + (config.fringe_multiplier as f64 * delta1).cos())
}

/// Largest |G(N) − closed form| over a uniform δ₁ grid on [−π, π].
pub fn verify_collapse(n: usize, parity: Parity, grid_points: usize) -> Result<f64> {
    check_parity(n, parity)?;
    if grid_points < 3 {
        return Err(Error::domain(format!(
            "collapse check needs at least 3 grid points, got {grid_points}"
        )));
    }
    let config = MagicConfig::new(n)?;
    let chain = AtomChain::unit_spacing(n)?;
    let mut worst: f64 = 0.0;
    for d1 in linspace(-PI, PI, grid_points)? {
        let exact = g_n(&chain, &config.phases(d1)?)?.value();
        worst = worst.max((exact - config.closed_form(d1)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{gamma_naive, NAIVE_CAP};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    /// A_N from the factorial-cost permutation sum.
    fn amplitude_by_brute_force(n: usize) -> f64 {
        let chain = AtomChain::unit_spacing(n).unwrap();
        let phases = fixed_phases(n, fringe_multiplier(n), 0.0);
        let gamma = gamma_naive(&chain, &phases).unwrap();
        gamma.norm_sqr() / (n as f64).powi(n as i32) / 2.0
    }

    #[test]
    fn even_examples() {
        assert_eq!(magic_config_even(2, 0.4).unwrap().phases(), &[0.4, -0.4]);
        assert_eq!(
            magic_config_even(4, 0.0).unwrap().phases(),
            &[0.0, 0.0, FRAC_PI_2, -FRAC_PI_2]
        );
        let six = magic_config_even(6, 0.3).unwrap();
        let expected = [0.3, -0.3, FRAC_PI_3, -FRAC_PI_3, FRAC_PI_3, -FRAC_PI_3];
        for (a, b) in six.phases().iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(magic_config_even(3, 0.0).is_err());
        assert!(magic_config_even(0, 0.0).is_err());
    }

    #[test]
    fn odd_examples() {
        assert_eq!(
            magic_config_odd(3, 1.1).unwrap().phases(),
            &[1.1, -1.1, FRAC_PI_2]
        );
        let five = magic_config_odd(5, 0.0).unwrap();
        let expected = [0.0, 0.0, FRAC_PI_3, -FRAC_PI_3, FRAC_PI_3];
        for (a, b) in five.phases().iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        assert_eq!(
            magic_config_odd(3, PI).unwrap().phases(),
            &[PI, -PI, FRAC_PI_2]
        );
        assert!(magic_config_odd(4, 0.0).is_err());
        assert!(magic_config_odd(1, 0.0).is_err());
    }

    #[test]
    fn amplitudes() {
        assert_relative_eq!(derive_amplitude(2, Parity::Even).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(derive_amplitude(4, Parity::Even).unwrap(), 0.125, epsilon = 1e-15);
        assert!(derive_amplitude(4, Parity::Odd).is_err());
        assert!(derive_amplitude(1, Parity::Odd).is_err());
        assert!(matches!(
            derive_amplitude(32, Parity::Even),
            Err(Error::CapExceeded { .. })
        ));
    }

    // Regression fixtures: γ at δ₁ = 0 is an integer g_N for the collapsing
    // placements, so A_N = g_N² / (2·N^N). The integers were obtained from the
    // permutation-sum oracle and are re-checked against it below.
    const GAMMA_AT_ZERO: [(usize, f64); 7] = [
        (2, 2.0),
        (3, 2.0),
        (4, 8.0),
        (5, 12.0),
        (6, 72.0),
        (7, 144.0),
        (8, 1152.0),
    ];

    #[test]
    fn amplitude_fixtures() {
        for (n, gamma0) in GAMMA_AT_ZERO {
            let frozen = gamma0 * gamma0 / (2.0 * (n as f64).powi(n as i32));
            assert!(n <= NAIVE_CAP);
            assert_relative_eq!(amplitude_by_brute_force(n), frozen, max_relative = 1e-12);
            let derived = derive_amplitude(n, Parity::of(n)).unwrap();
            assert_relative_eq!(derived, frozen, max_relative = 1e-12);
        }
        // A₆ = 1/18, A₈ = 81/2048
        assert_relative_eq!(derive_amplitude(6, Parity::Even).unwrap(), 1.0 / 18.0, max_relative = 1e-12);
        assert_relative_eq!(derive_amplitude(8, Parity::Even).unwrap(), 81.0 / 2048.0, max_relative = 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let two = MagicConfig::new(2).unwrap();
        assert_relative_eq!(two.closed_form(0.0), 1.0, epsilon = 1e-15);
        let four = MagicConfig::new(4).unwrap();
        assert!(four.closed_form(FRAC_PI_4).abs() < 1e-15);
        let three = MagicConfig::new(3).unwrap();
        assert_eq!(three.fringe_multiplier, 4);
        assert_relative_eq!(three.closed_form(0.0), 2.0 * three.amplitude);
        assert_relative_eq!(three.amplitude, 2.0 / 27.0, max_relative = 1e-12);
    }

    #[test]
    fn collapse_holds_for_small_n() {
        assert!(verify_collapse(2, Parity::Even, 1001).unwrap() < 1e-12);
        assert!(verify_collapse(4, Parity::Even, 1001).unwrap() < 1e-10);
        assert!(verify_collapse(5, Parity::Odd, 1001).unwrap() < 1e-10);
        assert!(verify_collapse(5, Parity::Even, 1001).is_err());
        assert!(verify_collapse(4, Parity::Even, 2).is_err());
    }

    #[test]
    fn quarter_period_equals_amplitude() {
        for n in 2..=8 {
            let c = MagicConfig::new(n).unwrap();
            let chain = AtomChain::unit_spacing(n).unwrap();
            let quarter = PI / (2.0 * c.fringe_multiplier as f64);
            let v = g_n(&chain, &c.phases(quarter).unwrap()).unwrap().value();
            assert_relative_eq!(v, c.amplitude, max_relative = 1e-10);
            assert!(c.amplitude > 0.0 && c.amplitude <= 1.0);
        }
    }
}
