//! N-th order coincidence correlation of a fully excited emitter chain.
//!
//! With all N atoms initially excited and one photon registered at each of
//! N far-field detectors, the normalized coincidence rate is
//!
//! ```text
//! G(N)(δ) = |γ(δ)|² / N^N,     γ(δ) = perm M,     M[α][i] = exp(−i·j_α·δ_i)
//! ```
//!
//! where j_α is the position of atom α in units of the spacing (rows) and
//! δ_i the phase seen by detector i (columns). γ is evaluated three ways:
//! a direct sum over all N! permutations, Ryser's formula in O(2^N·N), and
//! the equivalent real cosine sum. [`g_n`] is the production entry point and
//! always takes the Ryser route; the other two exist as cross-checks.

pub mod permanent;
mod superposition;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::AtomChain;
use permanent::{for_each_permutation, permanent_naive, permanent_ryser, SquareMatrix};

pub use superposition::{g1_spin_oracle, g1_superposition, SPIN_ORACLE_CAP};

/// Largest N accepted by the factorial-cost routes.
pub const NAIVE_CAP: usize = 9;
/// Largest N accepted by the Ryser route.
pub const RYSER_CAP: usize = 30;

/// Phases δ(r_i) in radians, one per detector, in detector order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DetectorSet(Vec<f64>);

impl DetectorSet {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if let Some(bad) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::domain(format!("detector phase {bad} is not finite")));
        }
        Ok(Self(phases))
    }

    pub fn phases(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for DetectorSet {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DetectorSet> for Vec<f64> {
    fn from(d: DetectorSet) -> Self {
        d.0
    }
}

/// A value of G(N) in the 1/N^N normalization.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CorrelationValue(f64);

impl CorrelationValue {
    pub fn value(self) -> f64 {
        self.0
    }

    /// Largest attainable value, (N!)²/N^N.
    pub fn upper_bound(n: usize) -> f64 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        fact * fact / (n as f64).powi(n as i32)
    }
}

impl From<CorrelationValue> for f64 {
    fn from(v: CorrelationValue) -> f64 {
        v.0
    }
}

fn check_inputs(chain: &AtomChain, dets: &DetectorSet, route: &'static str, cap: usize) -> Result<()> {
    let n = chain.n_atoms();
    if dets.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: dets.len(),
        });
    }
    if n > cap {
        return Err(Error::CapExceeded { route, n, cap });
    }
    Ok(())
}

/// M[α][i] = exp(−i·j_α·δ_i); atoms index rows, detectors index columns.
pub fn phase_matrix(chain: &AtomChain, dets: &DetectorSet) -> SquareMatrix {
    let j = chain.positions();
    let delta = dets.phases();
    SquareMatrix::from_fn(j.len(), |a, i| Complex64::from_polar(1.0, -j[a] * delta[i]))
}

/// γ as the explicit sum over all N! atom-to-detector assignments.
pub fn gamma_naive(chain: &AtomChain, dets: &DetectorSet) -> Result<Complex64> {
    gamma_naive_with_cap(chain, dets, NAIVE_CAP)
}

pub fn gamma_naive_with_cap(chain: &AtomChain, dets: &DetectorSet, cap: usize) -> Result<Complex64> {
    check_inputs(chain, dets, "naive permutation sum", cap)?;
    Ok(permanent_naive(&phase_matrix(chain, dets)))
}

/// γ via Ryser's formula with Gray-code subset enumeration.
pub fn gamma_ryser(chain: &AtomChain, dets: &DetectorSet) -> Result<Complex64> {
    check_inputs(chain, dets, "Ryser permanent", RYSER_CAP)?;
    Ok(permanent_ryser(&phase_matrix(chain, dets)))
}

/// G(N) = |γ|²/N^N.
pub fn g_n(chain: &AtomChain, dets: &DetectorSet) -> Result<CorrelationValue> {
    let gamma = gamma_ryser(chain, dets)?;
    Ok(normalize(chain.n_atoms(), gamma.norm_sqr()))
}

/// G(N) from the real form (1/N^N)·[Σ_π cos(Σ_i j_π(i)·δ_i)]².
pub fn g_n_cosine_sum(chain: &AtomChain, dets: &DetectorSet) -> Result<CorrelationValue> {
    check_inputs(chain, dets, "cosine sum", NAIVE_CAP)?;
    let j = chain.positions();
    let delta = dets.phases();
    let mut sum = 0.0;
    for_each_permutation(j.len(), |perm| {
        let arg: f64 = perm.iter().zip(delta).map(|(&a, d)| j[a] * d).sum();
        sum += arg.cos();
    });
    Ok(normalize(j.len(), sum * sum))
}

fn normalize(n: usize, modulus_sq: f64) -> CorrelationValue {
    CorrelationValue(modulus_sq / (n as f64).powi(n as i32))
}
