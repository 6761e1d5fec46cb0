//! Coincidence correlations of photons spontaneously emitted by a chain of
//! two-level atoms.
//!
//! The crate evaluates the N-th order correlation function G(N) for N atoms
//! and N detectors, builds the detector placements for which G(N) collapses
//! to a single cosine with fringe period 2π/N (2π/(N+1) for odd N), and
//! studies how that fringe degrades under detector phase jitter and finite
//! event counts.

pub mod correlation;
pub mod detectors;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod grid;
pub mod noise;
pub mod output;
pub mod rng;
pub mod sampler;
pub mod scan;
pub mod scenario;

pub use correlation::{
    g1_spin_oracle, g1_superposition, g_n, g_n_cosine_sum, gamma_naive, gamma_ryser,
    CorrelationValue, DetectorSet,
};
pub use detectors::{MagicConfig, Parity};
pub use error::{Error, Result};
pub use fit::VisibilityEstimate;
pub use geometry::{AtomChain, FeasibilityParams};
pub use noise::NoiseSpec;
pub use scan::ScanGrid;
