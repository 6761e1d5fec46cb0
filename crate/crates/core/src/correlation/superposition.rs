use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::AtomChain;

/// Largest chain handled by the state-vector oracle (2^N amplitudes).
pub const SPIN_ORACLE_CAP: usize = 12;

/// First-order correlation G(1)(δ₁) for atoms each prepared in (|g⟩+|e⟩)/√2:
/// ½·[1 + (1/N)·Σ_{α=1}^{N−1} (N−α)·cos(α·δ₁)].
pub fn g1_superposition(chain: &AtomChain, delta1: f64) -> f64 {
    let n = chain.n_atoms();
    let sum: f64 = (1..n)
        .map(|a| (n - a) as f64 * (a as f64 * delta1).cos())
        .sum();
    0.5 * (1.0 + sum / n as f64)
}

/// ⟨D†D⟩ evaluated on the explicit 2^N-amplitude product state.
///
/// Basis state `b` has atom α excited iff bit α is set. The detector operator
/// D = N^(−1/2)·Σ_α σ⁻_α·exp(−i·j_α·δ₁) is applied amplitude by amplitude and
/// the squared norm of the result is returned.
pub fn g1_spin_oracle(chain: &AtomChain, delta1: f64) -> Result<f64> {
    let n = chain.n_atoms();
    if n > SPIN_ORACLE_CAP {
        return Err(Error::CapExceeded {
            route: "spin-state oracle",
            n,
            cap: SPIN_ORACLE_CAP,
        });
    }
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let psi = vec![Complex64::new(amp, 0.0); dim];

    let norm = (n as f64).sqrt().recip();
    let weights: Vec<Complex64> = chain
        .positions()
        .iter()
        .map(|j| Complex64::from_polar(norm, -j * delta1))
        .collect();

    let mut lowered = vec![Complex64::new(0.0, 0.0); dim];
    for (b, a) in psi.iter().enumerate() {
        for (alpha, w) in weights.iter().enumerate() {
            let bit = 1usize << alpha;
            if b & bit != 0 {
                lowered[b ^ bit] += w * a;
            }
        }
    }
    Ok(lowered.iter().map(|c| c.norm_sqr()).sum())
}
