#![allow(dead_code)]

use multiphoton::detectors::fringe_multiplier;
use multiphoton::correlation::permanent::for_each_permutation;
use std::f64::consts::TAU;

/// Prints one verdict line and returns whether it passed.
pub fn verdict(id: &str, pass: bool, detail: impl AsRef<str>) -> bool {
    println!("{id} {}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    pass
}

/// Collapsing placement written out directly from its definition.
pub fn placement(n: usize, delta1: f64) -> Vec<f64> {
    let step = TAU / fringe_multiplier(n) as f64;
    let mut v = vec![delta1, -delta1];
    for detector in 3..=n {
        v.push(if detector % 2 == 1 { step } else { -step });
    }
    v
}

/// Exact mean of G(N) when detector phases i ≥ 2 carry independent N(0, σ²)
/// errors. Expanding |perm M|² as a double sum over assignments p, q, each
/// column i contributes exp(−i·Δj_i·δ_i) with Δj_i = j_p⁻¹(i) − j_q⁻¹(i), and
/// averaging over the Gaussian error multiplies it by exp(−Δj_i²·σ²/2).
pub fn exact_jittered_mean(phases: &[f64], sigma: f64) -> f64 {
    let n = phases.len();
    let j: Vec<f64> = (0..n).map(|a| a as f64 - (n as f64 - 1.0) / 2.0).collect();
    let mut perms = Vec::new();
    for_each_permutation(n, |p| perms.push(p.to_vec()));
    let mut re = 0.0;
    for p in &perms {
        for q in &perms {
            let mut dj = vec![0.0; n];
            for a in 0..n {
                dj[p[a]] += j[a];
                dj[q[a]] -= j[a];
            }
            let phase: f64 = dj.iter().zip(phases).map(|(d, x)| d * x).sum();
            let damp: f64 = dj[1..].iter().map(|d| d * d).sum::<f64>() * sigma * sigma / 2.0;
            re += (-damp).exp() * phase.cos();
        }
    }
    re / (n as f64).powi(n as i32)
}

/// Relative energy outside the DC and first-harmonic bins of `samples`,
/// which must cover exactly one period uniformly (end point excluded).
pub fn harmonic_leakage(samples: &[f64]) -> f64 {
    let k = samples.len();
    let mut total = 0.0;
    let mut leaked = 0.0;
    for f in 0..k {
        let (mut re, mut im) = (0.0, 0.0);
        for (t, &x) in samples.iter().enumerate() {
            let arg = -TAU * (f * t) as f64 / k as f64;
            re += x * arg.cos();
            im += x * arg.sin();
        }
        let e = re * re + im * im;
        total += e;
        if !(f == 0 || f == 1 || f == k - 1) {
            leaked += e;
        }
    }
    leaked / total
}
