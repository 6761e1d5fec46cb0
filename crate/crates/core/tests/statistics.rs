mod common;

use std::f64::consts::PI;

use common::{exact_jittered_mean, placement};
use multiphoton::detectors::MagicConfig;
use multiphoton::fit::fit_harmonic;
use multiphoton::grid::Interval;
use multiphoton::noise::{fit_visibility, jittered_scan, noise_sweep};
use multiphoton::rng::DEFAULT_SEED;
use multiphoton::sampler::{estimate_visibility_from_events, sample_events};
use multiphoton::{AtomChain, NoiseSpec};

fn chain(n: usize) -> AtomChain {
    AtomChain::unit_spacing(n).unwrap()
}

// The Monte Carlo average must converge to the closed-form Gaussian average,
// whatever that is for the given N.
#[test]
fn jitter_average_matches_exact_expectation() {
    for (n, sigma) in [(3, 0.5), (4, 0.5), (5, 0.3)] {
        let m = MagicConfig::new(n).unwrap().fringe_multiplier;
        let spec = NoiseSpec::new(sigma, 4000, DEFAULT_SEED).unwrap();
        let grid = jittered_scan(&chain(n), &spec, 101).unwrap();
        let est = fit_visibility(&grid, m).unwrap();
        let exact: Vec<f64> = grid
            .axis1
            .iter()
            .map(|&x| exact_jittered_mean(&placement(n, x), sigma))
            .collect();
        let target = fit_harmonic(&grid.axis1, &exact, m as f64).unwrap().visibility;
        assert!(
            (est.visibility - target).abs() <= 4.0 * est.standard_error,
            "N={n} σ={sigma}: {} ± {} vs exact {target}",
            est.visibility,
            est.standard_error
        );
    }
}

#[test]
fn exact_expectation_reduces_to_noiseless_value() {
    for n in 2..=5 {
        for x in [-1.0, 0.0, 0.3] {
            let d = placement(n, x);
            let config = MagicConfig::new(n).unwrap();
            assert!((exact_jittered_mean(&d, 0.0) - config.closed_form(x)).abs() < 1e-12);
        }
    }
}

#[test]
fn visibility_falls_with_sigma() {
    for n in [2, 3, 4] {
        let axis = multiphoton::grid::linspace(-PI, PI, 101).unwrap();
        let rows = noise_sweep(&chain(n), &[0.0, 0.2, 0.4, 0.8], 2000, 17, &axis).unwrap();
        assert!((rows[0].visibility - 1.0).abs() < 1e-9);
        for w in rows.windows(2) {
            assert!(w[1].visibility < w[0].visibility, "N={n}: {rows:?}");
        }
    }
}

fn collapsed_cdf(m: f64, range: Interval) -> impl Fn(f64) -> f64 {
    let f = move |x: f64| x + (m * x).sin() / m;
    let (lo, total) = (f(range.low), f(range.high) - f(range.low));
    move |x| (f(x) - lo) / total
}

#[test]
fn sampler_passes_kolmogorov_smirnov() {
    for n in 2..=5 {
        let m = MagicConfig::new(n).unwrap().fringe_multiplier as f64;
        let range = Interval::new(-PI / m, PI / m).unwrap();
        let batch = sample_events(&chain(n), 20_000, range, DEFAULT_SEED + n as u64).unwrap();
        let mut xs = batch.delta1_values.clone();
        xs.sort_by(f64::total_cmp);
        let cdf = collapsed_cdf(m, range);
        let count = xs.len() as f64;
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / count).abs().max(((i + 1) as f64 / count - f).abs())
            })
            .fold(0.0, f64::max);
        // Asymptotic critical value at α = 0.001.
        assert!(d < 1.9495 / count.sqrt(), "N={n}: D = {d}");
    }
}

#[test]
fn event_visibility_error_shrinks_with_events() {
    let c = chain(4);
    let range = Interval::new(-PI / 4.0, PI / 4.0).unwrap();
    let se = |events: usize| {
        let batch = sample_events(&c, events, range, 99).unwrap();
        estimate_visibility_from_events(&batch, 4, 32).unwrap().standard_error
    };
    let ratio = se(20_000) / se(80_000);
    assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
}
