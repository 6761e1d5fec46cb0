use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use multiphoton::detectors::MagicConfig;
use multiphoton::geometry::angle_from_phase;
use multiphoton::grid::Interval;
use multiphoton::noise::{feasibility_report, noise_sweep};
use multiphoton::output::{render_json, render_scan, render_table};
use multiphoton::sampler::{estimate_visibility_from_events, sample_events};
use multiphoton::scan::{g1scan, scan1d, scan2d};
use multiphoton::scenario::{
    parse_angle, Angle, FeasibilitySection, Format, NoiseSection, SamplerSection, Scenario,
};
use multiphoton::{Error, FeasibilityParams, Result};

/// Environment variable capping the number of worker threads.
const THREADS_ENV: &str = "MULTIPHOTON_THREADS";

/// N-photon coincidence correlations of an emitter chain.
///
/// Detector phases are δ = kd·sin θ, with θ measured from the normal to the
/// chain axis (not from the axis itself). Angles accept radians or
/// expressions such as pi/2, -3pi/4 and 30deg.
#[derive(Parser, Debug)]
#[command(name = "multiphoton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// G(N) versus δ₁ with the other detectors set by the scenario layout.
    Scan1d(Common),
    /// G(N) over the δ₁ × δ₂ plane.
    Scan2d(Common),
    /// First-order correlation of superposition-prepared atoms versus δ₁.
    G1scan(Common),
    /// Fitted fringe visibility under Gaussian detector jitter for a list of σ.
    NoiseSweep(Common),
    /// Simulated coincidence events drawn from the collapsed fringe.
    Sample(SampleArgs),
    /// Far-field distance, phase resolution and phase-noise budget.
    Feasibility(FeasibilityArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Scenario file (sectioned key-value, TOML syntax).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Number of atoms (and detectors).
    #[arg(long)]
    n: Option<usize>,
    /// Interatomic spacing in wavelengths, d/λ.
    #[arg(long)]
    spacing: Option<f64>,
    /// δ₁ scan range as LOW,HIGH.
    #[arg(long, value_name = "LOW,HIGH", allow_hyphen_values = true)]
    delta1_range: Option<String>,
    /// Grid points per axis (endpoints included).
    #[arg(long)]
    points: Option<usize>,
    /// Jitter standard deviations, comma separated.
    #[arg(long, value_name = "S1,S2,...")]
    sigma: Option<String>,
    /// Jitter samples per grid point.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    events: Option<usize>,
    /// Histogram bins used for the visibility estimate.
    #[arg(long)]
    bins: Option<usize>,
    /// Add the detector angle θ of each event (radians from the chain normal).
    #[arg(long)]
    angles: bool,
}

#[derive(Args, Debug)]
struct FeasibilityArgs {
    #[command(flatten)]
    common: Common,
    /// Detector aperture s in metres. Without a [feasibility] section the
    /// remaining parameters default to d = 5 µm, Δd = 0.1 µm, θ = 30°,
    /// Δθ = 0.1°, λ = 800 nm, Δk/k = 1e-7.
    #[arg(long)]
    detector_size: Option<f64>,
    #[arg(long)]
    safety_factor: Option<f64>,
}

fn parse_range(text: &str) -> Result<[Angle; 2]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!("range '{text}' must be LOW,HIGH")));
    }
    let lo = parse_angle(parts[0]).map_err(Error::Config)?;
    let hi = parse_angle(parts[1]).map_err(Error::Config)?;
    Ok([Angle(lo), Angle(hi)])
}

fn parse_sigmas(text: &str) -> Result<Vec<Angle>> {
    text.split(',')
        .map(|s| parse_angle(s).map(Angle).map_err(Error::Config))
        .collect()
}

fn load(common: &Common) -> Result<Scenario> {
    let mut s = match (&common.scenario, common.n) {
        (Some(path), _) => Scenario::load(path)?,
        (None, Some(n)) => Scenario::with_atoms(n),
        (None, None) => return Err(Error::Config("give --scenario or --n".into())),
    };
    if let Some(n) = common.n {
        s.chain.n_atoms = n;
    }
    if let Some(d) = common.spacing {
        s.chain.spacing_over_lambda = d;
    }
    if let Some(r) = &common.delta1_range {
        s.grid.delta1_range = parse_range(r)?;
    }
    if let Some(p) = common.points {
        s.grid.points = p;
    }
    if let Some(f) = common.format {
        s.output.format = f;
    }
    if let Some(out) = &common.out {
        s.output.path = Some(out.clone());
    }
    if common.sigma.is_some() || common.samples.is_some() || common.seed.is_some() {
        let noise = s.noise.get_or_insert_with(NoiseSection::default);
        if let Some(list) = &common.sigma {
            noise.sigmas = parse_sigmas(list)?;
        }
        if let Some(n) = common.samples {
            noise.samples = n;
        }
        if let Some(seed) = common.seed {
            noise.seed = seed;
            if let Some(sampler) = s.sampler.as_mut() {
                sampler.seed = seed;
            }
        }
    }
    s.validate()?;
    Ok(s)
}

fn emit(scenario: &Scenario, text: &str) -> Result<()> {
    match &scenario.output.path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SweepOutput {
    n_atoms: usize,
    samples: usize,
    seed: u64,
    points: usize,
    rows: Vec<multiphoton::noise::SweepRow>,
}

#[derive(Serialize)]
struct SampleOutput {
    range: Interval,
    seed: u64,
    fringe_multiplier: usize,
    estimate: Option<multiphoton::VisibilityEstimate>,
    delta1: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<Vec<f64>>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Scan1d(c) => {
            let s = load(&c)?;
            let mut grid = scan1d(&s.chain()?, &s.layout(false), &s.grid.axis1()?)?;
            grid.metadata.scenario = Some(s.to_toml()?);
            emit(&s, &render_scan(&grid, s.output.format)?)
        }
        Command::Scan2d(c) => {
            let s = load(&c)?;
            let mut grid = scan2d(&s.chain()?, &s.layout(true), &s.grid.axis1()?, &s.grid.axis2()?)?;
            grid.metadata.scenario = Some(s.to_toml()?);
            emit(&s, &render_scan(&grid, s.output.format)?)
        }
        Command::G1scan(c) => {
            let s = load(&c)?;
            let mut grid = g1scan(&s.chain()?, &s.grid.axis1()?)?;
            grid.metadata.scenario = Some(s.to_toml()?);
            emit(&s, &render_scan(&grid, s.output.format)?)
        }
        Command::NoiseSweep(c) => {
            let mut s = load(&c)?;
            let noise = s.noise.get_or_insert_with(NoiseSection::default).clone();
            let sigmas: Vec<f64> = noise.sigmas.iter().map(|a| a.0).collect();
            let axis = s.grid.axis1()?;
            let rows = noise_sweep(&s.chain()?, &sigmas, noise.samples, noise.seed, &axis)?;
            let table = rows
                .iter()
                .map(|r| vec![r.sigma, r.visibility, r.standard_error, r.analytic])
                .collect();
            let out = SweepOutput {
                n_atoms: s.chain.n_atoms,
                samples: noise.samples,
                seed: noise.seed,
                points: axis.len(),
                rows,
            };
            let text = render_table(
                &["sigma", "visibility", "standard_error", "analytic"],
                table,
                &out,
                s.output.format,
            )?;
            emit(&s, &text)
        }
        Command::Sample(a) => {
            let mut s = load(&a.common)?;
            let seed_override = a.common.seed;
            let sampler = s.sampler.get_or_insert_with(SamplerSection::default);
            if let Some(e) = a.events {
                sampler.events = e;
            }
            if let Some(b) = a.bins {
                sampler.bins = b;
            }
            if let Some(seed) = seed_override {
                sampler.seed = seed;
            }
            let sampler = sampler.clone();
            s.validate()?;
            let chain = s.chain()?;
            let range = match sampler.range {
                Some(r) => Interval::new(r[0].0, r[1].0)?,
                None => s.grid.interval1()?,
            };
            let batch = sample_events(&chain, sampler.events, range, sampler.seed)?;
            let m = MagicConfig::new(chain.n_atoms())?.fringe_multiplier;
            let estimate = estimate_visibility_from_events(&batch, m, sampler.bins);
            match &estimate {
                Ok(e) => eprintln!(
                    "{} events, visibility {:.4} ± {:.4}",
                    batch.delta1_values.len(),
                    e.visibility,
                    e.standard_error
                ),
                Err(e) => eprintln!("{} events, no visibility estimate: {e}", batch.delta1_values.len()),
            }
            let theta = if a.angles {
                Some(
                    batch
                        .delta1_values
                        .iter()
                        .map(|&d| angle_from_phase(&chain, d))
                        .collect::<Result<Vec<_>>>()?,
                )
            } else {
                None
            };
            let text = match s.output.format {
                Format::Csv => {
                    let header: &[&str] = if theta.is_some() { &["delta1", "theta"] } else { &["delta1"] };
                    let rows = batch
                        .delta1_values
                        .iter()
                        .enumerate()
                        .map(|(i, &d)| match &theta {
                            Some(t) => vec![d, t[i]],
                            None => vec![d],
                        })
                        .collect();
                    render_table(header, rows, &(), Format::Csv)?
                }
                Format::Json => render_json(&SampleOutput {
                    range: batch.range,
                    seed: batch.seed,
                    fringe_multiplier: m,
                    estimate: estimate.ok(),
                    delta1: batch.delta1_values,
                    theta,
                })?,
            };
            emit(&s, &text)
        }
        Command::Feasibility(a) => {
            let mut s = load(&a.common)?;
            let mut section = match (s.feasibility.take(), a.detector_size) {
                (Some(mut f), size) => {
                    if let Some(size) = size {
                        f.detector_size = size;
                    }
                    f
                }
                (None, Some(size)) => reference_setup(size),
                (None, None) => {
                    return Err(Error::Config(
                        "feasibility needs a [feasibility] section or --detector-size".into(),
                    ))
                }
            };
            if let Some(k) = a.safety_factor {
                section.safety_factor = k;
            }
            s.feasibility = Some(section.clone());
            s.validate()?;
            let report = feasibility_report(&section.params(), s.chain.n_atoms, section.safety_factor)?;
            let rows = vec![
                vec![report.n_atoms as f64],
                vec![report.min_distance],
                vec![report.phase_resolution],
                vec![report.sigma],
                vec![report.sigma_linear],
                vec![report.predicted_contrast],
            ];
            let text = match s.output.format {
                Format::Json => render_json(&report)?,
                Format::Csv => {
                    let names = [
                        "n_atoms",
                        "min_distance_m",
                        "phase_resolution_rad",
                        "sigma_rad",
                        "sigma_linear_rad",
                        "predicted_contrast",
                    ];
                    let mut w = String::from("quantity,value\n");
                    for (name, row) in names.iter().zip(rows) {
                        w.push_str(&format!("{name},{}\n", row[0]));
                    }
                    w
                }
            };
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            emit(&s, &text)
        }
    }
}

fn reference_setup(detector_size: f64) -> FeasibilitySection {
    let p = FeasibilityParams::reference(detector_size);
    FeasibilitySection {
        detector_size,
        theta: Angle(p.theta),
        delta_theta: Angle(p.delta_theta),
        d: p.d,
        delta_d: p.delta_d,
        lambda: p.lambda,
        delta_k_rel: p.delta_k_rel,
        safety_factor: 1.0,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.category(), e);
            ExitCode::from(e.exit_code())
        }
    }
}
