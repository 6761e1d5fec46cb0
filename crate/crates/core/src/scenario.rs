//! Scenario files.
//!
//! A scenario is a sectioned key-value file (TOML syntax). Unknown sections
//! and keys are rejected. Angles may be written as plain numbers in radians
//! or as strings such as `"pi/2"`, `"-3pi/4"`, `"2*pi"` or `"30deg"`.
//!
//! ```toml
//! [chain]
//! n_atoms = 4
//! spacing_over_lambda = 1.0
//!
//! [detectors]
//! layout = "explicit"            # or "magic"
//! phases = ["d1", "-d1", "pi/2", "-pi/2"]
//!
//! [grid]
//! delta1_range = ["-2pi", "2pi"]
//! points = 1001
//!
//! [noise]
//! sigmas = [0.0, 0.25, 0.5, 1.0]
//! samples = 10000
//! seed = 7
//!
//! [output]
//! format = "csv"
//! ```
//!
//! Detector phases in an explicit layout are `d1`, `-d1`, `d2`, `-d2` (the
//! scan axes) or fixed angles.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::detectors::fringe_multiplier;
use crate::error::{Error, Result};
use crate::geometry::{AtomChain, FeasibilityParams};
use crate::grid::Interval;
use crate::rng::DEFAULT_SEED;
use crate::scan::{magic_layout, PhaseSpec};

/// Parses an angle in radians: a number, a multiple or fraction of π
/// (`pi`, `-pi/2`, `3pi/4`, `0.5*pi`), or degrees (`30deg`).
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read '{text}' as an angle");
    if let Some(deg) = s.strip_suffix("deg") {
        return deg.parse::<f64>().map(f64::to_radians).map_err(|_| bad());
    }
    let lower = s.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return lower.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&lower[..pos], &lower[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    Ok(coeff * PI / denom)
}

/// Angle in radians, read from a number or an angle expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

struct AngleVisitor;

impl<'de> Visitor<'de> for AngleVisitor {
    type Value = Angle;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an angle in radians or a string such as \"pi/2\" or \"30deg\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Angle, E> {
        Ok(Angle(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Angle, E> {
        Ok(Angle(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Angle, E> {
        Ok(Angle(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Angle, E> {
        parse_angle(v).map(Angle).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(AngleVisitor)
    }
}

/// One detector entry of an explicit layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEntry(pub PhaseSpec);

impl FromStr for PhaseEntry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        let (negated, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
        };
        match body {
            "d1" => Ok(PhaseEntry(PhaseSpec::Axis1 { negated })),
            "d2" => Ok(PhaseEntry(PhaseSpec::Axis2 { negated })),
            b if b.starts_with('d') && b[1..].chars().all(|c| c.is_ascii_digit()) && b.len() > 1 => {
                Err(format!(
                    "'{t}': only two free phases (d1, d2) are supported"
                ))
            }
            _ => parse_angle(t).map(|v| PhaseEntry(PhaseSpec::Fixed(v))),
        }
    }
}

impl Serialize for PhaseEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            PhaseSpec::Axis1 { negated } => s.serialize_str(if negated { "-d1" } else { "d1" }),
            PhaseSpec::Axis2 { negated } => s.serialize_str(if negated { "-d2" } else { "d2" }),
            PhaseSpec::Fixed(v) => s.serialize_f64(v),
        }
    }
}

struct PhaseVisitor;

impl<'de> Visitor<'de> for PhaseVisitor {
    type Value = PhaseEntry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a phase: d1, -d1, d2, -d2, or a fixed angle")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<PhaseEntry, E> {
        Ok(PhaseEntry(PhaseSpec::Fixed(v)))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<PhaseEntry, E> {
        Ok(PhaseEntry(PhaseSpec::Fixed(v as f64)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<PhaseEntry, E> {
        Ok(PhaseEntry(PhaseSpec::Fixed(v as f64)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<PhaseEntry, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for PhaseEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(PhaseVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub n_atoms: usize,
    #[serde(default = "unit")]
    pub spacing_over_lambda: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    #[default]
    Magic,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSection {
    #[serde(default)]
    pub layout: Layout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<PhaseEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_range")]
    pub delta1_range: [Angle; 2],
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2_range: Option<[Angle; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points2: Option<usize>,
}

fn default_range() -> [Angle; 2] {
    [Angle(-PI), Angle(PI)]
}

fn default_points() -> usize {
    1001
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            delta1_range: default_range(),
            points: default_points(),
            delta2_range: None,
            points2: None,
        }
    }
}

impl GridSection {
    pub fn axis1(&self) -> Result<Vec<f64>> {
        Interval::new(self.delta1_range[0].0, self.delta1_range[1].0)?.linspace(self.points)
    }

    /// Second axis; defaults to the first axis' range and density.
    pub fn axis2(&self) -> Result<Vec<f64>> {
        let r = self.delta2_range.unwrap_or(self.delta1_range);
        Interval::new(r[0].0, r[1].0)?.linspace(self.points2.unwrap_or(self.points))
    }

    pub fn interval1(&self) -> Result<Interval> {
        Interval::new(self.delta1_range[0].0, self.delta1_range[1].0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub sigmas: Vec<Angle>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_samples() -> usize {
    10_000
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            sigmas: vec![Angle(0.0), Angle(0.25), Angle(0.5), Angle(1.0)],
            samples: default_samples(),
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSection {
    #[serde(default = "default_events")]
    pub events: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Defaults to the grid's δ₁ range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[Angle; 2]>,
}

fn default_events() -> usize {
    100_000
}

fn default_bins() -> usize {
    64
}

impl Default for SamplerSection {
    fn default() -> Self {
        Self {
            events: default_events(),
            bins: default_bins(),
            seed: DEFAULT_SEED,
            range: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibilitySection {
    /// Metres.
    pub detector_size: f64,
    pub theta: Angle,
    pub delta_theta: Angle,
    /// Metres.
    pub d: f64,
    /// Metres.
    pub delta_d: f64,
    /// Metres.
    pub lambda: f64,
    pub delta_k_rel: f64,
    #[serde(default = "unit")]
    pub safety_factor: f64,
}

impl FeasibilitySection {
    pub fn params(&self) -> FeasibilityParams {
        FeasibilityParams {
            detector_size: self.detector_size,
            theta: self.theta.0,
            delta_theta: self.delta_theta.0,
            d: self.d,
            delta_d: self.delta_d,
            lambda: self.lambda,
            delta_k_rel: self.delta_k_rel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub chain: ChainSection,
    #[serde(default)]
    pub detectors: DetectorSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<FeasibilitySection>,
    #[serde(default)]
    pub output: OutputSection,
}

impl Scenario {
    /// Minimal scenario: `n_atoms` atoms at d = λ, collapsing layout, default grid.
    pub fn with_atoms(n_atoms: usize) -> Self {
        Self {
            chain: ChainSection {
                n_atoms,
                spacing_over_lambda: 1.0,
            },
            detectors: DetectorSection::default(),
            grid: GridSection::default(),
            noise: None,
            sampler: None,
            feasibility: None,
            output: OutputSection::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let scenario: Scenario =
            toml::from_str(text).map_err(|e| Error::Config(format!("scenario: {}", one_line(&e.to_string()))))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize scenario: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Err(Error::Config(msg));
        if self.chain.n_atoms == 0 {
            return cfg("chain.n_atoms must be at least 1".into());
        }
        if !(self.chain.spacing_over_lambda.is_finite() && self.chain.spacing_over_lambda > 0.0) {
            return cfg(format!(
                "chain.spacing_over_lambda must be positive, got {}",
                self.chain.spacing_over_lambda
            ));
        }
        match (&self.detectors.layout, &self.detectors.phases) {
            (Layout::Explicit, None) => {
                return cfg("detectors.phases is required for layout = \"explicit\"".into())
            }
            (Layout::Explicit, Some(p)) if p.len() != self.chain.n_atoms => {
                return cfg(format!(
                    "detectors.phases has {} entries but chain.n_atoms = {}",
                    p.len(),
                    self.chain.n_atoms
                ))
            }
            (Layout::Explicit, Some(p)) => {
                if let Some(PhaseEntry(PhaseSpec::Fixed(v))) =
                    p.iter().find(|e| matches!(e.0, PhaseSpec::Fixed(v) if !v.is_finite()))
                {
                    return cfg(format!("detectors.phases contains non-finite phase {v}"));
                }
            }
            (Layout::Magic, Some(_)) => {
                return cfg("detectors.phases is only allowed with layout = \"explicit\"".into())
            }
            (Layout::Magic, None) => {}
        }
        if self.grid.points < 2 {
            return cfg(format!("grid.points must be at least 2, got {}", self.grid.points));
        }
        if matches!(self.grid.points2, Some(p) if p < 2) {
            return cfg("grid.points2 must be at least 2".into());
        }
        let check_range = |name: &str, r: &[Angle; 2]| {
            Interval::new(r[0].0, r[1].0)
                .map(|_| ())
                .map_err(|_| Error::Config(format!("{name} must be an increasing finite pair")))
        };
        check_range("grid.delta1_range", &self.grid.delta1_range)?;
        if let Some(r) = &self.grid.delta2_range {
            check_range("grid.delta2_range", r)?;
        }
        if let Some(noise) = &self.noise {
            if noise.samples == 0 {
                return cfg("noise.samples must be at least 1".into());
            }
            if noise.sigmas.is_empty() {
                return cfg("noise.sigmas must list at least one value".into());
            }
            if let Some(s) = noise.sigmas.iter().find(|s| !(s.0.is_finite() && s.0 >= 0.0)) {
                return cfg(format!("noise.sigmas must be non-negative, got {}", s.0));
            }
        }
        if let Some(sampler) = &self.sampler {
            if sampler.events == 0 {
                return cfg("sampler.events must be at least 1".into());
            }
            if sampler.bins == 0 {
                return cfg("sampler.bins must be at least 1".into());
            }
            if let Some(r) = &sampler.range {
                check_range("sampler.range", r)?;
            }
        }
        if let Some(f) = &self.feasibility {
            f.params()
                .validate()
                .map_err(|e| Error::Config(format!("feasibility: {e}")))?;
            if f.safety_factor.is_nan() || f.safety_factor < 1.0 {
                return cfg("feasibility.safety_factor must be ≥ 1".into());
            }
        }
        Ok(())
    }

    pub fn chain(&self) -> Result<AtomChain> {
        AtomChain::new(self.chain.n_atoms, self.chain.spacing_over_lambda)
    }

    /// Detector layout for a scan. With the collapsing layout, detector 2
    /// follows −δ₁ in 1-D scans and becomes the second axis in 2-D scans.
    pub fn layout(&self, second_axis: bool) -> Vec<PhaseSpec> {
        match &self.detectors.phases {
            Some(p) if self.detectors.layout == Layout::Explicit => p.iter().map(|e| e.0).collect(),
            _ => magic_layout(self.chain.n_atoms, second_axis),
        }
    }

    pub fn fringe_multiplier(&self) -> usize {
        fringe_multiplier(self.chain.n_atoms)
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
