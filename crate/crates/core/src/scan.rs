//! Sampled G(N) and G(1) curves and maps over detector phases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{g1_superposition, g_n, DetectorSet};
use crate::detectors::fringe_multiplier;
use crate::error::{Error, Result};
use crate::geometry::AtomChain;

/// How one detector phase is set during a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSpec {
    /// Follows the first scan axis, optionally negated.
    Axis1 { negated: bool },
    /// Follows the second scan axis, optionally negated.
    Axis2 { negated: bool },
    /// Held at a fixed phase in radians.
    Fixed(f64),
}

impl PhaseSpec {
    fn resolve(&self, delta1: f64, delta2: f64) -> f64 {
        match *self {
            PhaseSpec::Axis1 { negated } => if negated { -delta1 } else { delta1 },
            PhaseSpec::Axis2 { negated } => if negated { -delta2 } else { delta2 },
            PhaseSpec::Fixed(v) => v,
        }
    }

    fn uses_axis1(&self) -> bool {
        matches!(self, PhaseSpec::Axis1 { .. })
    }

    fn uses_axis2(&self) -> bool {
        matches!(self, PhaseSpec::Axis2 { .. })
    }
}

/// Collapsing placement for `n` detectors written as a scan layout. Detector 2
/// follows −δ₁, or the second axis when `second_axis` is set. A single atom
/// gets a single scanned detector.
pub fn magic_layout(n: usize, second_axis: bool) -> Vec<PhaseSpec> {
    let mut layout = vec![PhaseSpec::Axis1 { negated: false }];
    if n == 1 {
        return layout;
    }
    layout.push(if second_axis {
        PhaseSpec::Axis2 { negated: false }
    } else {
        PhaseSpec::Axis1 { negated: true }
    });
    let step = std::f64::consts::TAU / fringe_multiplier(n) as f64;
    for detector in 3..=n {
        layout.push(PhaseSpec::Fixed(if detector % 2 == 1 { step } else { -step }));
    }
    layout
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Scenario the grid was produced from, as scenario-file text.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ScanMetadata {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }
}

/// Sampled correlation values. For 2-D grids `values` is row-major with
/// `axis1` selecting the row: `values[i * axis2.len() + k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub axis1: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<Vec<f64>>,
    pub values: Vec<f64>,
    pub metadata: ScanMetadata,
}

impl ScanGrid {
    pub fn one_dimensional(axis1: Vec<f64>, values: Vec<f64>, metadata: ScanMetadata) -> Result<Self> {
        if axis1.len() != values.len() {
            return Err(Error::domain(format!(
                "{} grid points but {} values",
                axis1.len(),
                values.len()
            )));
        }
        Ok(Self {
            axis1,
            axis2: None,
            values,
            metadata,
        })
    }

    pub fn is_2d(&self) -> bool {
        self.axis2.is_some()
    }

    /// Value at (i, k); `k` is ignored for 1-D grids.
    pub fn at(&self, i: usize, k: usize) -> f64 {
        match &self.axis2 {
            Some(a2) => self.values[i * a2.len() + k],
            None => self.values[i],
        }
    }
}

fn check_layout(chain: &AtomChain, layout: &[PhaseSpec]) -> Result<()> {
    if layout.len() != chain.n_atoms() {
        return Err(Error::LengthMismatch {
            expected: chain.n_atoms(),
            got: layout.len(),
        });
    }
    if let Some(PhaseSpec::Fixed(v)) = layout
        .iter()
        .find(|p| matches!(p, PhaseSpec::Fixed(v) if !v.is_finite()))
    {
        return Err(Error::domain(format!("fixed phase {v} is not finite")));
    }
    Ok(())
}

fn evaluate(chain: &AtomChain, layout: &[PhaseSpec], d1: f64, d2: f64) -> Result<f64> {
    let phases = layout.iter().map(|p| p.resolve(d1, d2)).collect();
    Ok(g_n(chain, &DetectorSet::new(phases)?)?.value())
}

/// G(N) along the first axis, all other detectors set by `layout`.
pub fn scan1d(chain: &AtomChain, layout: &[PhaseSpec], axis1: &[f64]) -> Result<ScanGrid> {
    check_layout(chain, layout)?;
    if layout.iter().any(PhaseSpec::uses_axis2) {
        return Err(Error::Config(
            "a 1-D scan admits only one free phase (d1)".into(),
        ));
    }
    let values = axis1
        .par_iter()
        .map(|&d1| evaluate(chain, layout, d1, 0.0))
        .collect::<Result<Vec<_>>>()?;
    ScanGrid::one_dimensional(axis1.to_vec(), values, ScanMetadata::new("scan1d"))
}

/// G(N) over the δ₁ × δ₂ plane.
pub fn scan2d(
    chain: &AtomChain,
    layout: &[PhaseSpec],
    axis1: &[f64],
    axis2: &[f64],
) -> Result<ScanGrid> {
    check_layout(chain, layout)?;
    if !layout.iter().any(PhaseSpec::uses_axis1) || !layout.iter().any(PhaseSpec::uses_axis2) {
        return Err(Error::Config(
            "a 2-D scan needs exactly two free phases (d1 and d2)".into(),
        ));
    }
    let cols = axis2.len();
    let values = (0..axis1.len() * cols)
        .into_par_iter()
        .map(|idx| evaluate(chain, layout, axis1[idx / cols], axis2[idx % cols]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanGrid {
        axis1: axis1.to_vec(),
        axis2: Some(axis2.to_vec()),
        values,
        metadata: ScanMetadata::new("scan2d"),
    })
}

/// G(1) of the superposition-prepared chain along δ₁.
pub fn g1scan(chain: &AtomChain, axis1: &[f64]) -> Result<ScanGrid> {
    let values = axis1.iter().map(|&d| g1_superposition(chain, d)).collect();
    ScanGrid::one_dimensional(axis1.to_vec(), values, ScanMetadata::new("g1scan"))
}

/// Indices of local maxima whose height is within `rel_tol` of `height`.
/// End points count when they are not exceeded by their single neighbour.
pub fn principal_maxima(values: &[f64], height: f64, rel_tol: f64) -> Vec<usize> {
    let n = values.len();
    (0..n)
        .filter(|&i| {
            let v = values[i];
            let left = i == 0 || values[i - 1] <= v;
            let right = i + 1 == n || values[i + 1] <= v;
            left && right && (v - height).abs() <= rel_tol * height.abs()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn two_atom_mirrored_scan() {
        let chain = AtomChain::unit_spacing(2).unwrap();
        let axis = linspace(-TAU, TAU, 201).unwrap();
        let grid = scan1d(&chain, &magic_layout(2, false), &axis).unwrap();
        for (x, v) in axis.iter().zip(&grid.values) {
            assert_relative_eq!(*v, 0.5 * (1.0 + (2.0 * x).cos()), epsilon = 1e-12);
        }
    }

    #[test]
    fn two_atom_fixed_partner_has_unit_period() {
        let chain = AtomChain::unit_spacing(2).unwrap();
        let layout = [PhaseSpec::Axis1 { negated: false }, PhaseSpec::Fixed(0.4)];
        let axis = linspace(-TAU, TAU, 201).unwrap();
        let grid = scan1d(&chain, &layout, &axis).unwrap();
        for (x, v) in axis.iter().zip(&grid.values) {
            assert_relative_eq!(*v, 0.5 * (1.0 + (x - 0.4).cos()), epsilon = 1e-12);
        }
    }

    #[test]
    fn single_atom_is_flat() {
        let chain = AtomChain::unit_spacing(1).unwrap();
        let axis = linspace(-PI, PI, 11).unwrap();
        let grid = scan1d(&chain, &magic_layout(1, false), &axis).unwrap();
        assert!(grid.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let g1 = g1scan(&chain, &axis).unwrap();
        assert!(g1.values.iter().all(|&v| v == 0.5));
    }

    #[test]
    fn two_dimensional_maps() {
        let axis = linspace(-PI, PI, 41).unwrap();
        let two = AtomChain::unit_spacing(2).unwrap();
        let map = scan2d(&two, &magic_layout(2, true), &axis, &axis).unwrap();
        for i in 0..axis.len() {
            assert_relative_eq!(map.at(i, i), 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(map.at(20, 20), 1.0, epsilon = 1e-15);

        let four = AtomChain::unit_spacing(4).unwrap();
        let map = scan2d(&four, &magic_layout(4, true), &axis, &axis).unwrap();
        let n = axis.len();
        for (i, d1) in axis.iter().enumerate() {
            assert_relative_eq!(map.at(i, n - 1 - i), (1.0 + (4.0 * d1).cos()) / 8.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn layout_errors() {
        let four = AtomChain::unit_spacing(4).unwrap();
        let axis = linspace(-PI, PI, 5).unwrap();
        assert!(matches!(
            scan1d(&four, &magic_layout(4, true), &axis),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            scan2d(&four, &magic_layout(4, false), &axis, &axis),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            scan1d(&four, &magic_layout(3, false), &axis),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn magic_layout_matches_placements() {
        let layout = magic_layout(4, false);
        let resolved: Vec<f64> = layout.iter().map(|p| p.resolve(0.3, 0.0)).collect();
        assert_eq!(resolved, vec![0.3, -0.3, FRAC_PI_2, -FRAC_PI_2]);
    }

    #[test]
    fn maxima_detection() {
        let v = [1.0, 0.5, 0.2, 0.9, 1.0, 0.9, 0.1, 1.0];
        assert_eq!(principal_maxima(&v, 1.0, 1e-9), vec![0, 4, 7]);
    }
}
