//! Detection probabilities for the three scatter volumes and the parameter
//! sweeps built on them.
//!
//! Sweeps evaluate each parameter value independently and gather results by
//! index, so the output does not depend on the number of workers.

mod extrema;
mod parabolic;
mod side;
mod sphere;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::quadrature::{integrate_on, riemann_oracle, Domain, IntegralResult, Integrand, OracleSpacing, SamplingPlan};

pub use extrema::{local_maxima, local_minima, quadratic_vertex, refine_extremum, Extremum, ExtremumKind};
pub use parabolic::{
    compare_parabolic, encircled_fraction, focal_plane_scan, parabolic_thickness_scan, probability_parabolic,
    probability_parabolic_oracle, z0_phase_rate,
};
pub use side::{compare_side, probability_side, probability_side_oracle, side_position_scan, side_thickness_scan};
pub use sphere::{
    axis_directions, compare_sphere, cube_symmetry_axes, direction_set, fibonacci_directions, probability_sphere,
    probability_sphere_oracle, sphere_isotropy_scan,
};

/// Upper bound on any normalized probability, allowing for roundoff.
pub const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityResult {
    pub probability: f64,
    pub detector: Point3,
    pub node_count: usize,
    pub normalization_a: f64,
}

impl ProbabilityResult {
    pub(crate) fn from_integral(r: IntegralResult, detector: Point3) -> Self {
        let probability = r.probability();
        debug_assert!(probability <= 1.0 + PROBABILITY_SLACK, "P = {probability}");
        Self { probability, detector, node_count: r.node_count, normalization_a: r.normalization_a }
    }
}

/// Quadratic-rule and midpoint-oracle probabilities for the same detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub quadrature: ProbabilityResult,
    pub oracle: ProbabilityResult,
    pub spacing: OracleSpacing,
}

impl OracleComparison {
    pub fn difference(&self) -> f64 {
        (self.quadrature.probability - self.oracle.probability).abs()
    }
}

/// Oracle cells are `lateral_factor` / `depth_factor` times finer than the
/// quadratic rule's nodes for this integrand.
pub(crate) fn compare_on<I: Integrand>(
    domain: &Domain,
    f: &I,
    detector: Point3,
    plan: &SamplingPlan,
    lateral_factor: f64,
    depth_factor: f64,
) -> Result<OracleComparison> {
    let nodes = domain.resolve(f, plan)?;
    let quadrature = ProbabilityResult::from_integral(integrate_on(domain, f, &nodes)?, detector);
    let spacing = OracleSpacing::finer_than(domain, &nodes, lateral_factor, depth_factor);
    let oracle = ProbabilityResult::from_integral(riemann_oracle(f, domain, spacing)?, detector);
    Ok(OracleComparison { quadrature, oracle, spacing })
}

/// Inclusive arithmetic grid `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ScanGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidGeometry("scan grid bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGeometry(format!("scan step must be positive, got {step}")));
        }
        if start >= stop {
            return Err(Error::InvalidGeometry(format!("scan needs start < stop, got {start} >= {stop}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        // tolerate stop landing a hair off the grid
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub parameter: f64,
    pub probability: f64,
    pub detector: Point3,
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub scenario: String,
    pub parameter: String,
    pub units: String,
    pub rows: Vec<ScanRow>,
    pub plan: SamplingPlan,
    pub duration_s: f64,
}

impl ScanResult {
    pub fn parameters(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.parameter).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.probability).collect()
    }

    /// Nodes used by the most expensive row.
    pub fn max_node_count(&self) -> usize {
        self.rows.iter().map(|r| r.node_count).max().unwrap_or(0)
    }

    pub fn total_node_count(&self) -> usize {
        self.rows.iter().map(|r| r.node_count).sum()
    }

    /// `(max - min) / mean` of the probabilities.
    pub fn relative_spread(&self) -> f64 {
        let p = self.probabilities();
        if p.is_empty() {
            return 0.0;
        }
        let max = p.iter().cloned().fold(f64::MIN, f64::max);
        let min = p.iter().cloned().fold(f64::MAX, f64::min);
        let mean = p.iter().sum::<f64>() / p.len() as f64;
        (max - min) / mean
    }

    /// Checks the ordering and probability-bound invariants.
    pub fn validate(&self) -> Result<()> {
        if self.rows.windows(2).any(|w| !(w[0].parameter < w[1].parameter)) {
            return Err(Error::InvalidGeometry("scan parameters must be strictly increasing".into()));
        }
        if let Some(r) = self.rows.iter().find(|r| !(0.0..=1.0 + PROBABILITY_SLACK).contains(&r.probability)) {
            return Err(Error::InvalidGeometry(format!("probability {} out of range at {}", r.probability, r.parameter)));
        }
        Ok(())
    }
}

/// Runs `op` on a pool of `workers` threads, or on the global pool for `None`.
pub fn with_workers<R, F>(workers: Option<usize>, op: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match workers {
        None => Ok(op()),
        Some(0) => Err(Error::InvalidGeometry("worker count must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidGeometry(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(op))
        }
    }
}

/// Evaluates `eval` at every parameter value, in parallel, preserving order.
pub(crate) fn sweep<F>(
    scenario: &str,
    parameter: &str,
    units: &str,
    values: &[f64],
    plan: &SamplingPlan,
    workers: Option<usize>,
    eval: F,
) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<ProbabilityResult> + Sync,
{
    let started = Instant::now();
    let results: Vec<ProbabilityResult> =
        with_workers(workers, || values.par_iter().map(|&v| eval(v)).collect::<Result<Vec<_>>>())??;
    let rows = values
        .iter()
        .zip(results)
        .map(|(&parameter, r)| ScanRow { parameter, probability: r.probability, detector: r.detector, node_count: r.node_count })
        .collect();
    let scan = ScanResult {
        scenario: scenario.to_string(),
        parameter: parameter.to_string(),
        units: units.to_string(),
        rows,
        plan: *plan,
        duration_s: started.elapsed().as_secs_f64(),
    };
    scan.validate()?;
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        let g = ScanGrid::new(0.0, 0.5, 0.0025).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 201);
        assert_eq!(v[0], 0.0);
        assert!((v[200] - 0.5).abs() < 1e-15);
        assert!(ScanGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(ScanGrid::new(1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn zero_workers_rejected() {
        assert!(with_workers(Some(0), || 1).is_err());
        assert_eq!(with_workers(Some(2), || 7).unwrap(), 7);
    }
}
