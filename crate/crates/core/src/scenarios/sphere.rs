//! Ball of scatterers around a central source, with the detector on a shell of radius `r`.

use std::f64::consts::PI;

use super::{compare_on, sweep, OracleComparison, ProbabilityResult, ScanResult};
use crate::error::{Error, Result};
use crate::geometry::{Point3, SphereSpec};
use crate::quadrature::{integrate, riemann_oracle, Domain, OracleSpacing, PhaseIntegrand, SamplingPlan};

fn phase_field(spec: SphereSpec, detector: Point3) -> PhaseIntegrand<impl Fn(Point3) -> f64 + Sync> {
    PhaseIntegrand(move |p: Point3| spec.phase_at(p, detector))
}

pub fn probability_sphere(spec: &SphereSpec, direction: Point3, plan: &SamplingPlan) -> Result<ProbabilityResult> {
    let detector = spec.detector_point(direction)?;
    let r = integrate(&Domain::ball(spec.sphere_radius())?, &phase_field(*spec, detector), plan)?;
    Ok(ProbabilityResult::from_integral(r, detector))
}

pub fn probability_sphere_oracle(
    spec: &SphereSpec,
    direction: Point3,
    spacing: impl Into<OracleSpacing>,
) -> Result<ProbabilityResult> {
    let detector = spec.detector_point(direction)?;
    let r = riemann_oracle(&phase_field(*spec, detector), &Domain::ball(spec.sphere_radius())?, spacing)?;
    Ok(ProbabilityResult::from_integral(r, detector))
}

pub fn compare_sphere(spec: &SphereSpec, direction: Point3, plan: &SamplingPlan, lateral_factor: f64) -> Result<OracleComparison> {
    let detector = spec.detector_point(direction)?;
    compare_on(&Domain::ball(spec.sphere_radius())?, &phase_field(*spec, detector), detector, plan, lateral_factor, 1.0)
}

/// `±x, ±y, ±z`.
pub fn axis_directions() -> Vec<Point3> {
    let mut out = Vec::with_capacity(6);
    for axis in [Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0), Point3::new(0.0, 0.0, 1.0)] {
        out.push(axis);
        out.push(axis * -1.0);
    }
    out
}

/// The 13 rotation axes of a cube: 3 face normals, 4 body diagonals, 6 edge midpoints.
pub fn cube_symmetry_axes() -> Vec<Point3> {
    let s = 1.0 / 3f64.sqrt();
    let t = 1.0 / 2f64.sqrt();
    vec![
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(s, s, s),
        Point3::new(s, s, -s),
        Point3::new(s, -s, s),
        Point3::new(-s, s, s),
        Point3::new(t, t, 0.0),
        Point3::new(t, -t, 0.0),
        Point3::new(t, 0.0, t),
        Point3::new(t, 0.0, -t),
        Point3::new(0.0, t, t),
        Point3::new(0.0, t, -t),
    ]
}

/// Golden-angle spiral, roughly uniform on the sphere.
pub fn fibonacci_directions(n: usize) -> Vec<Point3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Point3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

/// 6 gives the signed axes, 13 the cube axes, anything else (at least 6) a spiral.
pub fn direction_set(n: usize) -> Result<Vec<Point3>> {
    match n {
        6 => Ok(axis_directions()),
        13 => Ok(cube_symmetry_axes()),
        n if n > 6 => Ok(fibonacci_directions(n)),
        _ => Err(Error::OutOfRange { name: "directions", value: n as f64, lo: 6.0, hi: f64::INFINITY }),
    }
}

/// One row per direction; the row parameter is the direction's index.
pub fn sphere_isotropy_scan(
    spec: &SphereSpec,
    directions: &[Point3],
    plan: &SamplingPlan,
    workers: Option<usize>,
) -> Result<ScanResult> {
    if directions.is_empty() {
        return Err(Error::InvalidGeometry("no detector directions".into()));
    }
    let index: Vec<f64> = (0..directions.len()).map(|i| i as f64).collect();
    sweep("sphere-isotropy", "direction", "index", &index, plan, workers, |i| {
        probability_sphere(spec, directions[i as usize], plan)
    })
}
