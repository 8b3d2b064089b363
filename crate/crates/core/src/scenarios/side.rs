//! Sheet lit edge-on from `x = -D/2`; the detector sits at height `z_d` above it.

use super::{compare_on, sweep, OracleComparison, ProbabilityResult, ScanGrid, ScanResult};
use crate::error::{Error, Result};
use crate::geometry::{Point3, SideSheetSpec};
use crate::quadrature::{integrate, riemann_oracle, Domain, Interval, OracleSpacing, PhaseIntegrand, SamplingPlan};

fn domain(spec: &SideSheetSpec) -> Result<Domain> {
    let half = 0.5 * spec.width();
    let z = if spec.thickness() == 0.0 { Interval::point(0.0) } else { Interval::centered(0.5 * spec.thickness())? };
    Ok(Domain::cuboid(Interval::new(-half, half)?, Interval::point(0.0), z))
}

fn checked_detector(detector_x: f64, detector_z: f64) -> Result<Point3> {
    let d = Point3::new(detector_x, 0.0, detector_z).check_finite("detector")?;
    if detector_z <= 0.0 {
        return Err(Error::OutOfRange { name: "detector_z", value: detector_z, lo: 0.0, hi: f64::INFINITY });
    }
    Ok(d)
}

fn phase_field(spec: SideSheetSpec, detector: Point3) -> PhaseIntegrand<impl Fn(Point3) -> f64 + Sync> {
    PhaseIntegrand(move |p: Point3| spec.phase_at(p.x, p.z, detector.x, detector.z))
}

pub fn probability_side(spec: &SideSheetSpec, detector_x: f64, detector_z: f64, plan: &SamplingPlan) -> Result<ProbabilityResult> {
    let detector = checked_detector(detector_x, detector_z)?;
    let r = integrate(&domain(spec)?, &phase_field(*spec, detector), plan)?;
    Ok(ProbabilityResult::from_integral(r, detector))
}

pub fn probability_side_oracle(
    spec: &SideSheetSpec,
    detector_x: f64,
    detector_z: f64,
    spacing: impl Into<OracleSpacing>,
) -> Result<ProbabilityResult> {
    let detector = checked_detector(detector_x, detector_z)?;
    let r = riemann_oracle(&phase_field(*spec, detector), &domain(spec)?, spacing)?;
    Ok(ProbabilityResult::from_integral(r, detector))
}

pub fn compare_side(
    spec: &SideSheetSpec,
    detector_x: f64,
    detector_z: f64,
    plan: &SamplingPlan,
    lateral_factor: f64,
    depth_factor: f64,
) -> Result<OracleComparison> {
    let detector = checked_detector(detector_x, detector_z)?;
    compare_on(&domain(spec)?, &phase_field(*spec, detector), detector, plan, lateral_factor, depth_factor)
}

/// Detector moves along x at fixed height.
pub fn side_position_scan(
    spec: &SideSheetSpec,
    detector_z: f64,
    grid: &ScanGrid,
    plan: &SamplingPlan,
    workers: Option<usize>,
) -> Result<ScanResult> {
    sweep("side-position-scan", "x_d", "mm", &grid.values(), plan, workers, |x| probability_side(spec, x, detector_z, plan))
}

/// Fixed detector while the sheet thickness runs over the grid.
pub fn side_thickness_scan(
    spec: &SideSheetSpec,
    detector_x: f64,
    detector_z: f64,
    grid: &ScanGrid,
    plan: &SamplingPlan,
    workers: Option<usize>,
) -> Result<ScanResult> {
    if grid.start < 0.0 {
        return Err(Error::InvalidGeometry("thickness scan must start at Zw >= 0".into()));
    }
    sweep("side-thickness-scan", "Zw", "mm", &grid.values(), plan, workers, |zw| {
        probability_side(&spec.with_thickness(zw)?, detector_x, detector_z, plan)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{rect_minima, thickness_envelope};

    #[test]
    fn off_axis_slit_pattern() {
        let spec = SideSheetSpec::new(1.0, 0.0, 1e-3).unwrap();
        let plan = SamplingPlan::default();
        // at x_d = 0 the sheet spans many whole cycles and nearly cancels
        let p0 = probability_side(&spec, 0.0, 10.0, &plan).unwrap().probability;
        assert!(p0 < 1e-6, "{p0}");
        // the first slit minimum sits at a dark fringe as well
        let x1 = rect_minima(1, 1.0, 10.0, 1e-3).unwrap();
        assert!((x1 - 0.0100).abs() < 1e-5);
        let p1 = probability_side(&spec, x1, 10.0, &plan).unwrap().probability;
        assert!(p1 < 1e-6, "{p1}");
        let mid = probability_side(&spec, 0.5 * x1, 10.0, &plan).unwrap().probability;
        assert!(mid > 100.0 * p1.max(p0));
    }

    #[test]
    fn rejects_detector_below_sheet() {
        let spec = SideSheetSpec::new(1.0, 0.0, 1e-3).unwrap();
        assert!(probability_side(&spec, 0.0, -1.0, &SamplingPlan::default()).is_err());
    }

    #[test]
    fn thickness_follows_single_pass_envelope() {
        let spec = SideSheetSpec::new(1.0, 0.0, 1e-3).unwrap();
        let plan = SamplingPlan::default();
        let grid = ScanGrid::new(0.0, 1e-3, 2.5e-4).unwrap();
        let scan = side_thickness_scan(&spec, 5e-3, 10.0, &grid, &plan, Some(1)).unwrap();
        let p0 = scan.rows[0].probability;
        for row in &scan.rows {
            let want = p0 * thickness_envelope(row.parameter, 1e-3, 1.0);
            assert!((row.probability - want).abs() < 0.01 * p0, "Zw={}: {} vs {want}", row.parameter, row.probability);
        }
    }
}
