//! Parabolic sheet lit along its axis; the detector moves in the focal plane
//! or stays at the focus while the sheet thickens.

use std::f64::consts::PI;

use super::{compare_on, sweep, OracleComparison, ProbabilityResult, ScanGrid, ScanResult};
use crate::error::{Error, Result};
use crate::geometry::{ParabolicSheetSpec, Point3};
use crate::quadrature::{integrate, riemann_oracle, Domain, Interval, OracleSpacing, PhaseIntegrand, SamplingPlan};

fn domain(spec: &ParabolicSheetSpec) -> Result<Domain> {
    let (lo, hi) = spec.z0_range();
    let z = if spec.thickness() == 0.0 { Interval::point(lo) } else { Interval::new(lo, hi)? };
    Domain::disk_slab(spec.radius(), z)
}

fn phase_field(spec: ParabolicSheetSpec, detector: Point3) -> PhaseIntegrand<impl Fn(Point3) -> f64 + Sync> {
    PhaseIntegrand(move |p: Point3| spec.phase_at(p.x, p.y, p.z, detector))
}

pub fn probability_parabolic(spec: &ParabolicSheetSpec, detector: Point3, plan: &SamplingPlan) -> Result<ProbabilityResult> {
    let detector = detector.check_finite("detector")?;
    let r = integrate(&domain(spec)?, &phase_field(*spec, detector), plan)?;
    Ok(ProbabilityResult::from_integral(r, detector))
}

/// Same probability from the midpoint oracle with cells of about `spacing`.
pub fn probability_parabolic_oracle(
    spec: &ParabolicSheetSpec,
    detector: Point3,
    spacing: impl Into<OracleSpacing>,
) -> Result<ProbabilityResult> {
    let detector = detector.check_finite("detector")?;
    let r = riemann_oracle(&phase_field(*spec, detector), &domain(spec)?, spacing)?;
    Ok(ProbabilityResult::from_integral(r, detector))
}

pub fn compare_parabolic(
    spec: &ParabolicSheetSpec,
    detector: Point3,
    plan: &SamplingPlan,
    lateral_factor: f64,
    depth_factor: f64,
) -> Result<OracleComparison> {
    let detector = detector.check_finite("detector")?;
    compare_on(&domain(spec)?, &phase_field(*spec, detector), detector, plan, lateral_factor, depth_factor)
}

/// Detector at `(x_d, 0, Zf)` for each grid value.
pub fn focal_plane_scan(
    spec: &ParabolicSheetSpec,
    grid: &ScanGrid,
    plan: &SamplingPlan,
    workers: Option<usize>,
) -> Result<ScanResult> {
    let zf = spec.focal_length();
    sweep("parabolic-focal-scan", "x_d", "mm", &grid.values(), plan, workers, |x| {
        probability_parabolic(spec, Point3::new(x, 0.0, zf), plan)
    })
}

/// Detector at the focus while the thickness `Zw` runs over the grid.
pub fn parabolic_thickness_scan(
    spec: &ParabolicSheetSpec,
    grid: &ScanGrid,
    plan: &SamplingPlan,
    workers: Option<usize>,
) -> Result<ScanResult> {
    if grid.start < 0.0 {
        return Err(Error::InvalidGeometry("thickness scan must start at Zw >= 0".into()));
    }
    let focus = spec.focal_point();
    sweep("parabolic-thickness-scan", "Zw", "mm", &grid.values(), plan, workers, |zw| {
        probability_parabolic(&spec.with_thickness(zw)?, focus, plan)
    })
}

/// Path-length change per unit sheet displacement, measured at the sheet centre
/// for a detector at the focus. Close to 2 for a distant source.
pub fn z0_phase_rate(spec: &ParabolicSheetSpec) -> f64 {
    let h = 1e-4 * spec.wavelength();
    let focus = spec.focal_point();
    let at = |z0: f64| spec.path_excess(Point3::new(0.0, 0.0, spec.height(0.0, 0.0, z0)), focus);
    ((at(h) - at(-h)) / (2.0 * h)).abs()
}

/// Share of the focal-plane energy inside radius `cutoff`, from the scan's
/// trapezoid integral of `P x dx` over the analytic total for this aperture.
pub fn encircled_fraction(spec: &ParabolicSheetSpec, scan: &ScanResult, cutoff: f64) -> Result<f64> {
    let xs = scan.parameters();
    let ps = scan.probabilities();
    if xs.first().map_or(true, |&x| x.abs() > 1e-12) || xs.last().map_or(true, |&x| x < cutoff) {
        return Err(Error::InvalidGeometry(format!("scan must cover [0, {cutoff}] starting at 0")));
    }
    let mut acc = 0.0;
    for i in 1..xs.len() {
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (g0, g1) = (ps[i - 1] * x0, ps[i] * x1);
        if x1 <= cutoff {
            acc += 0.5 * (g0 + g1) * (x1 - x0);
        } else {
            let t = (cutoff - x0) / (x1 - x0);
            let gc = g0 + t * (g1 - g0);
            acc += 0.5 * (g0 + gc) * (cutoff - x0);
            break;
        }
    }
    let beta = 2.0 * PI * spec.radius() / (spec.wavelength() * spec.focal_length());
    Ok(0.5 * beta * beta * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::airy_intensity;

    fn thin(radius: f64) -> ParabolicSheetSpec {
        ParabolicSheetSpec::new(radius, 1000.0, 0.0, 1e-3).unwrap()
    }

    #[test]
    fn focus_is_fully_constructive() {
        let spec = thin(5.0);
        let p = probability_parabolic(&spec, spec.focal_point(), &SamplingPlan::default()).unwrap();
        assert!((p.probability - 1.0).abs() < 1e-6, "P = {}", p.probability);
    }

    #[test]
    fn small_aperture_follows_airy() {
        let spec = thin(1.0);
        let plan = SamplingPlan::default();
        for x in [0.1, 0.3, 0.61, 0.9] {
            let p = probability_parabolic(&spec, Point3::new(x, 0.0, 1000.0), &plan).unwrap();
            let want = airy_intensity(x, 1.0, 1000.0, 1e-3);
            assert!((p.probability - want).abs() < 1e-4, "x={x}: {} vs {want}", p.probability);
        }
    }

    #[test]
    fn phase_rate_is_two() {
        let r = z0_phase_rate(&thin(5.0));
        assert!((r - 2.0).abs() < 1e-6, "{r}");
    }

    #[test]
    fn thickness_zero_row_matches_thin_sheet() {
        let spec = thin(1.0);
        let plan = SamplingPlan::default();
        let grid = ScanGrid::new(0.0, 5e-4, 2.5e-4).unwrap();
        let scan = parabolic_thickness_scan(&spec, &grid, &plan, Some(1)).unwrap();
        assert_eq!(scan.rows.len(), 3);
        assert!((scan.rows[0].probability - 1.0).abs() < 1e-9);
        // half a wave of round-trip spread at Zw = λ/4
        let env = crate::reference::thickness_envelope(5e-4, 1e-3, 2.0);
        assert!((scan.rows[2].probability - env).abs() < 1e-3, "{} vs {env}", scan.rows[2].probability);
    }

    #[test]
    fn encircled_energy_of_exact_airy_rows() {
        let spec = thin(5.0);
        let step = 5e-4;
        let rows = (0..=400)
            .map(|i| {
                let x = i as f64 * step;
                super::super::ScanRow { parameter: x, probability: airy_intensity(x, 5.0, 1000.0, 1e-3), detector: Point3::ORIGIN, node_count: 0 }
            })
            .collect();
        let scan = ScanResult {
            scenario: "t".into(),
            parameter: "x_d".into(),
            units: "mm".into(),
            rows,
            plan: SamplingPlan::default(),
            duration_s: 0.0,
        };
        let x1 = crate::reference::airy_minimum_position(1, 5.0, 1000.0, 1e-3).unwrap();
        let f = encircled_fraction(&spec, &scan, x1).unwrap();
        assert!((f - 0.838).abs() < 1e-3, "{f}");
    }
}
