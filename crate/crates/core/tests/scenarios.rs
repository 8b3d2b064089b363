use pathlight_core::reference::{airy_minimum_position, rect_minima};
use pathlight_core::scenarios::*;
use pathlight_core::*;

const LAMBDA: f64 = 1e-3;

fn airy_sheet() -> ParabolicSheetSpec {
    ParabolicSheetSpec::new(5.0, 1000.0, 0.0, LAMBDA).unwrap()
}

fn focal_plan() -> SamplingPlan {
    SamplingPlan::default().with_min_nodes(1001)
}

#[test]
fn focus_of_thin_parabola_is_unity() {
    let spec = airy_sheet();
    let p = probability_parabolic(&spec, spec.focal_point(), &focal_plan()).unwrap();
    assert!((p.probability - 1.0).abs() < 1e-9, "{}", p.probability);
    assert!(p.node_count > 900_000);
}

#[test]
fn first_airy_zero_is_dark() {
    let spec = airy_sheet();
    let x1 = airy_minimum_position(1, 5.0, 1000.0, LAMBDA).unwrap();
    assert!((x1 - 0.122).abs() < 1e-3);
    let p = probability_parabolic(&spec, Point3::new(x1, 0.0, 1000.0), &focal_plan()).unwrap();
    assert!(p.probability < 1e-10, "{}", p.probability);
}

#[test]
fn half_wave_thicknesses_extinguish_the_focus() {
    let spec = airy_sheet();
    let plan = SamplingPlan::default();
    for k in 1..=4 {
        let thick = spec.with_thickness(k as f64 * 0.5 * LAMBDA).unwrap();
        let p = probability_parabolic(&thick, spec.focal_point(), &plan).unwrap();
        assert!(p.probability < 1e-9, "k={k}: {}", p.probability);
    }
    let p = probability_parabolic(&spec.with_thickness(1e-7).unwrap(), spec.focal_point(), &plan).unwrap();
    assert!((p.probability - 1.0).abs() < 1e-6);
}

#[test]
fn integrating_before_squaring_matters() {
    let spec = airy_sheet();
    let plan = SamplingPlan::default();
    let mut mean = 0.0;
    for i in 0..11 {
        let z0 = -0.25 * LAMBDA + 0.05 * LAMBDA * i as f64;
        mean += probability_parabolic(&spec.with_z_offset(z0).unwrap(), spec.focal_point(), &plan).unwrap().probability / 11.0;
    }
    assert!(mean >= 0.999, "{mean}");
    let thick = probability_parabolic(&spec.with_thickness(0.5 * LAMBDA).unwrap(), spec.focal_point(), &plan).unwrap();
    assert!(thick.probability < 1e-9);
}

#[test]
fn focal_plane_is_symmetric() {
    let spec = airy_sheet();
    let plan = SamplingPlan::default().with_min_nodes(201);
    for x in [0.07, 0.2] {
        let p = |d: Point3| probability_parabolic(&spec, d, &plan).unwrap().probability;
        let base = p(Point3::new(x, 0.0, 1000.0));
        let mirrored = p(Point3::new(-x, 0.0, 1000.0));
        let rotated = p(Point3::new(0.6 * x, 0.8 * x, 1000.0));
        assert!((mirrored - base).abs() <= 1e-3 * base);
        assert!((rotated - base).abs() <= 1e-3 * base);
    }
}

#[test]
fn side_sheet_peak_and_fringe() {
    let spec = SideSheetSpec::new(1.0, 0.0, LAMBDA).unwrap();
    let plan = SamplingPlan::default();
    let p = |x: f64| probability_side(&spec, x, 10.0, &plan).unwrap().probability;
    // 999.5 cycles at 5 um: a local maximum
    let peak = p(5e-3);
    assert!(peak > p(4.5e-3) && peak > p(5.5e-3));
    assert!(peak > 1e-8);
    let m = refine_extremum(|x| Ok(p(x)), 10e-3, 5e-4, ExtremumKind::Minimum, 5).unwrap();
    assert!((m.position - rect_minima(1, 1.0, 10.0, LAMBDA).unwrap()).abs() < 5e-4);
    // sheet edges leave a floor near 2.5e-10
    assert!(m.value < 1e-2 * peak, "{} {}", m.value, peak);
}

#[test]
fn side_position_minima_are_ten_microns_apart() {
    let spec = SideSheetSpec::new(1.0, 0.0, LAMBDA).unwrap();
    let plan = SamplingPlan::default();
    let grid = ScanGrid::new(0.0, 0.035, 5e-4).unwrap();
    let scan = side_position_scan(&spec, 10.0, &grid, &plan, Some(2)).unwrap();
    let xs = scan.parameters();
    let minima: Vec<f64> = local_minima(&scan.probabilities()).into_iter().map(|i| xs[i]).collect();
    assert_eq!(minima.len(), 3, "{minima:?}");
    for w in minima.windows(2) {
        assert!((w[1] - w[0] - 0.010).abs() <= 5e-4 + 1e-12);
    }
}

#[test]
fn side_thickness_multiples_of_wavelength_extinguish() {
    let spec = SideSheetSpec::new(1.0, 0.0, LAMBDA).unwrap();
    let plan = SamplingPlan::default();
    for k in 1..=4 {
        let p = probability_side(&spec.with_thickness(k as f64 * LAMBDA).unwrap(), 5e-3, 10.0, &plan).unwrap();
        assert!(p.probability < 1e-9, "k={k}: {}", p.probability);
    }
    let thin = probability_side(&spec, 5e-3, 10.0, &plan).unwrap().probability;
    let nearly = probability_side(&spec.with_thickness(1e-7).unwrap(), 5e-3, 10.0, &plan).unwrap().probability;
    assert!((nearly - thin).abs() < 1e-3 * thin);
}

#[test]
fn small_sphere_is_nearly_isotropic() {
    let spec = SphereSpec::new(6e-3, 2e-3, LAMBDA).unwrap();
    let plan = SamplingPlan::default();
    let p = |d: Point3| probability_sphere(&spec, d, &plan).unwrap().probability;
    let p0 = p(Point3::new(1.0, 0.0, 0.0));
    assert!(p0 > 0.0);
    for d in [Point3::new(0.0, 1.0, 0.0), Point3::new(1.0, 1.0, 1.0)] {
        assert!((p(d) - p0).abs() < 0.02 * p0);
    }
}

#[test]
fn scans_do_not_depend_on_worker_count() {
    let spec = airy_sheet();
    let plan = SamplingPlan::default().with_min_nodes(101);
    let grid = ScanGrid::new(0.0, 0.05, 0.0025).unwrap();
    let a = focal_plane_scan(&spec, &grid, &plan, Some(1)).unwrap();
    let b = focal_plane_scan(&spec, &grid, &plan, Some(3)).unwrap();
    assert_eq!(a.rows, b.rows);
    let bits = |s: &ScanResult| s.rows.iter().map(|r| r.probability.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn quadrature_agrees_with_oracle() {
    let spec = ParabolicSheetSpec::new(1.0, 1000.0, 0.3 * LAMBDA, LAMBDA).unwrap();
    let cmp = compare_parabolic(&spec, Point3::new(0.02, -0.01, 1000.2), &SamplingPlan::new(32).unwrap(), 8.0, 32.0).unwrap();
    assert!(cmp.difference() < 1e-6, "{cmp:?}");
    let side = SideSheetSpec::new(1.0, 0.7 * LAMBDA, LAMBDA).unwrap();
    let cmp = compare_side(&side, 0.013, 7.0, &SamplingPlan::default(), 4.0, 32.0).unwrap();
    assert!(cmp.difference() < 1e-6, "{cmp:?}");
}
