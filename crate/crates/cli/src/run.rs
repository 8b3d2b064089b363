//! Executes a validated configuration.

use pathlight_core::scenarios::{
    focal_plane_scan, parabolic_thickness_scan, side_position_scan, side_thickness_scan, sphere_isotropy_scan,
};
use pathlight_core::ScanResult;

use crate::config::{RunConfig, Scenario};
use crate::error::CliError;

pub fn execute(cfg: &RunConfig) -> Result<ScanResult, CliError> {
    let plan = cfg.plan()?;
    let workers = cfg.workers;
    let scan = match cfg.scenario {
        Scenario::ParabolicFocalScan => focal_plane_scan(&cfg.parabolic_spec()?, &cfg.grid()?, &plan, workers)?,
        Scenario::ParabolicThicknessScan => parabolic_thickness_scan(&cfg.parabolic_spec()?, &cfg.grid()?, &plan, workers)?,
        Scenario::SidePositionScan => {
            side_position_scan(&cfg.side_spec()?, cfg.detector_z.unwrap_or(10.0), &cfg.grid()?, &plan, workers)?
        }
        Scenario::SideThicknessScan => side_thickness_scan(
            &cfg.side_spec()?,
            cfg.detector_x.unwrap_or(5e-3),
            cfg.detector_z.unwrap_or(10.0),
            &cfg.grid()?,
            &plan,
            workers,
        )?,
        Scenario::SphereIsotropy => sphere_isotropy_scan(&cfg.sphere_spec()?, &cfg.direction_vectors()?, &plan, workers)?,
    };
    Ok(scan)
}

/// Caveats worth recording alongside the output.
pub fn warnings(cfg: &RunConfig) -> Vec<String> {
    let mut out = Vec::new();
    if cfg.scenario == Scenario::SphereIsotropy {
        if let Ok(spec) = cfg.sphere_spec() {
            let margin = spec.ordering_margin();
            if margin < 4.0 {
                out.push(format!("ordering margin min(R/r, r/wavelength) = {margin:.3} is below 4"));
            }
        }
    }
    out
}

/// One-line human summary for standard error.
pub fn summary(scan: &ScanResult) -> String {
    format!(
        "{}: {} rows, {} nodes (max {} per point), {:.2} s",
        scan.scenario,
        scan.rows.len(),
        scan.total_node_count(),
        scan.max_node_count(),
        scan.duration_s
    )
}
