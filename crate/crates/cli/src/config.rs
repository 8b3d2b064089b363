//! Flat `key = value` run configuration.
//!
//! One entry per line; `#` starts a comment; blank lines are ignored. Keys are
//! the [`RunConfig`] field names below and lengths are in mm. Keys that do not
//! belong to the chosen scenario are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use pathlight_core::scenarios::direction_set;
use pathlight_core::{ParabolicSheetSpec, Point3, SamplingPlan, ScanGrid, SideSheetSpec, SphereSpec, DEFAULT_WAVELENGTH_MM};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    ParabolicFocalScan,
    ParabolicThicknessScan,
    SidePositionScan,
    SideThicknessScan,
    SphereIsotropy,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::ParabolicFocalScan,
        Scenario::ParabolicThicknessScan,
        Scenario::SidePositionScan,
        Scenario::SideThicknessScan,
        Scenario::SphereIsotropy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::ParabolicFocalScan => "parabolic-focal-scan",
            Scenario::ParabolicThicknessScan => "parabolic-thickness-scan",
            Scenario::SidePositionScan => "side-position-scan",
            Scenario::SideThicknessScan => "side-thickness-scan",
            Scenario::SphereIsotropy => "sphere-isotropy",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Scenario::ParabolicFocalScan => &["radius_R", "focal_length_Zf", "thickness_Zw", "z_offset", "start", "stop", "step"],
            Scenario::ParabolicThicknessScan => &["radius_R", "focal_length_Zf", "z_offset", "start", "stop", "step"],
            Scenario::SidePositionScan => &["width_D", "thickness_Zw", "detector_z", "start", "stop", "step"],
            Scenario::SideThicknessScan => &["width_D", "detector_x", "detector_z", "start", "stop", "step"],
            Scenario::SphereIsotropy => &["sphere_radius_R", "detector_radius_r", "directions"],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Scenario::ALL.into_iter().find(|sc| sc.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Scenario::ALL.iter().map(|s| s.as_str()).collect();
            CliError::config(format!("scenario: unknown name `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::config(format!("format: expected csv or json, got `{s}`"))),
        }
    }
}

const COMMON_KEYS: &[&str] = &["scenario", "wavelength", "samples_per_cycle", "min_nodes_per_axis", "workers", "format", "output"];

/// Minimum nodes per axis for the focal-plane scan; the Airy minima need the
/// finer grid to reach their interference floor.
pub const FOCAL_SCAN_MIN_NODES: usize = 1001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub wavelength: f64,
    #[serde(rename = "radius_R", default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(rename = "focal_length_Zf", default, skip_serializing_if = "Option::is_none")]
    pub focal_length: Option<f64>,
    #[serde(rename = "thickness_Zw", default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_offset: Option<f64>,
    #[serde(rename = "width_D", default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector_z: Option<f64>,
    #[serde(rename = "sphere_radius_R", default, skip_serializing_if = "Option::is_none")]
    pub sphere_radius: Option<f64>,
    #[serde(rename = "detector_radius_r", default, skip_serializing_if = "Option::is_none")]
    pub detector_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub samples_per_cycle: u32,
    pub min_nodes_per_axis: usize,
    /// `None` uses every available core.
    pub workers: Option<usize>,
    pub format: Format,
    /// `-` or absent writes to standard output.
    pub output: Option<String>,
}

impl RunConfig {
    /// Defaults for `scenario`, reproducing the corresponding figure.
    pub fn defaults(scenario: Scenario) -> Self {
        let mut c = RunConfig {
            scenario,
            wavelength: DEFAULT_WAVELENGTH_MM,
            radius: None,
            focal_length: None,
            thickness: None,
            z_offset: None,
            width: None,
            detector_x: None,
            detector_z: None,
            sphere_radius: None,
            detector_radius: None,
            directions: None,
            start: None,
            stop: None,
            step: None,
            samples_per_cycle: SamplingPlan::DEFAULT_SAMPLES_PER_CYCLE,
            min_nodes_per_axis: SamplingPlan::DEFAULT_MIN_NODES,
            workers: None,
            format: Format::Csv,
            output: None,
        };
        let grid = |c: &mut RunConfig, a: f64, b: f64, h: f64| {
            c.start = Some(a);
            c.stop = Some(b);
            c.step = Some(h);
        };
        match scenario {
            Scenario::ParabolicFocalScan => {
                c.radius = Some(5.0);
                c.focal_length = Some(1000.0);
                c.thickness = Some(0.0);
                c.z_offset = Some(0.0);
                c.min_nodes_per_axis = FOCAL_SCAN_MIN_NODES;
                grid(&mut c, 0.0, 0.5, 0.0025);
            }
            Scenario::ParabolicThicknessScan => {
                c.radius = Some(5.0);
                c.focal_length = Some(1000.0);
                c.z_offset = Some(0.0);
                grid(&mut c, 0.0, 2e-3, 2.5e-5);
            }
            Scenario::SidePositionScan => {
                c.width = Some(1.0);
                c.thickness = Some(0.0);
                c.detector_z = Some(10.0);
                grid(&mut c, -0.05, 0.05, 5e-4);
            }
            Scenario::SideThicknessScan => {
                c.width = Some(1.0);
                c.detector_x = Some(5e-3);
                c.detector_z = Some(10.0);
                grid(&mut c, 0.0, 2e-3, 2.5e-5);
            }
            Scenario::SphereIsotropy => {
                c.sphere_radius = Some(20.0 * DEFAULT_WAVELENGTH_MM);
                c.detector_radius = Some(5.0 * DEFAULT_WAVELENGTH_MM);
                c.directions = Some(13);
            }
        }
        c
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = || parse_number(key, value);
        match key {
            "scenario" => {}
            "wavelength" => self.wavelength = num()?,
            "radius_R" => self.radius = Some(num()?),
            "focal_length_Zf" => self.focal_length = Some(num()?),
            "thickness_Zw" => self.thickness = Some(num()?),
            "z_offset" => self.z_offset = Some(num()?),
            "width_D" => self.width = Some(num()?),
            "detector_x" => self.detector_x = Some(num()?),
            "detector_z" => self.detector_z = Some(num()?),
            "sphere_radius_R" => self.sphere_radius = Some(num()?),
            "detector_radius_r" => self.detector_radius = Some(num()?),
            "directions" => self.directions = Some(parse_integer(key, value)?),
            "start" => self.start = Some(num()?),
            "stop" => self.stop = Some(num()?),
            "step" => self.step = Some(num()?),
            "samples_per_cycle" => self.samples_per_cycle = parse_integer(key, value)?,
            "min_nodes_per_axis" => self.min_nodes_per_axis = parse_integer(key, value)?,
            "workers" => self.workers = Some(parse_integer(key, value)?),
            "format" => self.format = value.parse()?,
            "output" => self.output = Some(value.to_string()),
            _ => return Err(CliError::config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Checks every invariant by building the objects the run will use.
    pub fn validate(&self) -> Result<(), CliError> {
        if let (Some(step), Some(start), Some(stop)) = (self.step, self.start, self.stop) {
            if !(step > 0.0) {
                return Err(CliError::config(format!("step: must be positive, got {step}")));
            }
            if !(start < stop) {
                return Err(CliError::config(format!("start: must be below stop ({start} >= {stop})")));
            }
        }
        if self.workers == Some(0) {
            return Err(CliError::config("workers: must be at least 1"));
        }
        self.plan()?;
        match self.scenario {
            Scenario::ParabolicFocalScan | Scenario::ParabolicThicknessScan => {
                self.parabolic_spec()?;
            }
            Scenario::SidePositionScan | Scenario::SideThicknessScan => {
                self.side_spec()?;
                let zd = self.detector_z.unwrap_or_default();
                if !(zd > 0.0) {
                    return Err(CliError::config(format!("detector_z: must be above the sheet, got {zd}")));
                }
            }
            Scenario::SphereIsotropy => {
                self.sphere_spec()?;
                self.direction_vectors()?;
            }
        }
        if self.scenario != Scenario::SphereIsotropy {
            let grid = self.grid()?;
            let thickness_scan = matches!(self.scenario, Scenario::ParabolicThicknessScan | Scenario::SideThicknessScan);
            if thickness_scan && grid.start < 0.0 {
                return Err(CliError::config(format!("start: thickness cannot be negative, got {}", grid.start)));
            }
        }
        Ok(())
    }

    pub fn plan(&self) -> Result<SamplingPlan, CliError> {
        let plan = SamplingPlan::new(self.samples_per_cycle).map_err(|e| CliError::config(format!("samples_per_cycle: {e}")))?;
        Ok(plan.with_min_nodes(self.min_nodes_per_axis))
    }

    pub fn grid(&self) -> Result<ScanGrid, CliError> {
        match (self.start, self.stop, self.step) {
            (Some(a), Some(b), Some(h)) => ScanGrid::new(a, b, h).map_err(|e| CliError::config(format!("start/stop/step: {e}"))),
            _ => Err(CliError::config(format!("scenario {} has no scan grid", self.scenario))),
        }
    }

    fn need(&self, key: &str, v: Option<f64>) -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::config(format!("{key}: required for scenario {}", self.scenario)))
    }

    /// Sheet for the parabolic scenarios; the thickness scan starts from a thin sheet.
    pub fn parabolic_spec(&self) -> Result<ParabolicSheetSpec, CliError> {
        let spec = ParabolicSheetSpec::new(
            self.need("radius_R", self.radius)?,
            self.need("focal_length_Zf", self.focal_length)?,
            self.thickness.unwrap_or(0.0),
            self.wavelength,
        )
        .map_err(keyed)?;
        spec.with_z_offset(self.z_offset.unwrap_or(0.0)).map_err(keyed)
    }

    pub fn side_spec(&self) -> Result<SideSheetSpec, CliError> {
        SideSheetSpec::new(self.need("width_D", self.width)?, self.thickness.unwrap_or(0.0), self.wavelength).map_err(keyed)
    }

    pub fn sphere_spec(&self) -> Result<SphereSpec, CliError> {
        SphereSpec::new(
            self.need("sphere_radius_R", self.sphere_radius)?,
            self.need("detector_radius_r", self.detector_radius)?,
            self.wavelength,
        )
        .map_err(keyed)
    }

    pub fn direction_vectors(&self) -> Result<Vec<Point3>, CliError> {
        direction_set(self.directions.unwrap_or(13)).map_err(|e| CliError::config(format!("directions: {e}")))
    }
}

// core messages already name the offending key
fn keyed(e: pathlight_core::Error) -> CliError {
    CliError::config(e.to_string())
}

fn parse_number(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value.parse().map_err(|_| CliError::config(format!("{key}: cannot read `{value}` as a number")))?;
    if !v.is_finite() {
        return Err(CliError::config(format!("{key}: must be finite, got `{value}`")));
    }
    Ok(v)
}

fn parse_integer<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::config(format!("{key}: cannot read `{value}` as a non-negative integer")))
}

/// Splits the document into `key -> value`, rejecting malformed lines and repeats.
pub fn parse_entries(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::config(format!("line {}: empty key or value", n + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::config(format!("{k}: given more than once")));
        }
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let entries = parse_entries(text)?;
    let scenario: Scenario = entries.get("scenario").ok_or_else(|| CliError::config("scenario: missing"))?.parse()?;
    let mut cfg = RunConfig::defaults(scenario);
    for (k, v) in &entries {
        if !COMMON_KEYS.contains(&k.as_str()) && !scenario.keys().contains(&k.as_str()) {
            let known = Scenario::ALL.iter().any(|s| s.keys().contains(&k.as_str()));
            return Err(CliError::config(if known {
                format!("{k}: does not apply to scenario {scenario}")
            } else {
                format!("unknown key `{k}`")
            }));
        }
        cfg.set(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}
