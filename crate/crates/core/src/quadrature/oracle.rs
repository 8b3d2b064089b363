//! Plain midpoint sums, used only to cross-check the quadratic rule.
//!
//! Disks are summed in polar coordinates and balls in spherical coordinates
//! about the origin, so the oracle shares neither nodes, weights nor region
//! parameterization with the main integrator.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{ComplexAmp, Point3};

use super::domain::{AxisNodes, Domain, IntegralResult, Integrand, Interval};

/// Cell sizes for the oracle: `lateral` across disks, balls and the x-y plane
/// of boxes, `depth` along z of boxes and slabs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpacing {
    pub lateral: f64,
    pub depth: f64,
}

impl OracleSpacing {
    pub fn uniform(h: f64) -> Self {
        Self { lateral: h, depth: h }
    }

    /// Spacing `lateral_factor` (resp. `depth_factor`) times finer than the
    /// quadratic rule's node spacing on `domain`.
    pub fn finer_than(domain: &Domain, nodes: &AxisNodes, lateral_factor: f64, depth_factor: f64) -> Self {
        let gap = |extent: f64, n: usize| if n > 1 { extent / (n - 1) as f64 } else { f64::INFINITY };
        let (lat, dep) = match domain {
            Domain::Segment(x) => (gap(x.width(), nodes.x), f64::INFINITY),
            Domain::Box { x, y, z } => (gap(x.width(), nodes.x).min(gap(y.width(), nodes.y)), gap(z.width(), nodes.z)),
            Domain::Disk { radius } => (gap(2.0 * radius, nodes.x).min(gap(2.0 * radius, nodes.y)), f64::INFINITY),
            Domain::DiskSlab { radius, z } => {
                (gap(2.0 * radius, nodes.x).min(gap(2.0 * radius, nodes.y)), gap(z.width(), nodes.z))
            }
            Domain::Ball { radius } => {
                let d = 2.0 * radius;
                (gap(d, nodes.x).min(gap(d, nodes.y)).min(gap(d, nodes.z)), f64::INFINITY)
            }
        };
        let lateral = lat / lateral_factor;
        let depth = if dep.is_finite() { dep / depth_factor } else { lateral };
        Self { lateral, depth }
    }
}

impl From<f64> for OracleSpacing {
    fn from(h: f64) -> Self {
        Self::uniform(h)
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    value: ComplexAmp,
    weight: f64,
    nodes: usize,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.value += o.value;
        self.weight += o.weight;
        self.nodes += o.nodes;
        self
    }
}

fn cells(iv: &Interval, spacing: f64) -> Vec<(f64, f64)> {
    if iv.is_collapsed() {
        return vec![(iv.lo, 1.0)];
    }
    let n = (iv.width() / spacing).ceil().max(1.0) as usize;
    let h = iv.width() / n as f64;
    (0..n).map(|i| (iv.lo + (i as f64 + 0.5) * h, h)).collect()
}

fn ordered_sum(parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

/// Polar rings of a disk at height `z`.
fn disk_rings<I: Integrand + ?Sized>(f: &I, radius: f64, z: f64, spacing: f64) -> Vec<Tally> {
    let nr = (radius / spacing).ceil().max(1.0) as usize;
    let dr = radius / nr as f64;
    (0..nr)
        .into_par_iter()
        .map(|j| {
            let rho = (j as f64 + 0.5) * dr;
            let nphi = ((TAU * rho / spacing).ceil() as usize).max(16);
            let dphi = TAU / nphi as f64;
            let w = rho * dr * dphi;
            let mut t = Tally::default();
            for k in 0..nphi {
                let (s, c) = ((k as f64 + 0.5) * dphi).sin_cos();
                t.value += f.amplitude(Point3::new(rho * c, rho * s, z)) * w;
                t.weight += w;
            }
            t.nodes = nphi;
            t
        })
        .collect()
}

fn ball_shells<I: Integrand + ?Sized>(f: &I, radius: f64, spacing: f64) -> Vec<Tally> {
    let nr = (radius / spacing).ceil().max(1.0) as usize;
    let dr = radius / nr as f64;
    (0..nr)
        .into_par_iter()
        .map(|j| {
            let rho = (j as f64 + 0.5) * dr;
            let nmu = ((PI * rho / spacing).ceil() as usize).max(8);
            let dmu = 2.0 / nmu as f64;
            let mut t = Tally::default();
            for i in 0..nmu {
                let mu = -1.0 + (i as f64 + 0.5) * dmu;
                let sin_theta = (1.0 - mu * mu).sqrt();
                let nphi = ((TAU * rho * sin_theta / spacing).ceil() as usize).max(8);
                let dphi = TAU / nphi as f64;
                let w = rho * rho * dr * dmu * dphi;
                for k in 0..nphi {
                    let (s, c) = ((k as f64 + 0.5) * dphi).sin_cos();
                    let p = Point3::new(rho * sin_theta * c, rho * sin_theta * s, rho * mu);
                    t.value += f.amplitude(p) * w;
                    t.weight += w;
                }
                t.nodes += nphi;
            }
            t
        })
        .collect()
}

/// Midpoint-rule integral of `f` over `domain` with cells of about `spacing`
/// (radial and arc-length spacing for disks and balls).
pub fn riemann_oracle<I: Integrand + ?Sized>(f: &I, domain: &Domain, spacing: impl Into<OracleSpacing>) -> Result<IntegralResult> {
    let OracleSpacing { lateral: spacing, depth } = spacing.into();
    for h in [spacing, depth] {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidQuadrature(format!("oracle spacing must be positive, got {h}")));
        }
    }
    let total = match domain {
        Domain::Segment(iv) => {
            let mut t = Tally::default();
            for (x, w) in cells(iv, spacing) {
                t.value += f.amplitude(Point3::new(x, 0.0, 0.0)) * w;
                t.weight += w;
                t.nodes += 1;
            }
            t
        }
        Domain::Box { x, y, z } => {
            let (xs, ys, zs) = (cells(x, spacing), cells(y, spacing), cells(z, depth));
            let sheets = zs
                .par_iter()
                .map(|&(zv, wz)| {
                    let mut t = Tally::default();
                    for &(yv, wy) in &ys {
                        for &(xv, wx) in &xs {
                            let w = wx * wy * wz;
                            t.value += f.amplitude(Point3::new(xv, yv, zv)) * w;
                            t.weight += w;
                            t.nodes += 1;
                        }
                    }
                    t
                })
                .collect();
            ordered_sum(sheets)
        }
        Domain::Disk { radius } => ordered_sum(disk_rings(f, *radius, 0.0, spacing)),
        Domain::DiskSlab { radius, z } => {
            let layers = cells(z, depth)
                .into_iter()
                .map(|(zv, wz)| {
                    let mut t = ordered_sum(disk_rings(f, *radius, zv, spacing));
                    t.value *= wz;
                    t.weight *= wz;
                    t
                })
                .collect();
            ordered_sum(layers)
        }
        Domain::Ball { radius } => ordered_sum(ball_shells(f, *radius, spacing)),
    };
    Ok(IntegralResult { value: total.value, normalization_a: total.weight * total.weight, node_count: total.nodes })
}
