//! Integration domains and the nested composite rule over them.
//!
//! Disks and balls use exact variable limits. Their outer coordinates are
//! parameterized by angle (`y = R sin t`), which turns the square-root edge of
//! the region into a smooth integrand; rows near the rim get proportionally
//! fewer nodes so the node spacing stays roughly uniform.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ComplexAmp, Point3};

use super::plan::{make_odd, SamplingPlan};
use super::rule::{coefficient, simpson_row, LevelSum, Partial};

/// Closed interval; zero width marks a collapsed (thin) axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidQuadrature(format!("non-finite bounds [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::InvalidQuadrature(format!("inverted bounds [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Zero-width interval at `at`.
    pub fn point(at: f64) -> Self {
        Self { lo: at, hi: at }
    }

    /// `[-half, half]`, collapsed when `half` is zero.
    pub fn centered(half: f64) -> Result<Self> {
        Self::new(-half, half)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
    pub fn is_collapsed(&self) -> bool {
        self.hi == self.lo
    }
}

/// Region of integration. Coordinates not spanned by the region are passed to
/// the integrand as zero (or the collapsed axis value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// Along x.
    Segment(Interval),
    /// Axis-aligned box; collapsed axes are evaluated at their single value.
    Box { x: Interval, y: Interval, z: Interval },
    /// Disk of the given radius in the xy plane at z = 0.
    Disk { radius: f64 },
    /// Disk in x, y stacked over a z interval (z is passed as the third coordinate).
    DiskSlab { radius: f64, z: Interval },
    /// Ball centred at the origin.
    Ball { radius: f64 },
}

fn check_radius(radius: f64) -> Result<f64> {
    if radius.is_finite() && radius > 0.0 {
        Ok(radius)
    } else {
        Err(Error::InvalidQuadrature(format!("radius must be positive, got {radius}")))
    }
}

impl Domain {
    pub fn segment(a: f64, b: f64) -> Result<Self> {
        let iv = Interval::new(a, b)?;
        if iv.is_collapsed() {
            return Err(Error::InvalidQuadrature(format!("segment needs a < b, got [{a}, {b}]")));
        }
        Ok(Domain::Segment(iv))
    }

    pub fn cuboid(x: Interval, y: Interval, z: Interval) -> Self {
        Domain::Box { x, y, z }
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Ok(Domain::Disk { radius: check_radius(radius)? })
    }

    pub fn disk_slab(radius: f64, z: Interval) -> Result<Self> {
        Ok(Domain::DiskSlab { radius: check_radius(radius)?, z })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        Ok(Domain::Ball { radius: check_radius(radius)? })
    }

    /// Exact measure (length, area or volume) of the region.
    pub fn measure(&self) -> f64 {
        let span = |iv: &Interval| if iv.is_collapsed() { 1.0 } else { iv.width() };
        match self {
            Domain::Segment(iv) => iv.width(),
            Domain::Box { x, y, z } => span(x) * span(y) * span(z),
            Domain::Disk { radius } => PI * radius * radius,
            Domain::DiskSlab { radius, z } => PI * radius * radius * span(z),
            Domain::Ball { radius } => 4.0 / 3.0 * PI * radius.powi(3),
        }
    }
}

/// Something to integrate: a complex value at each point, optionally with its
/// unwrapped phase so the grid can be sized without phase-unwrapping guesswork.
pub trait Integrand: Sync {
    fn amplitude(&self, p: Point3) -> ComplexAmp;

    fn phase_hint(&self, _p: Point3) -> Option<f64> {
        None
    }
}

impl<F> Integrand for F
where
    F: Fn(Point3) -> ComplexAmp + Sync,
{
    #[inline]
    fn amplitude(&self, p: Point3) -> ComplexAmp {
        self(p)
    }
}

/// `e^{iθ(p)}` for a real phase field `θ`.
pub struct PhaseIntegrand<F>(pub F);

impl<F> Integrand for PhaseIntegrand<F>
where
    F: Fn(Point3) -> f64 + Sync,
{
    #[inline]
    fn amplitude(&self, p: Point3) -> ComplexAmp {
        crate::geometry::unit_amplitude((self.0)(p))
    }

    fn phase_hint(&self, p: Point3) -> Option<f64> {
        Some((self.0)(p))
    }
}

/// Node counts per Cartesian axis, expressed as if the axis were sampled
/// uniformly across the region's full extent. Collapsed axes have one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisNodes {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

const PHASE_PROBES: usize = 2049;
const ARG_PROBES: usize = 8193;

/// Turns of phase accumulated along the straight line `from -> to`, measured as
/// total variation so non-monotone phase is not undercounted.
fn cycles_along<I: Integrand + ?Sized>(f: &I, from: Point3, to: Point3) -> f64 {
    let at = |i: usize, n: usize| {
        let t = i as f64 / (n - 1) as f64;
        from + (to - from) * t
    };
    if f.phase_hint(from).is_some() {
        let mut total = 0.0;
        let mut prev = f.phase_hint(from).unwrap_or(0.0);
        for i in 1..PHASE_PROBES {
            let cur = f.phase_hint(at(i, PHASE_PROBES)).unwrap_or(prev);
            total += (cur - prev).abs();
            prev = cur;
        }
        total / TAU
    } else {
        let mut total = 0.0;
        let mut prev = f.amplitude(from).arg();
        for i in 1..ARG_PROBES {
            let cur = f.amplitude(at(i, ARG_PROBES)).arg();
            let mut d = cur - prev;
            while d > PI {
                d -= TAU;
            }
            while d < -PI {
                d += TAU;
            }
            total += d.abs();
            prev = cur;
        }
        total / TAU
    }
}

fn max_cycles<I: Integrand + ?Sized>(f: &I, lines: &[(Point3, Point3)]) -> f64 {
    lines.iter().map(|&(a, b)| cycles_along(f, a, b)).fold(0.0, f64::max)
}

fn axis_nodes<I: Integrand + ?Sized>(f: &I, plan: &SamplingPlan, lines: &[(Point3, Point3)]) -> Result<usize> {
    plan.nodes_for_cycles(max_cycles(f, lines))
}

fn interval_nodes<I: Integrand + ?Sized>(
    f: &I,
    plan: &SamplingPlan,
    iv: &Interval,
    line: impl Fn(f64, f64) -> Vec<(Point3, Point3)>,
) -> Result<usize> {
    if iv.is_collapsed() {
        Ok(1)
    } else {
        axis_nodes(f, plan, &line(iv.lo, iv.hi))
    }
}

impl Domain {
    /// Sizes the grid for `f` according to `plan`.
    pub fn resolve<I: Integrand + ?Sized>(&self, f: &I, plan: &SamplingPlan) -> Result<AxisNodes> {
        let p = Point3::new;
        let nodes = match *self {
            Domain::Segment(iv) => AxisNodes {
                x: axis_nodes(f, plan, &[(p(iv.lo, 0.0, 0.0), p(iv.hi, 0.0, 0.0))])?,
                y: 1,
                z: 1,
            },
            Domain::Box { x, y, z } => {
                let picks = |iv: &Interval| {
                    if iv.is_collapsed() {
                        vec![iv.lo]
                    } else {
                        vec![iv.lo, iv.mid(), iv.hi]
                    }
                };
                let (xs, ys, zs) = (picks(&x), picks(&y), picks(&z));
                let nx = interval_nodes(f, plan, &x, |lo, hi| {
                    ys.iter().flat_map(|&b| zs.iter().map(move |&c| (p(lo, b, c), p(hi, b, c)))).collect()
                })?;
                let ny = interval_nodes(f, plan, &y, |lo, hi| {
                    xs.iter().flat_map(|&a| zs.iter().map(move |&c| (p(a, lo, c), p(a, hi, c)))).collect()
                })?;
                let nz = interval_nodes(f, plan, &z, |lo, hi| {
                    xs.iter().flat_map(|&a| ys.iter().map(move |&b| (p(a, b, lo), p(a, b, hi)))).collect()
                })?;
                AxisNodes { x: nx, y: ny, z: nz }
            }
            Domain::Disk { radius } => disk_nodes(f, plan, radius, 0.0)?,
            Domain::DiskSlab { radius, z } => {
                let mut nodes = disk_nodes(f, plan, radius, z.mid())?;
                nodes.z = interval_nodes(f, plan, &z, |lo, hi| {
                    let rim = 0.999 * radius;
                    [(0.0, 0.0), (rim, 0.0), (-rim, 0.0), (0.0, rim), (0.0, -rim), (0.5 * radius, 0.5 * radius)]
                        .iter()
                        .map(|&(a, b)| (p(a, b, lo), p(a, b, hi)))
                        .collect()
                })?;
                nodes
            }
            Domain::Ball { radius } => {
                let r = radius;
                let h = 0.5 * r;
                let w = (r * r - h * h).sqrt();
                AxisNodes {
                    x: axis_nodes(f, plan, &[
                        (p(-r, 0.0, 0.0), p(r, 0.0, 0.0)),
                        (p(-w, h, 0.0), p(w, h, 0.0)),
                        (p(-w, -h, 0.0), p(w, -h, 0.0)),
                        (p(-w, 0.0, h), p(w, 0.0, h)),
                        (p(-w, 0.0, -h), p(w, 0.0, -h)),
                    ])?,
                    y: axis_nodes(f, plan, &[
                        (p(0.0, -r, 0.0), p(0.0, r, 0.0)),
                        (p(h, -w, 0.0), p(h, w, 0.0)),
                        (p(-h, -w, 0.0), p(-h, w, 0.0)),
                        (p(0.0, -w, h), p(0.0, w, h)),
                        (p(0.0, -w, -h), p(0.0, w, -h)),
                    ])?,
                    z: axis_nodes(f, plan, &[
                        (p(0.0, 0.0, -r), p(0.0, 0.0, r)),
                        (p(h, 0.0, -w), p(h, 0.0, w)),
                        (p(-h, 0.0, -w), p(-h, 0.0, w)),
                        (p(0.0, h, -w), p(0.0, h, w)),
                        (p(0.0, -h, -w), p(0.0, -h, w)),
                    ])?,
                }
            }
        };
        // angular parameterization stretches the central spacing by π/2
        if matches!(self, Domain::Disk { .. } | Domain::DiskSlab { .. } | Domain::Ball { .. }) {
            plan.check_cap(angular_nodes(nodes.y))?;
            if let Domain::Ball { .. } = self {
                plan.check_cap(angular_nodes(nodes.z))?;
            }
        }
        Ok(nodes)
    }
}

fn disk_nodes<I: Integrand + ?Sized>(f: &I, plan: &SamplingPlan, radius: f64, z: f64) -> Result<AxisNodes> {
    let p = Point3::new;
    let r = radius;
    let h = 0.5 * r;
    let w = (r * r - h * h).sqrt();
    Ok(AxisNodes {
        x: axis_nodes(f, plan, &[(p(-r, 0.0, z), p(r, 0.0, z)), (p(-w, h, z), p(w, h, z)), (p(-w, -h, z), p(w, -h, z))])?,
        y: axis_nodes(f, plan, &[(p(0.0, -r, z), p(0.0, r, z)), (p(h, -w, z), p(h, w, z)), (p(-h, -w, z), p(-h, w, z))])?,
        z: 1,
    })
}

/// Node count for an angle-parameterized axis with the same central spacing
/// as `uniform` nodes across the diameter.
fn angular_nodes(uniform: usize) -> usize {
    make_odd(((uniform - 1) as f64 * FRAC_PI_2).ceil() as usize + 1)
}

/// Row node count when the row spans `fraction` of the full diameter.
#[inline]
fn scaled_nodes(full: usize, fraction: f64) -> usize {
    make_odd((((full - 1) as f64 * fraction).ceil() as usize + 1).max(3))
}

/// Rows closer than this (relative to the radius) to the rim have zero width.
const RIM: f64 = 1e-12;

/// `∫∫ f(x, y, z) dx dy` over the disk of `radius` at height `z`.
fn disk_layer<I: Integrand + ?Sized>(f: &I, radius: f64, z: f64, nodes: &AxisNodes) -> Partial {
    let nt = angular_nodes(nodes.y);
    let ht = PI / (nt - 1) as f64;
    let half = (nt / 2) as isize;
    let rows: Vec<Partial> = (0..nt)
        .into_par_iter()
        .map(|j| {
            let t = (j as isize - half) as f64 * ht;
            let (s, c) = t.sin_cos();
            if c <= RIM {
                return Partial::default();
            }
            let y = radius * s;
            let w = radius * c;
            let mut row = simpson_row(|x| f.amplitude(Point3::new(x, y, z)), 0.0, w, scaled_nodes(nodes.x, c));
            // jacobian dy = R cos t dt
            row.value *= w;
            row.weight *= w;
            row
        })
        .collect();
    let mut level = LevelSum::default();
    for (j, row) in rows.into_iter().enumerate() {
        level.add(coefficient(j, nt), row);
    }
    level.finish(ht / 3.0)
}

/// `∫∫∫ f` over the ball of `radius` centred at the origin.
fn ball<I: Integrand + ?Sized>(f: &I, radius: f64, nodes: &AxisNodes) -> Partial {
    let nt = angular_nodes(nodes.z);
    let ns_full = angular_nodes(nodes.y);
    let ht = PI / (nt - 1) as f64;
    let half = (nt / 2) as isize;
    let sheets: Vec<Partial> = (0..nt)
        .into_par_iter()
        .map(|j| {
            let t = (j as isize - half) as f64 * ht;
            let (st, ct) = t.sin_cos();
            if ct <= RIM {
                return Partial::default();
            }
            let z = radius * st;
            let rho = radius * ct;
            let ns = scaled_nodes(ns_full, ct);
            let hs = PI / (ns - 1) as f64;
            let shalf = (ns / 2) as isize;
            let mut level = LevelSum::default();
            for k in 0..ns {
                let s = (k as isize - shalf) as f64 * hs;
                let (ss, cs) = s.sin_cos();
                if cs <= RIM {
                    continue;
                }
                let y = rho * ss;
                let w = rho * cs;
                let row = simpson_row(|x| f.amplitude(Point3::new(x, y, z)), 0.0, w, scaled_nodes(nodes.x, ct * cs));
                level.add(coefficient(k, ns) * w, row);
            }
            let mut sheet = level.finish(hs / 3.0);
            sheet.value *= rho;
            sheet.weight *= rho;
            sheet
        })
        .collect();
    let mut level = LevelSum::default();
    for (j, sheet) in sheets.into_iter().enumerate() {
        level.add(coefficient(j, nt), sheet);
    }
    level.finish(ht / 3.0)
}

/// Nodes of one axis as (coordinate, weight) pairs; a collapsed axis is a
/// single node of weight one.
fn axis_rule(iv: &Interval, n: usize) -> Vec<(f64, f64)> {
    if iv.is_collapsed() || n == 1 {
        return vec![(iv.mid(), 1.0)];
    }
    let m = (n / 2) as f64;
    let h = iv.width() / (n - 1) as f64;
    (0..n).map(|i| (iv.mid() + (i as f64 - m) * h, coefficient(i, n) * h / 3.0)).collect()
}

fn cuboid<I: Integrand + ?Sized>(f: &I, x: &Interval, y: &Interval, z: &Interval, nodes: &AxisNodes) -> Partial {
    let ys = axis_rule(y, nodes.y);
    let zs = axis_rule(z, nodes.z);
    let row = |yv: f64, zv: f64| -> Partial {
        if x.is_collapsed() {
            Partial { value: f.amplitude(Point3::new(x.mid(), yv, zv)), weight: 1.0, nodes: 1 }
        } else {
            simpson_row(|xv| f.amplitude(Point3::new(xv, yv, zv)), x.mid(), 0.5 * x.width(), nodes.x)
        }
    };
    let sheets: Vec<Partial> = zs
        .par_iter()
        .map(|&(zv, _)| {
            let mut level = LevelSum::default();
            for &(yv, wy) in &ys {
                level.add(wy, row(yv, zv));
            }
            level.finish(1.0)
        })
        .collect();
    let mut level = LevelSum::default();
    for (sheet, &(_, wz)) in sheets.into_iter().zip(&zs) {
        level.add(wz, sheet);
    }
    level.finish(1.0)
}

/// Complex integral together with its normalization on the same nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: ComplexAmp,
    /// Squared integral of one over the identical node set.
    pub normalization_a: f64,
    pub node_count: usize,
}

impl IntegralResult {
    /// `|value|² / A`.
    pub fn probability(&self) -> f64 {
        self.value.norm_sqr() / self.normalization_a
    }

    pub(crate) fn from_partial(p: Partial) -> Self {
        Self { value: p.value, normalization_a: p.weight * p.weight, node_count: p.nodes }
    }
}

/// Integrates `f` over `domain` on an explicit grid.
pub fn integrate_on<I: Integrand + ?Sized>(domain: &Domain, f: &I, nodes: &AxisNodes) -> Result<IntegralResult> {
    for n in [nodes.x, nodes.y, nodes.z] {
        if n != 1 {
            super::rule::check_nodes(n)?;
        }
    }
    let partial = match domain {
        Domain::Segment(iv) => simpson_row(|x| f.amplitude(Point3::new(x, 0.0, 0.0)), iv.mid(), 0.5 * iv.width(), nodes.x),
        Domain::Box { x, y, z } => cuboid(f, x, y, z, nodes),
        Domain::Disk { radius } => disk_layer(f, *radius, 0.0, nodes),
        Domain::DiskSlab { radius, z } => {
            if z.is_collapsed() {
                disk_layer(f, *radius, z.mid(), nodes)
            } else {
                let zs = axis_rule(z, nodes.z);
                let layers: Vec<Partial> = zs.par_iter().map(|&(zv, _)| disk_layer(f, *radius, zv, nodes)).collect();
                let mut level = LevelSum::default();
                for (layer, &(_, wz)) in layers.into_iter().zip(&zs) {
                    level.add(wz, layer);
                }
                level.finish(1.0)
            }
        }
        Domain::Ball { radius } => ball(f, *radius, nodes),
    };
    Ok(IntegralResult::from_partial(partial))
}

/// Sizes the grid from `plan`, then integrates.
pub fn integrate<I: Integrand + ?Sized>(domain: &Domain, f: &I, plan: &SamplingPlan) -> Result<IntegralResult> {
    let nodes = domain.resolve(f, plan)?;
    integrate_on(domain, f, &nodes)
}

/// `A = |∫ 1|²` on exactly the nodes and weights an amplitude integral would use.
pub fn normalization_a(domain: &Domain, nodes: &AxisNodes) -> Result<f64> {
    let one = |_: Point3| ComplexAmp::new(1.0, 0.0);
    Ok(integrate_on(domain, &one, nodes)?.normalization_a)
}
