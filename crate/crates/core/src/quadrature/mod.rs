//! Numerical integration of unit-amplitude phase fields.
//!
//! The main integrator is a nested composite quadratic rule whose node counts
//! follow the integrand's phase advance along each axis (see [`SamplingPlan`]).
//! Every integral also returns the integral of one on the same nodes, so the
//! normalized probability is exactly one when all phases agree.
//!
//! Rows are reduced in a fixed order with compensated summation; results are
//! bit-identical for any number of threads.

mod domain;
mod oracle;
mod plan;
mod rule;
mod summation;

pub use domain::{
    integrate, integrate_on, normalization_a, AxisNodes, Domain, IntegralResult, Integrand, Interval, PhaseIntegrand,
};
pub use oracle::{riemann_oracle, OracleSpacing};
pub use plan::SamplingPlan;
pub use rule::integrate_1d;
pub use summation::{compensated_sum, CompensatedReal, CompensatedSum};

use crate::error::Result;
use crate::geometry::{ComplexAmp, Point3};

/// `∫∫ f(x, y)` over the disk of `radius`.
pub fn integrate_disk<F>(f: F, radius: f64, plan: &SamplingPlan) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> ComplexAmp + Sync,
{
    integrate(&Domain::disk(radius)?, &move |p: Point3| f(p.x, p.y), plan)
}

/// Nested integral over an axis-aligned box; collapsed axes are not integrated.
pub fn integrate_box<F>(f: F, x: Interval, y: Interval, z: Interval, plan: &SamplingPlan) -> Result<IntegralResult>
where
    F: Fn(Point3) -> ComplexAmp + Sync,
{
    integrate(&Domain::cuboid(x, y, z), &f, plan)
}

/// `∫∫∫ f` over the ball of `radius` centred at the origin.
pub fn integrate_sphere<F>(f: F, radius: f64, plan: &SamplingPlan) -> Result<IntegralResult>
where
    F: Fn(Point3) -> ComplexAmp + Sync,
{
    integrate(&Domain::ball(radius)?, &f, plan)
}
