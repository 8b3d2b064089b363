use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How densely to sample an oscillatory integrand.
///
/// Each axis gets `samples_per_cycle` nodes per 2π of phase advance along it,
/// bounded below by `min_nodes_per_axis` and above by `max_nodes_per_axis`.
/// Counts are always odd so the composite quadratic rule has an even number
/// of intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    samples_per_cycle: u32,
    min_nodes_per_axis: usize,
    max_nodes_per_axis: usize,
}

impl SamplingPlan {
    pub const DEFAULT_SAMPLES_PER_CYCLE: u32 = 8;
    pub const MIN_SAMPLES_PER_CYCLE: u32 = 4;
    pub const DEFAULT_MIN_NODES: usize = 33;
    pub const DEFAULT_MAX_NODES: usize = 2_000_001;

    pub fn new(samples_per_cycle: u32) -> Result<Self> {
        if samples_per_cycle < Self::MIN_SAMPLES_PER_CYCLE {
            return Err(Error::PlanInvariant(format!(
                "samples_per_cycle must be at least {}, got {samples_per_cycle}",
                Self::MIN_SAMPLES_PER_CYCLE
            )));
        }
        Ok(Self {
            samples_per_cycle,
            min_nodes_per_axis: Self::DEFAULT_MIN_NODES,
            max_nodes_per_axis: Self::DEFAULT_MAX_NODES,
        })
    }

    /// Floor on every axis, rounded up to the next odd count (at least 3).
    pub fn with_min_nodes(mut self, nodes: usize) -> Self {
        self.min_nodes_per_axis = make_odd(nodes.max(3));
        self
    }

    pub fn with_max_nodes(mut self, nodes: usize) -> Result<Self> {
        if nodes < self.min_nodes_per_axis {
            return Err(Error::PlanInvariant(format!(
                "max_nodes_per_axis {nodes} is below min_nodes_per_axis {}",
                self.min_nodes_per_axis
            )));
        }
        self.max_nodes_per_axis = nodes;
        Ok(self)
    }

    pub fn samples_per_cycle(&self) -> u32 {
        self.samples_per_cycle
    }
    pub fn min_nodes_per_axis(&self) -> usize {
        self.min_nodes_per_axis
    }
    pub fn max_nodes_per_axis(&self) -> usize {
        self.max_nodes_per_axis
    }

    /// Same plan at twice the density, for convergence checks.
    pub fn doubled(&self) -> Self {
        Self { samples_per_cycle: self.samples_per_cycle * 2, ..*self }
    }

    /// Node count for an axis that spans `cycles` turns of phase.
    pub fn nodes_for_cycles(&self, cycles: f64) -> Result<usize> {
        if !cycles.is_finite() || cycles < 0.0 {
            return Err(Error::PlanInvariant(format!("phase cycle estimate must be finite and non-negative, got {cycles}")));
        }
        let wanted = (cycles * f64::from(self.samples_per_cycle)).ceil();
        if wanted >= self.max_nodes_per_axis as f64 {
            return Err(Error::PlanCap { needed: wanted as usize, cap: self.max_nodes_per_axis });
        }
        self.check_cap(make_odd((wanted as usize).max(self.min_nodes_per_axis)))
    }

    pub(crate) fn check_cap(&self, nodes: usize) -> Result<usize> {
        if nodes > self.max_nodes_per_axis {
            Err(Error::PlanCap { needed: nodes, cap: self.max_nodes_per_axis })
        } else {
            Ok(nodes)
        }
    }
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self::new(Self::DEFAULT_SAMPLES_PER_CYCLE).expect("default plan is valid")
    }
}

pub(crate) fn make_odd(n: usize) -> usize {
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}
