//! Composite quadratic (Simpson) rule on uniform grids.

use crate::error::{Error, Result};
use crate::geometry::ComplexAmp;

use super::summation::{CompensatedReal, CompensatedSum};

/// Simpson coefficient of node `i` in an `n`-node rule: 1, 4, 2, 4, ..., 4, 1.
#[inline]
pub(crate) fn coefficient(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Accumulated integral of `f` and of `1` over the same nodes and weights.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Partial {
    pub value: ComplexAmp,
    pub weight: f64,
    pub nodes: usize,
}

/// Weighted accumulator for one quadrature level.
#[derive(Default)]
pub(crate) struct LevelSum {
    value: CompensatedSum,
    weight: CompensatedReal,
    nodes: usize,
}

impl LevelSum {
    #[inline]
    pub fn add(&mut self, factor: f64, p: Partial) {
        self.value.add(p.value * factor);
        self.weight.add(p.weight * factor);
        self.nodes += p.nodes;
    }

    pub fn finish(&self, scale: f64) -> Partial {
        Partial {
            value: self.value.value() * scale,
            weight: self.weight.value() * scale,
            nodes: self.nodes,
        }
    }
}

/// One row `∫ f(x) dx` over `[mid - half, mid + half]` with `n` nodes.
///
/// Nodes are placed symmetrically about `mid` so mirrored rows see mirrored nodes.
#[inline]
pub(crate) fn simpson_row<F: Fn(f64) -> ComplexAmp>(f: F, mid: f64, half: f64, n: usize) -> Partial {
    let m = (n / 2) as f64;
    let h = 2.0 * half / (n - 1) as f64;
    let mut value = CompensatedSum::new();
    let mut weight = CompensatedReal::default();
    for i in 0..n {
        let c = coefficient(i, n);
        let x = mid + (i as f64 - m) * h;
        value.add(f(x) * c);
        weight.add(c);
    }
    let scale = h / 3.0;
    Partial { value: value.value() * scale, weight: weight.value() * scale, nodes: n }
}

/// Composite quadratic integral of `f` over `[a, b]` with `n_nodes` nodes.
///
/// Exact for polynomials up to degree three.
pub fn integrate_1d<F: Fn(f64) -> ComplexAmp>(f: F, a: f64, b: f64, n_nodes: usize) -> Result<ComplexAmp> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidQuadrature(format!("need finite a < b, got [{a}, {b}]")));
    }
    check_nodes(n_nodes)?;
    Ok(simpson_row(f, 0.5 * (a + b), 0.5 * (b - a), n_nodes).value)
}

pub(crate) fn check_nodes(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        Err(Error::InvalidQuadrature(format!("node count must be odd and at least 3, got {n}")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn c(re: f64) -> ComplexAmp {
        ComplexAmp::new(re, 0.0)
    }

    #[test]
    fn constants_and_quadratics_are_exact() {
        assert_eq!(integrate_1d(|_| c(1.0), 0.0, 1.0, 3).unwrap(), c(1.0));
        let v = integrate_1d(|t| c(t * t), 0.0, 1.0, 3).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn full_cycle_cancels() {
        let v = integrate_1d(|t| ComplexAmp::from_polar(1.0, TAU * t), 0.0, 1.0, 201).unwrap();
        assert!(v.norm() < 1e-8);
    }

    #[test]
    fn rejects_bad_nodes_and_bounds() {
        assert!(integrate_1d(|_| c(1.0), 0.0, 1.0, 4).is_err());
        assert!(integrate_1d(|_| c(1.0), 0.0, 1.0, 1).is_err());
        assert!(integrate_1d(|_| c(1.0), 1.0, 0.0, 5).is_err());
    }

    proptest! {
        #[test]
        fn cubic_exactness(
            a0 in -3.0f64..3.0, a1 in -3.0f64..3.0, a2 in -3.0f64..3.0, a3 in -3.0f64..3.0,
            lo in -2.0f64..0.0, len in 0.1f64..3.0, half_n in 1usize..40,
        ) {
            let hi = lo + len;
            let p = |t: f64| a0 + t * (a1 + t * (a2 + t * a3));
            let anti = |t: f64| t * (a0 + t * (a1 / 2.0 + t * (a2 / 3.0 + t * a3 / 4.0)));
            let exact = anti(hi) - anti(lo);
            let v = integrate_1d(|t| c(p(t)), lo, hi, 2 * half_n + 1).unwrap();
            let scale = 1.0 + a0.abs() + a1.abs() + a2.abs() + a3.abs();
            prop_assert!((v.re - exact).abs() <= 1e-14 * scale * len * 30.0);
        }

        #[test]
        fn whole_cycles_cancel(k in 1u32..20, spc in 8usize..32, lambda in 1e-4f64..1.0) {
            let len = f64::from(k) * lambda;
            let n = k as usize * spc + 1;
            let n = if n % 2 == 0 { n + 1 } else { n };
            let v = integrate_1d(|t| ComplexAmp::from_polar(1.0, TAU * t / lambda), 0.0, len, n).unwrap();
            prop_assert!(v.norm() < 1e-9 * len);
        }
    }
}
