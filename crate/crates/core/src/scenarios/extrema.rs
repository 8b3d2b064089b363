//! Locating minima and maxima of sampled probability curves.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub position: f64,
    pub value: f64,
}

/// Interior indices where the discrete derivative changes from falling to rising.
pub fn local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] < values[i - 1] && values[i] <= values[i + 1])
        .collect()
}

pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect()
}

/// Vertex of the parabola through three equally spaced samples centred on
/// `center`, clamped to the sampled bracket.
pub fn quadratic_vertex(center: f64, step: f64, left: f64, mid: f64, right: f64) -> f64 {
    let curvature = left - 2.0 * mid + right;
    if curvature == 0.0 {
        return center;
    }
    let offset = 0.5 * step * (left - right) / curvature;
    center + offset.clamp(-step, step)
}

/// Repeated three-point quadratic fits starting from a grid extremum at
/// `center` with grid spacing `step`. The bracket shrinks tenfold whenever the
/// best point lies strictly inside it, and slides otherwise.
pub fn refine_extremum<F>(f: F, center: f64, step: f64, kind: ExtremumKind, rounds: usize) -> Result<Extremum>
where
    F: Fn(f64) -> Result<f64>,
{
    let better = |a: f64, b: f64| match kind {
        ExtremumKind::Minimum => a < b,
        ExtremumKind::Maximum => a > b,
    };
    let mut s = step;
    let mut best = Extremum { position: center, value: f(center)? };
    let mut shrinks = 0;
    for _ in 0..4 * rounds {
        let c = best.position;
        let (l, r) = (f(c - s)?, f(c + s)?);
        let v = quadratic_vertex(c, s, l, best.value, r);
        let fv = f(v)?;
        let mut moved_to_edge = false;
        for (x, y, edge) in [(c - s, l, true), (c + s, r, true), (v, fv, (v - c).abs() >= s)] {
            if better(y, best.value) {
                best = Extremum { position: x, value: y };
                moved_to_edge = edge;
            }
        }
        if !moved_to_edge {
            s *= 0.1;
            shrinks += 1;
            if shrinks >= rounds || s < 1e-12 * best.position.abs().max(1e-3) {
                break;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_discrete_extrema() {
        let v = [3.0, 1.0, 2.0, 5.0, 4.0, 4.5, 0.5, 0.5, 1.0];
        assert_eq!(local_minima(&v), vec![1, 4, 6]);
        assert_eq!(local_maxima(&v), vec![3, 5]);
        assert!(local_minima(&[1.0, 2.0]).is_empty());
    }

    #[test]
    fn vertex_of_exact_parabola() {
        let p = |x: f64| 2.0 * (x - 0.37).powi(2) + 1.0;
        let v = quadratic_vertex(0.4, 0.1, p(0.3), p(0.4), p(0.5));
        assert!((v - 0.37).abs() < 1e-12);
    }

    #[test]
    fn refines_squared_sine_zero() {
        // P = sin²(30 x) near its zero at π/30, sampled on a coarse grid
        let zero = std::f64::consts::PI / 30.0;
        let f = |x: f64| Ok((30.0 * x).sin().powi(2));
        let e = refine_extremum(f, 0.105, 0.0025, ExtremumKind::Minimum, 6).unwrap();
        assert!((e.position - zero).abs() < 1e-9);
        assert!(e.value < 1e-16);

        let peak = refine_extremum(|x: f64| Ok((30.0 * x).cos().powi(2) * 0.5), 0.1, 0.0025, ExtremumKind::Maximum, 6).unwrap();
        assert!((peak.position - zero).abs() < 1e-6);
        assert!((peak.value - 0.5).abs() < 1e-12);
    }
}
