//! Closed-form diffraction results used as independent checks on the path
//! integrals: the Airy pattern of a circular aperture, slit-diffraction minima
//! and the thickness envelope of a uniformly phased slab.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this argument the power series is used; above it, Hankel's asymptotic expansion.
const SERIES_LIMIT: f64 = 12.0;

fn series(order: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = (0.5 * x).powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200u32 {
        term *= q / (f64::from(k) * f64::from(k + order));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(order * order);
    let (mut p, mut q) = (0.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60u32 {
        if k > 0 {
            let odd = f64::from(2 * k - 1);
            term *= (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        }
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let omega = x - f64::from(order) * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

fn bessel(order: u32, x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT { series(order, ax) } else { asymptotic(order, ax) };
    if x < 0.0 && order % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Zeroth-order Bessel function of the first kind.
pub fn bessel_j0(x: f64) -> f64 {
    bessel(0, x)
}

/// First-order Bessel function of the first kind; absolute error below 1e-8 on [0, 30].
pub fn bessel_j1(x: f64) -> f64 {
    bessel(1, x)
}

fn bessel_j2(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        return series(2, x);
    }
    2.0 * bessel_j1(x) / x - bessel_j0(x)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// First four positive zeros of J1 to six decimals.
pub const J1_ZEROS: [f64; 4] = [3.831706, 7.015587, 10.173468, 13.323692];

/// The `m`-th positive zero of J1, by bisection around McMahon's estimate.
pub fn bessel_j1_zero(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::ArgumentRange("Bessel zero order starts at 1".into()));
    }
    let beta = (f64::from(m) + 0.25) * PI;
    let guess = beta - 3.0 / (8.0 * beta);
    Ok(bisect(bessel_j1, guess - 0.3, guess + 0.3))
}

/// `2 J1(u) / u`, equal to one at `u = 0`.
pub fn airy_field(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 8.0 + u2 * u2 / 192.0
    } else {
        2.0 * bessel_j1(u) / u
    }
}

/// Paraxial focal-plane coordinate `u = 2πR x_d / (λ Zf)`.
pub fn airy_argument(detector_x: f64, radius: f64, focal_length: f64, wavelength: f64) -> f64 {
    2.0 * PI * radius * detector_x / (wavelength * focal_length)
}

/// Relative Airy intensity `[2 J1(u) / u]²` at focal-plane distance `detector_x`.
pub fn airy_intensity(detector_x: f64, radius: f64, focal_length: f64, wavelength: f64) -> f64 {
    airy_field(airy_argument(detector_x.abs(), radius, focal_length, wavelength)).powi(2)
}

/// Focal-plane distance of the `m`-th dark ring.
pub fn airy_minimum_position(m: u32, radius: f64, focal_length: f64, wavelength: f64) -> Result<f64> {
    let zero = match m {
        1..=4 => J1_ZEROS[m as usize - 1],
        _ => bessel_j1_zero(m)?,
    };
    Ok(zero * wavelength * focal_length / (2.0 * PI * radius))
}

/// Argument of the `m`-th secondary maximum (the `m`-th zero of J2).
pub fn airy_peak_argument(m: u32) -> Result<f64> {
    let lo = bessel_j1_zero(m)?;
    let hi = bessel_j1_zero(m + 1)?;
    Ok(bisect(bessel_j2, lo, hi))
}

/// Fraction of the total energy inside radius `u`: `1 - J0²(u) - J1²(u)`.
pub fn encircled_energy(u: f64) -> f64 {
    let (j0, j1) = (bessel_j0(u), bessel_j1(u));
    1.0 - j0 * j0 - j1 * j1
}

/// Energy fraction inside the first dark ring (the Airy disk).
pub fn airy_disk_fraction() -> f64 {
    encircled_energy(bessel_j1_zero(1).expect("order 1"))
}

/// Classical expectations for the focal-plane pattern of a circular mirror.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AiryPrediction {
    /// Dark-ring positions in mm, order 1, 2, ...
    pub minima: Vec<f64>,
    /// Secondary-maximum positions in mm.
    pub peak_positions: Vec<f64>,
    /// Secondary-maximum intensities relative to the centre.
    pub peak_intensities: Vec<f64>,
    pub disk_fraction: f64,
}

impl AiryPrediction {
    pub fn new(radius: f64, focal_length: f64, wavelength: f64, orders: u32) -> Result<Self> {
        let scale = wavelength * focal_length / (2.0 * PI * radius);
        let mut minima = Vec::new();
        let mut peak_positions = Vec::new();
        let mut peak_intensities = Vec::new();
        for m in 1..=orders {
            minima.push(airy_minimum_position(m, radius, focal_length, wavelength)?);
            let u = airy_peak_argument(m)?;
            peak_positions.push(u * scale);
            peak_intensities.push(airy_field(u).powi(2));
        }
        Ok(Self { minima, peak_positions, peak_intensities, disk_fraction: airy_disk_fraction() })
    }
}

/// Position of the `m`-th slit-diffraction minimum, `z_d tan(asin(mλ/D))`.
pub fn rect_minima(m: i32, width: f64, detector_z: f64, wavelength: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ArgumentRange("minimum order must be non-zero".into()));
    }
    let s = f64::from(m) * wavelength / width;
    if s.abs() >= 1.0 {
        return Err(Error::ArgumentRange(format!("|m|λ/D = {} must be below 1", s.abs())));
    }
    Ok(detector_z * s.asin().tan())
}

/// `sinc²(π · rate · Zw / λ)`: attenuation of a slab whose phase advances
/// `rate` turns per wavelength of thickness.
pub fn thickness_envelope(thickness: f64, wavelength: f64, rate: f64) -> f64 {
    let x = PI * rate * thickness / wavelength;
    if x.abs() < 1e-8 {
        1.0
    } else {
        (x.sin() / x).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `J_n(x) = (1/π) ∫_0^π cos(nτ - x sin τ) dτ` by the trapezoid rule, which
    /// converges geometrically for this periodic integrand.
    fn bessel_by_integral(n: u32, x: f64) -> f64 {
        let steps = 4000;
        let h = PI / steps as f64;
        let g = |t: f64| (f64::from(n) * t - x * t.sin()).cos();
        let mut s = 0.5 * (g(0.0) + g(PI));
        for i in 1..steps {
            s += g(i as f64 * h);
        }
        s * h / PI
    }

    #[test]
    fn matches_integral_representation_on_0_30() {
        let mut worst: f64 = 0.0;
        for i in 0..=3000 {
            let x = i as f64 * 0.01;
            worst = worst.max((bessel_j1(x) - bessel_by_integral(1, x)).abs());
            worst = worst.max((bessel_j0(x) - bessel_by_integral(0, x)).abs());
        }
        assert!(worst < 1e-8, "worst error {worst}");
    }

    #[test]
    fn spot_values() {
        assert_eq!(bessel_j1(0.0), 0.0);
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!(bessel_j1(3.8317).abs() < 1e-4);
        assert!((bessel_j1(1.8412) - 0.5819).abs() < 1e-4);
        assert!((bessel_j1(-2.0) + bessel_j1(2.0)).abs() < 1e-16);
    }

    #[test]
    fn wronskian_like_combination() {
        // J0 J1' - J0' J1 with J0' = -J1 and J1' = J0 - J1/x
        let combo = |j0: f64, j1: f64, x: f64| j0 * (j0 - j1 / x) + j1 * j1;
        for x in [1.0, 5.0, 10.0] {
            let ours = combo(bessel_j0(x), bessel_j1(x), x);
            let reference = combo(bessel_by_integral(0, x), bessel_by_integral(1, x), x);
            assert!((ours - reference).abs() < 1e-7);
        }
    }

    #[test]
    fn tabulated_zeros_agree_with_bisection() {
        for (m, &z) in J1_ZEROS.iter().enumerate() {
            let found = bessel_j1_zero(m as u32 + 1).unwrap();
            assert!((found - z).abs() < 1e-5, "{found} vs {z}");
            assert!(bessel_j1(found).abs() < 1e-12);
        }
        assert!(bessel_j1_zero(0).is_err());
    }

    #[test]
    fn airy_pattern_for_the_five_millimetre_mirror() {
        let (r, zf, lambda) = (5.0, 1000.0, 1e-3);
        assert_eq!(airy_intensity(0.0, r, zf, lambda), 1.0);
        let first = airy_minimum_position(1, r, zf, lambda).unwrap();
        assert!((first - 0.122).abs() < 1e-3);
        assert!(airy_intensity(first, r, zf, lambda) < 1e-6);
        assert!(airy_intensity(0.122, r, zf, lambda) < 1e-6);
        let fourth = airy_minimum_position(4, r, zf, lambda).unwrap();
        assert!((fourth - 0.424).abs() < 1e-3);
        // doubling the radius halves the ring positions
        let doubled = airy_minimum_position(1, 2.0 * r, zf, lambda).unwrap();
        assert!((doubled - first / 2.0).abs() < 1e-15);
    }

    #[test]
    fn airy_prediction_invariants() {
        let p = AiryPrediction::new(5.0, 1000.0, 1e-3, 4).unwrap();
        let expected_peaks = [0.01750, 0.004156, 0.001602, 0.000779];
        for (got, want) in p.peak_intensities.iter().zip(expected_peaks) {
            assert!((got - want).abs() / want < 1e-3, "{got} vs {want}");
        }
        assert!(p.minima.windows(2).all(|w| w[0] < w[1]));
        assert!(p.peak_intensities.windows(2).all(|w| w[0] > w[1]));
        assert!(p.peak_intensities.iter().all(|&v| v < 0.02));
        for (&x, pair) in p.peak_positions.iter().zip(p.minima.windows(2)) {
            assert!(pair[0] < x && x < pair[1]);
        }
        for &x in &p.minima {
            assert!(airy_intensity(x, 5.0, 1000.0, 1e-3) < 1e-6);
        }
    }

    #[test]
    fn disk_fraction() {
        let f = airy_disk_fraction();
        assert!((f - 0.838).abs() < 1e-3);
        assert!((1.0 - f - 0.162).abs() < 1e-3);
        let mut prev = 0.0;
        for m in 1..=6 {
            let e = encircled_energy(bessel_j1_zero(m).unwrap());
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn slit_minima() {
        let x1 = rect_minima(1, 1.0, 10.0, 1e-3).unwrap();
        assert!((x1 - 0.010).abs() < 1e-5);
        assert!((rect_minima(3, 1.0, 10.0, 1e-3).unwrap() - 0.030).abs() < 5e-5);
        assert_eq!(rect_minima(-1, 1.0, 10.0, 1e-3).unwrap(), -x1);
        assert!(rect_minima(0, 1.0, 10.0, 1e-3).is_err());
        assert!(rect_minima(1000, 1.0, 10.0, 1e-3).is_err());
        let xs: Vec<f64> = (1..50).map(|m| rect_minima(m, 1.0, 10.0, 1e-3).unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn envelope_zeros() {
        assert_eq!(thickness_envelope(0.0, 1e-3, 2.0), 1.0);
        assert!(thickness_envelope(0.5e-3, 1e-3, 2.0) < 1e-30);
        assert!(thickness_envelope(1.0e-3, 1e-3, 1.0) < 1e-30);
    }

    proptest! {
        #[test]
        fn envelope_is_bounded(zw in 0.0f64..1e-2, rate in 0.5f64..3.0) {
            let e = thickness_envelope(zw, 1e-3, rate);
            prop_assert!((0.0..=1.0).contains(&e));
        }

        #[test]
        fn slit_minima_are_odd(m in 1i32..900) {
            let a = rect_minima(m, 1.0, 10.0, 1e-3).unwrap();
            let b = rect_minima(-m, 1.0, 10.0, 1e-3).unwrap();
            prop_assert_eq!(a, -b);
        }
    }
}
