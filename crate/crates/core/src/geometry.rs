//! Scatter geometry for the three volumes: a parabolic mirror sheet, a sheet lit
//! from its edge, and a sphere with an internal source.
//!
//! All lengths are millimetres. Phases are taken relative to a per-scenario
//! reference length so the trigonometric argument stays small; a constant phase
//! offset multiplies the whole integral by a unit factor and leaves every
//! probability unchanged.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit path amplitude, and also the accumulator type for integrals of them.
pub type ComplexAmp = Complex64;

/// 1 µm photons.
pub const DEFAULT_WAVELENGTH_MM: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Same direction, unit length. `None` for the zero vector.
    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub(crate) fn check_finite(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidGeometry(format!("{name} must be positive and finite, got {value}")))
    }
}

fn non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidGeometry(format!("{name} must be non-negative and finite, got {value}")))
    }
}

/// Circular parabolic sheet `z = z0 + a(x² + y²)` with `a = 1/(4 Zf)`, lit by a
/// distant on-axis source. Paths are measured from the focal plane, where every
/// incoming ray has zero phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicSheetSpec {
    radius: f64,
    focal_length: f64,
    thickness: f64,
    wavelength: f64,
    curvature: f64,
    z_offset: f64,
}

impl ParabolicSheetSpec {
    pub fn new(radius: f64, focal_length: f64, thickness: f64, wavelength: f64) -> Result<Self> {
        let focal_length = positive("focal_length_Zf", focal_length)?;
        Ok(Self {
            radius: positive("radius_R", radius)?,
            focal_length,
            thickness: non_negative("thickness_Zw", thickness)?,
            wavelength: positive("wavelength", wavelength)?,
            curvature: 0.25 / focal_length,
            z_offset: 0.0,
        })
    }

    /// Shifts the whole sheet along z; the z0 integration range becomes
    /// `[offset - Zw/2, offset + Zw/2]`.
    pub fn with_z_offset(mut self, z_offset: f64) -> Result<Self> {
        if !z_offset.is_finite() {
            return Err(Error::NonFinite("z_offset"));
        }
        self.z_offset = z_offset;
        Ok(self)
    }

    pub fn with_thickness(self, thickness: f64) -> Result<Self> {
        Self::new(self.radius, self.focal_length, thickness, self.wavelength)?.with_z_offset(self.z_offset)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }
    pub fn thickness(&self) -> f64 {
        self.thickness
    }
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
    pub fn curvature(&self) -> f64 {
        self.curvature
    }
    pub fn z_offset(&self) -> f64 {
        self.z_offset
    }

    /// Range of the sheet displacement z0.
    pub fn z0_range(&self) -> (f64, f64) {
        let half = 0.5 * self.thickness;
        (self.z_offset - half, self.z_offset + half)
    }

    pub fn focal_point(&self) -> Point3 {
        Point3::new(0.0, 0.0, self.focal_length)
    }

    /// Path length of the ray that hits the focal point, `2 Zf`.
    pub fn reference_length(&self) -> f64 {
        2.0 * self.focal_length
    }

    /// Unchecked surface height.
    #[inline]
    pub fn height(&self, x: f64, y: f64, z0: f64) -> f64 {
        z0 + self.curvature * (x * x + y * y)
    }

    /// Focal plane to `scatter`, then on to `detector`.
    #[inline]
    pub fn path_length(&self, scatter: Point3, detector: Point3) -> f64 {
        (self.focal_length - scatter.z) + scatter.distance(detector)
    }

    /// `path_length - 2 Zf`, without the cancellation of two ~`2 Zf` numbers.
    ///
    /// With `s = Zf + z` and `d` the scatter-detector distance, the excess is
    /// `d - s = (d² - s²) / (d + s)`, and the numerator expands into small terms.
    #[inline]
    pub fn path_excess(&self, scatter: Point3, detector: Point3) -> f64 {
        let dx = detector.x - scatter.x;
        let dy = detector.y - scatter.y;
        let dz = detector.z - scatter.z;
        let s = self.focal_length + scatter.z;
        let d = (dx * dx + dy * dy + dz * dz).sqrt();
        // (zd - z)² - (Zf + z)² = (zd - Zf - 2z)(zd + Zf)
        let numer = dx * dx + dy * dy + (detector.z - self.focal_length - 2.0 * scatter.z) * (detector.z + self.focal_length);
        numer / (d + s)
    }

    /// Phase at the detector for the path through `(x, y)` on the sheet displaced by `z0`.
    #[inline]
    pub fn phase_at(&self, x: f64, y: f64, z0: f64, detector: Point3) -> f64 {
        let scatter = Point3::new(x, y, self.height(x, y, z0));
        phase(self.path_excess(scatter, detector), self.wavelength, 0.0)
    }
}

/// Sheet of width `D` and thickness `Zw` lit from its left edge at `x = -D/2`.
/// The detector sits in the x-z plane above the sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideSheetSpec {
    width: f64,
    thickness: f64,
    wavelength: f64,
}

impl SideSheetSpec {
    pub fn new(width: f64, thickness: f64, wavelength: f64) -> Result<Self> {
        Ok(Self {
            width: positive("width_D", width)?,
            thickness: non_negative("thickness_Zw", thickness)?,
            wavelength: positive("wavelength", wavelength)?,
        })
    }

    pub fn with_thickness(self, thickness: f64) -> Result<Self> {
        Self::new(self.width, thickness, self.wavelength)
    }

    pub fn width(&self) -> f64 {
        self.width
    }
    pub fn thickness(&self) -> f64 {
        self.thickness
    }
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    #[inline]
    pub fn path_length(&self, x: f64, z: f64, detector_x: f64, detector_z: f64) -> f64 {
        let dx = detector_x - x;
        let dz = detector_z - z;
        x + 0.5 * self.width + (dx * dx + dz * dz).sqrt()
    }

    /// `path_length - detector_z`, with the vertical leg's cancellation done algebraically.
    #[inline]
    pub fn path_excess(&self, x: f64, z: f64, detector_x: f64, detector_z: f64) -> f64 {
        let dx = detector_x - x;
        let dz = detector_z - z;
        let d = (dx * dx + dz * dz).sqrt();
        // (zd - z)² - zd² = z (z - 2 zd)
        let leg = if detector_z > 0.0 {
            (dx * dx + z * (z - 2.0 * detector_z)) / (d + detector_z)
        } else {
            d - detector_z
        };
        x + 0.5 * self.width + leg
    }

    #[inline]
    pub fn phase_at(&self, x: f64, z: f64, detector_x: f64, detector_z: f64) -> f64 {
        phase(self.path_excess(x, z, detector_x, detector_z), self.wavelength, 0.0)
    }
}

/// Ball of radius `R` filled with scatterers, a source at its centre and a
/// detector at distance `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSpec {
    sphere_radius: f64,
    detector_radius: f64,
    wavelength: f64,
}

impl SphereSpec {
    pub fn new(sphere_radius: f64, detector_radius: f64, wavelength: f64) -> Result<Self> {
        let wavelength = positive("wavelength", wavelength)?;
        let detector_radius = positive("detector_radius_r", detector_radius)?;
        let sphere_radius = positive("sphere_radius_R", sphere_radius)?;
        if !(sphere_radius > detector_radius && detector_radius > wavelength) {
            return Err(Error::InvalidGeometry(format!(
                "need sphere_radius_R > detector_radius_r > wavelength, got {sphere_radius} > {detector_radius} > {wavelength}"
            )));
        }
        Ok(Self { sphere_radius, detector_radius, wavelength })
    }

    pub fn sphere_radius(&self) -> f64 {
        self.sphere_radius
    }
    pub fn detector_radius(&self) -> f64 {
        self.detector_radius
    }
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Smaller of `R / r` and `r / λ`; well below 4 the sphere is not really "extended".
    pub fn ordering_margin(&self) -> f64 {
        (self.sphere_radius / self.detector_radius).min(self.detector_radius / self.wavelength)
    }

    pub fn detector_point(&self, direction: Point3) -> Result<Point3> {
        let unit = direction
            .check_finite("detector direction")?
            .normalized()
            .ok_or_else(|| Error::InvalidGeometry("detector direction must be non-zero".into()))?;
        Ok(unit * self.detector_radius)
    }

    /// Source at the origin to `scatter`, then to `detector`, minus `r`.
    #[inline]
    pub fn path_excess(&self, scatter: Point3, detector: Point3) -> f64 {
        scatter.norm() + scatter.distance(detector) - self.detector_radius
    }

    #[inline]
    pub fn phase_at(&self, scatter: Point3, detector: Point3) -> f64 {
        phase(self.path_excess(scatter, detector), self.wavelength, 0.0)
    }
}

/// Surface height of the parabolic sheet at `(x, y)` for displacement `z0`.
pub fn parabola_z(spec: &ParabolicSheetSpec, x: f64, y: f64, z0: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite() && z0.is_finite()) {
        return Err(Error::NonFinite("parabola coordinates"));
    }
    let r = spec.radius;
    if x * x + y * y > r * r {
        return Err(Error::OutsideFootprint { x, y, radius: r });
    }
    Ok(spec.height(x, y, z0))
}

pub fn path_length_parabolic(spec: &ParabolicSheetSpec, scatter: Point3, detector: Point3) -> Result<f64> {
    let scatter = scatter.check_finite("scatter point")?;
    let detector = detector.check_finite("detector point")?;
    Ok(spec.path_length(scatter, detector))
}

pub fn path_length_side(spec: &SideSheetSpec, x: f64, z: f64, detector_x: f64, detector_z: f64) -> Result<f64> {
    let half = 0.5 * spec.width;
    if !(-half..=half).contains(&x) {
        return Err(Error::OutOfRange { name: "x", value: x, lo: -half, hi: half });
    }
    if !(z.is_finite() && detector_x.is_finite() && detector_z.is_finite()) {
        return Err(Error::NonFinite("side sheet coordinates"));
    }
    Ok(spec.path_length(x, z, detector_x, detector_z))
}

/// Source at the origin, detector at `(r, 0, 0)`. Never shorter than `r`.
pub fn path_length_sphere(scatter: Point3, detector_r: f64) -> f64 {
    scatter.norm() + scatter.distance(Point3::new(detector_r, 0.0, 0.0))
}

/// One full turn per wavelength of path beyond `l_ref`.
#[inline]
pub fn phase(l: f64, wavelength: f64, l_ref: f64) -> f64 {
    TAU * (l - l_ref) / wavelength
}

#[inline]
pub fn unit_amplitude(theta: f64) -> ComplexAmp {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}
