//! Photon detection probabilities from path integrals over conduction-electron volumes.
//!
//! Every path from a source, through a scattering point inside the volume, to a
//! detector carries a unit complex amplitude whose phase advances one turn per
//! wavelength of path length. The detection probability is the squared magnitude
//! of the integral of those amplitudes, normalized by the squared volume.
//!
//! The crate is split into four layers:
//!
//! - [`geometry`]: sheet and sphere specifications, path lengths, phases and amplitudes.
//! - [`quadrature`]: composite quadratic integration on disks, slabs, boxes and balls,
//!   compensated summation, and an independent midpoint oracle.
//! - [`scenarios`]: detection probabilities and parameter sweeps for the parabolic
//!   mirror, the side-illuminated sheet and the extended sphere.
//! - [`reference`]: closed-form diffraction results (Airy pattern, slit minima,
//!   thickness envelope) and the Bessel functions they need.

pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod reference;
pub mod scenarios;

pub use error::{Error, Result};
pub use geometry::{
    ComplexAmp, ParabolicSheetSpec, Point3, SideSheetSpec, SphereSpec, DEFAULT_WAVELENGTH_MM,
};
pub use quadrature::{Domain, IntegralResult, Interval, SamplingPlan};
pub use scenarios::{ProbabilityResult, ScanGrid, ScanResult, ScanRow};
