//! Platforms, path geometry, receivers, laser sources and FOV arithmetic.
//!
//! All quantities are SI: metres, watts, radians.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Propagation direction relative to the ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Ground (lower endpoint) towards space.
    Uplink,
    /// Space (upper endpoint) towards the ground.
    Downlink,
}

/// A straight path between two altitudes over a plane-parallel Earth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathGeometry {
    /// Altitude of the lower endpoint (m).
    pub h0: f64,
    /// Altitude of the upper endpoint (m).
    pub h1: f64,
    /// Zenith angle at the lower endpoint (rad).
    pub zenith: f64,
    pub direction: Direction,
}

impl PathGeometry {
    pub fn new(h0: f64, h1: f64, zenith: f64, direction: Direction) -> Result<Self> {
        let g = PathGeometry {
            h0,
            h1,
            zenith,
            direction,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h0.is_finite() && self.h1.is_finite()) || self.h0 < 0.0 || self.h0 >= self.h1 {
            return Err(Error::domain(format!(
                "path altitudes must satisfy 0 <= h0 < h1 (got h0={}, h1={})",
                self.h0, self.h1
            )));
        }
        if !(0.0..FRAC_PI_2).contains(&self.zenith) {
            return Err(Error::domain(format!(
                "zenith angle must lie in [0, pi/2) (got {})",
                self.zenith
            )));
        }
        Ok(())
    }

    /// Slant range, see [`slant_range`].
    pub fn slant_range(&self) -> f64 {
        (self.h1 - self.h0) / self.zenith.cos()
    }

    /// Copy of this path with a different zenith angle.
    pub fn with_zenith(&self, zenith: f64) -> Result<Self> {
        PathGeometry::new(self.h0, self.h1, zenith, self.direction)
    }
}

/// Slant range `L = (h1 - h0) / cos(zenith)`; Earth curvature is ignored.
pub fn slant_range(geometry: &PathGeometry) -> Result<f64> {
    geometry.validate()?;
    Ok(geometry.slant_range())
}

/// Diameter of the FOV cone at distance `distance` for a full cone angle
/// `fov_angle` (small-angle: `d = angle * distance`).
pub fn fov_diameter(fov_angle: f64, distance: f64) -> Result<f64> {
    if !(fov_angle >= 0.0 && distance >= 0.0) {
        return Err(Error::domain(format!(
            "FOV angle and distance must be non-negative (got {fov_angle}, {distance})"
        )));
    }
    Ok(fov_angle * distance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlatformKind {
    GroundFixed,
    GroundMobile,
    Drone,
    Plane,
    Stratospheric,
    LeoSat,
    GeoSat,
}

impl PlatformKind {
    pub const ALL: [PlatformKind; 7] = [
        PlatformKind::GroundFixed,
        PlatformKind::GroundMobile,
        PlatformKind::Drone,
        PlatformKind::Plane,
        PlatformKind::Stratospheric,
        PlatformKind::LeoSat,
        PlatformKind::GeoSat,
    ];

    pub fn is_ground(self) -> bool {
        matches!(self, PlatformKind::GroundFixed | PlatformKind::GroundMobile)
    }

    pub fn is_airborne(self) -> bool {
        matches!(
            self,
            PlatformKind::Drone | PlatformKind::Plane | PlatformKind::Stratospheric
        )
    }

    pub fn is_space(self) -> bool {
        matches!(self, PlatformKind::LeoSat | PlatformKind::GeoSat)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PlatformKind::GroundFixed => "ground_fixed",
            PlatformKind::GroundMobile => "ground_mobile",
            PlatformKind::Drone => "drone",
            PlatformKind::Plane => "plane",
            PlatformKind::Stratospheric => "stratospheric",
            PlatformKind::LeoSat => "leo_sat",
            PlatformKind::GeoSat => "geo_sat",
        }
    }

    /// Built-in preset for this kind.
    pub fn preset(self) -> Platform {
        let kmh = 1.0 / 3.6;
        let (altitude, speed, envelope) = match self {
            PlatformKind::GroundFixed | PlatformKind::GroundMobile => (0.0, 0.0, [1e3, 1e6]),
            PlatformKind::Drone => (5e3, 150.0 * kmh, [100.0, 2e3]),
            PlatformKind::Plane => (10e3, 830.0 * kmh, [1e3, 100e3]),
            PlatformKind::Stratospheric => (30e3, 50.0 * kmh, [100.0, 2e3]),
            PlatformKind::LeoSat => (500e3, 7778.0, [100.0, 2e3]),
            // Only "limited" power is stated for GEO; the LEO envelope is reused.
            PlatformKind::GeoSat => (35_800e3, 0.0, [100.0, 2e3]),
        };
        Platform {
            kind: self,
            altitude,
            speed,
            power_envelope: envelope,
        }
    }
}

impl std::str::FromStr for PlatformKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PlatformKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown platform `{s}`"))
    }
}

/// A platform carrying a laser or a receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Platform {
    pub kind: PlatformKind,
    /// m
    pub altitude: f64,
    /// m/s, informational only.
    pub speed: f64,
    /// `[min, max]` available laser power (W).
    pub power_envelope: [f64; 2],
}

impl Platform {
    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.altitude >= 0.0 && self.altitude.is_finite()) {
            return Err(Error::config(format!("{path}.altitude"), "must be finite and >= 0"));
        }
        if !(self.speed >= 0.0 && self.speed.is_finite()) {
            return Err(Error::config(format!("{path}.speed"), "must be finite and >= 0"));
        }
        let [lo, hi] = self.power_envelope;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::config(
                format!("{path}.power_envelope"),
                "must satisfy 0 < min <= max",
            ));
        }
        Ok(())
    }
}

/// The attacked quantum receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Receiver {
    /// Aperture diameter `D_r` (m).
    pub aperture_diameter: f64,
    /// Optical efficiency `tau_r` in (0, 1].
    pub optical_loss: f64,
    /// Full FOV cone angle (rad).
    pub fov_angle: f64,
}

impl Receiver {
    pub fn new(aperture_diameter: f64) -> Self {
        Receiver {
            aperture_diameter,
            optical_loss: 1.0,
            fov_angle: 10e-6,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.aperture_diameter > 0.0 && self.aperture_diameter.is_finite()) {
            return Err(Error::config(format!("{path}.aperture_diameter"), "must be > 0"));
        }
        if !(self.optical_loss > 0.0 && self.optical_loss <= 1.0) {
            return Err(Error::config(format!("{path}.optical_loss"), "must lie in (0, 1]"));
        }
        if !(self.fov_angle > 0.0 && self.fov_angle.is_finite()) {
            return Err(Error::config(format!("{path}.fov_angle"), "must be > 0"));
        }
        Ok(())
    }

    /// Collecting area (m²).
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.aperture_diameter * self.aperture_diameter / 4.0
    }
}

/// The attacking laser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserSource {
    /// Output power `P_ini` (W).
    pub power: f64,
    /// Transmit aperture diameter (m).
    pub aperture_diameter: f64,
    /// m
    pub wavelength: f64,
    /// Beam quality `M` (the formulas use `M²`).
    pub beam_quality: f64,
    /// Focal range (m); `None` means collimated (infinite).
    pub focal_range: Option<f64>,
    pub has_adaptive_optics: bool,
    /// Pointing spread `sigma_p` (m).
    pub pointing_sigma: f64,
}

impl LaserSource {
    pub fn new(power: f64, aperture_diameter: f64, wavelength: f64) -> Self {
        LaserSource {
            power,
            aperture_diameter,
            wavelength,
            beam_quality: 1.0,
            focal_range: None,
            has_adaptive_optics: false,
            pointing_sigma: 0.0,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::config(format!("{path}.power"), "must be > 0"));
        }
        if !(self.aperture_diameter > 0.0 && self.aperture_diameter.is_finite()) {
            return Err(Error::config(format!("{path}.aperture_diameter"), "must be > 0"));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::config(format!("{path}.wavelength"), "must be > 0"));
        }
        if !(self.beam_quality >= 1.0 && self.beam_quality.is_finite()) {
            return Err(Error::config(format!("{path}.beam_quality"), "must be >= 1"));
        }
        if let Some(f) = self.focal_range {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::config(format!("{path}.focal_range"), "must be > 0"));
            }
        }
        if !(self.pointing_sigma >= 0.0 && self.pointing_sigma.is_finite()) {
            return Err(Error::config(format!("{path}.pointing_sigma"), "must be >= 0"));
        }
        Ok(())
    }

    /// Wave number `2π/λ`.
    pub fn wave_number(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }
}
