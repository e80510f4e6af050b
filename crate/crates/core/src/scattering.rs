//! Out-of-FOV in-scattering and the satellite reflection chain.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::atmosphere::{self, TransmittanceModel};
use crate::beam::{intensity, BeamState};
use crate::error::{Error, Result};
use crate::model::{PathGeometry, Receiver};

/// In-scattering suppression `κ` with its uncertainty band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutOfFovParams {
    pub kappa: f64,
    /// `[low, high]`
    pub kappa_range: [f64; 2],
}

impl Default for OutOfFovParams {
    fn default() -> Self {
        OutOfFovParams {
            kappa: 1e-7,
            kappa_range: [1e-9, 1e-6],
        }
    }
}

impl OutOfFovParams {
    pub fn validate(&self, path: &str) -> Result<()> {
        let [lo, hi] = self.kappa_range;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return Err(Error::config(
                format!("{path}.kappa_range"),
                "must satisfy 0 < low <= high <= 1",
            ));
        }
        if !(self.kappa >= lo && self.kappa <= hi) {
            return Err(Error::config(format!("{path}.kappa"), "must lie inside kappa_range"));
        }
        Ok(())
    }
}

/// Reflecting surface of the illuminated satellite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SatelliteSurface {
    /// m²
    pub area: f64,
    pub albedo: f64,
    /// `[low, high]` (m²)
    pub area_range: [f64; 2],
    /// `[low, high]`
    pub albedo_range: [f64; 2],
}

impl Default for SatelliteSurface {
    fn default() -> Self {
        // Band edges: 1U CubeSat with suppressed albedo up to a Micius-sized
        // fully reflecting surface. Nominal is the geometric middle of each.
        SatelliteSurface {
            area: 0.2,
            albedo: 0.1,
            area_range: [0.01, 4.0],
            albedo_range: [0.01, 1.0],
        }
    }
}

impl SatelliteSurface {
    pub fn validate(&self, path: &str) -> Result<()> {
        let [alo, ahi] = self.area_range;
        if !(alo > 0.0 && alo <= ahi && ahi.is_finite()) {
            return Err(Error::config(format!("{path}.area_range"), "must satisfy 0 < low <= high"));
        }
        let [elo, ehi] = self.albedo_range;
        if !(elo > 0.0 && elo <= ehi && ehi <= 1.0) {
            return Err(Error::config(
                format!("{path}.albedo_range"),
                "must satisfy 0 < low <= high <= 1",
            ));
        }
        if !(self.area >= alo && self.area <= ahi) {
            return Err(Error::config(format!("{path}.area"), "must lie inside area_range"));
        }
        if !(self.albedo >= elo && self.albedo <= ehi) {
            return Err(Error::config(format!("{path}.albedo"), "must lie inside albedo_range"));
        }
        Ok(())
    }

    pub fn low(&self) -> Self {
        SatelliteSurface {
            area: self.area_range[0],
            albedo: self.albedo_range[0],
            ..*self
        }
    }

    pub fn high(&self) -> Self {
        SatelliteSurface {
            area: self.area_range[1],
            albedo: self.albedo_range[1],
            ..*self
        }
    }
}

/// Off-axis power coupled into the receiver:
/// `tau_r I(0) κ (π D_r²/4) cos²φ`.
pub fn out_of_fov_power(
    state: &BeamState,
    p_ini: f64,
    receiver: &Receiver,
    zenith: f64,
    kappa: f64,
) -> f64 {
    let cos = zenith.cos().max(0.0);
    let cross_section = kappa * receiver.area() * cos * cos;
    receiver.optical_loss * intensity(state, p_ini, 0.0) * cross_section
}

/// Reflection cross-section `S ε √cos φ` (m²).
pub fn reflection_cross_section(surface: &SatelliteSurface, zenith: f64) -> f64 {
    surface.area * surface.albedo * zenith.cos().max(0.0).sqrt()
}

/// The return leg of a ground→satellite→ground reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnLeg {
    /// Satellite-to-receiver distance (m).
    pub range: f64,
    /// Zenith angle of the satellite seen from the receiver (rad).
    pub zenith: f64,
    /// Atmospheric transmittance of the return path.
    pub transmittance: f64,
}

impl ReturnLeg {
    /// Build the return leg for a reflection off the satellite at the top of
    /// `uplink`. Both paths must end at the same satellite altitude.
    pub fn from_geometry(
        uplink: &PathGeometry,
        downlink: &PathGeometry,
        wavelength: f64,
        model: &TransmittanceModel,
        ceiling: f64,
    ) -> Result<Self> {
        if (uplink.h1 - downlink.h1).abs() > 1e-9 * uplink.h1.abs().max(1.0) {
            return Err(Error::config(
                "scenario.downlink",
                format!(
                    "uplink and downlink must share the satellite altitude ({} vs {})",
                    uplink.h1, downlink.h1
                ),
            ));
        }
        Ok(ReturnLeg {
            range: downlink.slant_range(),
            zenith: downlink.zenith,
            transmittance: atmosphere::transmittance(downlink, wavelength, model, ceiling)?,
        })
    }
}

/// Power received on the ground after the uplink beam is reflected by a
/// satellite acting as a Lambertian point scatterer.
///
/// `P = [I_up(0) σ_sat(φ_up)] cos(φ_down)/(π L²) tau_a (π D_r²/4) tau_r`.
pub fn ground_leo_ground_power(
    uplink: &BeamState,
    p_ini: f64,
    surface: &SatelliteSurface,
    uplink_zenith: f64,
    downlink: &ReturnLeg,
    receiver: &Receiver,
) -> f64 {
    let reflected = intensity(uplink, p_ini, 0.0) * reflection_cross_section(surface, uplink_zenith);
    let irradiance = reflected * downlink.zenith.cos().max(0.0)
        / (PI * downlink.range * downlink.range)
        * downlink.transmittance;
    irradiance * receiver.area() * receiver.optical_loss
}
