//! Refractive-index structure profile, path-weighted turbulence moments and
//! atmospheric transmittance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Direction, PathGeometry};
use crate::quad::adaptive_simpson;

/// Anything that yields `Cn²(h)` in m^(-2/3) for an altitude in metres.
pub trait Cn2Profile {
    fn cn2(&self, h: f64) -> f64;
}

/// Hufnagel–Valley profile. Defaults are the HV5/7 variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HufnagelValley {
    /// Ground-level strength `A0` (m^(-2/3)).
    #[serde(rename = "A0")]
    pub a0: f64,
    /// RMS high-altitude wind speed (m/s).
    #[serde(rename = "v")]
    pub wind_speed: f64,
}

impl Default for HufnagelValley {
    fn default() -> Self {
        HufnagelValley {
            a0: 1.7e-14,
            wind_speed: 21.0,
        }
    }
}

impl HufnagelValley {
    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.a0 > 0.0 && self.a0.is_finite()) {
            return Err(Error::config(format!("{path}.A0"), "must be > 0"));
        }
        if !(self.wind_speed > 0.0 && self.wind_speed.is_finite()) {
            return Err(Error::config(format!("{path}.v"), "must be > 0"));
        }
        Ok(())
    }
}

impl Cn2Profile for HufnagelValley {
    fn cn2(&self, h: f64) -> f64 {
        0.00594 * (self.wind_speed / 27.0) * (1e-5 * h).powi(10) * (-h / 1000.0).exp()
            + 2.7e-16 * (-h / 1500.0).exp()
            + self.a0 * (-h / 100.0).exp()
    }
}

/// Altitude-independent `Cn²`, mostly useful for checking the moment
/// integrals against closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformProfile(pub f64);

impl Cn2Profile for UniformProfile {
    fn cn2(&self, _h: f64) -> f64 {
        self.0
    }
}

/// `Cn²(h)` for the given profile; negative altitudes are rejected.
pub fn cn2(h: f64, profile: &impl Cn2Profile) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(Error::domain(format!("altitude must be >= 0 (got {h})")));
    }
    Ok(profile.cn2(h))
}

/// Numerical settings for the moment integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-6,
            max_depth: 20,
        }
    }
}

/// Path-weighted turbulence moment `μ` (m^(1/3)).
///
/// Downlink weights `Cn²` by `x^(5/3)` and uplink by `(1 - x)^(5/3)`, with
/// `x = (h - h0)/(h1 - h0)`. The profile is truncated at `ceiling`.
pub fn turbulence_moment(
    geometry: &PathGeometry,
    profile: &impl Cn2Profile,
    ceiling: f64,
    quad: QuadratureSettings,
) -> Result<f64> {
    let (h0, h1) = (geometry.h0, geometry.h1);
    if !(h0 < h1) || h0 < 0.0 {
        return Err(Error::domain(format!(
            "moment needs 0 <= h0 < h1 (got h0={h0}, h1={h1})"
        )));
    }
    let top = h1.min(ceiling);
    if h0 >= top {
        return Ok(0.0);
    }
    let span = h1 - h0;
    let value = match geometry.direction {
        Direction::Downlink => adaptive_simpson(
            |h| profile.cn2(h) * ((h - h0) / span).powf(5.0 / 3.0),
            h0,
            top,
            quad.rel_tol,
            quad.max_depth,
        ),
        Direction::Uplink => adaptive_simpson(
            |h| profile.cn2(h) * (1.0 - (h - h0) / span).max(0.0).powf(5.0 / 3.0),
            h0,
            top,
            quad.rel_tol,
            quad.max_depth,
        ),
    };
    Ok(value)
}

/// Beer–Lambert transmittance model with one zenith value per wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransmittanceModel {
    /// `(wavelength m, zenith transmittance)` pairs, ascending by wavelength.
    #[serde(rename = "T0", with = "wavelength_map")]
    pub zenith_transmittance: Vec<(f64, f64)>,
    /// Transmitter optical efficiency `tau_t`.
    pub transmitter_loss: f64,
    /// Scale height of the exponential extinction profile (m). Only partial
    /// crossings of the atmosphere depend on it.
    pub extinction_scale_height: f64,
}

impl Default for TransmittanceModel {
    fn default() -> Self {
        TransmittanceModel {
            zenith_transmittance: vec![(810e-9, 0.85), (1550e-9, 0.92)],
            transmitter_loss: 1.0,
            extinction_scale_height: 1200.0,
        }
    }
}

impl TransmittanceModel {
    pub fn validate(&self, path: &str) -> Result<()> {
        if self.zenith_transmittance.is_empty() {
            return Err(Error::config(format!("{path}.T0"), "at least one wavelength required"));
        }
        for (i, &(lambda, t0)) in self.zenith_transmittance.iter().enumerate() {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::config(format!("{path}.T0"), format!("bad wavelength {lambda}")));
            }
            if self.zenith_transmittance[..i]
                .iter()
                .any(|(l, _)| ((l - lambda) / lambda).abs() < 1e-6)
            {
                return Err(Error::config(
                    format!("{path}.T0"),
                    format!("wavelength {lambda:e} m listed twice"),
                ));
            }
            if !(t0 > 0.0 && t0 <= 1.0) {
                return Err(Error::config(
                    format!("{path}.T0"),
                    format!("transmittance {t0} for {lambda:e} m outside (0, 1]"),
                ));
            }
        }
        if !(self.transmitter_loss > 0.0 && self.transmitter_loss <= 1.0) {
            return Err(Error::config(format!("{path}.transmitter_loss"), "must lie in (0, 1]"));
        }
        if !(self.extinction_scale_height > 0.0 && self.extinction_scale_height.is_finite()) {
            return Err(Error::config(format!("{path}.extinction_scale_height"), "must be > 0"));
        }
        Ok(())
    }

    /// Zenith transmittance configured for `wavelength` (matched to 1 ppm).
    pub fn zenith_value(&self, wavelength: f64) -> Result<f64> {
        self.zenith_transmittance
            .iter()
            .find(|(l, _)| ((l - wavelength) / wavelength).abs() < 1e-6)
            .map(|&(_, t)| t)
            .ok_or_else(|| {
                Error::config(
                    "atmosphere.T0",
                    format!("no transmittance configured for wavelength {wavelength:e} m"),
                )
            })
    }

    /// Insert or replace the entry for `wavelength`.
    pub fn set_zenith_value(&mut self, wavelength: f64, t0: f64) {
        match self
            .zenith_transmittance
            .iter_mut()
            .find(|(l, _)| ((*l - wavelength) / wavelength).abs() < 1e-6)
        {
            Some(entry) => entry.1 = t0,
            None => {
                self.zenith_transmittance.push((wavelength, t0));
                self.zenith_transmittance
                    .sort_by(|a, b| a.0.total_cmp(&b.0));
            }
        }
    }
}

/// Atmospheric transmittance `tau_a` along `geometry`.
///
/// `tau_a = T0^(sec(zenith) * f)` where `f` is the fraction of the vertical
/// extinction column (exponential, truncated at `ceiling`) lying between the
/// path endpoints: 1 for any path from the ground through the ceiling, 0 for
/// a path entirely above it.
pub fn transmittance(
    geometry: &PathGeometry,
    wavelength: f64,
    model: &TransmittanceModel,
    ceiling: f64,
) -> Result<f64> {
    geometry.validate()?;
    let t0 = model.zenith_value(wavelength)?;
    let column = column_fraction(geometry.h0, geometry.h1, model.extinction_scale_height, ceiling);
    if column == 0.0 {
        return Ok(1.0);
    }
    Ok(t0.powf(column / geometry.zenith.cos()))
}

fn column_fraction(h0: f64, h1: f64, scale: f64, ceiling: f64) -> f64 {
    if h0 >= ceiling {
        return 0.0;
    }
    let top = h1.min(ceiling);
    let total = 1.0 - (-ceiling / scale).exp();
    ((-h0 / scale).exp() - (-top / scale).exp()) / total
}

pub(crate) mod wavelength_map {
    use serde::de::Error as _;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(v: &[(f64, f64)], s: S) -> Result<S::Ok, S::Error> {
        let mut sorted = v.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Keys are formatted as integer nanometres times 1e-9 when exact, so
        // the canonical form reads like the hand-written "810e-9".
        let map: Vec<(String, f64)> = sorted.into_iter().map(|(l, t)| (key(l), t)).collect();
        let mut ser = s.serialize_map(Some(map.len()))?;
        for (k, t) in &map {
            ser.serialize_entry(k, t)?;
        }
        ser.end()
    }

    fn key(lambda: f64) -> String {
        let nm = lambda * 1e9;
        if (nm - nm.round()).abs() < 1e-9 * nm.abs() && nm.round() >= 1.0 {
            format!("{}e-9", nm.round() as u64)
        } else {
            format!("{lambda:e}")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(f64, f64)>, D::Error> {
        let raw = BTreeMap::<String, f64>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, t) in raw {
            let l: f64 = k
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("wavelength key `{k}` is not a number")))?;
            out.push((l, t));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(out)
    }
}
