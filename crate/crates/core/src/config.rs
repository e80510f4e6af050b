//! JSON configuration document.
//!
//! Every block is optional and falls back to the built-in defaults. Unknown
//! keys are rejected, and every error names the offending path.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::atmosphere::{wavelength_map, HufnagelValley, QuadratureSettings, TransmittanceModel};
use crate::beam::{PropagationModel, DEFAULT_JITTER};
use crate::effects::{default_ladder, EffectThreshold};
use crate::error::{Error, Result};
use crate::model::{Platform, PlatformKind};
use crate::risk::{published_assessments, RiskAssessment};
use crate::scattering::{OutOfFovParams, SatelliteSurface};
use crate::scenario::{Apertures, PowerGrid, ScenarioOverrides, SCHEMA_VERSION};
use crate::turbulence::{AoConfig, FriedForm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtmosphereConfig {
    /// Ground-level `Cn²` (m^(-2/3)).
    #[serde(rename = "A0")]
    pub a0: f64,
    /// RMS high-altitude wind speed (m/s).
    pub v: f64,
    /// Zenith transmittance per wavelength, keyed like `"810e-9"`.
    #[serde(rename = "T0", with = "wavelength_map")]
    pub t0: Vec<(f64, f64)>,
    pub transmitter_loss: f64,
    /// m
    pub extinction_scale_height: f64,
    /// m
    pub ceiling: f64,
    pub quadrature: QuadratureSettings,
    pub fried_form: FriedForm,
}

impl Default for AtmosphereConfig {
    fn default() -> Self {
        let hv = HufnagelValley::default();
        let tm = TransmittanceModel::default();
        AtmosphereConfig {
            a0: hv.a0,
            v: hv.wind_speed,
            t0: tm.zenith_transmittance,
            transmitter_loss: tm.transmitter_loss,
            extinction_scale_height: tm.extinction_scale_height,
            ceiling: 30e3,
            quadrature: QuadratureSettings::default(),
            fried_form: FriedForm::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeamConfig {
    /// `M²`
    pub beam_quality: f64,
    /// Static pointing error (m).
    pub pointing_sigma: f64,
    /// Focus distance (m); absent means collimated.
    pub focal_range: Option<f64>,
    /// RMS jitter (rad).
    pub jitter_rad: f64,
    /// Thermal distortion number.
    pub thermal_distortion: f64,
}

impl Default for BeamConfig {
    fn default() -> Self {
        BeamConfig {
            beam_quality: 1.0,
            pointing_sigma: 0.0,
            focal_range: None,
            jitter_rad: DEFAULT_JITTER,
            thermal_distortion: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDocument {
    pub schema_version: String,
    /// Default laser wavelength (m).
    pub wavelength: f64,
    pub atmosphere: AtmosphereConfig,
    pub ao: AoConfig,
    pub beam: BeamConfig,
    pub apertures: Apertures,
    pub platforms: BTreeMap<PlatformKind, Platform>,
    pub out_of_fov: OutOfFovParams,
    pub surface: SatelliteSurface,
    pub effects: Vec<EffectThreshold>,
    pub risk: Vec<RiskAssessment>,
    pub sweep: PowerGrid,
    pub scenarios: BTreeMap<String, ScenarioOverrides>,
}

impl Default for ConfigDocument {
    fn default() -> Self {
        ConfigDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            wavelength: 810e-9,
            atmosphere: AtmosphereConfig::default(),
            ao: AoConfig::default(),
            beam: BeamConfig::default(),
            apertures: Apertures::default(),
            platforms: PlatformKind::ALL.iter().map(|&k| (k, k.preset())).collect(),
            out_of_fov: OutOfFovParams::default(),
            surface: SatelliteSurface::default(),
            effects: default_ladder(),
            risk: published_assessments(),
            sweep: PowerGrid::default(),
            scenarios: BTreeMap::new(),
        }
    }
}

impl ConfigDocument {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version `{}` (expected `{SCHEMA_VERSION}`)", self.schema_version),
            ));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::config("wavelength", "must be > 0"));
        }
        let atm = &self.atmosphere;
        self.turbulence_profile().validate("atmosphere")?;
        self.transmittance_model().validate("atmosphere")?;
        if !(atm.ceiling > 0.0 && atm.ceiling.is_finite()) {
            return Err(Error::config("atmosphere.ceiling", "must be > 0"));
        }
        let q = atm.quadrature;
        if !(q.rel_tol > 0.0 && q.rel_tol <= 0.1) {
            return Err(Error::config("atmosphere.quadrature.rel_tol", "must lie in (0, 0.1]"));
        }
        if !(1..=50).contains(&q.max_depth) {
            return Err(Error::config("atmosphere.quadrature.max_depth", "must lie in 1..=50"));
        }
        self.ao.validate("ao")?;

        let b = &self.beam;
        if !(b.beam_quality >= 1.0 && b.beam_quality.is_finite()) {
            return Err(Error::config("beam.beam_quality", "must be >= 1"));
        }
        if !(b.pointing_sigma >= 0.0 && b.pointing_sigma.is_finite()) {
            return Err(Error::config("beam.pointing_sigma", "must be >= 0"));
        }
        if let Some(f) = b.focal_range {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::config("beam.focal_range", "must be > 0"));
            }
        }
        if !(b.jitter_rad >= 0.0 && b.jitter_rad.is_finite()) {
            return Err(Error::config("beam.jitter_rad", "must be >= 0"));
        }
        if !(b.thermal_distortion >= 0.0 && b.thermal_distortion.is_finite()) {
            return Err(Error::config("beam.thermal_distortion", "must be >= 0"));
        }

        self.apertures.validate("apertures")?;
        for (kind, p) in &self.platforms {
            let path = format!("platforms.{}", kind.as_str());
            if p.kind != *kind {
                return Err(Error::config(format!("{path}.kind"), "must match the map key"));
            }
            p.validate(&path)?;
        }
        self.out_of_fov.validate("out_of_fov")?;
        self.surface.validate("surface")?;
        if self.effects.is_empty() {
            return Err(Error::config("effects", "effect ladder is empty"));
        }
        for (i, e) in self.effects.iter().enumerate() {
            e.validate(&format!("effects[{i}]"))?;
            if self.effects[..i].iter().any(|o| o.id == e.id) {
                return Err(Error::config(format!("effects[{i}].id"), "duplicate id"));
            }
        }
        self.sweep.validate("sweep")?;
        Ok(())
    }

    pub fn turbulence_profile(&self) -> HufnagelValley {
        HufnagelValley {
            a0: self.atmosphere.a0,
            wind_speed: self.atmosphere.v,
        }
    }

    pub fn transmittance_model(&self) -> TransmittanceModel {
        TransmittanceModel {
            zenith_transmittance: self.atmosphere.t0.clone(),
            transmitter_loss: self.atmosphere.transmitter_loss,
            extinction_scale_height: self.atmosphere.extinction_scale_height,
        }
    }

    pub fn propagation_model(&self) -> PropagationModel {
        PropagationModel {
            turbulence: self.turbulence_profile(),
            transmittance: self.transmittance_model(),
            ceiling: self.atmosphere.ceiling,
            quadrature: self.atmosphere.quadrature,
            fried_form: self.atmosphere.fried_form,
            ao: self.ao,
            jitter_rad: self.beam.jitter_rad,
            thermal_distortion: self.beam.thermal_distortion,
        }
    }

    /// Configured platform of `kind`, or its built-in preset.
    pub fn platform(&self, kind: PlatformKind) -> Platform {
        self.platforms.get(&kind).copied().unwrap_or_else(|| kind.preset())
    }

    /// Replace the zenith transmittance for `wavelength`.
    pub fn set_zenith_transmittance(&mut self, wavelength: f64, t0: f64) {
        let mut m = self.transmittance_model();
        m.set_zenith_value(wavelength, t0);
        self.atmosphere.t0 = m.zenith_transmittance;
    }

    /// Pretty-printed JSON that parses back to the same document.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<ConfigDocument> {
    if !text.trim_start().starts_with('{') {
        return Err(Error::config("(root)", "configuration must be a JSON object"));
    }
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: ConfigDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "(root)".to_string() } else { path };
        Error::config(path, e.into_inner().to_string())
    })?;
    de.end()
        .map_err(|e| Error::config("(root)", e.to_string()))?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_config(path: &Path) -> Result<ConfigDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_default() {
        assert_eq!(parse_config("{}").unwrap(), ConfigDocument::default());
    }

    #[test]
    fn canonical_round_trip() {
        let doc = ConfigDocument::default();
        let text = doc.to_canonical_json();
        assert!(text.contains("\"810e-9\""));
        let back = parse_config(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_canonical_json(), text);
    }

    #[test]
    fn out_of_range_t0_names_path() {
        let err = parse_config(r#"{"atmosphere": {"T0": {"810e-9": 1.5}}}"#).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "atmosphere.T0"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_key_names_path() {
        let err = parse_config(r#"{"ao": {"snr": 10, "gain": 2}}"#).unwrap_err();
        match err {
            Error::Config { path, message } => {
                assert_eq!(path, "ao.gain");
                assert!(message.contains("gain"), "{message}");
            }
            e => panic!("{e}"),
        }
        let err = parse_config(r#"{"beam": {"jitter_rad": "x"}}"#).unwrap_err();
        match err {
            Error::Config { path, .. } => assert_eq!(path, "beam.jitter_rad"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn partial_blocks_keep_defaults() {
        let doc = parse_config(r#"{"ao": {"actuator_spacing": 1.0}, "platforms": {"plane": {"kind": "plane", "altitude": 8000, "speed": 200, "power_envelope": [1000, 5000]}}}"#).unwrap();
        assert_eq!(doc.ao.actuator_spacing, 1.0);
        assert_eq!(doc.ao.snr, 50.0);
        assert_eq!(doc.platform(PlatformKind::Plane).altitude, 8000.0);
        assert_eq!(doc.platform(PlatformKind::LeoSat).altitude, 500e3);
    }

    #[test]
    fn rejects_bad_documents() {
        for text in [
            "",
            "[]",
            r#"{"schema_version": "2"}"#,
            r#"{"wavelength": -1}"#,
            r#"{"effects": []}"#,
            r#"{"atmosphere": {"T0": {"abc": 0.5}}}"#,
            r#"{"atmosphere": {"T0": {"810e-9": 0.5, "8.1e-7": 0.6}}}"#,
            r#"{"sweep": {"p_min": 10, "p_max": 1}}"#,
            r#"{"platforms": {"plane": {"kind": "drone", "altitude": 1, "speed": 1, "power_envelope": [1, 2]}}}"#,
            r#"{} trailing"#,
        ] {
            let err = parse_config(text).expect_err(text);
            assert!(err.is_config(), "{text}: {err}");
        }
    }

    #[test]
    fn override_t0() {
        let mut doc = ConfigDocument::default();
        doc.set_zenith_transmittance(810e-9, 0.9);
        assert_eq!(doc.transmittance_model().zenith_value(810e-9).unwrap(), 0.9);
        assert_eq!(doc.atmosphere.t0.len(), 2);
    }
}
