//! Laser effect thresholds on the quantum receiver and their classification.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::Receiver;
use crate::risk::Impact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// Onset given as power on the detector (W).
    PowerW,
    /// Onset given as irradiance on the aperture (W/cm²).
    DensityWPerCm2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Possible,
    Definite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectThreshold {
    /// Short identifier, e.g. `apd_structural_damage`.
    pub id: String,
    pub name: String,
    pub kind: ThresholdKind,
    pub onset: f64,
    /// Upper end of a ranged onset. Between `onset` and `onset_upper` the
    /// effect is reported with `certainty_below_upper`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub onset_upper: Option<f64>,
    pub certainty_below_upper: Certainty,
    pub impact: Impact,
    /// Aperture used to convert a density onset, if not the receiver's own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conversion_aperture: Option<f64>,
}

impl EffectThreshold {
    fn power(id: &str, name: &str, onset: f64, impact: Impact) -> Self {
        EffectThreshold {
            id: id.into(),
            name: name.into(),
            kind: ThresholdKind::PowerW,
            onset,
            onset_upper: None,
            certainty_below_upper: Certainty::Definite,
            impact,
            conversion_aperture: None,
        }
    }

    fn density(id: &str, name: &str, onset: f64, impact: Impact) -> Self {
        EffectThreshold {
            kind: ThresholdKind::DensityWPerCm2,
            ..Self::power(id, name, onset, impact)
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if self.name.trim().is_empty() || self.id.trim().is_empty() {
            return Err(Error::config(path, "id and name must be non-empty"));
        }
        if !(self.onset > 0.0 && self.onset.is_finite()) {
            return Err(Error::config(format!("{path}.onset"), "must be > 0"));
        }
        if let Some(up) = self.onset_upper {
            if !(up > self.onset && up.is_finite()) {
                return Err(Error::config(format!("{path}.onset_upper"), "must exceed onset"));
            }
        }
        if let Some(d) = self.conversion_aperture {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::config(format!("{path}.conversion_aperture"), "must be > 0"));
            }
        }
        Ok(())
    }

    /// Onset (and upper onset) expressed as power through `receiver`.
    pub fn power_onsets(&self, receiver: &Receiver) -> (f64, Option<f64>) {
        match self.kind {
            ThresholdKind::PowerW => (self.onset, self.onset_upper),
            ThresholdKind::DensityWPerCm2 => {
                let d = self.conversion_aperture.unwrap_or(receiver.aperture_diameter);
                (
                    density_to_power(self.onset, d),
                    self.onset_upper.map(|u| density_to_power(u, d)),
                )
            }
        }
    }

    /// Whether `query` names this threshold: its id, its full name, or a
    /// case-insensitive prefix of the name.
    pub fn matches(&self, query: &str) -> bool {
        let q = query.trim().to_lowercase();
        !q.is_empty()
            && (self.id.to_lowercase() == q || self.name.to_lowercase().starts_with(&q))
    }
}

/// The built-in ladder, in table order.
pub fn default_ladder() -> Vec<EffectThreshold> {
    use Impact::*;
    vec![
        EffectThreshold::power("spd_noise", "Too high noise for SPD", 1e-15, Marginal),
        EffectThreshold {
            onset_upper: Some(1e-8),
            certainty_below_upper: Certainty::Possible,
            ..EffectThreshold::power(
                "non_gated_apd_blinding",
                "Non-gated SPD APD blinding",
                1e-11,
                Marginal,
            )
        },
        EffectThreshold::power("apd_thermal_blinding", "APD thermal blinding", 1e-3, Marginal),
        EffectThreshold::density(
            "ccd_saturation",
            "CCD image transducer saturation threshold (used as part of APT)",
            0.1,
            Marginal,
        ),
        EffectThreshold::power(
            "apd_permanent_blinding",
            "APD permanent blinding, lower sensitivity",
            1.2,
            Critical,
        ),
        EffectThreshold::power(
            "apd_structural_damage",
            "APD structural damage, complete insensitivity",
            2.0,
            Critical,
        ),
        EffectThreshold::power("attenuator_damage", "Attenuators damage", 4.0, Critical),
        EffectThreshold::power(
            "polarisation_filter_degradation",
            "Polarisation spatial filter degradation",
            3.0,
            Critical,
        ),
        EffectThreshold::density("optical_glass_melting", "Optical glass melting", 3e2, Catastrophic),
        EffectThreshold::density(
            "aluminium_melting",
            "Melting initiation threshold for aluminium",
            1e3,
            Catastrophic,
        ),
    ]
}

/// Irradiance (W/cm²) times the aperture area in cm².
pub fn density_to_power(density: f64, aperture_diameter: f64) -> f64 {
    let radius_cm = aperture_diameter * 50.0;
    density * PI * radius_cm * radius_cm
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriggeredEffect {
    pub id: String,
    pub name: String,
    pub certainty: Certainty,
    pub impact: Impact,
    /// Onset converted to received power (W).
    pub onset_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectReport {
    /// Ascending by converted onset.
    pub triggered: Vec<TriggeredEffect>,
    pub max_severity: Option<String>,
    /// W
    pub input_power: f64,
    /// Received power spread over the aperture (W/cm²).
    pub equivalent_density: f64,
}

impl EffectReport {
    pub fn contains(&self, query: &str) -> bool {
        let q = query.trim().to_lowercase();
        self.triggered
            .iter()
            .any(|t| t.id.to_lowercase() == q || t.name.to_lowercase().starts_with(&q))
    }
}

pub fn classify_effects(
    p_recv: f64,
    receiver: &Receiver,
    ladder: &[EffectThreshold],
) -> Result<EffectReport> {
    if ladder.is_empty() {
        return Err(Error::config("effects", "effect ladder is empty"));
    }
    if !(p_recv >= 0.0) {
        return Err(Error::domain(format!("received power must be >= 0 (got {p_recv})")));
    }
    let mut triggered: Vec<TriggeredEffect> = ladder
        .iter()
        .filter_map(|t| {
            let (onset, upper) = t.power_onsets(receiver);
            if p_recv < onset {
                return None;
            }
            let certainty = match upper {
                Some(u) if p_recv < u => t.certainty_below_upper,
                _ => Certainty::Definite,
            };
            Some(TriggeredEffect {
                id: t.id.clone(),
                name: t.name.clone(),
                certainty,
                impact: t.impact,
                onset_w: onset,
            })
        })
        .collect();
    triggered.sort_by(|a, b| a.onset_w.total_cmp(&b.onset_w));
    let area_cm2 = receiver.area() * 1e4;
    Ok(EffectReport {
        max_severity: triggered.last().map(|t| t.name.clone()),
        triggered,
        input_power: p_recv,
        equivalent_density: p_recv / area_cm2,
    })
}

/// The ladder entry matching `query`, see [`EffectThreshold::matches`].
pub fn find_effect<'a>(ladder: &'a [EffectThreshold], query: &str) -> Option<&'a EffectThreshold> {
    ladder.iter().find(|t| t.matches(query))
}
