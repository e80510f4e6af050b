//! Fit the zenith transmittance to published suppression ratios.

use serde::{Deserialize, Serialize};

use crate::config::ConfigDocument;
use crate::error::{Error, Result};
use crate::risk::AttackType;
use crate::scenario::{build_scenario, BandEdge, Evaluator, Preset, ScenarioOverrides};

/// Ground→LEO in-FOV power at `zenith` relative to zenith 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuppressionTarget {
    /// Satellite altitude (m).
    pub altitude: f64,
    /// rad
    pub zenith: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub target: SuppressionTarget,
    pub achieved: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    /// m
    pub wavelength: f64,
    pub t0: f64,
    /// False when no target constrains `T0` and the configured value was kept.
    pub constrained: bool,
    pub points: Vec<CalibrationPoint>,
    /// Sum of squared ratio deviations.
    pub residual: f64,
}

/// Achieved suppression ratio for each target with `config` as given.
pub fn suppression_ratios(
    config: &ConfigDocument,
    wavelength: f64,
    targets: &[SuppressionTarget],
) -> Result<Vec<f64>> {
    targets
        .iter()
        .map(|t| {
            let power = |zenith: f64| -> Result<f64> {
                let ov = ScenarioOverrides {
                    attack_type: Some(AttackType::InFov),
                    target_altitude: Some(t.altitude),
                    zenith: Some(zenith),
                    wavelength: Some(wavelength),
                    ..Default::default()
                };
                let spec = build_scenario(Preset::GroundLeo.name(), &ov, config)?;
                Ok(Evaluator::new(&spec, config)?.received_power(1.0, BandEdge::Nominal))
            };
            Ok(power(t.zenith)? / power(0.0)?)
        })
        .collect()
}

/// Golden-section search for `T0` in `[0.5, 1]` minimising the squared
/// deviation from `targets`.
pub fn calibrate_transmittance(
    config: &ConfigDocument,
    wavelength: f64,
    targets: &[SuppressionTarget],
) -> Result<CalibrationResult> {
    for (i, t) in targets.iter().enumerate() {
        if !(t.ratio > 0.0 && t.ratio.is_finite()) {
            return Err(Error::config(format!("targets[{i}].ratio"), "must be > 0"));
        }
        if !(t.zenith >= 0.0 && t.zenith < std::f64::consts::FRAC_PI_2) {
            return Err(Error::config(format!("targets[{i}].zenith"), "must lie in [0, π/2)"));
        }
    }
    let current = config.transmittance_model().zenith_value(wavelength)?;
    let residual_at = |t0: f64| -> Result<(f64, Vec<f64>)> {
        let mut c = config.clone();
        c.set_zenith_transmittance(wavelength, t0);
        let achieved = suppression_ratios(&c, wavelength, targets)?;
        let r = targets
            .iter()
            .zip(&achieved)
            .map(|(t, a)| (a - t.ratio).powi(2))
            .sum();
        Ok((r, achieved))
    };

    let constrained = targets.iter().any(|t| t.zenith > 0.0);
    let t0 = if constrained {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.5, 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = residual_at(c)?.0;
        let mut fd = residual_at(d)?.0;
        while b - a > 1e-9 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = residual_at(c)?.0;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = residual_at(d)?.0;
            }
        }
        // The optimum often sits on a bound.
        [0.5, 0.5 * (a + b), 1.0]
            .into_iter()
            .map(|t| residual_at(t).map(|r| (t, r.0)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|x| x.0)
            .unwrap_or(current)
    } else {
        current
    };
    let (residual, achieved) = residual_at(t0)?;
    Ok(CalibrationResult {
        wavelength,
        t0,
        constrained,
        points: targets
            .iter()
            .zip(achieved)
            .map(|(&target, achieved)| CalibrationPoint { target, achieved })
            .collect(),
        residual,
    })
}
