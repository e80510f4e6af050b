//! Fried coherence length, turbulence beam spreading and the adaptive-optics
//! residual model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Direction;

/// Constant in the Fried-parameter closed form.
pub const FRIED_CONSTANT: f64 = 0.431575;

/// Which closed form to use for `r0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FriedForm {
    /// `r0 = [0.431575 k² sec(φ) μ]^(-3/5)`, a length.
    #[default]
    Dimensional,
    /// `r0 = 0.431575 k² sec^(11/6)(φ) μ` evaluated literally. Not a length;
    /// kept only for comparison runs.
    Literal,
}

/// Adaptive-optics parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AoConfig {
    /// Fitting-error coefficient `κ`.
    pub fitting_coefficient: f64,
    /// Actuator spacing `r_s` (m).
    pub actuator_spacing: f64,
    /// Control bandwidth `f_BW` (Hz).
    pub bandwidth: f64,
    /// Greenwood frequency `f_G` (Hz).
    pub greenwood_frequency: f64,
    /// Wavefront-sensor SNR.
    pub snr: f64,
}

impl Default for AoConfig {
    fn default() -> Self {
        AoConfig {
            fitting_coefficient: 0.34,
            actuator_spacing: 0.1,
            bandwidth: 20.0,
            greenwood_frequency: 20.0,
            snr: 50.0,
        }
    }
}

impl AoConfig {
    pub fn validate(&self, path: &str) -> Result<()> {
        let fields = [
            ("fitting_coefficient", self.fitting_coefficient),
            ("actuator_spacing", self.actuator_spacing),
            ("bandwidth", self.bandwidth),
            ("greenwood_frequency", self.greenwood_frequency),
            ("snr", self.snr),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{path}.{name}"), "must be > 0"));
            }
        }
        Ok(())
    }
}

/// Coherence length and the moment it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceState {
    /// Fried parameter (m); infinite when the path sees no turbulence.
    pub fried_length: f64,
    /// Path moment μ (m^(1/3)).
    pub moment: f64,
    pub direction: Direction,
}

/// Fried parameter `r0` for wavelength `wavelength`, zenith angle `zenith`
/// and path moment `moment`.
pub fn fried_parameter(wavelength: f64, zenith: f64, moment: f64) -> Result<f64> {
    fried_parameter_with(wavelength, zenith, moment, FriedForm::Dimensional)
}

pub fn fried_parameter_with(
    wavelength: f64,
    zenith: f64,
    moment: f64,
    form: FriedForm,
) -> Result<f64> {
    if !(moment > 0.0 && moment.is_finite()) {
        return Err(Error::domain(format!("moment must be > 0 (got {moment})")));
    }
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(Error::domain(format!("wavelength must be > 0 (got {wavelength})")));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&zenith) {
        return Err(Error::domain(format!("zenith must lie in [0, pi/2) (got {zenith})")));
    }
    let k = 2.0 * std::f64::consts::PI / wavelength;
    let sec = 1.0 / zenith.cos();
    Ok(match form {
        FriedForm::Dimensional => (FRIED_CONSTANT * k * k * sec * moment).powf(-0.6),
        FriedForm::Literal => FRIED_CONSTANT * k * k * sec.powf(11.0 / 6.0) * moment,
    })
}

/// Uncorrected turbulence waist: `w_t² = (w_d²/M²)(D/r0)^(5/3)`.
pub fn turbulence_waist(diffraction_waist: f64, beam_quality: f64, aperture: f64, r0: f64) -> f64 {
    if r0.is_infinite() {
        return 0.0;
    }
    let wt2 = diffraction_waist * diffraction_waist / (beam_quality * beam_quality)
        * (aperture / r0).powf(5.0 / 3.0);
    wt2.sqrt()
}

/// Residual phase variance after correction:
/// sensing `4/SNR²` + fitting `κ(r_s/r0)^(5/3)` + temporal `(f_G/f_BW)^(5/3)`.
pub fn ao_residual_variance(ao: &AoConfig, r0: f64) -> f64 {
    let sensing = 4.0 / (ao.snr * ao.snr);
    let fitting = if r0.is_infinite() {
        0.0
    } else {
        ao.fitting_coefficient * (ao.actuator_spacing / r0).powf(5.0 / 3.0)
    };
    let temporal = (ao.greenwood_frequency / ao.bandwidth).powf(5.0 / 3.0);
    sensing + fitting + temporal
}

/// Strehl ratio of the corrected wavefront, `exp(-σ²)`.
pub fn ao_strehl(residual_variance: f64) -> f64 {
    (-residual_variance).exp()
}

/// Waist left after correction: `w_t² = w_d²(1 - S)/S`.
pub fn turbulence_waist_from_variance(diffraction_waist: f64, residual_variance: f64) -> f64 {
    // (1 - e^-x)/e^-x = e^x - 1, which stays accurate for small x.
    diffraction_waist * residual_variance.exp_m1().max(0.0).sqrt()
}

pub fn turbulence_waist_ao(diffraction_waist: f64, ao: &AoConfig, r0: f64) -> f64 {
    turbulence_waist_from_variance(diffraction_waist, ao_residual_variance(ao, r0))
}
