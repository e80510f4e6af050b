//! Gaussian beam spreading, loss factors and in-FOV received power.
//!
//! The total waist at the target is the quadrature sum of diffraction,
//! turbulence and jitter contributions. Intensity carries the combined
//! transmittance `tau_tot = tau_a tau_t tau_p` and Strehl factor `S_tot`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::atmosphere::{self, HufnagelValley, QuadratureSettings, TransmittanceModel};
use crate::error::{Error, Result};
use crate::model::{LaserSource, PathGeometry, Receiver};
use crate::turbulence::{self, AoConfig, FriedForm};

/// Default RMS jitter angle (rad).
pub const DEFAULT_JITTER: f64 = 2.0e-6;

/// Everything known about the beam at the target plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamState {
    /// Propagation distance (m).
    pub range: f64,
    pub w0: f64,
    pub w_d: f64,
    pub w_t: f64,
    pub w_j: f64,
    pub w_tot: f64,
    pub tau_a: f64,
    pub tau_t: f64,
    pub tau_p: f64,
    pub tau_tot: f64,
    pub s_ao: f64,
    pub s_tb: f64,
    pub s_tot: f64,
    pub theta_rms: f64,
    pub n_d: f64,
    /// Fried parameter; absent when the path has no turbulent segment.
    pub fried_length: Option<f64>,
    /// Path moment μ (m^(1/3)).
    pub moment: f64,
    pub adaptive_optics: bool,
}

impl BeamState {
    /// `tau_tot * S_tot`.
    pub fn loss_product(&self) -> f64 {
        self.tau_tot * self.s_tot
    }
}

/// `w0 = D/(2√2)`.
pub fn initial_waist(aperture: f64) -> f64 {
    aperture / (2.0 * SQRT_2)
}

/// Diffraction waist `w_d² = M²z²/(k²w0²) + w0²(1 - z/F)²`. `focal_range`
/// of `None` is a collimated beam.
pub fn diffraction_waist(
    z: f64,
    w0: f64,
    wavelength: f64,
    beam_quality: f64,
    focal_range: Option<f64>,
) -> f64 {
    let k = 2.0 * PI / wavelength;
    let m2 = beam_quality * beam_quality;
    let focus = match focal_range {
        Some(f) => 1.0 - z / f,
        None => 1.0,
    };
    (m2 * z * z / (k * k * w0 * w0) + w0 * w0 * focus * focus).sqrt()
}

/// `w_j = √(2 θ²) z`.
pub fn jitter_waist(z: f64, theta_rms: f64) -> f64 {
    SQRT_2 * theta_rms * z
}

pub fn total_waist(w_d: f64, w_t: f64, w_j: f64) -> f64 {
    (w_d * w_d + w_t * w_t + w_j * w_j).sqrt()
}

/// Pointing loss `w_t²/(w_t² + 4σ_p²)`.
pub fn pointing_factor(w_t: f64, sigma_p: f64) -> f64 {
    if sigma_p == 0.0 {
        return 1.0;
    }
    if w_t == 0.0 {
        log::warn!("pointing factor: zero turbulence waist with sigma_p = {sigma_p}; returning 0");
        return 0.0;
    }
    let wt2 = w_t * w_t;
    wt2 / (wt2 + 4.0 * sigma_p * sigma_p)
}

/// Combined Strehl ratio `1/(1 + Σ(1/S_i - 1))`.
pub fn strehl_total(factors: &[f64]) -> Result<f64> {
    let mut excess = 0.0;
    for &s in factors {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::domain(format!("Strehl factor {s} outside (0, 1]")));
        }
        excess += 1.0 / s - 1.0;
    }
    Ok(1.0 / (1.0 + excess))
}

/// Thermal-blooming Strehl `1/(1 + 0.0625 N_D²)`.
pub fn thermal_blooming_strehl(n_d: f64) -> f64 {
    1.0 / (1.0 + 0.0625 * n_d * n_d)
}

/// Irradiance (W/m²) at radius `r` from the beam axis.
pub fn intensity(state: &BeamState, p_ini: f64, r: f64) -> f64 {
    let w2 = state.w_tot * state.w_tot;
    2.0 * p_ini / (PI * w2) * (-2.0 * r * r / w2).exp() * state.loss_product()
}

/// Power collected by a centred circular aperture (W):
/// `tau_r P (1 - exp(-D_r²/(2 w_tot²))) tau_tot S_tot`.
pub fn received_power_in_fov(state: &BeamState, p_ini: f64, receiver: &Receiver) -> f64 {
    let d = receiver.aperture_diameter;
    let w2 = state.w_tot * state.w_tot;
    let captured = -(-d * d / (2.0 * w2)).exp_m1();
    receiver.optical_loss * p_ini * captured * state.loss_product()
}

/// Physical settings for the propagation chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationModel {
    pub turbulence: HufnagelValley,
    pub transmittance: TransmittanceModel,
    /// Altitude above which turbulence and extinction are ignored (m).
    pub ceiling: f64,
    pub quadrature: QuadratureSettings,
    pub fried_form: FriedForm,
    pub ao: AoConfig,
    /// RMS jitter (rad).
    pub jitter_rad: f64,
    /// Thermal distortion number; 0 disables blooming.
    pub thermal_distortion: f64,
}

impl Default for PropagationModel {
    fn default() -> Self {
        PropagationModel {
            turbulence: HufnagelValley::default(),
            transmittance: TransmittanceModel::default(),
            ceiling: 30e3,
            quadrature: QuadratureSettings::default(),
            fried_form: FriedForm::default(),
            ao: AoConfig::default(),
            jitter_rad: DEFAULT_JITTER,
            thermal_distortion: 0.0,
        }
    }
}

impl PropagationModel {
    /// Run the full chain from the source aperture to the far endpoint of
    /// `geometry`. `adaptive_optics` selects the corrected turbulence branch.
    pub fn propagate(
        &self,
        source: &LaserSource,
        geometry: &PathGeometry,
        adaptive_optics: bool,
    ) -> Result<BeamState> {
        self.propagate_to(source, geometry, geometry.slant_range(), adaptive_optics)
    }

    /// As [`propagate`](Self::propagate) but with an explicit distance, for
    /// targets that are not at the geometry's far endpoint.
    pub fn propagate_to(
        &self,
        source: &LaserSource,
        geometry: &PathGeometry,
        z: f64,
        adaptive_optics: bool,
    ) -> Result<BeamState> {
        geometry.validate()?;
        source.validate("source")?;
        if !(z >= 0.0 && z.is_finite()) {
            return Err(Error::domain(format!("propagation distance must be >= 0 (got {z})")));
        }
        let w0 = initial_waist(source.aperture_diameter);
        let w_d = diffraction_waist(
            z,
            w0,
            source.wavelength,
            source.beam_quality,
            source.focal_range,
        );

        let moment = atmosphere::turbulence_moment(
            geometry,
            &self.turbulence,
            self.ceiling,
            self.quadrature,
        )?;
        let (fried_length, w_t, s_ao) = if moment > 0.0 {
            let r0 = turbulence::fried_parameter_with(
                source.wavelength,
                geometry.zenith,
                moment,
                self.fried_form,
            )?;
            if adaptive_optics {
                let var = turbulence::ao_residual_variance(&self.ao, r0);
                (
                    Some(r0),
                    turbulence::turbulence_waist_from_variance(w_d, var),
                    turbulence::ao_strehl(var),
                )
            } else {
                (
                    Some(r0),
                    turbulence::turbulence_waist(w_d, source.beam_quality, source.aperture_diameter, r0),
                    1.0,
                )
            }
        } else {
            (None, 0.0, 1.0)
        };

        let w_j = jitter_waist(z, self.jitter_rad);
        let w_tot = total_waist(w_d, w_t, w_j);

        let tau_a = atmosphere::transmittance(
            geometry,
            source.wavelength,
            &self.transmittance,
            self.ceiling,
        )?;
        let tau_t = self.transmittance.transmitter_loss;
        let tau_p = pointing_factor(w_t, source.pointing_sigma);
        let s_tb = thermal_blooming_strehl(self.thermal_distortion);
        // AO residual already widens w_t; only blooming degrades the peak.
        let s_tot = strehl_total(&[s_tb])?;

        Ok(BeamState {
            range: z,
            w0,
            w_d,
            w_t,
            w_j,
            w_tot,
            tau_a,
            tau_t,
            tau_p,
            tau_tot: tau_a * tau_t * tau_p,
            s_ao,
            s_tb,
            s_tot,
            theta_rms: self.jitter_rad,
            n_d: self.thermal_distortion,
            fried_length,
            moment,
            adaptive_optics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(w_tot: f64, loss: f64) -> BeamState {
        BeamState {
            range: 0.0,
            w0: 0.0,
            w_d: w_tot,
            w_t: 0.0,
            w_j: 0.0,
            w_tot,
            tau_a: loss,
            tau_t: 1.0,
            tau_p: 1.0,
            tau_tot: loss,
            s_ao: 1.0,
            s_tb: 1.0,
            s_tot: 1.0,
            theta_rms: 0.0,
            n_d: 0.0,
            fried_length: None,
            moment: 0.0,
            adaptive_optics: false,
        }
    }

    #[test]
    fn initial_waist_examples() {
        assert!((initial_waist(1.0) - 0.353553).abs() < 1e-6);
        assert!((initial_waist(0.2) - 0.0707107).abs() < 1e-7);
        assert!((initial_waist(0.6) - 0.212132).abs() < 1e-6);
    }

    #[test]
    fn diffraction_examples() {
        let w0 = initial_waist(1.0);
        assert_eq!(diffraction_waist(0.0, w0, 810e-9, 1.0, None), w0);
        let w = diffraction_waist(500e3, w0, 810e-9, 1.0, None);
        let k = 2.0 * PI / 810e-9;
        let far = 500e3 / (k * w0);
        assert!((far - 0.18232).abs() < 1e-5);
        assert!((w - (far * far + w0 * w0).sqrt()).abs() < 1e-15);
        assert!((w - 0.398).abs() < 1e-3);
        let w2 = diffraction_waist(500e3, w0, 810e-9, 2.0, None);
        assert!(((w2 * w2 - w0 * w0) / (w * w - w0 * w0) - 4.0).abs() < 1e-12);
        // Focused at the target: only the diffraction term remains.
        let wf = diffraction_waist(500e3, w0, 810e-9, 1.0, Some(500e3));
        assert!((wf - far).abs() < 1e-15);
    }

    #[test]
    fn jitter_and_total() {
        assert_eq!(jitter_waist(0.0, 2e-6), 0.0);
        assert!((jitter_waist(500e3, 2e-6) - std::f64::consts::SQRT_2).abs() < 1e-5);
        assert!((jitter_waist(2.0, 1.0) - 2.0 * jitter_waist(1.0, 1.0)).abs() < 1e-15);
        assert_eq!(total_waist(0.7, 0.0, 0.0), 0.7);
        assert_eq!(total_waist(3.0, 4.0, 0.0), 5.0);
        assert!((total_waist(0.398, 2.99, 1.414) - 3.33).abs() < 0.01);
    }

    #[test]
    fn pointing_examples() {
        assert_eq!(pointing_factor(1.0, 0.0), 1.0);
        assert_eq!(pointing_factor(0.0, 0.0), 1.0);
        assert!((pointing_factor(2.0, 1.0) - 0.5).abs() < 1e-15);
        assert!(pointing_factor(3.0, 1e-4) > 0.999_99);
        assert_eq!(pointing_factor(0.0, 0.1), 0.0);
    }

    #[test]
    fn strehl_examples() {
        assert_eq!(strehl_total(&[0.3]).unwrap(), 0.3);
        assert_eq!(strehl_total(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert!((strehl_total(&[0.5, 0.5]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(strehl_total(&[0.0]).is_err());
        assert!(strehl_total(&[1.2]).is_err());
        assert_eq!(thermal_blooming_strehl(0.0), 1.0);
        assert_eq!(thermal_blooming_strehl(4.0), 0.5);
        assert_eq!(thermal_blooming_strehl(8.0), 0.2);
    }

    #[test]
    fn intensity_examples() {
        let s = state(3.33, 0.7);
        let i0 = intensity(&s, 1000.0, 0.0);
        assert!((i0 - 2.0 * 1000.0 * 0.7 / (PI * 3.33 * 3.33)).abs() < 1e-12);
        assert!((i0 - 40.2).abs() < 0.05);
        let ratio = intensity(&s, 1000.0, 3.33) / i0;
        assert!((ratio - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(intensity(&s, 1000.0, 1e6), 0.0);
    }

    #[test]
    fn received_power_examples() {
        let s = state(3.33, 0.7);
        let p = received_power_in_fov(&s, 1000.0, &Receiver::new(0.2));
        assert!((p - 1.26).abs() < 0.01, "{p}");
        let full = received_power_in_fov(&s, 1000.0, &Receiver::new(1e4));
        assert!((full - 700.0).abs() < 1e-9);
        let p2 = received_power_in_fov(&s, 2000.0, &Receiver::new(0.2));
        assert_eq!(p2, 2.0 * p);
    }

    #[test]
    fn chain_ground_to_500km_without_turbulence_term_matches_components() {
        let model = PropagationModel::default();
        let src = LaserSource::new(1000.0, 1.0, 810e-9);
        let g = PathGeometry::new(0.0, 500e3, 0.0, crate::model::Direction::Uplink).unwrap();
        let s = model.propagate(&src, &g, false).unwrap();
        assert!((s.w_d - 0.398).abs() < 1e-3);
        assert!((s.w_j - std::f64::consts::SQRT_2).abs() < 1e-5);
        let r0 = s.fried_length.unwrap();
        assert!(r0 > 0.01 && r0 < 0.2, "{r0}");
        assert!((s.w_tot - total_waist(s.w_d, s.w_t, s.w_j)).abs() < 1e-15);
        assert_eq!(s.tau_a, 0.85);
        assert_eq!(s.s_tot, 1.0);
    }
}
