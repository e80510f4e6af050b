//! Named attack scenarios, power sweeps, threshold search and the GEO
//! dazzle footprint.
//!
//! A [`ScenarioSpec`] is a fully resolved attack: source and target
//! platforms, the laser, the receiver, the path and any uncertainty band.
//! [`build_scenario`] fills one in from a preset name plus overrides.
//! Received power is linear in the laser output, so an [`Evaluator`]
//! propagates the beam once and scales per power point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_3;

use crate::beam::{self, BeamState};
use crate::config::ConfigDocument;
use crate::effects::{classify_effects, find_effect, EffectReport};
use crate::error::{Error, Result};
use crate::model::{Direction, LaserSource, PathGeometry, Platform, PlatformKind, Receiver};
use crate::risk::AttackType;
use crate::scattering::{self, OutOfFovParams, ReturnLeg, SatelliteSurface};

/// Version tag written into every JSON emission.
pub const SCHEMA_VERSION: &str = "1";

/// Largest laser output considered reachable (W).
pub const MAX_POWER: f64 = 1e6;

/// Zenith angle used for out-of-FOV attacks unless overridden.
pub const OUT_OF_FOV_ZENITH: f64 = FRAC_PI_3;

/// Averaged transmit and receive apertures (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Apertures {
    pub ground_lws: f64,
    pub airborne_lws: f64,
    pub space_lws: f64,
    pub ground_receiver: f64,
    pub airborne_receiver: f64,
    pub leo_receiver: f64,
    pub geo_receiver: f64,
}

impl Default for Apertures {
    fn default() -> Self {
        Apertures {
            ground_lws: 1.0,
            airborne_lws: 0.2,
            space_lws: 0.2,
            ground_receiver: 0.6,
            airborne_receiver: 0.2,
            leo_receiver: 0.2,
            geo_receiver: 0.2,
        }
    }
}

impl Apertures {
    pub fn transmitter(&self, kind: PlatformKind) -> f64 {
        if kind.is_ground() {
            self.ground_lws
        } else if kind.is_airborne() {
            self.airborne_lws
        } else {
            self.space_lws
        }
    }

    pub fn receiver(&self, kind: PlatformKind) -> f64 {
        match kind {
            PlatformKind::GroundFixed | PlatformKind::GroundMobile => self.ground_receiver,
            PlatformKind::Drone | PlatformKind::Plane | PlatformKind::Stratospheric => {
                self.airborne_receiver
            }
            PlatformKind::LeoSat => self.leo_receiver,
            PlatformKind::GeoSat => self.geo_receiver,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        let fields = [
            ("ground_lws", self.ground_lws),
            ("airborne_lws", self.airborne_lws),
            ("space_lws", self.space_lws),
            ("ground_receiver", self.ground_receiver),
            ("airborne_receiver", self.airborne_receiver),
            ("leo_receiver", self.leo_receiver),
            ("geo_receiver", self.geo_receiver),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{path}.{name}"), "must be > 0"));
            }
        }
        Ok(())
    }
}

/// The nine named scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    GroundLeoGround,
    GroundLeo,
    GroundGeo,
    AirGround,
    AirLeo,
    LeoGround,
    LeoLeo,
    LeoGeo,
    GeoGround,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::GroundLeoGround,
        Preset::GroundLeo,
        Preset::GroundGeo,
        Preset::AirGround,
        Preset::AirLeo,
        Preset::LeoGround,
        Preset::LeoLeo,
        Preset::LeoGeo,
        Preset::GeoGround,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::GroundLeoGround => "Ground-LEO-Ground",
            Preset::GroundLeo => "Ground-LEO",
            Preset::GroundGeo => "Ground-GEO",
            Preset::AirGround => "Air-Ground",
            Preset::AirLeo => "Air-LEO",
            Preset::LeoGround => "LEO-Ground",
            Preset::LeoLeo => "LEO-LEO",
            Preset::LeoGeo => "LEO-GEO",
            Preset::GeoGround => "GEO-Ground",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(name.trim()))
    }

    /// (source, target, target altitude override)
    fn endpoints(self) -> (PlatformKind, PlatformKind, Option<f64>) {
        use PlatformKind::*;
        match self {
            Preset::GroundLeoGround => (GroundFixed, GroundFixed, None),
            Preset::GroundLeo => (GroundFixed, LeoSat, None),
            Preset::GroundGeo => (GroundFixed, GeoSat, None),
            Preset::AirGround => (Plane, GroundFixed, None),
            Preset::AirLeo => (Plane, LeoSat, None),
            Preset::LeoGround => (LeoSat, GroundFixed, None),
            // Inter-satellite: the target sits on a higher LEO shell.
            Preset::LeoLeo => (LeoSat, LeoSat, Some(1000e3)),
            Preset::LeoGeo => (LeoSat, GeoSat, None),
            Preset::GeoGround => (GeoSat, GroundFixed, None),
        }
    }
}

/// Optional changes applied on top of a preset. A custom (non-preset) name
/// must set both platforms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioOverrides {
    pub attack_type: Option<AttackType>,
    pub source_platform: Option<PlatformKind>,
    pub target_platform: Option<PlatformKind>,
    /// m
    pub source_altitude: Option<f64>,
    /// m; for Ground-LEO-Ground this is the reflecting satellite.
    pub target_altitude: Option<f64>,
    /// rad
    pub zenith: Option<f64>,
    /// Zenith of the reflected return leg (rad).
    pub downlink_zenith: Option<f64>,
    /// m
    pub wavelength: Option<f64>,
    pub adaptive_optics: Option<bool>,
    /// W
    pub power: Option<f64>,
    pub source_aperture: Option<f64>,
    pub receiver_aperture: Option<f64>,
    pub receiver_optical_loss: Option<f64>,
    pub receiver_fov: Option<f64>,
    pub beam_quality: Option<f64>,
    pub focal_range: Option<f64>,
    pub pointing_sigma: Option<f64>,
    pub out_of_fov: Option<OutOfFovParams>,
    pub surface: Option<SatelliteSurface>,
}

impl ScenarioOverrides {
    /// `other` wins wherever it sets a field.
    pub fn merged(&self, other: &ScenarioOverrides) -> ScenarioOverrides {
        macro_rules! pick {
            ($($f:ident),*) => { ScenarioOverrides { $($f: other.$f.or(self.$f),)* } };
        }
        pick!(
            attack_type,
            source_platform,
            target_platform,
            source_altitude,
            target_altitude,
            zenith,
            downlink_zenith,
            wavelength,
            adaptive_optics,
            power,
            source_aperture,
            receiver_aperture,
            receiver_optical_loss,
            receiver_fov,
            beam_quality,
            focal_range,
            pointing_sigma,
            out_of_fov,
            surface
        )
    }
}

/// Ground→satellite→ground reflection settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSpec {
    pub surface: SatelliteSurface,
    /// Satellite-to-receiver path.
    pub downlink: PathGeometry,
}

/// A fully resolved attack configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub attack_type: AttackType,
    pub source_platform: Platform,
    pub target_platform: Platform,
    pub source: LaserSource,
    pub receiver: Receiver,
    /// Source-to-target path (for reflection scenarios: ground-to-satellite).
    pub geometry: PathGeometry,
    pub out_of_fov: OutOfFovParams,
    pub reflection: Option<ReflectionSpec>,
}

impl ScenarioSpec {
    /// Whether the corrected turbulence branch applies: the source asks for
    /// it and sits on the ground.
    pub fn uses_adaptive_optics(&self) -> bool {
        self.source.has_adaptive_optics && self.source_platform.kind.is_ground()
    }

    pub fn wavelength(&self) -> f64 {
        self.source.wavelength
    }
}

/// Resolve a preset (or custom) scenario with `overrides` layered over any
/// overrides stored in `config` for the same name.
pub fn build_scenario(
    name: &str,
    overrides: &ScenarioOverrides,
    config: &ConfigDocument,
) -> Result<ScenarioSpec> {
    let stored = config
        .scenarios
        .iter()
        .find(|(k, _)| k.eq_ignore_ascii_case(name.trim()))
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    let ov = stored.merged(overrides);
    let preset = Preset::from_name(name);

    let (src_kind, tgt_kind, tgt_alt_default) = match preset {
        Some(p) => {
            let (s, t, a) = p.endpoints();
            (
                ov.source_platform.unwrap_or(s),
                ov.target_platform.unwrap_or(t),
                a,
            )
        }
        None => match (ov.source_platform, ov.target_platform) {
            (Some(s), Some(t)) => (s, t, None),
            _ => {
                return Err(Error::config(
                    format!("scenarios.{name}"),
                    "unknown scenario; a custom scenario must set source_platform and target_platform",
                ))
            }
        },
    };
    let reflection = preset == Some(Preset::GroundLeoGround);

    let attack_type = ov.attack_type.unwrap_or(AttackType::OutOfFov);
    if reflection && attack_type == AttackType::InFov {
        return Err(Error::config(
            format!("scenarios.{name}.attack_type"),
            "Ground-LEO-Ground is an out-of-FOV attack only",
        ));
    }

    let mut source_platform = config.platform(src_kind);
    if let Some(a) = ov.source_altitude {
        source_platform.altitude = a;
    }
    let mut target_platform = config.platform(tgt_kind);
    if let Some(a) = tgt_alt_default {
        target_platform.altitude = a;
    }
    // The reflecting satellite of Ground-LEO-Ground is a LEO platform.
    let mut satellite = config.platform(PlatformKind::LeoSat);
    if reflection {
        if let Some(a) = ov.target_altitude {
            satellite.altitude = a;
        }
    } else if let Some(a) = ov.target_altitude {
        target_platform.altitude = a;
    }

    let default_zenith = match attack_type {
        AttackType::InFov => 0.0,
        AttackType::OutOfFov => OUT_OF_FOV_ZENITH,
    };
    let zenith = ov.zenith.unwrap_or(default_zenith);

    let geometry = if reflection {
        PathGeometry::new(source_platform.altitude, satellite.altitude, zenith, Direction::Uplink)
    } else {
        let (lo, hi, dir) = if source_platform.altitude <= target_platform.altitude {
            (source_platform.altitude, target_platform.altitude, Direction::Uplink)
        } else {
            (target_platform.altitude, source_platform.altitude, Direction::Downlink)
        };
        PathGeometry::new(lo, hi, zenith, dir)
    }
    .map_err(|e| Error::config(format!("scenarios.{name}.geometry"), e.to_string()))?;

    let beam_defaults = &config.beam;
    let source = LaserSource {
        power: ov.power.unwrap_or(source_platform.power_envelope[0]),
        aperture_diameter: ov
            .source_aperture
            .unwrap_or_else(|| config.apertures.transmitter(src_kind)),
        wavelength: ov.wavelength.unwrap_or(config.wavelength),
        beam_quality: ov.beam_quality.unwrap_or(beam_defaults.beam_quality),
        focal_range: ov.focal_range.or(beam_defaults.focal_range),
        has_adaptive_optics: ov
            .adaptive_optics
            .unwrap_or(src_kind.is_ground() && attack_type == AttackType::InFov),
        pointing_sigma: ov.pointing_sigma.unwrap_or(beam_defaults.pointing_sigma),
    };
    let receiver = Receiver {
        aperture_diameter: ov
            .receiver_aperture
            .unwrap_or_else(|| config.apertures.receiver(tgt_kind)),
        optical_loss: ov.receiver_optical_loss.unwrap_or(1.0),
        fov_angle: ov.receiver_fov.unwrap_or(10e-6),
    };
    let path = format!("scenarios.{name}");
    source.validate(&format!("{path}.source"))?;
    receiver.validate(&format!("{path}.receiver"))?;
    source_platform.validate(&format!("{path}.source_platform"))?;
    target_platform.validate(&format!("{path}.target_platform"))?;
    config.transmittance_model().zenith_value(source.wavelength)?;

    let out_of_fov = ov.out_of_fov.unwrap_or(config.out_of_fov);
    out_of_fov.validate(&format!("{path}.out_of_fov"))?;

    let reflection = if reflection {
        let surface = ov.surface.unwrap_or(config.surface);
        surface.validate(&format!("{path}.surface"))?;
        let downlink = PathGeometry::new(
            target_platform.altitude,
            satellite.altitude,
            ov.downlink_zenith.unwrap_or(0.0),
            Direction::Downlink,
        )
        .map_err(|e| Error::config(format!("{path}.downlink"), e.to_string()))?;
        target_platform = satellite_target(target_platform);
        Some(ReflectionSpec { surface, downlink })
    } else {
        None
    };

    Ok(ScenarioSpec {
        name: preset.map(|p| p.name().to_string()).unwrap_or_else(|| name.to_string()),
        attack_type,
        source_platform,
        target_platform,
        source,
        receiver,
        geometry,
        out_of_fov,
        reflection,
    })
}

// The receiving OGS of the reflection scenario keeps its ground preset.
fn satellite_target(p: Platform) -> Platform {
    p
}

/// Which edge of the uncertainty band to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandEdge {
    Low,
    Nominal,
    High,
}

/// Propagated scenario, ready to turn laser power into received power.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    pub spec: &'a ScenarioSpec,
    pub state: BeamState,
    pub return_leg: Option<ReturnLeg>,
}

impl<'a> Evaluator<'a> {
    pub fn new(spec: &'a ScenarioSpec, config: &ConfigDocument) -> Result<Self> {
        let model = config.propagation_model();
        let state = model.propagate(&spec.source, &spec.geometry, spec.uses_adaptive_optics())?;
        let return_leg = match &spec.reflection {
            Some(r) => Some(ReturnLeg::from_geometry(
                &spec.geometry,
                &r.downlink,
                spec.wavelength(),
                &model.transmittance,
                model.ceiling,
            )?),
            None => None,
        };
        Ok(Evaluator {
            spec,
            state,
            return_leg,
        })
    }

    /// Received power (W) for laser output `p_ini` at band edge `edge`.
    pub fn received_power(&self, p_ini: f64, edge: BandEdge) -> f64 {
        let spec = self.spec;
        if let (Some(r), Some(leg)) = (&spec.reflection, &self.return_leg) {
            let surface = match edge {
                BandEdge::Low => r.surface.low(),
                BandEdge::Nominal => r.surface,
                BandEdge::High => r.surface.high(),
            };
            return scattering::ground_leo_ground_power(
                &self.state,
                p_ini,
                &surface,
                spec.geometry.zenith,
                leg,
                &spec.receiver,
            );
        }
        match spec.attack_type {
            AttackType::InFov => beam::received_power_in_fov(&self.state, p_ini, &spec.receiver),
            AttackType::OutOfFov => {
                let kappa = match edge {
                    BandEdge::Low => spec.out_of_fov.kappa_range[0],
                    BandEdge::Nominal => spec.out_of_fov.kappa,
                    BandEdge::High => spec.out_of_fov.kappa_range[1],
                };
                scattering::out_of_fov_power(
                    &self.state,
                    p_ini,
                    &spec.receiver,
                    spec.geometry.zenith,
                    kappa,
                )
            }
        }
    }
}

/// Log-spaced laser power grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerGrid {
    /// W
    pub p_min: f64,
    /// W
    pub p_max: f64,
    pub points_per_decade: u32,
}

impl Default for PowerGrid {
    fn default() -> Self {
        PowerGrid {
            p_min: 1.0,
            p_max: 1e6,
            points_per_decade: 25,
        }
    }
}

impl PowerGrid {
    pub fn validate(&self, path: &str) -> Result<()> {
        if !(self.p_min > 0.0 && self.p_min <= self.p_max && self.p_max.is_finite()) {
            return Err(Error::config(path, "grid must satisfy 0 < p_min <= p_max"));
        }
        if self.points_per_decade == 0 || self.points_per_decade > 10_000 {
            return Err(Error::config(
                format!("{path}.points_per_decade"),
                "must lie in 1..=10000",
            ));
        }
        if (self.p_max / self.p_min).log10() * self.points_per_decade as f64 > 1e6 {
            return Err(Error::config(path, "grid has more than a million points"));
        }
        Ok(())
    }

    /// Grid points, strictly increasing, ending exactly at `p_max`.
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.p_max / self.p_min).log10();
        let ppd = self.points_per_decade as f64;
        let steps = (decades * ppd - 1e-9).ceil().max(0.0) as usize;
        let mut pts: Vec<f64> = (0..steps)
            .map(|i| self.p_min * 10f64.powf(i as f64 / ppd))
            .collect();
        pts.push(self.p_max);
        pts
    }

    /// This grid clipped to the platform's power envelope.
    pub fn within_envelope(&self, platform: &Platform) -> PowerGrid {
        let [lo, hi] = platform.power_envelope;
        let p_min = self.p_min.max(lo);
        PowerGrid {
            p_min,
            p_max: self.p_max.min(hi).max(p_min),
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p_ini_w: f64,
    pub p_recv_low_w: f64,
    pub p_recv_w: f64,
    pub p_recv_high_w: f64,
    pub effects: EffectReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub schema_version: String,
    pub scenario: String,
    pub attack_type: AttackType,
    pub wavelength: f64,
    pub adaptive_optics: bool,
    pub points: Vec<SweepPoint>,
}

pub fn run_sweep(
    spec: &ScenarioSpec,
    config: &ConfigDocument,
    grid: &PowerGrid,
) -> Result<SweepResult> {
    grid.validate("sweep")?;
    let eval = Evaluator::new(spec, config)?;
    let ladder = &config.effects;
    let points = grid
        .points()
        .into_par_iter()
        .map(|p| {
            let nominal = eval.received_power(p, BandEdge::Nominal);
            Ok(SweepPoint {
                p_ini_w: p,
                p_recv_low_w: eval.received_power(p, BandEdge::Low),
                p_recv_w: nominal,
                p_recv_high_w: eval.received_power(p, BandEdge::High),
                effects: classify_effects(nominal, &spec.receiver, ladder)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        schema_version: SCHEMA_VERSION.to_string(),
        scenario: spec.name.clone(),
        attack_type: spec.attack_type,
        wavelength: spec.wavelength(),
        adaptive_optics: spec.uses_adaptive_optics(),
        points,
    })
}

/// Sweeps with adaptive optics switched on and off, for ground sources.
pub fn run_ao_pair(
    spec: &ScenarioSpec,
    config: &ConfigDocument,
    grid: &PowerGrid,
) -> Result<(SweepResult, SweepResult)> {
    let mut with = spec.clone();
    with.source.has_adaptive_optics = true;
    let mut without = spec.clone();
    without.source.has_adaptive_optics = false;
    Ok((run_sweep(&with, config, grid)?, run_sweep(&without, config, grid)?))
}

/// Smallest laser output (W) whose received power reaches the onset of
/// `effect`, to 1% in power. `None` if unreachable at [`MAX_POWER`].
pub fn find_threshold_power(
    spec: &ScenarioSpec,
    config: &ConfigDocument,
    effect: &str,
    edge: BandEdge,
) -> Result<Option<f64>> {
    let threshold = find_effect(&config.effects, effect)
        .ok_or_else(|| Error::config("effect", format!("no effect matching `{effect}`")))?;
    let (onset, _) = threshold.power_onsets(&spec.receiver);
    let eval = Evaluator::new(spec, config)?;
    let reaches = |p: f64| eval.received_power(p, edge) >= onset;

    let mut hi = MAX_POWER;
    if !reaches(hi) {
        return Ok(None);
    }
    let mut lo = hi / 10.0;
    while reaches(lo) {
        hi = lo;
        lo /= 10.0;
        if lo < 1e-30 {
            return Ok(Some(hi));
        }
    }
    while hi / lo > 1.01 {
        let mid = (lo * hi).sqrt();
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Ground radius (m) around the nadir point within which an out-of-FOV
/// attack from above delivers at least `floor` watts.
///
/// The beam is aimed at the nadir point and the source stays fixed. A
/// receiver at ground offset `x` sits `x` off the beam axis and sees the
/// source at zenith angle `atan(x/h)`, which sets its in-scattering
/// cross-section and the slant transmittance.
pub fn dazzle_footprint(
    spec: &ScenarioSpec,
    config: &ConfigDocument,
    p_ini: f64,
    floor: f64,
) -> Result<f64> {
    if spec.attack_type != AttackType::OutOfFov || spec.geometry.direction != Direction::Downlink {
        return Err(Error::config(
            "scenario",
            "dazzle footprint needs an out-of-FOV attack from above the receiver",
        ));
    }
    if !(p_ini >= 0.0 && floor > 0.0) {
        return Err(Error::domain("power must be >= 0 and floor > 0"));
    }
    if p_ini == 0.0 {
        return Ok(0.0);
    }
    let model = config.propagation_model();
    let nadir = spec.geometry.with_zenith(0.0)?;
    let state = model.propagate(&spec.source, &nadir, spec.uses_adaptive_optics())?;
    let height = nadir.h1 - nadir.h0;
    let kappa = spec.out_of_fov.kappa;
    let tau_nadir = state.tau_a;

    let received = |x: f64| -> Result<f64> {
        let zenith = (x / height).atan();
        let tau = crate::atmosphere::transmittance(
            &nadir.with_zenith(zenith)?,
            spec.wavelength(),
            &model.transmittance,
            model.ceiling,
        )?;
        let cos = zenith.cos();
        let i = beam::intensity(&state, p_ini, x) * tau / tau_nadir;
        Ok(spec.receiver.optical_loss * i * kappa * spec.receiver.area() * cos * cos)
    };

    if received(0.0)? < floor {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = state.w_tot.max(1.0);
    while received(hi)? >= floor {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 * height {
            return Ok(hi);
        }
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if received(mid)? >= floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ConfigDocument {
        ConfigDocument::default()
    }

    #[test]
    fn ground_leo_preset() {
        let s = build_scenario("Ground-LEO", &ScenarioOverrides::default(), &cfg()).unwrap();
        assert_eq!(s.source.aperture_diameter, 1.0);
        assert_eq!(s.receiver.aperture_diameter, 0.2);
        assert_eq!(s.geometry.h1, 500e3);
        assert_eq!(s.geometry.direction, Direction::Uplink);
        assert_eq!(s.attack_type, AttackType::OutOfFov);
        assert_eq!(s.geometry.zenith, OUT_OF_FOV_ZENITH);
        let ov = ScenarioOverrides {
            attack_type: Some(AttackType::InFov),
            target_altitude: Some(1000e3),
            ..Default::default()
        };
        let s = build_scenario("ground-leo", &ov, &cfg()).unwrap();
        assert_eq!(s.geometry.h1, 1000e3);
        assert_eq!(s.geometry.zenith, 0.0);
        assert!(s.uses_adaptive_optics());
        assert_eq!(s.source_platform.power_envelope, [1e3, 1e6]);
    }

    #[test]
    fn air_ground_with_drone() {
        let ov = ScenarioOverrides {
            source_platform: Some(PlatformKind::Drone),
            ..Default::default()
        };
        let s = build_scenario("Air-Ground", &ov, &cfg()).unwrap();
        assert_eq!(s.source_platform.altitude, 5e3);
        assert_eq!(s.source_platform.power_envelope, [100.0, 2e3]);
        assert_eq!(s.geometry.direction, Direction::Downlink);
        assert_eq!(s.source.aperture_diameter, 0.2);
        assert_eq!(s.receiver.aperture_diameter, 0.6);
    }

    #[test]
    fn ground_geo_altitude() {
        let s = build_scenario("Ground-GEO", &ScenarioOverrides::default(), &cfg()).unwrap();
        assert_eq!(s.geometry.h1, 35_800e3);
    }

    #[test]
    fn unknown_and_custom() {
        let err = build_scenario("Moon-Mars", &ScenarioOverrides::default(), &cfg()).unwrap_err();
        assert!(err.is_config());
        let ov = ScenarioOverrides {
            source_platform: Some(PlatformKind::Stratospheric),
            target_platform: Some(PlatformKind::GeoSat),
            ..Default::default()
        };
        let s = build_scenario("Balloon-GEO", &ov, &cfg()).unwrap();
        assert_eq!(s.name, "Balloon-GEO");
        assert_eq!(s.geometry.h0, 30e3);
    }

    #[test]
    fn reflection_rejects_in_fov() {
        let ov = ScenarioOverrides {
            attack_type: Some(AttackType::InFov),
            ..Default::default()
        };
        assert!(build_scenario("Ground-LEO-Ground", &ov, &cfg()).is_err());
    }

    #[test]
    fn every_preset_evaluates() {
        let c = cfg();
        for p in Preset::ALL {
            for attack in [AttackType::InFov, AttackType::OutOfFov] {
                let ov = ScenarioOverrides {
                    attack_type: Some(attack),
                    ..Default::default()
                };
                let Ok(s) = build_scenario(p.name(), &ov, &c) else {
                    assert_eq!((p, attack), (Preset::GroundLeoGround, AttackType::InFov));
                    continue;
                };
                let e = Evaluator::new(&s, &c).unwrap();
                let lo = e.received_power(100.0, BandEdge::Low);
                let nom = e.received_power(100.0, BandEdge::Nominal);
                let hi = e.received_power(100.0, BandEdge::High);
                assert!(lo > 0.0 && lo <= nom && nom <= hi, "{p:?} {attack:?}");
                assert!(hi <= 100.0);
            }
        }
    }

    #[test]
    fn grid_shape() {
        let g = PowerGrid::default();
        let pts = g.points();
        assert_eq!(pts.len(), 151);
        assert_eq!(pts[0], 1.0);
        assert_eq!(*pts.last().unwrap(), 1e6);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let single = PowerGrid {
            p_min: 5.0,
            p_max: 5.0,
            points_per_decade: 25,
        };
        assert_eq!(single.points(), vec![5.0]);
    }

    #[test]
    fn threshold_unreachable_is_none() {
        let c = cfg();
        let s = build_scenario("GEO-Ground", &ScenarioOverrides::default(), &c).unwrap();
        let t = find_threshold_power(&s, &c, "aluminium_melting", BandEdge::Nominal).unwrap();
        assert_eq!(t, None);
        assert!(find_threshold_power(&s, &c, "no such effect", BandEdge::Nominal).is_err());
    }

    #[test]
    fn footprint_zero_power() {
        let c = cfg();
        let s = build_scenario("GEO-Ground", &ScenarioOverrides::default(), &c).unwrap();
        assert_eq!(dazzle_footprint(&s, &c, 0.0, 1e-15).unwrap(), 0.0);
        assert_eq!(dazzle_footprint(&s, &c, 1e-9, 1e-15).unwrap(), 0.0);
        let up = build_scenario("Ground-LEO", &ScenarioOverrides::default(), &c).unwrap();
        assert!(dazzle_footprint(&up, &c, 10.0, 1e-15).is_err());
    }
}
