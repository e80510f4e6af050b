//! Link-budget model of laser attacks on free-space quantum key
//! distribution receivers.
//!
//! The chain runs from a laser source through the atmosphere
//! ([`atmosphere`], [`turbulence`]) to a Gaussian beam at the target
//! ([`beam`]), optionally via off-axis scattering or a satellite reflection
//! ([`scattering`]). Received power is classified against a ladder of
//! detector effects ([`effects`]) and summarised as a risk grade
//! ([`risk`]). [`scenario`] ties this together for the named attack
//! scenarios.

pub mod atmosphere;
pub mod beam;
pub mod calibrate;
pub mod config;
pub mod effects;
pub mod emit;
pub mod error;
pub mod model;
pub mod quad;
pub mod risk;
pub mod scattering;
pub mod scenario;
pub mod turbulence;
pub mod units;

pub use config::{load_config, parse_config, ConfigDocument};
pub use error::{Error, Result};
pub use model::{Direction, LaserSource, PathGeometry, Platform, PlatformKind, Receiver};
pub use scenario::{
    build_scenario, dazzle_footprint, find_threshold_power, run_ao_pair, run_sweep, BandEdge,
    Evaluator, PowerGrid, Preset, ScenarioOverrides, ScenarioSpec, SweepResult,
};
