use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcdos::calibrate::{calibrate_transmittance, SuppressionTarget};
use qcdos::effects::{classify_effects, find_effect};
use qcdos::emit::{csv_table, num, risk_csv, risk_json, sweep_csv, sweep_json, tagged_json};
use qcdos::model::{fov_diameter, PlatformKind, Receiver};
use qcdos::risk::{scenario_risk_table, AttackType, Impact, Likelihood, RiskAssessment};
use qcdos::units::{parse_quantity, QuantityKind};
use qcdos::{
    build_scenario, dazzle_footprint, find_threshold_power, run_ao_pair, run_sweep, BandEdge,
    ConfigDocument, Error, Evaluator, PowerGrid, ScenarioOverrides,
};

/// One CSV row as ordered (column, value) pairs.
type Record = Vec<(&'static str, String)>;

#[derive(Parser)]
#[command(name = "qcdos", version, about = "Laser attack link budgets for free-space QKD receivers")]
struct Cli {
    /// JSON configuration file; built-in defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Laser wavelength, e.g. `1550nm` (bare numbers are nm).
    #[arg(long, global = true, value_parser = wavelength)]
    wavelength: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Band {
    Low,
    Nominal,
    High,
}

impl From<Band> for BandEdge {
    fn from(b: Band) -> Self {
        match b {
            Band::Low => BandEdge::Low,
            Band::Nominal => BandEdge::Nominal,
            Band::High => BandEdge::High,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// FOV diameter at a distance; the full reference grid without arguments.
    Fov {
        /// e.g. `10urad` (bare numbers are µrad)
        #[arg(long, value_parser = fov_angle, requires = "distance")]
        angle: Option<f64>,
        /// e.g. `500km` (bare numbers are km)
        #[arg(long, value_parser = distance, requires = "angle")]
        distance: Option<f64>,
    },
    /// Beam state at the target for one scenario.
    Propagate(ScenarioArgs),
    /// Received power over a laser power grid.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Grid start, e.g. `1W`
        #[arg(long, value_parser = power)]
        p_min: Option<f64>,
        #[arg(long, value_parser = power)]
        p_max: Option<f64>,
        #[arg(long)]
        points_per_decade: Option<u32>,
        /// Clip the grid to the source platform's power envelope.
        #[arg(long)]
        envelope: bool,
        /// Emit sweeps with and without adaptive optics (ground sources).
        #[arg(long)]
        ao_pair: bool,
    },
    /// Minimum laser power that triggers an effect.
    Threshold {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Effect id or name prefix, e.g. `apd_structural_damage`.
        #[arg(long)]
        effect: String,
        /// Which edge of the uncertainty band to evaluate.
        #[arg(long, value_enum, default_value_t = Band::Nominal)]
        band: Band,
    },
    /// Ground radius dazzled by an out-of-FOV attack from above.
    Footprint {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Laser output, e.g. `10W` (bare numbers are kW).
        #[arg(long, value_parser = power)]
        power: f64,
    },
    /// Classify a received power against the effect ladder.
    Effects {
        /// Received power, e.g. `2.5W` (bare numbers are kW).
        #[arg(long, value_parser = power)]
        power: f64,
        #[arg(long, value_parser = aperture, default_value = "0.2m")]
        receiver_aperture: f64,
    },
    /// Risk table from the configured assessments.
    Risk {
        /// Replace one assessment: `SCENARIO,ATTACK,LIKELIHOOD,IMPACT`
        /// (use `none` for not applicable).
        #[arg(long = "set", value_parser = assessment)]
        set: Vec<RiskAssessment>,
    },
    /// Fit the zenith transmittance to suppression ratios.
    Calibrate {
        /// `ALTITUDE,ZENITH,RATIO`, e.g. `1000km,60deg,0.37`. Defaults to the
        /// published pair at 500 and 1000 km.
        #[arg(long = "target", value_parser = target)]
        targets: Vec<SuppressionTarget>,
    },
    /// Print the effective configuration as canonical JSON.
    Defaults,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Preset name such as `Ground-LEO`, or a custom name with both platforms.
    #[arg(long)]
    scenario: String,
    /// `in_fov` or `out_of_fov`
    #[arg(long, value_parser = attack_type)]
    attack: Option<AttackType>,
    /// ground_fixed, ground_mobile, drone, plane, stratospheric, leo_sat, geo_sat
    #[arg(long, value_parser = platform)]
    source: Option<PlatformKind>,
    #[arg(long, value_parser = platform)]
    target: Option<PlatformKind>,
    /// e.g. `10km` (bare numbers are km)
    #[arg(long, value_parser = distance)]
    source_altitude: Option<f64>,
    #[arg(long, value_parser = distance)]
    target_altitude: Option<f64>,
    /// e.g. `60deg` (bare numbers are degrees)
    #[arg(long, value_parser = zenith)]
    zenith: Option<f64>,
    /// e.g. `5kW` (bare numbers are kW)
    #[arg(long, value_parser = power)]
    laser_power: Option<f64>,
    #[arg(long, value_parser = aperture)]
    source_aperture: Option<f64>,
    #[arg(long, value_parser = aperture)]
    receiver_aperture: Option<f64>,
    /// Force adaptive optics on; only ground sources honor it.
    #[arg(long, conflicts_with = "no_ao")]
    ao: bool,
    #[arg(long)]
    no_ao: bool,
}

impl ScenarioArgs {
    fn overrides(&self, wavelength: Option<f64>) -> ScenarioOverrides {
        ScenarioOverrides {
            attack_type: self.attack,
            source_platform: self.source,
            target_platform: self.target,
            source_altitude: self.source_altitude,
            target_altitude: self.target_altitude,
            zenith: self.zenith,
            wavelength,
            adaptive_optics: match (self.ao, self.no_ao) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            },
            power: self.laser_power,
            source_aperture: self.source_aperture,
            receiver_aperture: self.receiver_aperture,
            ..Default::default()
        }
    }
}

fn quantity(kind: QuantityKind) -> impl Fn(&str) -> Result<f64, String> {
    move |s| parse_quantity(s, kind).map_err(|e| e.to_string())
}

fn wavelength(s: &str) -> Result<f64, String> {
    quantity(QuantityKind::Wavelength)(s)
}
fn distance(s: &str) -> Result<f64, String> {
    quantity(QuantityKind::Distance)(s)
}
fn aperture(s: &str) -> Result<f64, String> {
    quantity(QuantityKind::Aperture)(s)
}
fn power(s: &str) -> Result<f64, String> {
    quantity(QuantityKind::Power)(s)
}
fn fov_angle(s: &str) -> Result<f64, String> {
    quantity(QuantityKind::FovAngle)(s)
}
fn zenith(s: &str) -> Result<f64, String> {
    quantity(QuantityKind::Zenith)(s)
}
fn attack_type(s: &str) -> Result<AttackType, String> {
    s.parse()
}
fn platform(s: &str) -> Result<PlatformKind, String> {
    s.parse()
}

fn assessment(s: &str) -> Result<RiskAssessment, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [scenario, attack, likelihood, impact] = parts[..] else {
        return Err("expected SCENARIO,ATTACK,LIKELIHOOD,IMPACT".into());
    };
    let none = |v: &str| v.eq_ignore_ascii_case("none") || v.eq_ignore_ascii_case("no");
    Ok(RiskAssessment {
        scenario: scenario.to_string(),
        attack_type: attack.parse()?,
        likelihood: if none(likelihood) { None } else { Some(likelihood.parse::<Likelihood>()?) },
        impact: if none(impact) { None } else { Some(impact.parse::<Impact>()?) },
    })
}

fn target(s: &str) -> Result<SuppressionTarget, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [h, z, r] = parts[..] else {
        return Err("expected ALTITUDE,ZENITH,RATIO".into());
    };
    Ok(SuppressionTarget {
        altitude: distance(h)?,
        zenith: zenith(z)?,
        ratio: r.trim().parse().map_err(|_| format!("bad ratio `{r}`"))?,
    })
}

fn records_csv(records: &[Record]) -> String {
    let header: Vec<&str> = records
        .first()
        .map(|r| r.iter().map(|(k, _)| *k).collect())
        .unwrap_or_default();
    csv_table(&header, records.iter().map(|r| r.iter().map(|(_, v)| v.clone())))
}

fn run(cli: &Cli) -> qcdos::Result<String> {
    let mut config = match &cli.config {
        Some(path) => qcdos::load_config(path)?,
        None => ConfigDocument::default(),
    };
    if let Some(w) = cli.wavelength {
        config.wavelength = w;
        config.validate()?;
    }
    let fmt = cli.format;
    let out = match &cli.command {
        Command::Fov { angle, distance } => {
            let cells: Vec<(f64, f64)> = match (angle, distance) {
                (Some(a), Some(d)) => vec![(*a, *d)],
                _ => [1e-6, 10e-6, 100e-6, 1000e-6]
                    .iter()
                    .flat_map(|&a| [10e3, 500e3, 1000e3, 35_000e3].map(|d| (a, d)))
                    .collect(),
            };
            let rows = cells
                .iter()
                .map(|&(a, d)| Ok((a, d, fov_diameter(a, d)?)))
                .collect::<qcdos::Result<Vec<_>>>()?;
            match fmt {
                Format::Json => tagged_json(&FovTable {
                    cells: rows
                        .iter()
                        .map(|&(fov_rad, distance_m, diameter_m)| FovCell {
                            fov_rad,
                            distance_m,
                            diameter_m,
                        })
                        .collect(),
                }),
                Format::Csv => records_csv(&rows
                        .iter()
                        .map(|&(a, d, dia)| {
                            vec![("fov_rad", num(a)), ("distance_m", num(d)), ("diameter_m", num(dia))]
                        })
                        .collect::<Vec<_>>()),
            }
        }
        Command::Propagate(args) => {
            let spec = build_scenario(&args.scenario, &args.overrides(cli.wavelength), &config)?;
            let eval = Evaluator::new(&spec, &config)?;
            let s = &eval.state;
            let p = spec.source.power;
            let p_recv = eval.received_power(p, BandEdge::Nominal);
            match fmt {
                Format::Json => tagged_json(&PropagateOut {
                    scenario: &spec,
                    beam: s,
                    p_recv_w: p_recv,
                }),
                Format::Csv => {
                    let fields: Vec<(&'static str, f64)> = vec![
                        ("p_ini_w", p),
                        ("range_m", s.range),
                        ("w0_m", s.w0),
                        ("w_d_m", s.w_d),
                        ("w_t_m", s.w_t),
                        ("w_j_m", s.w_j),
                        ("w_tot_m", s.w_tot),
                        ("fried_length_m", s.fried_length.unwrap_or(f64::INFINITY)),
                        ("moment", s.moment),
                        ("tau_a", s.tau_a),
                        ("tau_t", s.tau_t),
                        ("tau_p", s.tau_p),
                        ("tau_tot", s.tau_tot),
                        ("s_ao", s.s_ao),
                        ("s_tb", s.s_tb),
                        ("s_tot", s.s_tot),
                        ("p_recv_w", p_recv),
                    ];
                    csv_table(
                        &["quantity", "value"],
                        fields.into_iter().map(|(k, v)| vec![k.to_string(), num(v)]),
                    )
                }
            }
        }
        Command::Sweep {
            scenario,
            p_min,
            p_max,
            points_per_decade,
            envelope,
            ao_pair,
        } => {
            let spec = build_scenario(&scenario.scenario, &scenario.overrides(cli.wavelength), &config)?;
            let mut grid = PowerGrid {
                p_min: p_min.unwrap_or(config.sweep.p_min),
                p_max: p_max.unwrap_or(config.sweep.p_max),
                points_per_decade: points_per_decade.unwrap_or(config.sweep.points_per_decade),
            };
            if *envelope {
                grid = grid.within_envelope(&spec.source_platform);
            }
            if *ao_pair {
                if !spec.source_platform.kind.is_ground() {
                    return Err(Error::Config {
                        path: "sweep.ao_pair".into(),
                        message: "adaptive optics applies to ground sources only".into(),
                    });
                }
                let (with, without) = run_ao_pair(&spec, &config, &grid)?;
                match fmt {
                    Format::Json => tagged_json(&AoPair { with_ao: with, without_ao: without }),
                    Format::Csv => format!(
                        "# adaptive optics on\n{}# adaptive optics off\n{}",
                        sweep_csv(&with),
                        sweep_csv(&without)
                    ),
                }
            } else {
                let result = run_sweep(&spec, &config, &grid)?;
                match fmt {
                    Format::Json => sweep_json(&result),
                    Format::Csv => sweep_csv(&result),
                }
            }
        }
        Command::Threshold {
            scenario,
            effect,
            band,
        } => {
            let spec = build_scenario(&scenario.scenario, &scenario.overrides(cli.wavelength), &config)?;
            let t = find_threshold_power(&spec, &config, effect, (*band).into())?;
            let id = find_effect(&config.effects, effect)
                .map(|e| e.id.clone())
                .unwrap_or_default();
            let band = BandEdge::from(*band);
            match fmt {
                Format::Json => tagged_json(&ThresholdOut {
                    scenario: &spec.name,
                    effect: &id,
                    band,
                    p_ini_w: t,
                }),
                Format::Csv => records_csv(&[vec![
                        ("scenario", spec.name.clone()),
                        ("effect", id),
                        ("band", format!("{band:?}").to_lowercase()),
                        ("p_ini_w", t.map(num).unwrap_or_else(|| "none".into())),
                    ]]),
            }
        }
        Command::Footprint { scenario, power } => {
            let spec = build_scenario(&scenario.scenario, &scenario.overrides(cli.wavelength), &config)?;
            let floor = find_effect(&config.effects, "spd_noise")
                .map(|e| e.onset)
                .unwrap_or(1e-15);
            let r = dazzle_footprint(&spec, &config, *power, floor)?;
            match fmt {
                Format::Json => tagged_json(&FootprintOut {
                    scenario: &spec.name,
                    p_ini_w: *power,
                    floor_w: floor,
                    radius_m: r,
                }),
                Format::Csv => records_csv(&[vec![
                        ("scenario", spec.name.clone()),
                        ("p_ini_w", num(*power)),
                        ("floor_w", num(floor)),
                        ("radius_m", num(r)),
                    ]]),
            }
        }
        Command::Effects {
            power,
            receiver_aperture,
        } => {
            let rx = Receiver::new(*receiver_aperture);
            rx.validate("receiver")?;
            let report = classify_effects(*power, &rx, &config.effects)?;
            match fmt {
                Format::Json => tagged_json(&report),
                Format::Csv => csv_table(
                    &["id", "name", "certainty", "impact", "onset_w"],
                    report.triggered.iter().map(|t| {
                        vec![
                            t.id.clone(),
                            t.name.clone(),
                            format!("{:?}", t.certainty).to_lowercase(),
                            t.impact.to_string(),
                            num(t.onset_w),
                        ]
                    }),
                ),
            }
        }
        Command::Risk { set } => {
            let mut assessments = config.risk.clone();
            for a in set {
                match assessments
                    .iter_mut()
                    .find(|x| x.scenario.eq_ignore_ascii_case(&a.scenario) && x.attack_type == a.attack_type)
                {
                    Some(x) => *x = a.clone(),
                    None => assessments.push(a.clone()),
                }
            }
            let rows = scenario_risk_table(&assessments);
            match fmt {
                Format::Json => risk_json(&rows),
                Format::Csv => risk_csv(&rows),
            }
        }
        Command::Calibrate { targets } => {
            let targets = if targets.is_empty() {
                vec![
                    SuppressionTarget {
                        altitude: 1000e3,
                        zenith: PI / 3.0,
                        ratio: 0.37,
                    },
                    SuppressionTarget {
                        altitude: 500e3,
                        zenith: PI / 3.0,
                        ratio: 0.58,
                    },
                ]
            } else {
                targets.clone()
            };
            let result = calibrate_transmittance(&config, config.wavelength, &targets)?;
            match fmt {
                Format::Json => tagged_json(&result),
                Format::Csv => csv_table(
                    &["wavelength_m", "t0", "altitude_m", "zenith_rad", "target_ratio", "achieved_ratio"],
                    result.points.iter().map(|p| {
                        vec![
                            num(result.wavelength),
                            num(result.t0),
                            num(p.target.altitude),
                            num(p.target.zenith),
                            num(p.target.ratio),
                            num(p.achieved),
                        ]
                    }),
                ),
            }
        }
        Command::Defaults => config.to_canonical_json(),
    };
    Ok(out)
}

#[derive(serde::Serialize)]
struct FovCell {
    fov_rad: f64,
    distance_m: f64,
    diameter_m: f64,
}

#[derive(serde::Serialize)]
struct FovTable {
    cells: Vec<FovCell>,
}

#[derive(serde::Serialize)]
struct PropagateOut<'a> {
    scenario: &'a qcdos::ScenarioSpec,
    beam: &'a qcdos::beam::BeamState,
    p_recv_w: f64,
}

#[derive(serde::Serialize)]
struct AoPair {
    with_ao: qcdos::SweepResult,
    without_ao: qcdos::SweepResult,
}

#[derive(serde::Serialize)]
struct ThresholdOut<'a> {
    scenario: &'a str,
    effect: &'a str,
    band: BandEdge,
    p_ini_w: Option<f64>,
}

#[derive(serde::Serialize)]
struct FootprintOut<'a> {
    scenario: &'a str,
    p_ini_w: f64,
    floor_w: f64,
    radius_m: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let text = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_config() { 2 } else { 1 });
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(1)
        }
    }
}
