//! The `syncline` command line.
//!
//! Exit codes: 0 success, 1 `simulate --check` found a ratio outside the
//! band, 2 usage or validation error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use syncline_core::catalog::{Levers, Payload, PlatformSpec, Registry, SensorKind, SensorSpec, SurveySystem};
use syncline_core::simulator::{Maneuver, NoiseMode, RunConfig, RunResult, Scenario, RATIO_BAND_HIGH, RATIO_BAND_LOW};
use syncline_core::syncline::{log_space, sample_curve, ErrorBudget};

use crate::catalog_file::{read_registry, CatalogDoc, PlatformDoc, SensorDoc, SurveyDoc};
use crate::output::{curve_json, run_json, table_json, write_curve_csv, write_run_csv, write_table_csv};
use crate::report::{
    georef_tau_crit_table, survey_tau_crit_table, DEFAULT_GEOREF_PLATFORMS, DEFAULT_GEOREF_SENSORS,
    DEFAULT_SURVEY_SENSORS,
};
use crate::svg::{syncline_svg, Series};
use crate::{parallel, AppError, Result};

/// Payload used when `--payload` is not given.
pub const DEFAULT_PAYLOAD: [&str; 3] = ["F9P RTK", "MRU5", "VUX1"];

#[derive(Debug, Parser)]
#[command(name = "syncline", version, about = "Time-synchronization error budgets for multi-sensor robots")]
pub struct Cli {
    /// JSON catalog merged over the builtin platforms and sensors.
    #[arg(long, global = true, value_name = "FILE")]
    pub catalog: Option<PathBuf>,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect platforms, sensors and survey systems.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Critical synchronization error tables.
    TauCrit(TauCritArgs),
    /// Sample a syncline (CSV, optional SVG).
    Curve(CurveArgs),
    /// Worst-case simulation compared with the syncline.
    Simulate(SimulateArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[arg(long)]
        platforms: bool,
        #[arg(long)]
        sensors: bool,
        #[arg(long)]
        surveys: bool,
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct TauCritArgs {
    /// Survey table (surface vessels and AUV) instead of georeferencing.
    #[arg(long)]
    pub survey: bool,
    /// Platforms (georeferencing table), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub platforms: Option<Vec<String>>,
    /// Survey systems (survey table), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub systems: Option<Vec<String>>,
    /// Sensors, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sensors: Option<Vec<String>>,
    /// Adds a full-payload row: POSITION,ATTITUDE,RANGE_BEARING.
    #[arg(long, value_delimiter = ',')]
    pub payload: Option<Vec<String>>,
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct Target {
    /// Georeferencing platform.
    #[arg(long, conflicts_with = "survey", required_unless_present = "survey")]
    pub platform: Option<String>,
    /// POSITION,ATTITUDE,RANGE_BEARING sensors (default F9P RTK,MRU5,VUX1).
    #[arg(long, value_delimiter = ',', conflicts_with = "survey")]
    pub payload: Option<Vec<String>>,
    /// Survey system.
    #[arg(long)]
    pub survey: Option<String>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value_t = 1e-7)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Replace the sensor-induced error (m).
    #[arg(long)]
    pub sensor_error: Option<f64>,
    /// Also write a log-log plot.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Adversarial,
    Stochastic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ManeuverArg {
    Circular,
    Straight,
    Aligned,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, value_enum, default_value = "adversarial")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 256)]
    pub trials: usize,
    /// Explicit τ grid (s), comma separated; overrides --tau-min/--tau-max/--n.
    #[arg(long, value_delimiter = ',')]
    pub taus: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-7)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    /// Set every sensor sigma to zero.
    #[arg(long)]
    pub zero_noise: bool,
    /// Vehicle motion (default: circular for georeferencing, aligned for surveys).
    #[arg(long, value_enum)]
    pub maneuver: Option<ManeuverArg>,
    /// Run on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Exit with status 1 if any ratio leaves [0.7, 1.02] (adversarial mode).
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub json: bool,
}

/// Result of a successful invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    CheckFailed,
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|source| AppError::Io { path: p.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| AppError::Io { path: "stdout".into(), source })
        }
    }
}

fn names(list: &Option<Vec<String>>, default: &[&str]) -> Vec<String> {
    match list {
        Some(v) => v.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => default.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let registry = read_registry(cli.catalog.as_deref())?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Catalog { action } => catalog(&registry, action, out),
        Command::TauCrit(args) => tau_crit(&registry, &args, out),
        Command::Curve(args) => curve(&registry, &args, out),
        Command::Simulate(args) => simulate(&registry, &args, out),
    }
}

fn deg(rad: f64) -> f64 {
    format!("{:.9}", rad.to_degrees()).parse().expect("formatted float parses")
}

fn describe_sensor(s: &SensorSpec) -> String {
    match s.kind {
        SensorKind::Position { sigma_p } => format!("position: σ_p {sigma_p} m"),
        SensorKind::Attitude { sigma_roll, sigma_pitch, sigma_yaw } => {
            format!("attitude: σ roll/pitch/yaw {}°/{}°/{}°", deg(sigma_roll), deg(sigma_pitch), deg(sigma_yaw))
        }
        SensorKind::RangeBearing { sigma_range, sigma_azimuth, sigma_elevation } => {
            format!("range-bearing: σ_r {sigma_range} m, σ az/el {}°/{}°", deg(sigma_azimuth), deg(sigma_elevation))
        }
    }
}

fn describe_platform(p: &PlatformSpec) -> String {
    format!("v_max {} m/s, ω_max {}°/s, d {} m, b {} m", p.v_max, deg(p.omega_max), p.d, p.b)
}

fn describe_survey(s: &SurveySystem) -> String {
    format!(
        "SV {} ({}, {}, {}), AUV {} ({}, {}), d_sv {} m, d_auv {} m",
        s.sv.name,
        s.sv_payload.position.name,
        s.sv_payload.attitude.name,
        s.sv_payload.range_bearing.name,
        s.auv.name,
        s.auv_payload.attitude.name,
        s.auv_payload.range_bearing.name,
        s.d_sv,
        s.d_auv
    )
}

fn aligned(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(n, d)| format!("{n}{}  {d}\n", " ".repeat(w - n.chars().count()))).collect()
}

fn catalog(registry: &Registry, action: CatalogAction, out: Option<&Path>) -> Result<Outcome> {
    match action {
        CatalogAction::List { platforms, sensors, surveys, json } => {
            let all = !(platforms || sensors || surveys);
            let full = CatalogDoc::from_registry(registry);
            let doc = CatalogDoc {
                platforms: if all || platforms { full.platforms } else { Vec::new() },
                sensors: if all || sensors { full.sensors } else { Vec::new() },
                survey_systems: if all || surveys { full.survey_systems } else { Vec::new() },
            };
            if json {
                let mut text = serde_json::to_string_pretty(&doc)?;
                text.push('\n');
                return emit(out, text.as_bytes()).map(|_| Outcome::Ok);
            }
            let mut text = String::new();
            let mut section = |title: &str, rows: Vec<(String, String)>| {
                if !rows.is_empty() {
                    if !text.is_empty() {
                        text.push('\n');
                    }
                    text.push_str(&format!("{title}\n{}", aligned(&rows)));
                }
            };
            if all || platforms {
                section(
                    "Platforms",
                    registry.platforms.iter().map(|p| (p.name.clone(), describe_platform(p))).collect(),
                );
            }
            if all || sensors {
                section("Sensors", registry.sensors.iter().map(|s| (s.name.clone(), describe_sensor(s))).collect());
            }
            if all || surveys {
                section(
                    "Survey systems",
                    registry.survey_systems.iter().map(|s| (s.name.clone(), describe_survey(s))).collect(),
                );
            }
            emit(out, text.as_bytes()).map(|_| Outcome::Ok)
        }
        CatalogAction::Show { name, json } => {
            let hits = [
                registry.platform(&name).ok().map(|p| (p.name.clone(), Entry::Platform(p))),
                registry.sensor(&name).ok().map(|s| (s.name.clone(), Entry::Sensor(s))),
                registry.survey(&name).ok().map(|s| (s.name.clone(), Entry::Survey(s))),
            ];
            let hits: Vec<_> = hits.into_iter().flatten().collect();
            let entry = match hits.len() {
                0 => return Err(usage(format!("no platform, sensor or survey system named '{name}'"))),
                1 => &hits[0].1,
                _ => match hits.iter().find(|(n, _)| *n == name) {
                    Some((_, e)) => e,
                    None => return Err(usage(format!("'{name}' is ambiguous"))),
                },
            };
            let text = if json {
                let v = match entry {
                    Entry::Platform(p) => serde_json::to_value(PlatformDoc::from_spec(p))?,
                    Entry::Sensor(s) => serde_json::to_value(SensorDoc::from_spec(s))?,
                    Entry::Survey(s) => serde_json::to_value(SurveyDoc::from_system(s))?,
                };
                serde_json::to_string_pretty(&v)? + "\n"
            } else {
                match entry {
                    Entry::Platform(p) => format!("{} (platform)\n  {}\n", p.name, describe_platform(p)),
                    Entry::Sensor(s) => format!("{} (sensor)\n  {}\n", s.name, describe_sensor(s)),
                    Entry::Survey(s) => format!("{} (survey system)\n  {}\n", s.name, describe_survey(s)),
                }
            };
            emit(out, text.as_bytes()).map(|_| Outcome::Ok)
        }
    }
}

enum Entry<'a> {
    Platform(&'a PlatformSpec),
    Sensor(&'a SensorSpec),
    Survey(&'a SurveySystem),
}

fn payload_names(list: &Option<Vec<String>>) -> Result<Option<[String; 3]>> {
    match list {
        None => Ok(None),
        Some(_) => {
            let v = names(list, &[]);
            <[String; 3]>::try_from(v).map(Some).map_err(|v| {
                usage(format!("--payload needs exactly 3 sensors (position,attitude,range-bearing), got {}", v.len()))
            })
        }
    }
}

fn tau_crit(registry: &Registry, args: &TauCritArgs, out: Option<&Path>) -> Result<Outcome> {
    if args.sensors.is_some() && names(&args.sensors, &[]).is_empty() {
        return Err(usage("--sensors is empty"));
    }
    let table = if args.survey {
        if args.platforms.is_some() || args.payload.is_some() {
            return Err(usage("--platforms/--payload apply to the georeferencing table; use --systems with --survey"));
        }
        let system_names = match &args.systems {
            Some(_) => names(&args.systems, &[]),
            None => registry.survey_systems.iter().map(|s| s.name.clone()).collect(),
        };
        let systems = system_names.iter().map(|n| registry.survey(n)).collect::<Result<Vec<_>, _>>()?;
        survey_tau_crit_table(registry, &systems, &names(&args.sensors, &DEFAULT_SURVEY_SENSORS))?
    } else {
        if args.systems.is_some() {
            return Err(usage("--systems requires --survey"));
        }
        let payload = payload_names(&args.payload)?;
        let sensors = if args.sensors.is_none() && payload.is_some() {
            Vec::new()
        } else {
            names(&args.sensors, &DEFAULT_GEOREF_SENSORS)
        };
        georef_tau_crit_table(registry, &names(&args.platforms, &DEFAULT_GEOREF_PLATFORMS), &sensors, payload.as_ref())?
    };
    let bytes = if args.csv {
        let mut buf = Vec::new();
        write_table_csv(&table, &mut buf)?;
        buf
    } else if args.json {
        (table_json(&table)? + "\n").into_bytes()
    } else {
        table.to_text().into_bytes()
    };
    emit(out, &bytes).map(|_| Outcome::Ok)
}

fn scenario(registry: &Registry, target: &Target) -> Result<Scenario> {
    if let Some(name) = &target.survey {
        return Ok(Scenario::Survey(registry.survey(name)?.clone()));
    }
    let platform =
        registry.platform(target.platform.as_deref().expect("clap requires --platform or --survey"))?.clone();
    let names = payload_names(&target.payload)?.unwrap_or(DEFAULT_PAYLOAD.map(String::from));
    let payload = Payload::new(
        registry.sensor(&names[0])?.clone(),
        registry.sensor(&names[1])?.clone(),
        registry.sensor(&names[2])?.clone(),
    )?
    .with_levers(Levers::for_baseline(platform.b));
    Ok(Scenario::Georef { platform, payload })
}

fn curve(registry: &Registry, args: &CurveArgs, out: Option<&Path>) -> Result<Outcome> {
    let target = scenario(registry, &args.target)?;
    let mut budget = target.budget()?;
    if let Some(e) = args.sensor_error {
        budget = ErrorBudget::new(budget.delta_sync_rate, e)?;
    }
    let curve = sample_curve(&budget, args.tau_min, args.tau_max, args.n)?;
    let bytes = if args.json {
        (curve_json(&curve)? + "\n").into_bytes()
    } else {
        let mut buf = Vec::new();
        write_curve_csv(&curve, &mut buf)?;
        buf
    };
    emit(out, &bytes)?;
    if let Some(path) = &args.svg {
        let label = target.name();
        let svg = syncline_svg(&format!("Syncline: {label}"), &[Series { label: &label, curve: &curve }]);
        std::fs::write(path, svg).map_err(|source| AppError::Io { path: path.display().to_string(), source })?;
    }
    Ok(Outcome::Ok)
}

fn simulate(registry: &Registry, args: &SimulateArgs, out: Option<&Path>) -> Result<Outcome> {
    let mut target = scenario(registry, &args.target)?;
    if args.zero_noise {
        target = match target {
            Scenario::Georef { platform, payload } => Scenario::Georef { platform, payload: payload.scaled(0.0) },
            Scenario::Survey(s) => Scenario::Survey(s.scaled(0.0)),
        };
    }
    let noise_mode = match args.mode {
        ModeArg::Adversarial => NoiseMode::Adversarial,
        ModeArg::Stochastic => NoiseMode::Stochastic,
    };
    if args.check && noise_mode != NoiseMode::Adversarial {
        return Err(usage("--check requires --mode adversarial"));
    }
    let tau_grid = match &args.taus {
        Some(t) => t.clone(),
        None => log_space(args.tau_min, args.tau_max, args.n)?,
    };
    let config = RunConfig {
        tau_grid,
        trials_per_tau: args.trials,
        noise_mode,
        seed: args.seed,
        maneuver: args.maneuver.map(|m| match m {
            ManeuverArg::Circular => Maneuver::Circular,
            ManeuverArg::Straight => Maneuver::Straight,
            ManeuverArg::Aligned => Maneuver::Aligned,
        }),
    };
    let result = parallel::run(target, config, !args.serial)?;
    let bytes = if args.json {
        (run_json(&result)? + "\n").into_bytes()
    } else {
        let mut buf = Vec::new();
        write_run_csv(&result, &mut buf)?;
        buf
    };
    emit(out, &bytes)?;
    if args.check {
        return Ok(check_report(&result));
    }
    Ok(Outcome::Ok)
}

fn check_report(result: &RunResult) -> Outcome {
    let (lo, hi) = result.ratio.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    if result.within_band() {
        eprintln!("check passed: ratios in [{lo:.4}, {hi:.4}] within [{RATIO_BAND_LOW}, {RATIO_BAND_HIGH}]");
        Outcome::Ok
    } else {
        eprintln!("check failed: ratios span [{lo:.4}, {hi:.4}], outside [{RATIO_BAND_LOW}, {RATIO_BAND_HIGH}]");
        Outcome::CheckFailed
    }
}
