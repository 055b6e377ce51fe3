//! Worst-case experiment runner.
//!
//! For every `τ` on a grid, a set of trials (vehicle state along a maneuver,
//! object geometry, sync offsets, sensor noise) is pushed through the
//! measurement models and the fusion chain; the worst fusion error is compared
//! with the closed-form syncline.
//!
//! In adversarial mode each scalar error source (one sync offset, or one
//! component of one sensor's noise) takes magnitude exactly `τ` or `σ`, and its
//! sign is chosen greedily, source by source, to maximize the fusion error.
//! No randomness is involved. In stochastic mode offsets are uniform on
//! `[−τ, τ]` and noise is zero-mean Gaussian; every `(τ index, trial)` pair
//! draws from its own ChaCha8 stream derived from the root seed, so the
//! evaluation order does not affect results.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::catalog::{Payload, PlatformSpec, SensorKind, SurveySystem};
use crate::kinematics::{
    bearing_to_vector, exp_so3, skew, AttitudePerturbation, BearingRange, Mat3, RotationMatrix, Vec3,
};
use crate::math;
use crate::sensors::{
    estimate_survey, fuse_georef, measure_georef, NoiseDraw, RangeBearingNoise, RigidState, SurveyErrors, SurveyTruth,
    SyncOffsets,
};
use crate::syncline::{curve_on_grid, log_space, ErrorBudget, SynclineCurve};
use crate::{Error, Result};

/// Name of the generator recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Lower edge of the model-vs-simulation acceptance band.
pub const RATIO_BAND_LOW: f64 = 0.7;
/// Upper edge of the band (small-angle slack above the closed form).
pub const RATIO_BAND_HIGH: f64 = 1.02;

/// Shape of the maneuver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pattern {
    /// Constant speed along body x with a constant yaw rate.
    Circular,
    /// Constant speed, no rotation.
    Straight,
    /// Rotation about the body axis perpendicular to both the direction of
    /// travel and `line_of_sight` (body frame), so that the displacement of
    /// the sensed object caused by rotation adds to the one caused by
    /// translation.
    AdversarialAligned { line_of_sight: Vec3 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryProfile {
    /// Speed along body x, m/s.
    pub speed: f64,
    /// Magnitude of the body angular rate, rad/s.
    pub turn_rate: f64,
    pub pattern: Pattern,
}

impl TrajectoryProfile {
    /// Profile at the platform's maximum dynamics.
    pub fn at_limits(platform: &PlatformSpec, pattern: Pattern) -> Self {
        TrajectoryProfile { speed: platform.v_max, turn_rate: platform.omega_max, pattern }
    }

    pub fn validate_for(&self, platform: &PlatformSpec) -> Result<()> {
        let tol = 1.0 + 1e-12;
        if !(self.speed >= 0.0 && self.turn_rate >= 0.0) {
            return Err(validation("profile", "speed and turn rate must be >= 0"));
        }
        if self.speed > platform.v_max * tol || self.turn_rate > platform.omega_max * tol {
            return Err(validation("profile", "profile exceeds platform dynamics"));
        }
        Ok(())
    }

    fn body_rate(&self) -> Vec3 {
        let axis = match self.pattern {
            Pattern::Circular => Vec3::Z,
            Pattern::Straight => return Vec3::ZERO,
            Pattern::AdversarialAligned { line_of_sight } => {
                line_of_sight.cross(Vec3::X).normalized().unwrap_or(Vec3::Z)
            }
        };
        axis * self.turn_rate
    }
}

/// State at time `t` of a vehicle that starts at the origin with identity
/// attitude and holds the profile's body velocity and body rate.
pub fn generate_state(profile: &TrajectoryProfile, t: f64) -> Result<RigidState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidRange("time must be finite and >= 0"));
    }
    let rate = profile.body_rate();
    let velocity = Vec3::new(profile.speed, 0.0, 0.0);
    Ok(RigidState {
        position: integrated_rotation(rate, t) * velocity,
        attitude: exp_so3(rate * t),
        velocity,
        angular_rate: rate,
        r_en: RotationMatrix::IDENTITY,
    })
}

/// `∫₀ᵗ exp(S(w s)) ds`.
fn integrated_rotation(w: Vec3, t: f64) -> Mat3 {
    let wn = w.norm();
    let theta = wn * t;
    let (a, b) = if theta < 1e-4 {
        (t * t / 2.0 - theta * theta * t * t / 24.0, t * t * t / 6.0 - theta * theta * t * t * t / 120.0)
    } else {
        ((1.0 - math::cos(theta)) / (wn * wn), (theta - math::sin(theta)) / (wn * wn * wn))
    };
    let s = skew(w);
    Mat3::IDENTITY.scale(t) + s.scale(a) + (s * s).scale(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    Stochastic,
    Adversarial,
}

impl NoiseMode {
    pub fn label(&self) -> &'static str {
        match self {
            NoiseMode::Stochastic => "stochastic",
            NoiseMode::Adversarial => "adversarial",
        }
    }
}

/// Sync offsets of one payload for a worst-case sync error `tau`.
///
/// Stochastic: each offset uniform on `[−τ, τ]`. Adversarial: each offset is
/// `+τ`; the runner then picks the sign of each one that maximizes the error.
pub fn draw_offsets<R: Rng + ?Sized>(tau: f64, mode: NoiseMode, rng: &mut R) -> Result<SyncOffsets> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::NegativeTau(tau));
    }
    Ok(match mode {
        NoiseMode::Adversarial => SyncOffsets { position: tau, attitude: tau },
        NoiseMode::Stochastic if tau == 0.0 => SyncOffsets::default(),
        NoiseMode::Stochastic => {
            SyncOffsets { position: rng.random_range(-tau..=tau), attitude: rng.random_range(-tau..=tau) }
        }
    })
}

/// Vehicle motion used to realize the worst case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Maneuver {
    Circular,
    Straight,
    Aligned,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Ascending, non-negative synchronization errors, s.
    pub tau_grid: Vec<f64>,
    pub trials_per_tau: usize,
    pub noise_mode: NoiseMode,
    pub seed: u64,
    /// `None` uses the scenario default: circular for georeferencing,
    /// aligned for the survey.
    pub maneuver: Option<Maneuver>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tau_grid: log_space(1e-7, 1.0, 40).expect("valid default grid"),
            trials_per_tau: 256,
            noise_mode: NoiseMode::Adversarial,
            seed: 0,
            maneuver: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tau_grid.is_empty() {
            return Err(validation("tau_grid", "grid is empty"));
        }
        if self.tau_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(validation("tau_grid", "values must be finite and >= 0"));
        }
        if self.tau_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(validation("tau_grid", "grid must be ascending"));
        }
        if self.trials_per_tau == 0 {
            return Err(validation("trials_per_tau", "need at least one trial"));
        }
        Ok(())
    }
}

/// What is being simulated.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Scenario {
    /// One platform georeferencing external objects with GNSS, INS and a
    /// range-bearing sensor.
    Georef { platform: PlatformSpec, payload: Payload },
    /// Surface vessel + AUV mapping the seafloor.
    Survey(SurveySystem),
}

impl Scenario {
    pub fn name(&self) -> String {
        match self {
            Scenario::Georef { platform, .. } => alloc::format!("georef:{}", platform.name),
            Scenario::Survey(sys) => alloc::format!("survey:{}", sys.name),
        }
    }

    pub fn budget(&self) -> Result<ErrorBudget> {
        match self {
            Scenario::Georef { platform, payload } => ErrorBudget::for_platform(platform, payload),
            Scenario::Survey(sys) => ErrorBudget::for_survey(sys),
        }
    }

    fn payloads(&self) -> Vec<&Payload> {
        match self {
            Scenario::Georef { payload, .. } => vec![payload],
            Scenario::Survey(sys) => vec![&sys.sv_payload, &sys.auv_payload],
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Scenario::Georef { platform, payload } => {
                platform.validate()?;
                payload.validate_for(platform)
            }
            Scenario::Survey(sys) => sys.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    pub scenario: String,
    pub noise_mode: NoiseMode,
    pub seed: u64,
    pub trials_per_tau: usize,
    pub rng: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub taus: Vec<f64>,
    /// Maximum fusion error over the trials at each `τ`, m.
    pub worst_case: Vec<f64>,
    /// Closed-form syncline at each `τ`, m.
    pub prediction: Vec<f64>,
    /// `worst_case / prediction`; 1 where both vanish.
    pub ratio: Vec<f64>,
    pub metadata: RunMetadata,
}

impl RunResult {
    /// Whether every ratio lies in `[RATIO_BAND_LOW, RATIO_BAND_HIGH]`.
    pub fn within_band(&self) -> bool {
        self.ratio.iter().all(|r| (RATIO_BAND_LOW..=RATIO_BAND_HIGH).contains(r))
    }
}

/// Scalar error sources per payload, in the order the greedy aligner visits
/// them: offsets first, then noise components.
const SOURCES_PER_PAYLOAD: usize = 11;

fn payload_magnitudes(p: &Payload, tau: f64, out: &mut Vec<f64>) {
    out.push(tau);
    out.push(tau);
    let pos = match p.position.kind {
        SensorKind::Position { sigma_p } => sigma_p,
        _ => 0.0,
    };
    out.extend([pos, pos, pos]);
    match p.attitude.kind {
        SensorKind::Attitude { sigma_roll, sigma_pitch, sigma_yaw } => out.extend([sigma_roll, sigma_pitch, sigma_yaw]),
        _ => out.extend([0.0; 3]),
    }
    match p.range_bearing.kind {
        SensorKind::RangeBearing { sigma_range, sigma_azimuth, sigma_elevation } => {
            out.extend([sigma_range, sigma_azimuth, sigma_elevation])
        }
        _ => out.extend([0.0; 3]),
    }
}

fn decode(values: &[f64]) -> (SyncOffsets, NoiseDraw) {
    let v = values;
    (
        SyncOffsets { position: v[0], attitude: v[1] },
        NoiseDraw {
            position: Vec3::new(v[2], v[3], v[4]),
            attitude: AttitudePerturbation(Vec3::new(v[5], v[6], v[7])),
            range_bearing: RangeBearingNoise { range: v[8], azimuth: v[9], elevation: v[10] },
        },
    )
}

/// Ground truth of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Truth {
    Georef { state: RigidState, object: Vec3 },
    Survey(SurveyTruth),
}

const AZIMUTH_COLUMNS: usize = 32;
const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_9;

/// Elevation level `i` of the trial lattice: 0, +s, −s, +2s, −2s, …
fn lattice_level(i: usize, step: f64) -> f64 {
    let m = i.div_ceil(2) as f64;
    if i % 2 == 1 {
        m * step
    } else {
        -m * step
    }
}

/// Range along `u` from a sensor at `lever` such that the object lies at
/// distance `d` from the vehicle reference point.
fn range_for_distance(lever: Vec3, u: Vec3, d: f64) -> f64 {
    let lu = lever.dot(u);
    let disc = lu * lu - lever.norm_squared() + d * d;
    if disc < 0.0 {
        return d;
    }
    let r = -lu + math::sqrt(disc);
    if r > 0.0 {
        r
    } else {
        d
    }
}

/// A configured experiment with precomputed trial geometry.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    config: RunConfig,
    budget: ErrorBudget,
    truths: Vec<Truth>,
}

impl Simulation {
    pub fn new(scenario: Scenario, config: RunConfig) -> Result<Self> {
        config.validate()?;
        scenario.validate()?;
        let budget = scenario.budget()?;
        let n = config.trials_per_tau;
        let truths = (0..n).map(|k| trial_truth(&scenario, &config, k, n)).collect::<Result<Vec<_>>>()?;
        Ok(Simulation { scenario, config, budget, truths })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn budget(&self) -> &ErrorBudget {
        &self.budget
    }

    pub fn truth(&self, trial: usize) -> &Truth {
        &self.truths[trial]
    }

    /// Magnitude of each scalar error source at `tau`.
    pub fn source_magnitudes(&self, tau: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(SOURCES_PER_PAYLOAD * 2);
        for p in self.scenario.payloads() {
            payload_magnitudes(p, tau, &mut out);
        }
        out
    }

    /// Fusion error `‖estimate − truth‖` for one trial with the given signed
    /// source values (layout of [`Simulation::source_magnitudes`]).
    pub fn error_with(&self, trial: usize, values: &[f64]) -> Result<f64> {
        match (&self.scenario, &self.truths[trial]) {
            (Scenario::Georef { payload, .. }, Truth::Georef { state, object }) => {
                let (offsets, noise) = decode(values);
                let m = measure_georef(state, payload, *object, offsets, &noise)?;
                Ok((fuse_georef(&m, payload, state.r_en) - *object).norm())
            }
            (Scenario::Survey(sys), Truth::Survey(truth)) => {
                let (sv_offsets, sv_noise) = decode(&values[..SOURCES_PER_PAYLOAD]);
                let (auv_offsets, auv_noise) = decode(&values[SOURCES_PER_PAYLOAD..]);
                let errors = SurveyErrors { sv_offsets, auv_offsets, sv_noise, auv_noise };
                Ok((estimate_survey(sys, truth, &errors)? - truth.footprint).norm())
            }
            _ => unreachable!("truth kind always matches the scenario"),
        }
    }

    /// Greedy sign alignment: visit each source with nonzero magnitude, keep
    /// the sign giving the larger error, and repeat until a full pass changes
    /// nothing (at most three extra passes). Returns the error and chosen values.
    pub fn greedy_worst(&self, trial: usize, magnitudes: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut values = vec![0.0; magnitudes.len()];
        for (i, &m) in magnitudes.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            values[i] = m;
            let plus = self.error_with(trial, &values)?;
            values[i] = -m;
            if self.error_with(trial, &values)? <= plus {
                values[i] = m;
            }
        }
        let mut best = self.error_with(trial, &values)?;
        for _ in 0..3 {
            let mut changed = false;
            for (i, &m) in magnitudes.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                values[i] = -values[i];
                let e = self.error_with(trial, &values)?;
                if e > best {
                    best = e;
                    changed = true;
                } else {
                    values[i] = -values[i];
                }
            }
            if !changed {
                break;
            }
        }
        Ok((best, values))
    }

    /// Fusion error of trial `trial` at grid index `tau_index`.
    pub fn trial_error(&self, tau_index: usize, trial: usize) -> Result<f64> {
        let tau = self.config.tau_grid[tau_index];
        let magnitudes = self.source_magnitudes(tau);
        match self.config.noise_mode {
            NoiseMode::Adversarial => Ok(self.greedy_worst(trial, &magnitudes)?.0),
            NoiseMode::Stochastic => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
                rng.set_stream(((tau_index as u64) << 32) | trial as u64);
                let values = self.stochastic_values(tau, &magnitudes, &mut rng)?;
                self.error_with(trial, &values)
            }
        }
    }

    fn stochastic_values(&self, tau: f64, magnitudes: &[f64], rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let mut values = Vec::with_capacity(magnitudes.len());
        for chunk in magnitudes.chunks(SOURCES_PER_PAYLOAD) {
            let offsets = draw_offsets(tau, NoiseMode::Stochastic, rng)?;
            values.push(offsets.position);
            values.push(offsets.attitude);
            for &sigma in &chunk[2..] {
                values.push(gaussian(sigma, rng));
            }
        }
        Ok(values)
    }

    /// Worst error over all trials at grid index `tau_index`.
    pub fn worst_case(&self, tau_index: usize) -> Result<f64> {
        (0..self.truths.len()).try_fold(0.0_f64, |acc, k| Ok(acc.max(self.trial_error(tau_index, k)?)))
    }

    /// Assembles a result from per-`τ` worst cases (in grid order).
    pub fn finish(&self, worst_case: Vec<f64>) -> Result<RunResult> {
        let taus = self.config.tau_grid.clone();
        let prediction = taus.iter().map(|&t| self.budget.syncline(t)).collect::<Result<Vec<_>>>()?;
        let ratio = worst_case
            .iter()
            .zip(&prediction)
            .map(|(&w, &p)| {
                if p > 0.0 {
                    w / p
                } else if w <= 1e-9 {
                    1.0
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        Ok(RunResult {
            taus,
            worst_case,
            prediction,
            ratio,
            metadata: RunMetadata {
                scenario: self.scenario.name(),
                noise_mode: self.config.noise_mode,
                seed: self.config.seed,
                trials_per_tau: self.config.trials_per_tau,
                rng: RNG_ALGORITHM,
            },
        })
    }

    /// Serial run over the whole grid.
    pub fn run(&self) -> Result<RunResult> {
        let worst = (0..self.config.tau_grid.len()).map(|i| self.worst_case(i)).collect::<Result<Vec<_>>>()?;
        self.finish(worst)
    }
}

fn gaussian(sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    match Normal::new(0.0, sigma) {
        Ok(n) if sigma > 0.0 => n.sample(rng),
        _ => 0.0,
    }
}

fn rotation_z(angle: f64) -> RotationMatrix {
    exp_so3(Vec3::Z * angle)
}

fn trial_truth(scenario: &Scenario, config: &RunConfig, k: usize, n: usize) -> Result<Truth> {
    let columns = n.min(AZIMUTH_COLUMNS);
    let (j, i) = (k % columns, k / columns);
    match scenario {
        Scenario::Georef { platform, payload } => {
            let azimuth = -PI + TAU * j as f64 / columns as f64;
            let elevation = lattice_level(i, 10f64.to_radians()).clamp(-1.4, 1.4);
            let u = payload.range_bearing_mount * bearing_to_vector(BearingRange { azimuth, elevation, range: 1.0 });
            let pattern = match config.maneuver.unwrap_or(Maneuver::Circular) {
                Maneuver::Circular => Pattern::Circular,
                Maneuver::Straight => Pattern::Straight,
                Maneuver::Aligned => Pattern::AdversarialAligned { line_of_sight: u },
            };
            let profile = TrajectoryProfile::at_limits(platform, pattern);
            let period = if platform.omega_max > 0.0 { TAU / platform.omega_max } else { 10.0 };
            let t = ((k as f64 * GOLDEN_FRACTION) % 1.0) * period;
            let state = generate_state(&profile, t)?;
            let lever = payload.levers.range_bearing;
            let r = range_for_distance(lever, u, platform.d);
            let object = state.point_position(lever) + state.r_eb() * (u * r);
            Ok(Truth::Georef { state, object })
        }
        Scenario::Survey(sys) => {
            let azimuth = (j as f64 - (columns / 2) as f64) * (60f64.to_radians() / columns as f64);
            let elevation = lattice_level(i, 5f64.to_radians()).clamp(-1.4, 1.4);
            let n_sensor = bearing_to_vector(BearingRange { azimuth, elevation, range: 1.0 });
            let heading = rotation_z(TAU * ((k as f64 * GOLDEN_FRACTION) % 1.0));
            let (svp, auvp) = (&sys.sv_payload, &sys.auv_payload);
            let u_sv = svp.range_bearing_mount * n_sensor;
            let u_auv = auvp.range_bearing_mount * n_sensor;
            let pattern = |u| match config.maneuver.unwrap_or(Maneuver::Aligned) {
                Maneuver::Circular => Pattern::Circular,
                Maneuver::Straight => Pattern::Straight,
                Maneuver::Aligned => Pattern::AdversarialAligned { line_of_sight: u },
            };

            let sv = generate_state(&TrajectoryProfile::at_limits(&sys.sv, pattern(u_sv)), 0.0)?
                .transformed(heading, Vec3::ZERO);
            let r_sv = range_for_distance(svp.levers.range_bearing, u_sv, sys.d_sv);
            let transponder = sv.point_position(svp.levers.range_bearing) + sv.r_eb() * (u_sv * r_sv);

            let auv = generate_state(&TrajectoryProfile::at_limits(&sys.auv, pattern(u_auv)), 0.0)?
                .transformed(heading, Vec3::ZERO);
            let auv = auv.transformed(RotationMatrix::IDENTITY, transponder - auv.point_position(auvp.levers.position));
            let r_auv = range_for_distance(auvp.levers.range_bearing, u_auv, sys.d_auv);
            let footprint = auv.point_position(auvp.levers.range_bearing) + auv.r_eb() * (u_auv * r_auv);
            Ok(Truth::Survey(SurveyTruth { sv, auv, footprint }))
        }
    }
}

/// Runs `scenario` serially.
pub fn run(scenario: Scenario, config: RunConfig) -> Result<RunResult> {
    Simulation::new(scenario, config)?.run()
}

/// One member of a payload sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub scenario: Scenario,
    pub curve: SynclineCurve,
    pub result: RunResult,
}

/// Curves and simulations for several payloads on one platform, all on the
/// configuration's `τ` grid.
pub fn sweep_sensors(platform: &PlatformSpec, payloads: &[Payload], config: &RunConfig) -> Result<Vec<SweepEntry>> {
    let scenarios = payloads
        .iter()
        .map(|p| Scenario::Georef { platform: platform.clone(), payload: p.clone() })
        .collect::<Vec<_>>();
    sweep(scenarios, config)
}

/// Like [`sweep_sensors`] for survey systems.
pub fn sweep_survey(systems: &[SurveySystem], config: &RunConfig) -> Result<Vec<SweepEntry>> {
    sweep(systems.iter().cloned().map(Scenario::Survey).collect(), config)
}

fn sweep(scenarios: Vec<Scenario>, config: &RunConfig) -> Result<Vec<SweepEntry>> {
    if scenarios.is_empty() {
        return Err(validation("payloads", "sweep needs at least one payload"));
    }
    scenarios
        .into_iter()
        .map(|scenario| {
            let curve = curve_on_grid(&scenario.budget()?, &config.tau_grid)?;
            let result = run(scenario.clone(), config.clone())?;
            Ok(SweepEntry { scenario, curve, result })
        })
        .collect()
}

fn validation(path: &str, message: &str) -> Error {
    Error::Validation { path: path.into(), message: message.into() }
}
