//! Platform and sensor registry.
//!
//! Angles are stored in radians. The built-in tables are written in degrees
//! (as published by the manufacturers) and converted once on construction.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::kinematics::{euler_to_rotation, EulerAngles, RotationMatrix, Vec3};
use crate::math;
use crate::{Error, Result};

/// Robot dynamics envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct PlatformSpec {
    pub name: String,
    /// Maximum linear speed, m/s.
    pub v_max: f64,
    /// Maximum angular rate, rad/s.
    pub omega_max: f64,
    /// Typical distance to the objects being localized, m.
    pub d: f64,
    /// Baseline: size of the robot and bound on sensor lever arms, m.
    pub b: f64,
}

impl PlatformSpec {
    /// Builds a platform from a turn rate given in degrees per second.
    pub fn from_degrees(name: &str, v_max: f64, omega_max_dps: f64, d: f64, b: f64) -> Self {
        Self { name: name.into(), v_max, omega_max: omega_max_dps.to_radians(), d, b }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("v_max", self.v_max, self.v_max >= 0.0),
            ("omega_max", self.omega_max, self.omega_max >= 0.0),
            ("d", self.d, self.d > 0.0),
            ("b", self.b, self.b >= 0.0),
        ];
        for (field, value, ok) in checks {
            if !value.is_finite() || !ok {
                return Err(validation(format!("platform '{}'.{field}", self.name), format!("invalid value {value}")));
            }
        }
        Ok(())
    }
}

/// Noise structure of a sensor; sigmas in meters and radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SensorKind {
    Position { sigma_p: f64 },
    Attitude { sigma_roll: f64, sigma_pitch: f64, sigma_yaw: f64 },
    RangeBearing { sigma_range: f64, sigma_azimuth: f64, sigma_elevation: f64 },
}

impl SensorKind {
    pub fn label(&self) -> &'static str {
        match self {
            SensorKind::Position { .. } => "position",
            SensorKind::Attitude { .. } => "attitude",
            SensorKind::RangeBearing { .. } => "range_bearing",
        }
    }

    fn sigmas(&self) -> ([&'static str; 3], [f64; 3], usize) {
        match *self {
            SensorKind::Position { sigma_p } => (["sigma_p", "", ""], [sigma_p, 0.0, 0.0], 1),
            SensorKind::Attitude { sigma_roll, sigma_pitch, sigma_yaw } => {
                (["sigma_roll", "sigma_pitch", "sigma_yaw"], [sigma_roll, sigma_pitch, sigma_yaw], 3)
            }
            SensorKind::RangeBearing { sigma_range, sigma_azimuth, sigma_elevation } => {
                (["sigma_range", "sigma_azimuth", "sigma_elevation"], [sigma_range, sigma_azimuth, sigma_elevation], 3)
            }
        }
    }

    /// Every sigma multiplied by `k`.
    pub fn scaled(&self, k: f64) -> SensorKind {
        match *self {
            SensorKind::Position { sigma_p } => SensorKind::Position { sigma_p: sigma_p * k },
            SensorKind::Attitude { sigma_roll, sigma_pitch, sigma_yaw } => SensorKind::Attitude {
                sigma_roll: sigma_roll * k,
                sigma_pitch: sigma_pitch * k,
                sigma_yaw: sigma_yaw * k,
            },
            SensorKind::RangeBearing { sigma_range, sigma_azimuth, sigma_elevation } => SensorKind::RangeBearing {
                sigma_range: sigma_range * k,
                sigma_azimuth: sigma_azimuth * k,
                sigma_elevation: sigma_elevation * k,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorSpec {
    pub name: String,
    pub kind: SensorKind,
}

impl SensorSpec {
    pub fn position(name: &str, sigma_p: f64) -> Self {
        Self { name: name.into(), kind: SensorKind::Position { sigma_p } }
    }

    pub fn attitude_degrees(name: &str, roll: f64, pitch: f64, yaw: f64) -> Self {
        Self {
            name: name.into(),
            kind: SensorKind::Attitude {
                sigma_roll: roll.to_radians(),
                sigma_pitch: pitch.to_radians(),
                sigma_yaw: yaw.to_radians(),
            },
        }
    }

    pub fn range_bearing_degrees(name: &str, range: f64, azimuth: f64, elevation: f64) -> Self {
        Self {
            name: name.into(),
            kind: SensorKind::RangeBearing {
                sigma_range: range,
                sigma_azimuth: azimuth.to_radians(),
                sigma_elevation: elevation.to_radians(),
            },
        }
    }

    /// Zero-noise stand-in for a sensor a payload does not carry.
    pub fn absent(kind: SensorKind) -> Self {
        Self { name: "none".into(), kind: kind.scaled(0.0) }
    }

    pub fn validate(&self) -> Result<()> {
        let (fields, values, n) = self.kind.sigmas();
        for i in 0..n {
            if !values[i].is_finite() || values[i] < 0.0 {
                return Err(validation(
                    format!("sensor '{}'.{}", self.name, fields[i]),
                    format!("sigma must be a non-negative number, got {}", values[i]),
                ));
            }
        }
        Ok(())
    }

    /// Kind-specific scalar sigma: meters for position sensors, radians for
    /// attitude and bearing sensors. Range sigma is not included.
    pub fn effective_sigma(&self) -> f64 {
        match self.kind {
            SensorKind::Position { sigma_p } => position_sigma(sigma_p),
            SensorKind::Attitude { sigma_roll, sigma_pitch, sigma_yaw } => norm3(sigma_roll, sigma_pitch, sigma_yaw),
            SensorKind::RangeBearing { sigma_azimuth, sigma_elevation, .. } => {
                math::hypot(sigma_azimuth, sigma_elevation)
            }
        }
    }

    /// Copy with every sigma multiplied by `k`.
    pub fn scaled(&self, k: f64) -> SensorSpec {
        SensorSpec { name: self.name.clone(), kind: self.kind.scaled(k) }
    }
}

fn position_sigma(sigma_p: f64) -> f64 {
    // Per-axis sigma at a corner of the error cube.
    math::sqrt(3.0) * sigma_p
}

fn norm3(a: f64, b: f64, c: f64) -> f64 {
    math::sqrt(a * a + b * b + c * c)
}

fn kind_mismatch(s: &SensorSpec, expected: &str) -> Error {
    validation(format!("sensor '{}'.kind", s.name), format!("expected a {expected} sensor, got {}", s.kind.label()))
}

/// `√3 · σ_p`, meters.
pub fn position_sigma_effective(s: &SensorSpec) -> Result<f64> {
    match s.kind {
        SensorKind::Position { sigma_p } => Ok(position_sigma(sigma_p)),
        _ => Err(kind_mismatch(s, "position")),
    }
}

/// `‖(σ_φ, σ_θ, σ_ψ)‖₂`, radians.
pub fn attitude_sigma_effective(s: &SensorSpec) -> Result<f64> {
    match s.kind {
        SensorKind::Attitude { .. } => Ok(s.effective_sigma()),
        _ => Err(kind_mismatch(s, "attitude")),
    }
}

/// `‖(σ_Ψ, σ_α)‖₂`, radians.
pub fn bearing_sigma_effective(s: &SensorSpec) -> Result<f64> {
    match s.kind {
        SensorKind::RangeBearing { .. } => Ok(s.effective_sigma()),
        _ => Err(kind_mismatch(s, "range_bearing")),
    }
}

/// Body-frame lever arms (meters) from the carrying platform's reference point
/// to each sensor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Levers {
    pub position: Vec3,
    pub attitude: Vec3,
    pub range_bearing: Vec3,
}

impl Levers {
    /// Default mounting for a platform with baseline `b`: the position sensor
    /// `0.1·b` above the reference point, the range-bearing sensor `0.1·b`
    /// forward and `0.1·b` below it.
    pub fn for_baseline(b: f64) -> Self {
        let h = 0.1 * b;
        Levers { position: Vec3::new(0.0, 0.0, -h), attitude: Vec3::ZERO, range_bearing: Vec3::new(h, 0.0, h) }
    }
}

/// Sensor triple carried by one platform.
#[derive(Debug, Clone, PartialEq)]
pub struct Payload {
    pub position: SensorSpec,
    pub attitude: SensorSpec,
    pub range_bearing: SensorSpec,
    pub levers: Levers,
    /// Body-from-sensor rotation of the range-bearing sensor.
    pub range_bearing_mount: RotationMatrix,
}

impl Payload {
    pub fn new(position: SensorSpec, attitude: SensorSpec, range_bearing: SensorSpec) -> Result<Self> {
        let check = |s: &SensorSpec, want: &str| {
            if s.kind.label() == want {
                s.validate()
            } else {
                Err(kind_mismatch(s, want))
            }
        };
        check(&position, "position")?;
        check(&attitude, "attitude")?;
        check(&range_bearing, "range_bearing")?;
        Ok(Self {
            position,
            attitude,
            range_bearing,
            levers: Levers::default(),
            range_bearing_mount: RotationMatrix::IDENTITY,
        })
    }

    pub fn with_levers(mut self, levers: Levers) -> Self {
        self.levers = levers;
        self
    }

    pub fn with_mount(mut self, mount: RotationMatrix) -> Self {
        self.range_bearing_mount = mount;
        self
    }

    /// Lever arms must fit inside the platform baseline.
    pub fn validate_for(&self, platform: &PlatformSpec) -> Result<()> {
        let arms = [
            ("position", self.levers.position),
            ("attitude", self.levers.attitude),
            ("range_bearing", self.levers.range_bearing),
        ];
        for (which, arm) in arms {
            if arm.norm() > platform.b * (1.0 + 1e-12) {
                return Err(validation(
                    format!("payload.levers.{which}"),
                    format!("lever arm {} m exceeds baseline {} m of '{}'", arm.norm(), platform.b, platform.name),
                ));
            }
        }
        Ok(())
    }

    /// Copy with every sensor sigma multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Payload {
        Payload {
            position: self.position.scaled(k),
            attitude: self.attitude.scaled(k),
            range_bearing: self.range_bearing.scaled(k),
            ..self.clone()
        }
    }

    pub fn sigma_range(&self) -> f64 {
        match self.range_bearing.kind {
            SensorKind::RangeBearing { sigma_range, .. } => sigma_range,
            _ => 0.0,
        }
    }
}

/// Mount that points a range-bearing sensor's boresight straight down.
pub fn downward_mount() -> RotationMatrix {
    euler_to_rotation(EulerAngles::new(0.0, -core::f64::consts::FRAC_PI_2, 0.0)).expect("finite angles")
}

/// Surface vessel (GNSS, INS, USBL receiver) cooperating with an AUV
/// (USBL transponder, INS, multibeam echosounder).
#[derive(Debug, Clone, PartialEq)]
pub struct SurveySystem {
    pub name: String,
    pub sv: PlatformSpec,
    /// Position = GNSS, attitude = SV INS, range-bearing = USBL.
    pub sv_payload: Payload,
    pub auv: PlatformSpec,
    /// Position = none (its lever is the USBL transponder), attitude = AUV
    /// INS, range-bearing = MBE.
    pub auv_payload: Payload,
    /// SV → AUV distance, m.
    pub d_sv: f64,
    /// AUV → seafloor distance, m.
    pub d_auv: f64,
}

pub const DEFAULT_SURVEY_DEPTH: f64 = 1000.0;
pub const DEFAULT_SURVEY_ALTITUDE: f64 = 30.0;

impl SurveySystem {
    /// Survey system with default lever arms and down-looking USBL/MBE mounts.
    #[allow(clippy::too_many_arguments)]
    pub fn standard(
        name: &str,
        sv: PlatformSpec,
        gnss: SensorSpec,
        ins_sv: SensorSpec,
        usbl: SensorSpec,
        auv: PlatformSpec,
        ins_auv: SensorSpec,
        mbe: SensorSpec,
        d_sv: f64,
        d_auv: f64,
    ) -> Result<Self> {
        let sv_payload =
            Payload::new(gnss, ins_sv, usbl)?.with_levers(Levers::for_baseline(sv.b)).with_mount(downward_mount());
        let none = SensorSpec::absent(SensorKind::Position { sigma_p: 0.0 });
        let auv_payload =
            Payload::new(none, ins_auv, mbe)?.with_levers(Levers::for_baseline(auv.b)).with_mount(downward_mount());
        let sys = SurveySystem { name: name.into(), sv, sv_payload, auv, auv_payload, d_sv, d_auv };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        self.sv.validate()?;
        self.auv.validate()?;
        self.sv_payload.validate_for(&self.sv)?;
        self.auv_payload.validate_for(&self.auv)?;
        for (field, v) in [("d_sv", self.d_sv), ("d_auv", self.d_auv)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(validation(format!("survey '{}'.{field}", self.name), format!("must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Copy with every sensor sigma multiplied by `k`.
    pub fn scaled(&self, k: f64) -> SurveySystem {
        SurveySystem { sv_payload: self.sv_payload.scaled(k), auv_payload: self.auv_payload.scaled(k), ..self.clone() }
    }
}

/// The seven platforms of the robot-dynamics table.
pub fn builtin_platforms() -> Vec<PlatformSpec> {
    [
        ("UAV Fixed Wing", 21.0, 77.9, 100.0, 1.0),
        ("UAV Multi Rotor", 5.0, 311.8, 5.0, 0.5),
        ("USV", 5.0, 17.0, 30.0, 5.0),
        // Listed at 30 m/s; the survey tables imply ~2.078 m/s, see `survey_auv`.
        ("AUV", 30.0, 8.7, 5.0, 5.0),
        ("Car", 30.0, 17.3, 50.0, 3.0),
        ("Large SV", 2.5, 4.5, 1000.0, 50.0),
        ("Small SV", 4.0, 17.0, 1000.0, 10.0),
    ]
    .into_iter()
    .map(|(n, v, w, d, b)| PlatformSpec::from_degrees(n, v, w, d, b))
    .collect()
}

/// AUV dynamics used by the survey systems: 2.078 m/s, 8.7 °/s, 30 m above the
/// seafloor.
pub fn survey_auv() -> PlatformSpec {
    PlatformSpec::from_degrees("Survey AUV", 2.078, 8.7, DEFAULT_SURVEY_ALTITUDE, 5.0)
}

/// The fifteen sensors of the sensor-noise table.
pub fn builtin_sensors() -> Vec<SensorSpec> {
    alloc::vec![
        SensorSpec::position("uBlox F9P PVT", 1.5),
        SensorSpec::position("uBlox F9P RTK", 0.01),
        SensorSpec::position("Trimble R12 DGNSS", 0.25),
        SensorSpec::position("Trimble R12 RTK", 0.008),
        SensorSpec::attitude_degrees("SBG Ellipse", 0.1, 0.1, 0.2),
        SensorSpec::attitude_degrees("SBG Apogee", 0.008, 0.008, 0.03),
        SensorSpec::attitude_degrees("Kongsberg MRU5", 0.002, 0.002, 0.002),
        SensorSpec::range_bearing_degrees("Velodyne Alpha Prime", 0.04, 0.1, 0.2),
        SensorSpec::range_bearing_degrees("Velodyne HDL32E", 0.02, 0.08, 0.08),
        SensorSpec::range_bearing_degrees("RIEGL VUX1-UAV", 0.01, 0.006, 0.006),
        SensorSpec::range_bearing_degrees("Faro Focus Plus", 0.001, 0.005, 0.005),
        SensorSpec::range_bearing_degrees("Kongsberg HIPAP502", 0.02, 0.06, 0.06),
        SensorSpec::range_bearing_degrees("Sensodyne USBL7000", 0.015, 0.04, 0.04),
        SensorSpec::range_bearing_degrees("Kongsberg M3 Sonar", 0.01, 0.9, 0.5),
        SensorSpec::range_bearing_degrees("Sonic 2026 MBE", 0.001, 0.45, 0.45),
    ]
}

/// Large- and small-SV survey systems with R12 RTK, MRU5, USBL7000 and
/// Sonic 2026.
pub fn builtin_survey_systems() -> Vec<SurveySystem> {
    let platforms = builtin_platforms();
    let sensors = builtin_sensors();
    let p = |n: &str| platforms.iter().find(|p| p.name == n).cloned().expect("builtin platform");
    let s = |n: &str| sensors.iter().find(|s| s.name == n).cloned().expect("builtin sensor");
    [("Large SV + AUV", "Large SV"), ("Small SV + AUV", "Small SV")]
        .into_iter()
        .map(|(name, sv)| {
            SurveySystem::standard(
                name,
                p(sv),
                s("Trimble R12 RTK"),
                s("Kongsberg MRU5"),
                s("Sensodyne USBL7000"),
                survey_auv(),
                s("Kongsberg MRU5"),
                s("Sonic 2026 MBE"),
                DEFAULT_SURVEY_DEPTH,
                DEFAULT_SURVEY_ALTITUDE,
            )
            .expect("builtin survey system is valid")
        })
        .collect()
}

/// Normalized lookup key: lowercase ASCII alphanumerics only.
fn lookup_key(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect()
}

fn find<'a, T>(items: &'a [T], name: &str, kind: &'static str, key: impl Fn(&T) -> &str) -> Result<&'a T> {
    if let Some(hit) = items.iter().find(|t| key(t) == name) {
        return Ok(hit);
    }
    let wanted = lookup_key(name);
    let unknown = || Error::UnknownName { kind, name: name.to_string() };
    if wanted.is_empty() {
        return Err(unknown());
    }
    if let Some(hit) = items.iter().find(|t| lookup_key(key(t)) == wanted) {
        return Ok(hit);
    }
    let mut partial = items.iter().filter(|t| lookup_key(key(t)).contains(&wanted));
    match (partial.next(), partial.next()) {
        (Some(hit), None) => Ok(hit),
        (Some(_), Some(_)) => Err(Error::AmbiguousName { kind, name: name.to_string() }),
        _ => Err(unknown()),
    }
}

/// Merged set of platforms, sensors and survey systems. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    pub platforms: Vec<PlatformSpec>,
    pub sensors: Vec<SensorSpec>,
    pub survey_systems: Vec<SurveySystem>,
}

impl Registry {
    /// The table platforms plus `survey_auv`, sensors and survey systems.
    pub fn builtin() -> Self {
        let mut platforms = builtin_platforms();
        platforms.push(survey_auv());
        Registry { platforms, sensors: builtin_sensors(), survey_systems: builtin_survey_systems() }
    }

    pub fn empty() -> Self {
        Registry { platforms: Vec::new(), sensors: Vec::new(), survey_systems: Vec::new() }
    }

    /// Adds or replaces (by exact name) a platform.
    pub fn upsert_platform(&mut self, p: PlatformSpec) -> Result<()> {
        p.validate()?;
        upsert(&mut self.platforms, p, |p| &p.name);
        Ok(())
    }

    pub fn upsert_sensor(&mut self, s: SensorSpec) -> Result<()> {
        s.validate()?;
        upsert(&mut self.sensors, s, |s| &s.name);
        Ok(())
    }

    pub fn upsert_survey(&mut self, s: SurveySystem) -> Result<()> {
        s.validate()?;
        upsert(&mut self.survey_systems, s, |s| &s.name);
        Ok(())
    }

    /// Looks up by exact name, then by normalized name, then by a unique
    /// normalized substring (`"MRU5"` finds `"Kongsberg MRU5"`).
    pub fn platform(&self, name: &str) -> Result<&PlatformSpec> {
        find(&self.platforms, name, "platform", |p| &p.name)
    }

    pub fn sensor(&self, name: &str) -> Result<&SensorSpec> {
        find(&self.sensors, name, "sensor", |s| &s.name)
    }

    pub fn survey(&self, name: &str) -> Result<&SurveySystem> {
        find(&self.survey_systems, name, "survey system", |s| &s.name)
    }

    pub fn validate(&self) -> Result<()> {
        self.platforms.iter().try_for_each(PlatformSpec::validate)?;
        self.sensors.iter().try_for_each(SensorSpec::validate)?;
        self.survey_systems.iter().try_for_each(SurveySystem::validate)
    }
}

fn upsert<T>(items: &mut Vec<T>, item: T, name: impl Fn(&T) -> &String) {
    match items.iter().position(|t| name(t) == name(&item)) {
        Some(i) => items[i] = item,
        None => items.push(item),
    }
}

fn validation(path: String, message: String) -> Error {
    Error::Validation { path, message }
}
