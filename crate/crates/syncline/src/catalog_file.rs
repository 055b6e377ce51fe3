//! JSON catalog documents.
//!
//! ```json
//! {
//!   "platforms": [{"name": "Rover", "v_max_mps": 2.0, "omega_max_dps": 30.0, "d_m": 10.0, "b_m": 1.0}],
//!   "sensors": [
//!     {"kind": "position", "name": "GPS", "sigma_p_m": 0.5},
//!     {"kind": "attitude", "name": "IMU", "sigma_rpy_deg": [0.1, 0.1, 0.3]},
//!     {"kind": "range_bearing", "name": "Lidar", "sigma_r_m": 0.03, "sigma_az_deg": 0.1, "sigma_el_deg": 0.1}
//!   ],
//!   "survey_systems": [{"name": "Mine", "sv": "Small SV", "gnss": "R12 RTK", "ins_sv": "MRU5",
//!     "usbl": "HIPAP502", "auv": {"name": "Slow AUV", "v_max_mps": 1.5, "omega_max_dps": 5.0, "d_m": 30.0, "b_m": 4.0},
//!     "ins_auv": "MRU5", "mbe": "Sonic 2026", "d_sv_m": 1000.0, "d_auv_m": 30.0}]
//! }
//! ```
//!
//! Angles are degrees, everything else SI. Entries override builtins with
//! the same name. Survey members are either names (resolved against the
//! merged registry) or inline objects.

use std::path::Path;

use serde::{Deserialize, Serialize};
use syncline_core::catalog::{PlatformSpec, Registry, SensorKind, SensorSpec, SurveySystem};

use crate::{AppError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub platforms: Vec<PlatformDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sensors: Vec<SensorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub survey_systems: Vec<SurveyDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformDoc {
    pub name: String,
    pub v_max_mps: f64,
    pub omega_max_dps: f64,
    pub d_m: f64,
    pub b_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindDoc {
    Position,
    Attitude,
    RangeBearing,
}

/// One sensor. Exactly the sigma fields of `kind` must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorDoc {
    pub kind: KindDoc,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_p_m: Option<f64>,
    /// Roll, pitch, yaw.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_rpy_deg: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_r_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_az_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_el_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlatformRef {
    Name(String),
    Inline(PlatformDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SensorRef {
    Name(String),
    Inline(SensorDoc),
}

/// Surface vessel + AUV. Lever arms and down-looking mounts follow the
/// standard layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyDoc {
    pub name: String,
    pub sv: PlatformRef,
    pub gnss: SensorRef,
    pub ins_sv: SensorRef,
    pub usbl: SensorRef,
    pub auv: PlatformRef,
    pub ins_auv: SensorRef,
    pub mbe: SensorRef,
    pub d_sv_m: f64,
    pub d_auv_m: f64,
}

/// Degrees for output, rounded to 12 significant digits so that decimal
/// inputs survive the trip through radians.
fn to_degrees(rad: f64) -> f64 {
    format!("{:.11e}", rad.to_degrees()).parse().expect("formatted float parses")
}

fn catalog_error(path: impl Into<String>, message: impl Into<String>) -> AppError {
    AppError::Catalog { path: path.into(), message: message.into() }
}

fn check(path: &str, field: &str, v: f64, strictly_positive: bool) -> Result<()> {
    let ok = v.is_finite() && if strictly_positive { v > 0.0 } else { v >= 0.0 };
    if ok {
        Ok(())
    } else {
        let want = if strictly_positive { "> 0" } else { ">= 0" };
        Err(catalog_error(format!("{path}.{field}"), format!("must be finite and {want}, got {v}")))
    }
}

impl PlatformDoc {
    pub fn from_spec(p: &PlatformSpec) -> Self {
        PlatformDoc {
            name: p.name.clone(),
            v_max_mps: p.v_max,
            omega_max_dps: to_degrees(p.omega_max),
            d_m: p.d,
            b_m: p.b,
        }
    }

    pub fn to_spec(&self, path: &str) -> Result<PlatformSpec> {
        check(path, "v_max_mps", self.v_max_mps, false)?;
        check(path, "omega_max_dps", self.omega_max_dps, false)?;
        check(path, "d_m", self.d_m, true)?;
        check(path, "b_m", self.b_m, false)?;
        Ok(PlatformSpec::from_degrees(&self.name, self.v_max_mps, self.omega_max_dps, self.d_m, self.b_m))
    }
}

impl SensorDoc {
    fn empty(kind: KindDoc, name: &str) -> Self {
        SensorDoc {
            kind,
            name: name.into(),
            sigma_p_m: None,
            sigma_rpy_deg: None,
            sigma_r_m: None,
            sigma_az_deg: None,
            sigma_el_deg: None,
        }
    }

    pub fn from_spec(s: &SensorSpec) -> Self {
        match s.kind {
            SensorKind::Position { sigma_p } => {
                SensorDoc { sigma_p_m: Some(sigma_p), ..Self::empty(KindDoc::Position, &s.name) }
            }
            SensorKind::Attitude { sigma_roll, sigma_pitch, sigma_yaw } => SensorDoc {
                sigma_rpy_deg: Some([to_degrees(sigma_roll), to_degrees(sigma_pitch), to_degrees(sigma_yaw)]),
                ..Self::empty(KindDoc::Attitude, &s.name)
            },
            SensorKind::RangeBearing { sigma_range, sigma_azimuth, sigma_elevation } => SensorDoc {
                sigma_r_m: Some(sigma_range),
                sigma_az_deg: Some(to_degrees(sigma_azimuth)),
                sigma_el_deg: Some(to_degrees(sigma_elevation)),
                ..Self::empty(KindDoc::RangeBearing, &s.name)
            },
        }
    }

    pub fn to_spec(&self, path: &str) -> Result<SensorSpec> {
        let rpy = self.sigma_rpy_deg.map(|a| a.to_vec());
        let fields: [(&str, Option<Vec<f64>>, KindDoc); 5] = [
            ("sigma_p_m", self.sigma_p_m.map(|v| vec![v]), KindDoc::Position),
            ("sigma_rpy_deg", rpy, KindDoc::Attitude),
            ("sigma_r_m", self.sigma_r_m.map(|v| vec![v]), KindDoc::RangeBearing),
            ("sigma_az_deg", self.sigma_az_deg.map(|v| vec![v]), KindDoc::RangeBearing),
            ("sigma_el_deg", self.sigma_el_deg.map(|v| vec![v]), KindDoc::RangeBearing),
        ];
        let mut values = Vec::with_capacity(3);
        for (field, value, kind) in fields {
            match (value, kind == self.kind) {
                (Some(vs), true) => {
                    let indexed = vs.len() > 1;
                    for (i, v) in vs.into_iter().enumerate() {
                        let name = if indexed { format!("{field}[{i}]") } else { field.to_string() };
                        check(path, &name, v, false)?;
                        values.push(v);
                    }
                }
                (None, true) => return Err(catalog_error(format!("{path}.{field}"), "missing field")),
                (Some(_), false) => {
                    return Err(catalog_error(
                        format!("{path}.{field}"),
                        format!("not a field of kind {:?}", self.kind),
                    ))
                }
                (None, false) => {}
            }
        }
        Ok(match self.kind {
            KindDoc::Position => SensorSpec::position(&self.name, values[0]),
            KindDoc::Attitude => SensorSpec::attitude_degrees(&self.name, values[0], values[1], values[2]),
            KindDoc::RangeBearing => SensorSpec::range_bearing_degrees(&self.name, values[0], values[1], values[2]),
        })
    }
}

impl SurveyDoc {
    pub fn from_system(s: &SurveySystem) -> Self {
        let sensor = |x: &SensorSpec| SensorRef::Inline(SensorDoc::from_spec(x));
        SurveyDoc {
            name: s.name.clone(),
            sv: PlatformRef::Inline(PlatformDoc::from_spec(&s.sv)),
            gnss: sensor(&s.sv_payload.position),
            ins_sv: sensor(&s.sv_payload.attitude),
            usbl: sensor(&s.sv_payload.range_bearing),
            auv: PlatformRef::Inline(PlatformDoc::from_spec(&s.auv)),
            ins_auv: sensor(&s.auv_payload.attitude),
            mbe: sensor(&s.auv_payload.range_bearing),
            d_sv_m: s.d_sv,
            d_auv_m: s.d_auv,
        }
    }

    pub fn to_system(&self, registry: &Registry, path: &str) -> Result<SurveySystem> {
        let platform = |r: &PlatformRef, field: &str| -> Result<PlatformSpec> {
            let path = format!("{path}.{field}");
            match r {
                PlatformRef::Name(n) => registry.platform(n).cloned().map_err(|e| catalog_error(path, e.to_string())),
                PlatformRef::Inline(doc) => doc.to_spec(&path),
            }
        };
        let sensor = |r: &SensorRef, field: &str, kind: &str| -> Result<SensorSpec> {
            let path = format!("{path}.{field}");
            let spec = match r {
                SensorRef::Name(n) => registry.sensor(n).cloned().map_err(|e| catalog_error(&path, e.to_string()))?,
                SensorRef::Inline(doc) => doc.to_spec(&path)?,
            };
            if spec.kind.label() != kind {
                return Err(catalog_error(
                    path,
                    format!("'{}' is a {} sensor, expected {kind}", spec.name, spec.kind.label()),
                ));
            }
            Ok(spec)
        };
        check(path, "d_sv_m", self.d_sv_m, true)?;
        check(path, "d_auv_m", self.d_auv_m, true)?;
        SurveySystem::standard(
            &self.name,
            platform(&self.sv, "sv")?,
            sensor(&self.gnss, "gnss", "position")?,
            sensor(&self.ins_sv, "ins_sv", "attitude")?,
            sensor(&self.usbl, "usbl", "range_bearing")?,
            platform(&self.auv, "auv")?,
            sensor(&self.ins_auv, "ins_auv", "attitude")?,
            sensor(&self.mbe, "mbe", "range_bearing")?,
            self.d_sv_m,
            self.d_auv_m,
        )
        .map_err(|e| catalog_error(path, e.to_string()))
    }
}

impl CatalogDoc {
    pub fn from_registry(r: &Registry) -> Self {
        CatalogDoc {
            platforms: r.platforms.iter().map(PlatformDoc::from_spec).collect(),
            sensors: r.sensors.iter().map(SensorDoc::from_spec).collect(),
            survey_systems: r.survey_systems.iter().map(SurveyDoc::from_system).collect(),
        }
    }

    /// Applies the document on top of `base`.
    pub fn merge_into(&self, mut base: Registry) -> Result<Registry> {
        for (i, p) in self.platforms.iter().enumerate() {
            base.upsert_platform(p.to_spec(&format!("platforms[{i}]"))?)?;
        }
        for (i, s) in self.sensors.iter().enumerate() {
            base.upsert_sensor(s.to_spec(&format!("sensors[{i}]"))?)?;
        }
        for (i, s) in self.survey_systems.iter().enumerate() {
            let sys = s.to_system(&base, &format!("survey_systems[{i}]"))?;
            base.upsert_survey(sys)?;
        }
        base.validate()?;
        Ok(base)
    }
}

/// Parses a catalog document. Blank input is an empty document.
pub fn parse_catalog(text: &str) -> Result<CatalogDoc> {
    if text.trim().is_empty() {
        return Ok(CatalogDoc::default());
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        catalog_error(path, e.into_inner().to_string())
    })
}

/// Builtins merged with the document in `text`.
pub fn load_registry(text: &str) -> Result<Registry> {
    parse_catalog(text)?.merge_into(Registry::builtin())
}

/// Builtins, merged with the file at `path` when given.
pub fn read_registry(path: Option<&Path>) -> Result<Registry> {
    match path {
        None => Ok(Registry::builtin()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|source| AppError::Io { path: p.display().to_string(), source })?;
            load_registry(&text)
        }
    }
}

pub fn registry_to_json(r: &Registry) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CatalogDoc::from_registry(r))?)
}
