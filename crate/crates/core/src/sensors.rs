//! Measurement models with explicit sync-induced error terms, and the two
//! algebraic fusion chains (direct georeferencing; SV + AUV survey).
//!
//! Each measurement is the true quantity advanced by the sensor's timestamp
//! offset `µ` (relative to the chain's reference range-bearing sensor) plus
//! additive sensor noise. The earth-to-NED rotation is held constant over
//! `µ`, so transport-rate terms do not appear.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::catalog::{Levers, Payload, SurveySystem};
use crate::kinematics::{
    apply_attitude_error, bearing_to_vector, vector_to_bearing, wrap_angle, AttitudePerturbation, BearingRange,
    RotationMatrix, Vec3,
};
use crate::{Error, Result};

/// Ground-truth rigid-body state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidState {
    /// Reference-point position in the world (ECEF or local) frame, m.
    pub position: Vec3,
    /// Body-to-NED attitude `R_nb`.
    pub attitude: RotationMatrix,
    /// Linear velocity, body frame, m/s.
    pub velocity: Vec3,
    /// Angular rate, body frame, rad/s.
    pub angular_rate: Vec3,
    /// NED-to-world rotation `R_en`, constant over a sync offset.
    pub r_en: RotationMatrix,
}

impl RigidState {
    pub fn at_rest(position: Vec3, attitude: RotationMatrix) -> Self {
        RigidState {
            position,
            attitude,
            velocity: Vec3::ZERO,
            angular_rate: Vec3::ZERO,
            r_en: RotationMatrix::IDENTITY,
        }
    }

    /// `R_eb = R_en R_nb`.
    pub fn r_eb(&self) -> RotationMatrix {
        self.r_en * self.attitude
    }

    /// World position of a body-fixed point.
    pub fn point_position(&self, lever: Vec3) -> Vec3 {
        self.position + self.r_eb() * lever
    }

    /// Rotates the whole state about the world origin and then translates it.
    pub fn transformed(&self, rotation: RotationMatrix, offset: Vec3) -> RigidState {
        RigidState { position: rotation * self.position + offset, attitude: rotation * self.attitude, ..*self }
    }
}

/// Timestamp offsets of one payload relative to its range-bearing sensor,
/// whose own offset is zero by definition. Seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SyncOffsets {
    pub position: f64,
    pub attitude: f64,
}

/// Range/bearing noise in the sensor's native coordinates (m, rad, rad).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RangeBearingNoise {
    pub range: f64,
    pub azimuth: f64,
    pub elevation: f64,
}

/// Additive noise for each sensor of one payload.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NoiseDraw {
    /// World-frame position error, m.
    pub position: Vec3,
    pub attitude: AttitudePerturbation,
    pub range_bearing: RangeBearingNoise,
}

/// World-frame velocity of the body point at `lever`:
/// `R_eb (v_b + ω_b × lever)`.
pub fn point_velocity(state: &RigidState, lever: Vec3) -> Vec3 {
    state.r_eb() * (state.velocity + state.angular_rate.cross(lever))
}

/// Position-sensor output at `lever`, sampled `mu` seconds off the
/// reference clock.
pub fn measure_position(state: &RigidState, lever: Vec3, mu: f64, noise: Vec3) -> Vec3 {
    state.point_position(lever) + point_velocity(state, lever) * mu + noise
}

/// Attitude-sensor output: `R_nb` advanced by `ω_b·µ`, then perturbed by
/// `noise`.
pub fn measure_attitude(state: &RigidState, mu: f64, noise: AttitudePerturbation) -> Result<RotationMatrix> {
    let advance = state.angular_rate * mu;
    if !advance.is_finite() {
        return Err(Error::NonFinite("attitude advance"));
    }
    if advance.norm() >= FRAC_PI_2 {
        return Err(Error::AngleTooLarge(advance.norm()));
    }
    let advanced = apply_attitude_error(state.attitude, AttitudePerturbation(advance))?;
    apply_attitude_error(advanced, noise)
}

/// Range-bearing output for an object at `true_vector` (body frame, from the
/// sensor). `mount` is the body-from-sensor rotation. The sensor is the
/// reference clock, so no sync term appears.
pub fn measure_range_bearing(
    true_vector: Vec3,
    mount: RotationMatrix,
    noise: RangeBearingNoise,
) -> Result<BearingRange> {
    let truth = vector_to_bearing(mount.transpose() * true_vector)?;
    Ok(perturb_bearing(truth, noise))
}

fn perturb_bearing(b: BearingRange, noise: RangeBearingNoise) -> BearingRange {
    let mut azimuth = b.azimuth + noise.azimuth;
    let mut elevation = b.elevation + noise.elevation;
    // Passing over a pole continues on the opposite meridian.
    if elevation > FRAC_PI_2 {
        elevation = PI - elevation;
        azimuth += PI;
    } else if elevation < -FRAC_PI_2 {
        elevation = -PI - elevation;
        azimuth += PI;
    }
    BearingRange { azimuth: wrap_angle(azimuth), elevation, range: (b.range + noise.range).max(0.0) }
}

/// Body-frame vector from the sensor to the object.
pub fn range_bearing_to_body(b: BearingRange, mount: RotationMatrix) -> Vec3 {
    mount * bearing_to_vector(b)
}

/// USBL output: receiver→transponder vector in the SV body frame, perturbed
/// in range/bearing coordinates.
pub fn measure_usbl(
    sv: &RigidState,
    transponder: Vec3,
    receiver_lever: Vec3,
    mount: RotationMatrix,
    noise: RangeBearingNoise,
) -> Result<Vec3> {
    let receiver = sv.point_position(receiver_lever);
    let body = sv.r_eb().transpose() * (transponder - receiver);
    if body.norm() == 0.0 {
        return Err(Error::ZeroVector("USBL receiver and transponder coincide"));
    }
    Ok(range_bearing_to_body(measure_range_bearing(body, mount, noise)?, mount))
}

/// Direct georeferencing:
/// `p̂_eo = p̂_g + R_en R̂_nb (l_rb − l_pos + mount · n(Ψ̂, α̂) r̂)`.
pub fn georeference(
    gnss: Vec3,
    attitude: RotationMatrix,
    range_bearing: BearingRange,
    levers: &Levers,
    mount: RotationMatrix,
    r_en: RotationMatrix,
) -> Vec3 {
    let arm = levers.range_bearing - levers.position + range_bearing_to_body(range_bearing, mount);
    gnss + r_en * (attitude * arm)
}

/// Virtual AUV (transponder) position from the surface vessel's sensors,
/// plus the AUV's own motion over `mu_auvpos`.
#[allow(clippy::too_many_arguments)]
pub fn virtual_auv_position(
    gnss: Vec3,
    sv_attitude: RotationMatrix,
    usbl: Vec3,
    sv_levers: &Levers,
    r_en: RotationMatrix,
    auv: &RigidState,
    transponder_lever: Vec3,
    mu_auvpos: f64,
) -> Vec3 {
    let arm = sv_levers.range_bearing - sv_levers.position + usbl;
    gnss + r_en * (sv_attitude * arm) + point_velocity(auv, transponder_lever) * mu_auvpos
}

/// Seafloor footprint from the virtual AUV position, the AUV attitude and the
/// MBE range/bearing. `auv_levers.position` is the USBL transponder.
pub fn survey_georeference(
    auv_position: Vec3,
    auv_attitude: RotationMatrix,
    mbe: BearingRange,
    auv_levers: &Levers,
    mount: RotationMatrix,
    r_en: RotationMatrix,
) -> Vec3 {
    georeference(auv_position, auv_attitude, mbe, auv_levers, mount, r_en)
}

/// Measurements of the direct-georeferencing payload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeorefMeasurements {
    pub gnss: Vec3,
    pub attitude: RotationMatrix,
    pub range_bearing: BearingRange,
}

/// Synthesizes the three measurements of an object at world position
/// `object`.
pub fn measure_georef(
    state: &RigidState,
    payload: &Payload,
    object: Vec3,
    offsets: SyncOffsets,
    noise: &NoiseDraw,
) -> Result<GeorefMeasurements> {
    let levers = &payload.levers;
    let sensor = state.point_position(levers.range_bearing);
    let body = state.r_eb().transpose() * (object - sensor);
    Ok(GeorefMeasurements {
        gnss: measure_position(state, levers.position, offsets.position, noise.position),
        attitude: measure_attitude(state, offsets.attitude, noise.attitude)?,
        range_bearing: measure_range_bearing(body, payload.range_bearing_mount, noise.range_bearing)?,
    })
}

pub fn fuse_georef(m: &GeorefMeasurements, payload: &Payload, r_en: RotationMatrix) -> Vec3 {
    georeference(m.gnss, m.attitude, m.range_bearing, &payload.levers, payload.range_bearing_mount, r_en)
}

/// Ground truth of a survey trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyTruth {
    pub sv: RigidState,
    pub auv: RigidState,
    /// Seafloor point seen by the MBE, world frame.
    pub footprint: Vec3,
}

/// Offsets and noise for both vehicles of a survey trial. SV offsets are
/// relative to the USBL; AUV offsets are relative to the MBE, with
/// `auv.position` the offset of the virtual AUV position sensor.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SurveyErrors {
    pub sv_offsets: SyncOffsets,
    pub auv_offsets: SyncOffsets,
    pub sv_noise: NoiseDraw,
    pub auv_noise: NoiseDraw,
}

/// Runs the measurement models and the survey fusion chain; returns the
/// estimated footprint.
pub fn estimate_survey(sys: &SurveySystem, truth: &SurveyTruth, e: &SurveyErrors) -> Result<Vec3> {
    let (svp, auvp) = (&sys.sv_payload, &sys.auv_payload);
    let transponder = truth.auv.point_position(auvp.levers.position);

    let gnss = measure_position(&truth.sv, svp.levers.position, e.sv_offsets.position, e.sv_noise.position);
    let sv_att = measure_attitude(&truth.sv, e.sv_offsets.attitude, e.sv_noise.attitude)?;
    let usbl = measure_usbl(
        &truth.sv,
        transponder,
        svp.levers.range_bearing,
        svp.range_bearing_mount,
        e.sv_noise.range_bearing,
    )?;
    let auv_pos = virtual_auv_position(
        gnss,
        sv_att,
        usbl,
        &svp.levers,
        truth.sv.r_en,
        &truth.auv,
        auvp.levers.position,
        e.auv_offsets.position,
    ) + e.auv_noise.position;

    let auv_att = measure_attitude(&truth.auv, e.auv_offsets.attitude, e.auv_noise.attitude)?;
    let mbe_body =
        truth.auv.r_eb().transpose() * (truth.footprint - truth.auv.point_position(auvp.levers.range_bearing));
    let mbe = measure_range_bearing(mbe_body, auvp.range_bearing_mount, e.auv_noise.range_bearing)?;
    Ok(survey_georeference(auv_pos, auv_att, mbe, &auvp.levers, auvp.range_bearing_mount, truth.auv.r_en))
}
