//! The analytical worst-case error budget.
//!
//! For a platform moving at up to `v_max` and turning at up to `ω_max` while
//! localizing objects at distance `d`, a worst-case timestamp error `τ` costs
//! at most `(v_max + d·ω_max)·τ` of position error. Sensor noise adds a floor
//! `σ_p + σ_r + (σ_Θ + σ_u)·d`. Their sum is the syncline; the `τ` at which
//! the two terms are equal is the critical synchronization error.

use alloc::vec::Vec;

use crate::catalog::{Payload, PlatformSpec, SensorKind, SensorSpec, SurveySystem};
use crate::math;
use crate::{Error, Result};

/// Slope and floor of a syncline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    /// Coefficient of `τ`, m/s.
    pub delta_sync_rate: f64,
    /// Sensor-induced worst-case error (the roof term), m.
    pub delta_sensor: f64,
}

impl ErrorBudget {
    pub fn new(delta_sync_rate: f64, delta_sensor: f64) -> Result<Self> {
        for (path, v) in [("delta_sync_rate", delta_sync_rate), ("delta_sensor", delta_sensor)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation { path: path.into(), message: alloc::format!("must be >= 0, got {v}") });
            }
        }
        Ok(Self { delta_sync_rate, delta_sensor })
    }

    /// Budget of a single platform carrying `payload`, objects at the
    /// platform's typical distance `d`.
    pub fn for_platform(platform: &PlatformSpec, payload: &Payload) -> Result<Self> {
        Self::new(sync_rate(platform), sensor_error_ub(payload, platform.d)?)
    }

    pub fn for_survey(sys: &SurveySystem) -> Result<Self> {
        Self::new(survey_sync_rate(sys), survey_sensor_error_ub(sys))
    }

    pub fn syncline(&self, tau: f64) -> Result<f64> {
        syncline(self, tau)
    }

    pub fn tau_crit(&self) -> f64 {
        tau_crit(self)
    }
}

/// `v_max + d·ω_max`, m/s.
pub fn sync_rate(p: &PlatformSpec) -> f64 {
    p.v_max + p.d * p.omega_max
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_nan() {
        return Err(Error::NonFinite("tau"));
    }
    if tau < 0.0 {
        return Err(Error::NegativeTau(tau));
    }
    Ok(())
}

/// Worst-case sync-induced error `(v_max + d·ω_max)·τ`.
pub fn sync_error_ub(p: &PlatformSpec, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(sync_rate(p) * tau)
}

/// Worst-case sensor-induced error of a payload observing objects at `d`.
pub fn sensor_error_ub(payload: &Payload, d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidRange("distance must be > 0"));
    }
    Ok(sensor_error_at(payload, d))
}

fn sensor_error_at(payload: &Payload, d: f64) -> f64 {
    payload.position.effective_sigma()
        + payload.sigma_range()
        + (payload.attitude.effective_sigma() + payload.range_bearing.effective_sigma()) * d
}

/// `delta_sync_rate·τ + delta_sensor`.
pub fn syncline(budget: &ErrorBudget, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(budget.delta_sync_rate * tau + budget.delta_sensor)
}

/// `τ` at which sync-induced and sensor-induced errors are equal. A budget
/// with zero slope is never sync-bound and yields `+∞`.
pub fn tau_crit(budget: &ErrorBudget) -> f64 {
    ratio_or_infinity(budget.delta_sensor, budget.delta_sync_rate)
}

fn ratio_or_infinity(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

fn tau_crit_with(s: &SensorSpec, v: f64, omega: f64, d: f64) -> f64 {
    match s.kind {
        // Position sensors only see the translation of the platform.
        SensorKind::Position { .. } => ratio_or_infinity(s.effective_sigma(), v),
        SensorKind::Attitude { .. } => ratio_or_infinity(d * s.effective_sigma(), v + d * omega),
        SensorKind::RangeBearing { sigma_range, .. } => {
            ratio_or_infinity(sigma_range + d * s.effective_sigma(), v + d * omega)
        }
    }
}

/// Critical synchronization error of one sensor on `p`:
///
/// - position: `√3·σ_p / v_max`
/// - attitude: `d·σ_Θ / (v_max + d·ω_max)`
/// - range-bearing: `(σ_r + d·σ_u) / (v_max + d·ω_max)`
///
/// Zero denominators give `+∞`.
pub fn per_sensor_tau_crit(s: &SensorSpec, p: &PlatformSpec) -> f64 {
    tau_crit_with(s, p.v_max, p.omega_max, p.d)
}

/// `v_sv + v_auv + d_sv·ω_sv + d_auv·ω_auv`.
pub fn survey_sync_rate(sys: &SurveySystem) -> f64 {
    sys.sv.v_max + sys.auv.v_max + sys.d_sv * sys.sv.omega_max + sys.d_auv * sys.auv.omega_max
}

/// SV chain sensor error at `d_sv` plus AUV chain sensor error at `d_auv`.
pub fn survey_sensor_error_ub(sys: &SurveySystem) -> f64 {
    sensor_error_at(&sys.sv_payload, sys.d_sv) + sensor_error_at(&sys.auv_payload, sys.d_auv)
}

/// Vehicle carrying a sensor in a survey system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurveyRole {
    Sv,
    Auv,
}

/// Per-sensor critical synchronization error using the dynamics and range of
/// the carrying vehicle.
pub fn per_sensor_tau_crit_survey(s: &SensorSpec, role: SurveyRole, sys: &SurveySystem) -> f64 {
    match role {
        SurveyRole::Sv => tau_crit_with(s, sys.sv.v_max, sys.sv.omega_max, sys.d_sv),
        SurveyRole::Auv => tau_crit_with(s, sys.auv.v_max, sys.auv.omega_max, sys.d_auv),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    /// Synchronization error, s.
    pub tau: f64,
    /// Syncline value, m.
    pub delta: f64,
    /// `1/τ`, 1/s.
    pub sync_accuracy: f64,
    /// `1/delta`, 1/m.
    pub est_accuracy: f64,
}

/// Sampled syncline.
#[derive(Debug, Clone, PartialEq)]
pub struct SynclineCurve {
    pub samples: Vec<CurveSample>,
    pub tau_crit: f64,
    /// Best attainable estimation accuracy `1/delta_sensor`, 1/m.
    pub roof: f64,
}

/// `n` logarithmically spaced points from `min` to `max` inclusive.
pub fn log_space(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min > 0.0 && min < max) {
        return Err(Error::InvalidRange("need 0 < tau_min < tau_max"));
    }
    if n < 2 {
        return Err(Error::InvalidRange("need at least 2 samples"));
    }
    let (lo, hi) = (math::ln(min), math::ln(max));
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => min,
            i if i == n - 1 => max,
            i => math::exp(lo + step * i as f64),
        })
        .collect())
}

/// Syncline sampled on `n` log-spaced `τ` values in `[tau_min, tau_max]`.
pub fn sample_curve(budget: &ErrorBudget, tau_min: f64, tau_max: f64, n: usize) -> Result<SynclineCurve> {
    curve_on_grid(budget, &log_space(tau_min, tau_max, n)?)
}

/// Syncline sampled on an explicit ascending `τ` grid.
pub fn curve_on_grid(budget: &ErrorBudget, taus: &[f64]) -> Result<SynclineCurve> {
    if taus.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidRange("tau grid must be ascending"));
    }
    let samples = taus
        .iter()
        .map(|&tau| {
            let delta = syncline(budget, tau)?;
            Ok(CurveSample { tau, delta, sync_accuracy: 1.0 / tau, est_accuracy: 1.0 / delta })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SynclineCurve { samples, tau_crit: tau_crit(budget), roof: 1.0 / budget.delta_sensor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Registry;
    use approx::assert_abs_diff_eq;

    fn reg() -> Registry {
        Registry::builtin()
    }

    fn payload(r: &Registry, p: &str, a: &str, rb: &str) -> Payload {
        let s = |n| r.sensor(n).unwrap().clone();
        Payload::new(s(p), s(a), s(rb)).unwrap()
    }

    #[test]
    fn sync_error_examples() {
        let r = reg();
        let car = r.platform("Car").unwrap();
        // 30 + 50 · 0.30194
        assert_abs_diff_eq!(sync_error_ub(car, 1.0).unwrap(), 45.097, epsilon = 1e-3);
        assert_eq!(sync_error_ub(car, 0.0).unwrap(), 0.0);
        let usv = r.platform("USV").unwrap();
        assert_abs_diff_eq!(sync_error_ub(usv, 0.01).unwrap(), 0.1390, epsilon = 1e-4);
        assert!(matches!(sync_error_ub(car, -1.0), Err(Error::NegativeTau(_))));
    }

    #[test]
    fn sensor_error_examples() {
        let r = reg();
        let p = payload(&r, "F9P RTK", "MRU5", "VUX1");
        assert_abs_diff_eq!(sensor_error_ub(&p, 100.0).unwrap(), 0.04818, epsilon = 1e-5);
        assert_eq!(sensor_error_ub(&p.scaled(0.0), 100.0).unwrap(), 0.0);
        let sv = payload(&r, "R12 RTK", "MRU5", "USBL7000");
        assert_abs_diff_eq!(sensor_error_ub(&sv, 1000.0).unwrap(), 1.0766, epsilon = 1e-4);
        assert!(sensor_error_ub(&p, 0.0).is_err());
    }

    #[test]
    fn syncline_and_tau_crit() {
        let b = ErrorBudget::new(45.097, 0.1).unwrap();
        assert_eq!(syncline(&b, 0.0).unwrap(), 0.1);
        let tc = tau_crit(&b);
        assert_abs_diff_eq!(tc, 2.217e-3, epsilon = 1e-6);
        assert_abs_diff_eq!(syncline(&b, tc).unwrap(), 0.2, epsilon = 1e-15);
        let flat = ErrorBudget::new(0.0, 0.3).unwrap();
        assert_eq!(syncline(&flat, 17.0).unwrap(), 0.3);
        assert_eq!(tau_crit(&flat), f64::INFINITY);
        assert_eq!(tau_crit(&ErrorBudget::new(5.0, 0.0).unwrap()), 0.0);
        assert!(ErrorBudget::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn car_budget_with_fixed_roof() {
        let car = reg().platform("Car").unwrap().clone();
        let b = ErrorBudget::new(sync_rate(&car), 0.1).unwrap();
        assert_abs_diff_eq!(b.tau_crit(), 0.1 / 45.097, epsilon = 1e-7);
    }

    #[test]
    fn per_sensor_examples() {
        let r = reg();
        let t = |s: &str, p: &str| per_sensor_tau_crit(r.sensor(s).unwrap(), r.platform(p).unwrap());
        assert_abs_diff_eq!(t("F9P PVT", "USV"), 0.5196, epsilon = 1e-4);
        assert_abs_diff_eq!(t("MRU5", "Car"), 67.0e-6, epsilon = 0.1e-6);
        assert_abs_diff_eq!(t("VUX1", "Multi Rotor"), 333.5e-6, epsilon = 0.1e-6);
    }

    #[test]
    fn per_sensor_zero_dynamics_is_infinite() {
        let r = reg();
        let still = PlatformSpec::from_degrees("still", 0.0, 0.0, 10.0, 1.0);
        for s in &r.sensors {
            assert_eq!(per_sensor_tau_crit(s, &still), f64::INFINITY);
        }
    }

    #[test]
    fn survey_examples() {
        let r = reg();
        let large = r.survey("Large SV + AUV").unwrap();
        let small = r.survey("Small SV + AUV").unwrap();
        assert_abs_diff_eq!(survey_sync_rate(large), 87.67, epsilon = 0.01);
        assert_abs_diff_eq!(survey_sync_rate(small), 307.34, epsilon = 0.01);
        assert_abs_diff_eq!(survey_sensor_error_ub(large), 1.4127, epsilon = 1e-4);
        assert_abs_diff_eq!(survey_sensor_error_ub(&large.scaled(0.0)), 0.0, epsilon = 0.0);

        let mut hipap = large.clone();
        hipap.sv_payload.range_bearing = r.sensor("HIPAP502").unwrap().clone();
        assert_abs_diff_eq!(survey_sensor_error_ub(&hipap), 1.9113, epsilon = 1e-4);

        let b = ErrorBudget::for_survey(large).unwrap();
        assert_abs_diff_eq!(b.tau_crit(), 16.1e-3, epsilon = 0.05e-3);
        let b = ErrorBudget::for_survey(small).unwrap();
        assert_abs_diff_eq!(b.tau_crit(), 4.6e-3, epsilon = 0.05e-3);

        let mut still = large.clone();
        still.sv.v_max = 0.0;
        still.sv.omega_max = 0.0;
        still.auv.v_max = 0.0;
        still.auv.omega_max = 0.0;
        assert_eq!(survey_sync_rate(&still), 0.0);
    }

    #[test]
    fn per_sensor_survey_examples() {
        let r = reg();
        let large = r.survey("Large SV + AUV").unwrap();
        let small = r.survey("Small SV + AUV").unwrap();
        let s = |n| r.sensor(n).unwrap();
        assert_abs_diff_eq!(
            per_sensor_tau_crit_survey(s("USBL7000"), SurveyRole::Sv, large),
            12.368e-3,
            epsilon = 2e-6
        );
        assert_abs_diff_eq!(per_sensor_tau_crit_survey(s("MRU5"), SurveyRole::Auv, large), 0.273e-3, epsilon = 2e-6);
        assert_abs_diff_eq!(
            per_sensor_tau_crit_survey(s("M3 Sonar"), SurveyRole::Sv, small),
            59.790e-3,
            epsilon = 2e-6
        );
    }

    #[test]
    fn curves() {
        let flat = ErrorBudget::new(0.0, 0.1).unwrap();
        let c = sample_curve(&flat, 1e-6, 1.0, 5).unwrap();
        assert!(c.samples.iter().all(|s| (s.est_accuracy - 10.0).abs() < 1e-12));
        assert_eq!(c.roof, 10.0);

        let car = reg().platform("Car").unwrap().clone();
        let b = ErrorBudget::new(sync_rate(&car), 0.1).unwrap();
        let c = sample_curve(&b, 1e-7, 1.0, 40).unwrap();
        assert_eq!(c.samples.len(), 40);
        assert_abs_diff_eq!(c.samples.last().unwrap().delta, 45.197, epsilon = 1e-3);
        assert!(c.samples.windows(2).all(|w| w[0].tau < w[1].tau && w[0].delta < w[1].delta));

        assert_eq!(sample_curve(&b, 1e-3, 1.0, 2).unwrap().samples.len(), 2);
        assert!(sample_curve(&b, 1.0, 1e-3, 10).is_err());
        assert!(sample_curve(&b, 0.0, 1.0, 10).is_err());
        assert!(sample_curve(&b, 1e-3, 1.0, 1).is_err());
    }
}
