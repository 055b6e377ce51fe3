use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use syncline_core::kinematics::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

fn vec3(lim: f64) -> impl Strategy<Value = Vec3> {
    (-lim..lim, -lim..lim, -lim..lim).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn euler() -> impl Strategy<Value = EulerAngles> {
    (-PI..PI, -FRAC_PI_2..FRAC_PI_2, -PI..PI).prop_map(|(r, p, y)| EulerAngles::new(r, p, y))
}

fn max_abs(m: &Mat3) -> f64 {
    m.0.iter().flatten().fold(0.0_f64, |a, v| a.max(v.abs()))
}

/// Body rates → Euler-angle rates for the zyx convention.
fn euler_rates(e: EulerAngles, w: Vec3) -> EulerAngles {
    let (sr, cr) = e.roll.sin_cos();
    let (tp, cp) = (e.pitch.tan(), e.pitch.cos());
    let qr = w.y * sr + w.z * cr;
    EulerAngles::new(w.x + qr * tp, w.y * cr - w.z * sr, qr / cp)
}

proptest! {
    #![proptest_config(cases(10_000))]

    #[test]
    fn euler_rotation_is_so3(r in -1e3..1e3f64, p in -1e3..1e3f64, y in -1e3..1e3f64) {
        let m = euler_to_rotation(EulerAngles::new(r, p, y)).unwrap();
        prop_assert!(m.orthogonality_error() < 1e-9);
        prop_assert!((m.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn skew_is_cross(v in vec3(1e3), w in vec3(1e3)) {
        let a = skew(v) * w;
        let b = v.cross(w);
        let scale = v.norm() * w.norm();
        prop_assert!((a - b).norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn bearing_round_trip(az in -PI..PI, el in -1.5f64..1.5, log_r in -3.0..6.0f64) {
        let r = 10f64.powf(log_r);
        let b = BearingRange::new(az, el, r).unwrap();
        let v = bearing_to_vector(b);
        let back = vector_to_bearing(v).unwrap();
        prop_assert!((back.range - r).abs() <= 1e-9 * r);
        prop_assert!((bearing_to_vector(back) - v).norm() <= 1e-9 * r);
        prop_assert!(back.azimuth > -PI && back.azimuth <= PI);
    }

    #[test]
    fn vector_round_trip(v in vec3(1e6)) {
        prop_assume!(v.norm() > 1e-3);
        let b = vector_to_bearing(v).unwrap();
        prop_assert!((bearing_to_vector(b) - v).norm() <= 1e-9 * v.norm());
        prop_assert!(b.elevation.abs() <= FRAC_PI_2 && b.range >= 0.0);
    }

    #[test]
    fn attitude_error_matches_perturbed_euler(
        r in -PI..PI, p in -1.2f64..1.2, y in -PI..PI, eps in vec3(1e-2 / 3f64.sqrt()),
    ) {
        let e = EulerAngles::new(r, p, y);
        let rot = euler_to_rotation(e).unwrap();
        let perturbed = apply_attitude_error(rot, AttitudePerturbation(eps)).unwrap();
        let d = euler_rates(e, eps);
        let via_angles = euler_to_rotation(EulerAngles::new(r + d.roll, p + d.pitch, y + d.yaw)).unwrap();
        let gap = max_abs(&(*perturbed.matrix() - *via_angles.matrix()));
        prop_assert!(gap <= 2.0 * eps.norm_squared() + 1e-15, "gap {gap} eps {}", eps.norm());
    }

    #[test]
    fn attitude_error_stays_on_so3(e in euler(), eps in vec3(0.9)) {
        let m = apply_attitude_error(euler_to_rotation(e).unwrap(), AttitudePerturbation(eps)).unwrap();
        prop_assert!(m.orthogonality_error() < 1e-9);
        prop_assert!((m.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ecef_ned_is_so3(lat in -FRAC_PI_2..=FRAC_PI_2, lon in -PI..PI) {
        let m = ecef_ned_rotation(lat, lon);
        prop_assert!(m.orthogonality_error() < 1e-9);
        prop_assert!((m.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn euler_round_trip(e in euler()) {
        prop_assume!(e.pitch.abs() < 1.5);
        let m = euler_to_rotation(e).unwrap();
        let back = euler_to_rotation(m.to_euler()).unwrap();
        prop_assert!(max_abs(&(*m.matrix() - *back.matrix())) < 1e-9);
    }
}
