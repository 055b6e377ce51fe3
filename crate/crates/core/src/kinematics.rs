//! Frame algebra used by every measurement equation.
//!
//! Conventions: `R_ab` maps vectors resolved in frame `b` into frame `a`
//! (`z^a = R_ab z^b`). Euler angles are roll/pitch/yaw in the z-y-x order of
//! the body-to-NED rotation. All angles are radians.

use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::math;
use crate::{Error, Result};

/// 3-vector of positions, velocities or angular rates.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_squared())
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Plain row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3 {
        Mat3([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.0.iter().flatten().map(|v| v * v).sum())
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += o.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o.scale(-1.0)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        out
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

/// Tolerance used when accepting an arbitrary matrix as a rotation.
pub const SO3_TOLERANCE: f64 = 1e-9;

/// Element of SO(3). The wrapped matrix is orthonormal with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Mat3);

impl RotationMatrix {
    pub const IDENTITY: RotationMatrix = RotationMatrix(Mat3::IDENTITY);

    /// Accepts `m` if `‖mᵀm − I‖_F ≤ 1e-9` and `|det m − 1| ≤ 1e-9`.
    pub fn try_from_matrix(m: Mat3) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite("rotation matrix"));
        }
        let r = RotationMatrix(m);
        if r.orthogonality_error() > SO3_TOLERANCE || (m.determinant() - 1.0).abs() > SO3_TOLERANCE {
            return Err(Error::Validation { path: "rotation".into(), message: "matrix is not in SO(3)".into() });
        }
        Ok(r)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    /// The inverse rotation.
    pub fn transpose(&self) -> RotationMatrix {
        RotationMatrix(self.0.transpose())
    }

    /// `‖RᵀR − I‖_F`.
    pub fn orthogonality_error(&self) -> f64 {
        (self.0.transpose() * self.0 - Mat3::IDENTITY).frobenius_norm()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Roll/pitch/yaw with pitch in `[-π/2, π/2]`.
    pub fn to_euler(&self) -> EulerAngles {
        let m = &self.0 .0;
        let sp = (-m[2][0]).clamp(-1.0, 1.0);
        EulerAngles { roll: math::atan2(m[2][1], m[2][2]), pitch: math::asin(sp), yaw: math::atan2(m[1][0], m[0][0]) }
    }
}

impl Mul for RotationMatrix {
    type Output = RotationMatrix;
    fn mul(self, o: RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * o.0)
    }
}

impl Mul<Vec3> for RotationMatrix {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.0 * v
    }
}

impl Mul<Mat3> for RotationMatrix {
    type Output = Mat3;
    fn mul(self, m: Mat3) -> Mat3 {
        self.0 * m
    }
}

/// Roll, pitch, yaw in radians.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EulerAngles {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl EulerAngles {
    pub const fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        Self { roll, pitch, yaw }
    }

    fn is_finite(&self) -> bool {
        self.roll.is_finite() && self.pitch.is_finite() && self.yaw.is_finite()
    }
}

/// Azimuth `Ψ ∈ (−π, π]`, elevation `α ∈ [−π/2, π/2]` (positive up, i.e.
/// towards −z), range `r ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BearingRange {
    pub azimuth: f64,
    pub elevation: f64,
    pub range: f64,
}

impl BearingRange {
    pub fn new(azimuth: f64, elevation: f64, range: f64) -> Result<Self> {
        if !(azimuth.is_finite() && elevation.is_finite() && range.is_finite()) {
            return Err(Error::NonFinite("bearing/range"));
        }
        if range < 0.0 {
            return Err(Error::Validation { path: "range".into(), message: "range must be non-negative".into() });
        }
        if elevation.abs() > core::f64::consts::FRAC_PI_2 {
            return Err(Error::Validation {
                path: "elevation".into(),
                message: "elevation outside [-pi/2, pi/2]".into(),
            });
        }
        Ok(Self { azimuth: wrap_angle(azimuth), elevation, range })
    }
}

/// Small body-frame rotation vector `ε` (radians).
///
/// The first-order model `R(I + S(ε))` is accurate to `O(‖ε‖²)`; beyond
/// roughly 0.1 rad the applied rotation angle `atan‖ε‖` falls visibly short
/// of `‖ε‖` (0.3 % at 0.1 rad, 7 % at 0.5 rad).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AttitudePerturbation(pub Vec3);

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut w = a % TAU;
    if w > PI {
        w -= TAU;
    } else if w <= -PI {
        w += TAU;
    }
    w
}

/// Skew-symmetric matrix with `S(v) w = v × w`.
pub fn skew(v: Vec3) -> Mat3 {
    Mat3([[0.0, -v.z, v.y], [v.z, 0.0, -v.x], [-v.y, v.x, 0.0]])
}

/// Body-to-NED rotation `R_nb(φ, θ, ψ)`.
pub fn euler_to_rotation(angles: EulerAngles) -> Result<RotationMatrix> {
    if !angles.is_finite() {
        return Err(Error::NonFinite("euler angles"));
    }
    let (sf, cf) = (math::sin(angles.roll), math::cos(angles.roll));
    let (st, ct) = (math::sin(angles.pitch), math::cos(angles.pitch));
    let (sp, cp) = (math::sin(angles.yaw), math::cos(angles.yaw));
    Ok(RotationMatrix(Mat3([
        [ct * cp, -cf * sp + sf * st * cp, sf * sp + cf * st * cp],
        [ct * sp, cf * cp + sf * st * sp, -sf * cp + cf * st * sp],
        [-st, sf * ct, cf * ct],
    ])))
}

/// Rotation by angle `‖w‖` about `w` (Rodrigues' formula).
pub fn exp_so3(w: Vec3) -> RotationMatrix {
    let theta2 = w.norm_squared();
    let theta = math::sqrt(theta2);
    let (a, b) = if theta < 1e-6 {
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        (math::sin(theta) / theta, (1.0 - math::cos(theta)) / theta2)
    };
    let s = skew(w);
    RotationMatrix(Mat3::IDENTITY + s.scale(a) + (s * s).scale(b))
}

/// Perturbs `r` by the small body-frame attitude error `ε`:
/// `R (I + S(ε))` followed by symmetric orthogonalization.
///
/// The symmetric (polar) orthogonalization of `I + S(ε)` is exactly the
/// rotation about `ε̂` by `atan‖ε‖`, so the step is evaluated in closed form.
/// Applying `ε` then `−ε` returns `r` up to rounding.
pub fn apply_attitude_error(r: RotationMatrix, eps: AttitudePerturbation) -> Result<RotationMatrix> {
    let e = eps.0;
    if !e.is_finite() {
        return Err(Error::NonFinite("attitude perturbation"));
    }
    let n = e.norm();
    if n >= core::f64::consts::FRAC_PI_2 {
        return Err(Error::AngleTooLarge(n));
    }
    if n == 0.0 {
        return Ok(r);
    }
    Ok(r * exp_so3(e * (math::atan(n) / n)))
}

/// Rotation `R(α, Ψ)` that maps the range vector `(r, 0, 0)` onto the
/// bearing direction.
pub fn bearing_rotation(azimuth: f64, elevation: f64) -> RotationMatrix {
    let (sp, cp) = (math::sin(azimuth), math::cos(azimuth));
    let (sa, ca) = (math::sin(elevation), math::cos(elevation));
    RotationMatrix(Mat3([[cp * ca, -sp, sa * cp], [sp * ca, cp, sa * sp], [-sa, 0.0, ca]]))
}

/// `r · (cosΨ cosα, sinΨ cosα, −sinα)`.
pub fn bearing_to_vector(b: BearingRange) -> Vec3 {
    let (sp, cp) = (math::sin(b.azimuth), math::cos(b.azimuth));
    let (sa, ca) = (math::sin(b.elevation), math::cos(b.elevation));
    Vec3::new(cp * ca, sp * ca, -sa) * b.range
}

/// Inverse of [`bearing_to_vector`]. At the poles the azimuth is 0.
pub fn vector_to_bearing(p: Vec3) -> Result<BearingRange> {
    if !p.is_finite() {
        return Err(Error::NonFinite("bearing vector"));
    }
    let r = p.norm();
    if r == 0.0 {
        return Err(Error::ZeroVector("bearing vector"));
    }
    let horizontal = math::hypot(p.x, p.y);
    let azimuth = if horizontal == 0.0 { 0.0 } else { wrap_angle(math::atan2(p.y, p.x)) };
    Ok(BearingRange { azimuth, elevation: math::atan2(-p.z, horizontal), range: r })
}

/// NED-to-ECEF rotation `R_en` at geodetic latitude/longitude. Columns are the
/// ECEF-resolved north, east and down unit vectors.
pub fn ecef_ned_rotation(lat: f64, lon: f64) -> RotationMatrix {
    let (sl, cl) = (math::sin(lat), math::cos(lat));
    let (so, co) = (math::sin(lon), math::cos(lon));
    let north = Vec3::new(-sl * co, -sl * so, cl);
    let east = Vec3::new(-so, co, 0.0);
    let down = Vec3::new(-cl * co, -cl * so, -sl);
    RotationMatrix(Mat3::from_cols(north, east, down))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn assert_mat_eq(a: &Mat3, b: &Mat3, tol: f64) {
        assert!((*a - *b).frobenius_norm() <= tol, "{a:?} != {b:?}");
    }

    fn rx(a: f64) -> Mat3 {
        Mat3([[1.0, 0.0, 0.0], [0.0, a.cos(), -a.sin()], [0.0, a.sin(), a.cos()]])
    }
    fn ry(a: f64) -> Mat3 {
        Mat3([[a.cos(), 0.0, a.sin()], [0.0, 1.0, 0.0], [-a.sin(), 0.0, a.cos()]])
    }
    fn rz(a: f64) -> Mat3 {
        Mat3([[a.cos(), -a.sin(), 0.0], [a.sin(), a.cos(), 0.0], [0.0, 0.0, 1.0]])
    }

    #[test]
    fn euler_zero_is_identity() {
        let r = euler_to_rotation(EulerAngles::default()).unwrap();
        assert_eq!(*r.matrix(), Mat3::IDENTITY);
    }

    #[test]
    fn euler_pure_yaw() {
        let r = euler_to_rotation(EulerAngles::new(0.0, 0.0, FRAC_PI_2)).unwrap();
        let expected = Mat3([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_mat_eq(r.matrix(), &expected, 1e-15);
    }

    #[test]
    fn euler_matches_elementary_product() {
        let (f, t, p) = (0.1, 0.2, 0.3);
        let r = euler_to_rotation(EulerAngles::new(f, t, p)).unwrap();
        assert_mat_eq(r.matrix(), &(rz(p) * ry(t) * rx(f)), 1e-15);
        assert!(r.orthogonality_error() < 1e-9);
        assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn euler_rejects_nan() {
        assert!(matches!(euler_to_rotation(EulerAngles::new(f64::NAN, 0.0, 0.0)), Err(Error::NonFinite(_))));
    }

    #[test]
    fn euler_round_trip() {
        let a = EulerAngles::new(-0.4, 1.1, 2.9);
        let back = euler_to_rotation(a).unwrap().to_euler();
        assert_abs_diff_eq!(back.roll, a.roll, epsilon = 1e-12);
        assert_abs_diff_eq!(back.pitch, a.pitch, epsilon = 1e-12);
        assert_abs_diff_eq!(back.yaw, a.yaw, epsilon = 1e-12);
    }

    #[test]
    fn skew_basics() {
        assert_eq!(skew(Vec3::ZERO), Mat3::ZERO);
        assert_eq!(skew(Vec3::X) * Vec3::Y, Vec3::Z);
        let s = skew(Vec3::new(0.3, -1.2, 2.0));
        assert_eq!(s, s.transpose().scale(-1.0));
    }

    #[test]
    fn attitude_error_zero_is_noop() {
        let r = euler_to_rotation(EulerAngles::new(0.3, -0.2, 1.0)).unwrap();
        assert_eq!(apply_attitude_error(r, AttitudePerturbation::default()).unwrap(), r);
    }

    #[test]
    fn attitude_error_small_yaw() {
        let eps = AttitudePerturbation(Vec3::new(0.0, 0.0, 1e-3));
        let r = apply_attitude_error(RotationMatrix::IDENTITY, eps).unwrap();
        let oracle = euler_to_rotation(EulerAngles::new(0.0, 0.0, 1e-3)).unwrap();
        assert_abs_diff_eq!(r.to_euler().yaw, 1e-3, epsilon = 1e-6);
        assert_mat_eq(r.matrix(), oracle.matrix(), 1e-6);
    }

    #[test]
    fn attitude_error_round_trip() {
        let r = euler_to_rotation(EulerAngles::new(0.5, 0.1, -2.0)).unwrap();
        let e = Vec3::new(4e-3, -7e-3, 5e-3);
        let there = apply_attitude_error(r, AttitudePerturbation(e)).unwrap();
        let back = apply_attitude_error(there, AttitudePerturbation(-e)).unwrap();
        assert_mat_eq(back.matrix(), r.matrix(), 1e-12);
    }

    #[test]
    fn attitude_error_too_large() {
        let e = AttitudePerturbation(Vec3::new(0.0, 2.0, 0.0));
        assert!(matches!(apply_attitude_error(RotationMatrix::IDENTITY, e), Err(Error::AngleTooLarge(_))));
    }

    /// Polar factor of `R(I + S(ε))` by Newton iteration `X ← (X + X⁻ᵀ)/2`.
    fn polar_oracle(m: Mat3) -> Mat3 {
        let mut x = m;
        for _ in 0..30 {
            let inv_t = inverse(&x).transpose();
            x = (x + inv_t).scale(0.5);
        }
        x
    }

    fn inverse(m: &Mat3) -> Mat3 {
        let a = &m.0;
        let det = m.determinant();
        let c = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]
        };
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.0[j][i] = c(i, j) / det;
            }
        }
        out
    }

    #[test]
    fn attitude_error_is_symmetric_orthogonalization() {
        let r = euler_to_rotation(EulerAngles::new(0.2, -0.6, 0.9)).unwrap();
        for e in [Vec3::new(0.01, 0.02, -0.03), Vec3::new(0.3, -0.1, 0.4), Vec3::new(0.0, 1.2, 0.0)] {
            let first_order = r * (Mat3::IDENTITY + skew(e));
            let oracle = polar_oracle(first_order);
            let got = apply_attitude_error(r, AttitudePerturbation(e)).unwrap();
            assert_mat_eq(got.matrix(), &oracle, 1e-12);
        }
    }

    #[test]
    fn bearing_examples() {
        let v = bearing_to_vector(BearingRange::new(0.0, 0.0, 5.0).unwrap());
        assert_eq!(v, Vec3::new(5.0, 0.0, 0.0));
        let v = bearing_to_vector(BearingRange::new(FRAC_PI_2, 0.0, 2.0).unwrap());
        assert_abs_diff_eq!(v.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y, 2.0, epsilon = 1e-15);

        let b = BearingRange::new(0.3, -0.2, 10.0).unwrap();
        let oracle = bearing_rotation(b.azimuth, b.elevation) * Vec3::new(10.0, 0.0, 0.0);
        assert_abs_diff_eq!((bearing_to_vector(b) - oracle).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bearing_rotation_is_so3() {
        let r = bearing_rotation(2.0, -0.7);
        assert!(r.orthogonality_error() < 1e-12);
        assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vector_to_bearing_examples() {
        let b = vector_to_bearing(Vec3::new(5.0, 0.0, 0.0)).unwrap();
        assert_eq!((b.azimuth, b.elevation, b.range), (0.0, 0.0, 5.0));

        let pole = vector_to_bearing(Vec3::new(0.0, 0.0, -3.0)).unwrap();
        assert_eq!(pole.azimuth, 0.0);
        assert_abs_diff_eq!(pole.elevation, FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(pole.range, 3.0);

        assert!(matches!(vector_to_bearing(Vec3::ZERO), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn azimuth_range_is_half_open() {
        let b = vector_to_bearing(Vec3::new(-1.0, -0.0, 0.0)).unwrap();
        assert_eq!(b.azimuth, PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!(BearingRange::new(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn ecef_ned_equator() {
        let r = ecef_ned_rotation(0.0, 0.0);
        let expected = Mat3([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]);
        assert_mat_eq(r.matrix(), &expected, 1e-15);
    }

    #[test]
    fn ecef_ned_pole_and_det() {
        let r = ecef_ned_rotation(FRAC_PI_2, 0.0);
        let down = r.matrix().col(2);
        assert_abs_diff_eq!((down - Vec3::new(0.0, 0.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
        assert!(r.matrix().is_finite());
        for (lat, lon) in [(0.3, 1.2), (-1.1, -2.5), (FRAC_PI_2, 3.0), (-FRAC_PI_2, -1.0)] {
            let r = ecef_ned_rotation(lat, lon);
            assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-9);
            assert!(r.orthogonality_error() < 1e-9);
        }
    }

    #[test]
    fn exp_so3_small_and_large() {
        let r = exp_so3(Vec3::new(0.0, 0.0, PI / 2.0));
        assert_abs_diff_eq!((r * Vec3::X - Vec3::Y).norm(), 0.0, epsilon = 1e-15);
        let tiny = exp_so3(Vec3::new(1e-9, 0.0, 0.0));
        assert!(tiny.orthogonality_error() < 1e-15);
    }

    #[test]
    fn try_from_matrix_rejects_reflection() {
        let m = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);
        assert!(RotationMatrix::try_from_matrix(m).is_err());
        assert!(RotationMatrix::try_from_matrix(Mat3::IDENTITY).is_ok());
    }
}
