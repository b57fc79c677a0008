//! Vectors of ℝ³ ≅ Im ℍ, quaternions, rotations and the cross-product
//! isomorphism `ξ ↦ C_ξ` between ℝ³ and 𝔰𝔬₃.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::AlgebraError;
use crate::linalg::Mat3;
use crate::real;

/// Below this argument the exponentials switch to Taylor expansions.
pub const SMALL_ANGLE: f64 = 1e-4;

/// Drift of `| |q|² − 1 |` tolerated before a unit quaternion is renormalized.
pub const UNIT_DRIFT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    pub const E1: Vec3 = Vec3 {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const E2: Vec3 = Vec3 {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const E3: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub const fn from_array(a: [f64; 3]) -> Self {
        Vec3 {
            x: a[0],
            y: a[1],
            z: a[2],
        }
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Standard basis vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        match i {
            0 => Self::E1,
            1 => Self::E2,
            _ => Self::E3,
        }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        cross(self, o)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        real::sqrt(self.norm_sq())
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    /// `self / |self|`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector orthogonal to `self`, obtained by Gram–Schmidt against the
    /// coordinate axis where `self` has its smallest absolute component.
    /// Deterministic; `self` must be nonzero.
    pub fn any_orthonormal(self) -> Vec3 {
        let a = [self.x.abs(), self.y.abs(), self.z.abs()];
        let mut k = 0;
        for i in 1..3 {
            if a[i] < a[k] {
                k = i;
            }
        }
        let u = self.scale(1.0 / self.norm());
        let e = Vec3::basis(k);
        let w = e - u.scale(u.dot(e));
        w.scale(1.0 / w.norm())
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> [f64; 3] {
        v.to_array()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Vec3 {
        Vec3::from_array(a)
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
        self.scale(s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v.scale(self)
    }
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    Vec3::new(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    )
}

/// A quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    pub const ZERO: Quaternion = Quaternion {
        w: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    pub const I: Quaternion = Quaternion {
        w: 0.0,
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const J: Quaternion = Quaternion {
        w: 0.0,
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const K: Quaternion = Quaternion {
        w: 0.0,
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// `w + v`, with `v ∈ Im ℍ`.
    pub fn from_parts(w: f64, v: Vec3) -> Self {
        Quaternion::new(w, v.x, v.y, v.z)
    }

    /// The purely imaginary quaternion with vector part `v`.
    pub fn pure(v: Vec3) -> Self {
        Quaternion::from_parts(0.0, v)
    }

    pub fn vector(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean inner product on ℍ ≅ ℝ⁴.
    pub fn dot(self, o: Quaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        real::sqrt(self.norm_sq())
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// An element of S³ ⊂ ℍ. Construction renormalizes, so `| |q|² − 1 |` stays
/// at rounding level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl Default for UnitQuaternion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion(Quaternion::ONE);

    /// Normalizes `q`. Fails for (numerically) zero or non-finite input.
    pub fn new(q: Quaternion) -> Result<Self, AlgebraError> {
        let n = q.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(AlgebraError::ZeroQuaternion);
        }
        Ok(UnitQuaternion(q.scale(1.0 / n)))
    }

    /// Wraps `q` without normalizing. The caller guarantees `|q| = 1`.
    pub const fn new_unchecked(q: Quaternion) -> Self {
        UnitQuaternion(q)
    }

    pub const fn quaternion(&self) -> Quaternion {
        self.0
    }

    pub fn inverse(&self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    /// `| |q|² − 1 |`.
    pub fn drift(&self) -> f64 {
        (self.0.norm_sq() - 1.0).abs()
    }

    /// Renormalizes when the drift exceeds [`UNIT_DRIFT_TOL`].
    pub fn renormalized(self) -> Self {
        if self.drift() > UNIT_DRIFT_TOL {
            UnitQuaternion(self.0.scale(1.0 / self.0.norm()))
        } else {
            self
        }
    }

    /// `q v q̄` for `v ∈ Im ℍ`.
    pub fn conjugate_vec(&self, v: Vec3) -> Vec3 {
        (self.0 * Quaternion::pure(v) * self.0.conj()).vector()
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * o.0).renormalized()
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

/// A matrix of SO₃.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3(Mat3);

impl Default for Rotation3 {
    fn default() -> Self {
        Self::identity()
    }
}

impl Rotation3 {
    /// Tolerance on `AᵀA = I` and `det A = 1` when checking a matrix.
    pub const TOL: f64 = 1e-10;

    pub fn identity() -> Self {
        Rotation3(Mat3::identity())
    }

    pub fn from_matrix(m: Mat3) -> Result<Self, AlgebraError> {
        let r = Rotation3(m);
        let defect = r.orthogonality_defect();
        if !(defect <= Self::TOL) || !((m.det() - 1.0).abs() <= Self::TOL) {
            return Err(AlgebraError::NotRotation { defect });
        }
        Ok(r)
    }

    pub const fn from_matrix_unchecked(m: Mat3) -> Self {
        Rotation3(m)
    }

    pub const fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        self.0 * v
    }

    pub fn inverse(&self) -> Self {
        Rotation3(self.0.transpose())
    }

    /// Max-abs entry of `AᵀA − I`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Mat3::identity()).max_abs()
    }
}

impl Mul for Rotation3 {
    type Output = Rotation3;
    fn mul(self, o: Rotation3) -> Rotation3 {
        Rotation3(self.0 * o.0)
    }
}

/// A skew-symmetric operator `C_ξ` stored through its axis `ξ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Skew3 {
    pub axis: Vec3,
}

impl Skew3 {
    pub fn matrix(&self) -> Mat3 {
        let a = self.axis;
        Mat3([[0.0, -a.z, a.y], [a.z, 0.0, -a.x], [-a.y, a.x, 0.0]])
    }

    pub fn apply(&self, y: Vec3) -> Vec3 {
        cross(self.axis, y)
    }
}

/// `ξ ↦ C_ξ` with `C_ξ(y) = ξ × y`.
pub fn cross_operator(xi: Vec3) -> Skew3 {
    Skew3 { axis: xi }
}

/// Default tolerance of [`skew_axis`] on `‖M + Mᵀ‖_max`.
pub const SKEW_TOL: f64 = 1e-9;

/// The unique `w` with `C_w` equal to the skew part of `m`. Fails when the
/// symmetric part of `m` exceeds `tol` (max-abs).
pub fn skew_axis(m: &Mat3, tol: f64) -> Result<Vec3, AlgebraError> {
    let sym = (*m + m.transpose()).max_abs();
    if !(sym <= tol) {
        return Err(AlgebraError::NotSkew { defect: sym });
    }
    Ok(Vec3::new(
        0.5 * (m.0[2][1] - m.0[1][2]),
        0.5 * (m.0[0][2] - m.0[2][0]),
        0.5 * (m.0[1][0] - m.0[0][1]),
    ))
}

/// `sin t / t`, with a Taylor expansion for small `t`.
pub(crate) fn sinc(t: f64) -> f64 {
    if t.abs() < SMALL_ANGLE {
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
    } else {
        real::sin(t) / t
    }
}

/// `(1 − cos t) / t²`, with a Taylor expansion for small `t`.
pub(crate) fn cosc(t: f64) -> f64 {
    if t.abs() < SMALL_ANGLE {
        let t2 = t * t;
        0.5 - t2 / 24.0 * (1.0 - t2 / 30.0)
    } else {
        let s = real::sin(0.5 * t);
        2.0 * s * s / (t * t)
    }
}

/// `exp(C_x)`: the rotation through the angle `|x|` about the oriented axis `x`
/// (Rodrigues' formula).
pub fn rotation_exp(x: Vec3) -> Rotation3 {
    let t = x.norm();
    let c = cross_operator(x).matrix();
    let m = Mat3::identity() + c.scale(sinc(t)) + (c * c).scale(cosc(t));
    Rotation3(m)
}

/// `exp(ξ) = cos|ξ| + sin|ξ| ξ/|ξ|` in ℍ.
pub fn quat_exp(xi: Vec3) -> UnitQuaternion {
    let t = xi.norm();
    let q = Quaternion::from_parts(real::cos(t), xi.scale(sinc(t)));
    UnitQuaternion(q).renormalized()
}

/// The rotation `I_q : x ↦ q x q̄` of Im ℍ ≅ ℝ³.
pub fn conjugation_rotation(q: &UnitQuaternion) -> Rotation3 {
    let Quaternion { w, x, y, z } = q.quaternion();
    Rotation3(Mat3([
        [
            w * w + x * x - y * y - z * z,
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            w * w - x * x + y * y - z * z,
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            w * w - x * x - y * y + z * z,
        ],
    ]))
}
