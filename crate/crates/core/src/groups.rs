//! The isometry groups: the spin group ℝ³⋊S³, the Euclidean group ℝ³⋊SO₃,
//! and the matrix groups `G_κ = Iso_o(M_κ)` acting on the ℝ⁴ models of the
//! space forms, together with their Lie algebras in the `Z_κ(x, ξ)`
//! parametrization.
//!
//! Points of `M_κ` live in ℝ⁴. For `κ = ±1` the model is the component of
//! `⟨x, x⟩_κ = κ` through `e₀`; for `κ = 0` it is the affine slice `x₀ = 1`.
//! In every case `o = e₀` and `T_o M_κ = span(e₁, e₂, e₃) ≅ ℝ³`.

use core::ops::Mul;

use crate::algebra::{
    conjugation_rotation, cosc, cross, cross_operator, quat_exp, rotation_exp, sinc, skew_axis,
    Quaternion, Rotation3, UnitQuaternion, Vec3,
};
use crate::error::GroupError;
use crate::linalg::{Mat3, Mat4, Vec4};
use crate::real;

/// Sectional curvature of the space form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curvature {
    Hyperbolic,
    Flat,
    Spherical,
}

impl Curvature {
    pub const ALL: [Curvature; 3] = [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical];

    pub fn as_i32(self) -> i32 {
        match self {
            Curvature::Hyperbolic => -1,
            Curvature::Flat => 0,
            Curvature::Spherical => 1,
        }
    }

    pub fn value(self) -> f64 {
        self.as_i32() as f64
    }

    /// `⟨a, b⟩_κ = κ a₀b₀ + a₁b₁ + a₂b₂ + a₃b₃`.
    pub fn inner(self, a: &Vec4, b: &Vec4) -> f64 {
        self.value() * a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    /// `J_κ = diag(κ, 1, 1, 1)`.
    pub fn gram(self) -> Mat4 {
        let mut j = Mat4::identity();
        j.0[0][0] = self.value();
        j
    }

    /// The base point `o = e₀`.
    pub fn origin(self) -> Vec4 {
        Vec4::basis(0)
    }

    /// Orthogonal projection of an ambient vector onto `T_p M_κ`.
    pub fn project_tangent(self, p: &Vec4, v: &Vec4) -> Vec4 {
        match self {
            Curvature::Flat => Vec4::new(0.0, v[1], v[2], v[3]),
            _ => {
                // ⟨p, p⟩_κ = κ
                let coeff = self.inner(p, v) / self.value();
                *v - p.scale(coeff)
            }
        }
    }

    /// Nonzero when `v` fails to be tangent at `p`.
    pub fn tangency_defect(self, p: &Vec4, v: &Vec4) -> f64 {
        match self {
            Curvature::Flat => v[0].abs(),
            _ => self.inner(p, v).abs(),
        }
    }
}

impl TryFrom<i32> for Curvature {
    type Error = GroupError;
    fn try_from(k: i32) -> Result<Self, GroupError> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Spherical),
            other => Err(GroupError::InvalidKappa(other)),
        }
    }
}

fn check_kappa(a: Curvature, b: Curvature) -> Result<(), GroupError> {
    if a == b {
        Ok(())
    } else {
        Err(GroupError::KappaMismatch {
            left: a.as_i32(),
            right: b.as_i32(),
        })
    }
}

/// An element `(x, q)` of ℝ³⋊S³ with `(x,p)(y,q) = (x + p y p̄, pq)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpinMotion {
    pub x: Vec3,
    pub q: UnitQuaternion,
}

impl SpinMotion {
    pub const IDENTITY: SpinMotion = SpinMotion {
        x: Vec3::ZERO,
        q: UnitQuaternion::IDENTITY,
    };

    pub fn new(x: Vec3, q: UnitQuaternion) -> Self {
        SpinMotion { x, q }
    }

    pub fn inverse(&self) -> Self {
        let qi = self.q.inverse();
        SpinMotion {
            x: -qi.conjugate_vec(self.x),
            q: qi,
        }
    }

    /// Max-abs distance between the components of two elements, with
    /// `q` and `−q` treated as distinct.
    pub fn component_distance(&self, other: &SpinMotion) -> f64 {
        (self.x - other.x)
            .max_abs()
            .max((self.q.quaternion() - other.q.quaternion()).max_abs())
    }
}

impl Mul for SpinMotion {
    type Output = SpinMotion;
    fn mul(self, h: SpinMotion) -> SpinMotion {
        spin_mul(&self, &h)
    }
}

pub fn spin_mul(g: &SpinMotion, h: &SpinMotion) -> SpinMotion {
    SpinMotion {
        x: g.x + g.q.conjugate_vec(h.x),
        q: g.q * h.q,
    }
}

/// A tangent vector of ℝ³⋊S³ in ambient form: a velocity of the translation
/// part and a quaternion velocity `q̇`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpinVelocity {
    pub dx: Vec3,
    pub dq: Quaternion,
}

/// `(dL_g)_{(0,1)}(ξ, η) = (p ξ p̄, p η)` for `g = (x, p)`.
pub fn left_diff_spin(g: &SpinMotion, xi: Vec3, eta: Vec3) -> SpinVelocity {
    let p = g.q.quaternion();
    SpinVelocity {
        dx: g.q.conjugate_vec(xi),
        dq: p * Quaternion::pure(eta),
    }
}

/// Inverse of [`left_diff_spin`]: left-trivializes an ambient velocity at `g`.
/// The returned defect is the real part of `p̄ q̇`, which vanishes exactly
/// when `q̇` is tangent to S³ at `p`.
pub fn left_diff_spin_inv(g: &SpinMotion, v: &SpinVelocity) -> (Vec3, Vec3, f64) {
    let pi = g.q.inverse();
    let eta = pi.quaternion() * v.dq;
    (pi.conjugate_vec(v.dx), eta.vector(), eta.w.abs())
}

/// The one-parameter subgroup `exp(t(a, b))` of ℝ³⋊S³ at `t = 1`.
///
/// The rotation part is `exp(b)`; the translation solves `ẋ = q(t) a q̄(t)`,
/// i.e. integrates `a` rotated about `b` through the angle `2s|b|`.
pub fn spin_exp(a: Vec3, b: Vec3) -> SpinMotion {
    let beta = b.norm();
    let angle = 2.0 * beta;
    let x = if beta == 0.0 {
        a
    } else {
        let u = b.scale(1.0 / beta);
        let par = u.scale(u.dot(a));
        let perp = a - par;
        // ∫₀¹ R_{2sb} a ds
        par + perp.scale(sinc(angle)) + cross(u, perp).scale(angle * cosc(angle))
    };
    SpinMotion { x, q: quat_exp(b) }
}

/// `Ad_h(ξ, η)` in ℝ³⋊S³ for `h = (y, q)`: `(I_q ξ + 2 y × I_q η, I_q η)`.
pub fn spin_adjoint(h: &SpinMotion, xi: Vec3, eta: Vec3) -> (Vec3, Vec3) {
    let eta_rot = h.q.conjugate_vec(eta);
    (
        h.q.conjugate_vec(xi) + cross(h.x, eta_rot).scale(2.0),
        eta_rot,
    )
}

/// An element `(x, A)` of ℝ³⋊SO₃ with `(x,A)(y,B) = (x + Ay, AB)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EuclideanMotion {
    pub x: Vec3,
    pub a: Rotation3,
}

impl EuclideanMotion {
    pub fn identity() -> Self {
        EuclideanMotion {
            x: Vec3::ZERO,
            a: Rotation3::identity(),
        }
    }

    pub fn new(x: Vec3, a: Rotation3) -> Self {
        EuclideanMotion { x, a }
    }

    pub fn inverse(&self) -> Self {
        let ai = self.a.inverse();
        EuclideanMotion {
            x: -ai.apply(self.x),
            a: ai,
        }
    }

    /// The matrix `[[1, 0], [x, A]]` of `G₀`.
    pub fn to_isometry(&self) -> IsometryG {
        let mut m = Mat4::block_diag(1.0, self.a.matrix());
        m.0[1][0] = self.x.x;
        m.0[2][0] = self.x.y;
        m.0[3][0] = self.x.z;
        IsometryG {
            kappa: Curvature::Flat,
            m,
        }
    }

    pub fn component_distance(&self, other: &EuclideanMotion) -> f64 {
        (self.x - other.x)
            .max_abs()
            .max((*self.a.matrix() - *other.a.matrix()).max_abs())
    }
}

impl Mul for EuclideanMotion {
    type Output = EuclideanMotion;
    fn mul(self, h: EuclideanMotion) -> EuclideanMotion {
        euclid_mul(&self, &h)
    }
}

pub fn euclid_mul(g: &EuclideanMotion, h: &EuclideanMotion) -> EuclideanMotion {
    EuclideanMotion {
        x: g.x + g.a.apply(h.x),
        a: g.a * h.a,
    }
}

/// The two-to-one covering `Π(x, q) = (x, I_q)`.
pub fn covering_pi(g: &SpinMotion) -> EuclideanMotion {
    EuclideanMotion {
        x: g.x,
        a: conjugation_rotation(&g.q),
    }
}

/// Ambient differential of `Π` at `g`: `(ẋ, q̇) ↦ (ẋ, z ↦ q̇ z q̄ + q z q̇̄)`.
pub fn covering_pi_diff(g: &SpinMotion, v: &SpinVelocity) -> (Vec3, Mat3) {
    let q = g.q.quaternion();
    let cols: [Vec3; 3] = core::array::from_fn(|i| {
        let z = Quaternion::pure(Vec3::basis(i));
        (v.dq * z * q.conj() + q * z * v.dq.conj()).vector()
    });
    (v.dx, Mat3::from_columns(cols[0], cols[1], cols[2]))
}

/// An element `Z_κ(x, ξ) = [[0, −κxᵀ], [x, C_ξ]]` of `𝔤_κ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LieElementZ {
    pub kappa: Curvature,
    pub x: Vec3,
    pub xi: Vec3,
}

impl LieElementZ {
    pub fn new(kappa: Curvature, x: Vec3, xi: Vec3) -> Self {
        LieElementZ { kappa, x, xi }
    }

    pub fn matrix(&self) -> Mat4 {
        z_matrix(self.kappa, self.x, self.xi)
    }

    pub fn scale(&self, s: f64) -> Self {
        LieElementZ {
            kappa: self.kappa,
            x: self.x.scale(s),
            xi: self.xi.scale(s),
        }
    }

    pub fn add(&self, o: &LieElementZ) -> Result<Self, GroupError> {
        check_kappa(self.kappa, o.kappa)?;
        Ok(LieElementZ {
            kappa: self.kappa,
            x: self.x + o.x,
            xi: self.xi + o.xi,
        })
    }

    /// Coordinates `(x, ξ)` as a 6-vector.
    pub fn coords(&self) -> [f64; 6] {
        [
            self.x.x, self.x.y, self.x.z, self.xi.x, self.xi.y, self.xi.z,
        ]
    }
}

pub fn z_matrix(kappa: Curvature, x: Vec3, xi: Vec3) -> Mat4 {
    let mut m = Mat4::block_diag(0.0, &cross_operator(xi).matrix());
    let k = kappa.value();
    for (i, xi_comp) in x.to_array().into_iter().enumerate() {
        m.0[i + 1][0] = xi_comp;
        m.0[0][i + 1] = -k * xi_comp;
    }
    m
}

/// Tolerance of [`z_unpack`] on deviations from the `Z_κ` pattern.
pub const Z_PATTERN_TOL: f64 = 1e-10;

/// Recovers `(x, ξ)` from a matrix of `𝔤_κ`.
pub fn z_unpack(kappa: Curvature, m: &Mat4, tol: f64) -> Result<LieElementZ, GroupError> {
    let x = Vec3::new(m.0[1][0], m.0[2][0], m.0[3][0]);
    let lower = m.lower_block();
    let xi = skew_axis(&lower, f64::INFINITY)?;
    let rebuilt = z_matrix(kappa, x, xi);
    let defect = (*m - rebuilt).max_abs();
    if !(defect <= tol) {
        return Err(GroupError::NotLieElement { defect });
    }
    Ok(LieElementZ { kappa, x, xi })
}

/// `[Z_κ(x,ξ), Z_κ(y,η)] = Z_κ(ξ×y − η×x, κ x×y + ξ×η)`.
pub fn bracket_z(a: &LieElementZ, b: &LieElementZ) -> Result<LieElementZ, GroupError> {
    check_kappa(a.kappa, b.kappa)?;
    let k = a.kappa.value();
    Ok(LieElementZ {
        kappa: a.kappa,
        x: cross(a.xi, b.x) - cross(b.xi, a.x),
        xi: cross(a.x, b.x).scale(k) + cross(a.xi, b.xi),
    })
}

/// Matrix of `z ↦ p z q̄` on ℍ ≅ ℝ⁴, in the basis `(1, i, j, k) = (e₀, …, e₃)`.
pub fn p_morphism(p: &UnitQuaternion, q: &UnitQuaternion) -> Mat4 {
    let (p, qc) = (p.quaternion(), q.quaternion().conj());
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    Mat4::from_columns(basis.map(|z| Vec4((p * z * qc).to_array())))
}

/// Ambient differential of [`p_morphism`] at `(p, q)` applied to `(ṗ, q̇)`.
pub fn p_morphism_diff(
    p: &UnitQuaternion,
    q: &UnitQuaternion,
    dp: &Quaternion,
    dq: &Quaternion,
) -> Mat4 {
    let (p, q) = (p.quaternion(), q.quaternion());
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    Mat4::from_columns(basis.map(|z| Vec4((*dp * z * q.conj() + p * z * dq.conj()).to_array())))
}

/// A direct isometry of `M_κ` as a 4×4 matrix acting on the ℝ⁴ model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometryG {
    pub kappa: Curvature,
    pub m: Mat4,
}

/// Tolerance for membership checks of [`IsometryG::new`].
pub const ISOMETRY_TOL: f64 = 1e-9;

impl IsometryG {
    pub fn identity(kappa: Curvature) -> Self {
        IsometryG {
            kappa,
            m: Mat4::identity(),
        }
    }

    /// Checks membership in `G_κ` before wrapping.
    pub fn new(kappa: Curvature, m: Mat4) -> Result<Self, GroupError> {
        let g = IsometryG { kappa, m };
        let defect = g.membership_defect();
        if !(defect <= ISOMETRY_TOL) {
            return Err(GroupError::NotIsometry { defect });
        }
        Ok(g)
    }

    pub const fn new_unchecked(kappa: Curvature, m: Mat4) -> Self {
        IsometryG { kappa, m }
    }

    /// Max deviation from the defining relations of `G_κ`; `∞` when `g`
    /// swaps the components of the hyperboloid or reverses orientation.
    pub fn membership_defect(&self) -> f64 {
        let m = &self.m;
        let relation = match self.kappa {
            Curvature::Flat => {
                let row = (m.0[0][0] - 1.0)
                    .abs()
                    .max(m.0[0][1].abs())
                    .max(m.0[0][2].abs())
                    .max(m.0[0][3].abs());
                let a = m.lower_block();
                row.max((a.transpose() * a - Mat3::identity()).max_abs())
            }
            k => {
                let j = k.gram();
                (m.transpose() * j * *m - j).max_abs()
            }
        };
        let det = (m.det() - 1.0).abs();
        let component_ok = self.kappa != Curvature::Hyperbolic || m.0[0][0] > 0.0;
        if !component_ok {
            return f64::INFINITY;
        }
        relation.max(det)
    }

    pub fn inverse(&self) -> Self {
        let m = match self.kappa {
            Curvature::Flat => {
                let at = self.m.lower_block().transpose();
                let a = Vec3::new(self.m.0[1][0], self.m.0[2][0], self.m.0[3][0]);
                let t = -(at * a);
                let mut inv = Mat4::block_diag(1.0, &at);
                inv.0[1][0] = t.x;
                inv.0[2][0] = t.y;
                inv.0[3][0] = t.z;
                inv
            }
            k => {
                let j = k.gram();
                j * self.m.transpose() * j
            }
        };
        IsometryG {
            kappa: self.kappa,
            m,
        }
    }

    pub fn mul(&self, h: &IsometryG) -> Result<Self, GroupError> {
        check_kappa(self.kappa, h.kappa)?;
        Ok(IsometryG {
            kappa: self.kappa,
            m: self.m * h.m,
        })
    }

    /// Action on points and (by linearity) on tangent vectors of the model.
    pub fn apply(&self, v: &Vec4) -> Vec4 {
        self.m * *v
    }

    /// `g(o)`.
    pub fn basepoint(&self) -> Vec4 {
        self.m.column(0)
    }

    /// `exp(Z_κ(x, 0))`, the transvection moving `o` along the geodesic with
    /// initial velocity `x`.
    pub fn transvection(kappa: Curvature, x: Vec3) -> Self {
        let t = x.norm();
        let z = z_matrix(kappa, x, Vec3::ZERO);
        let (a, b) = match kappa {
            Curvature::Spherical => (sinc(t), cosc(t)),
            Curvature::Flat => (1.0, 0.5),
            Curvature::Hyperbolic => (sinhc(t), coshc(t)),
        };
        IsometryG {
            kappa,
            m: Mat4::identity() + z.scale(a) + (z * z).scale(b),
        }
    }

    /// `exp(Z_κ(0, ξ)) = diag(1, exp(C_ξ))`, a rotation about `o`.
    pub fn rotation(kappa: Curvature, xi: Vec3) -> Self {
        IsometryG {
            kappa,
            m: Mat4::block_diag(1.0, rotation_exp(xi).matrix()),
        }
    }

    /// Isotropy element `diag(1, A)`.
    pub fn from_rotation(kappa: Curvature, a: &Rotation3) -> Self {
        IsometryG {
            kappa,
            m: Mat4::block_diag(1.0, a.matrix()),
        }
    }
}

/// `sinh t / t`.
fn sinhc(t: f64) -> f64 {
    if t.abs() < crate::algebra::SMALL_ANGLE {
        let t2 = t * t;
        1.0 + t2 / 6.0 * (1.0 + t2 / 20.0)
    } else {
        real::sinh(t) / t
    }
}

/// `(cosh t − 1) / t²`.
fn coshc(t: f64) -> f64 {
    if t.abs() < crate::algebra::SMALL_ANGLE {
        let t2 = t * t;
        0.5 + t2 / 24.0 * (1.0 + t2 / 30.0)
    } else {
        let s = real::sinh(0.5 * t);
        2.0 * s * s / (t * t)
    }
}

/// A positively oriented orthonormal frame `b : T_o M → T_p M`, stored as the
/// base point and the images of `e₁, e₂, e₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub kappa: Curvature,
    pub point: Vec4,
    pub axes: [Vec4; 3],
}

impl Frame {
    /// `b(y)` for `y ∈ T_o M ≅ ℝ³`.
    pub fn apply(&self, y: Vec3) -> Vec4 {
        self.axes[0].scale(y.x) + self.axes[1].scale(y.y) + self.axes[2].scale(y.z)
    }

    /// `b⁻¹(v)` for `v ∈ T_p M`, using the metric of the model.
    pub fn apply_inverse(&self, v: &Vec4) -> Vec3 {
        Vec3::new(
            self.kappa.inner(&self.axes[0], v),
            self.kappa.inner(&self.axes[1], v),
            self.kappa.inner(&self.axes[2], v),
        )
    }

    /// The unique isometry `g` with `𝓘(g) = (dg)_o = b`.
    pub fn to_isometry(&self) -> IsometryG {
        IsometryG {
            kappa: self.kappa,
            m: Mat4::from_columns([self.point, self.axes[0], self.axes[1], self.axes[2]]),
        }
    }
}

/// `𝓘(g) = (dg)_o`.
pub fn frame_of(g: &IsometryG) -> Frame {
    Frame {
        kappa: g.kappa,
        point: g.m.column(0),
        axes: [g.m.column(1), g.m.column(2), g.m.column(3)],
    }
}

/// Tolerance for the antipodal guard of [`cartan_decompose`].
pub const ANTIPODAL_TOL: f64 = 1e-9;

/// Splits `g = exp(Z_κ(x, 0)) · k` with `k` fixing `o`.
pub fn cartan_decompose(g: &IsometryG) -> Result<(LieElementZ, IsometryG), GroupError> {
    let p = g.basepoint();
    let v = p.spatial();
    let s = v.norm();
    let x = match g.kappa {
        Curvature::Flat => v,
        Curvature::Spherical => {
            if (p[0] + 1.0).abs() <= ANTIPODAL_TOL && s <= real::sqrt(2.0 * ANTIPODAL_TOL) {
                return Err(GroupError::AntipodalPoint);
            }
            let t = real::atan2(s, p[0]);
            if s == 0.0 {
                Vec3::ZERO
            } else {
                v.scale(t / s)
            }
        }
        Curvature::Hyperbolic => {
            let t = real::asinh(s);
            if s == 0.0 {
                Vec3::ZERO
            } else {
                v.scale(t / s)
            }
        }
    };
    let sigma_inv = IsometryG::transvection(g.kappa, -x);
    let k = IsometryG {
        kappa: g.kappa,
        m: sigma_inv.m * g.m,
    };
    Ok((LieElementZ::new(g.kappa, x, Vec3::ZERO), k))
}
