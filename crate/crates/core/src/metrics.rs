//! The split inner products of signature (3,3) on the isometry groups, their
//! evaluation away from the identity by left translation, causal types, and
//! sampling verifiers for bi-invariance and the local isometries `Π` and `P`.
//!
//! Tangent vectors are stored left-trivialized as a pair `(a, b)` of vectors
//! of ℝ³. Their meaning depends on the group:
//!
//! * `G_κ`: `Z_κ(a, b)`, so `a` is the transvection part and `b` the rotation;
//! * ℝ³⋊S³: `(ξ, η)` with `ξ` the translation and `η ∈ Im ℍ` the rotation;
//! * S³×S³: `(v, w) ∈ Im ℍ × Im ℍ`.

use crate::algebra::{Quaternion, UnitQuaternion, Vec3};
use crate::error::MetricError;
use crate::groups::{
    bracket_z, covering_pi, covering_pi_diff, left_diff_spin, left_diff_spin_inv, p_morphism,
    p_morphism_diff, spin_exp, z_matrix, z_unpack, Curvature, IsometryG, LieElementZ, SpinMotion,
    SpinVelocity,
};
use crate::linalg::{inertia, Mat4};
use crate::sampling::{map_indexed, max_with_nan, random_unit_quaternion, random_vec3, rng_for};

/// Default half-width of the null band in [`causal_type`].
pub const NULL_BAND: f64 = 1e-10;

/// Relative tolerance on the normal component when ingesting ambient vectors.
pub const TANGENT_TOL: f64 = 1e-8;

/// Which split metric is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    /// `¼(⟨x,η⟩ + ⟨y,ξ⟩)` on `𝔤_κ`.
    Isometry(Curvature),
    /// `½(⟨x,η⟩ + ⟨y,ξ⟩)` on the Lie algebra of ℝ³⋊S³.
    Spin,
    /// `½(⟨x,x′⟩ − ⟨y,y′⟩)` on the Lie algebra of S³×S³.
    S3xS3,
}

/// Left-trivialized components of a tangent vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tangent6 {
    pub a: Vec3,
    pub b: Vec3,
}

impl Tangent6 {
    pub const fn new(a: Vec3, b: Vec3) -> Self {
        Tangent6 { a, b }
    }

    pub fn scale(&self, s: f64) -> Self {
        Tangent6 {
            a: self.a.scale(s),
            b: self.b.scale(s),
        }
    }

    pub fn add(&self, o: &Tangent6) -> Self {
        Tangent6 {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    /// The canonical basis: `(eᵢ, 0)` for `i < 3`, then `(0, e_{i−3})`.
    pub fn basis(i: usize) -> Self {
        if i < 3 {
            Tangent6::new(Vec3::basis(i), Vec3::ZERO)
        } else {
            Tangent6::new(Vec3::ZERO, Vec3::basis(i - 3))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.a.max_abs().max(self.b.max_abs())
    }
}

impl From<LieElementZ> for Tangent6 {
    fn from(z: LieElementZ) -> Self {
        Tangent6::new(z.x, z.xi)
    }
}

/// A point of one of the groups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupPoint {
    Isometry(IsometryG),
    Spin(SpinMotion),
    S3xS3(UnitQuaternion, UnitQuaternion),
}

impl GroupPoint {
    pub fn kind(&self) -> MetricKind {
        match self {
            GroupPoint::Isometry(g) => MetricKind::Isometry(g.kappa),
            GroupPoint::Spin(_) => MetricKind::Spin,
            GroupPoint::S3xS3(..) => MetricKind::S3xS3,
        }
    }
}

/// A tangent vector in the ambient representation of its group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AmbientTangent {
    /// Velocity of a curve of 4×4 matrices.
    Matrix(Mat4),
    Spin(SpinVelocity),
    /// Velocities `(ṗ, q̇)` of a curve in S³×S³.
    S3xS3(Quaternion, Quaternion),
}

/// A tangent vector together with its base point, stored left-trivialized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVec {
    pub base: GroupPoint,
    pub coords: Tangent6,
}

impl TangentVec {
    /// Ingests an ambient vector at `base`.
    pub fn from_ambient(base: GroupPoint, v: &AmbientTangent) -> Result<Self, MetricError> {
        Ok(TangentVec {
            base,
            coords: pull_to_identity(&base, v)?,
        })
    }

    pub fn to_ambient(&self) -> AmbientTangent {
        push_from_identity(&self.base, &self.coords)
    }

    /// The metric of the base point's group, evaluated by left invariance.
    pub fn inner(&self, other: &TangentVec) -> Result<f64, MetricError> {
        let kind = self.base.kind();
        if kind != other.base.kind() || self.base != other.base {
            return Err(MetricError::GroupMismatch);
        }
        Ok(inner(kind, &self.coords, &other.coords))
    }
}

/// `⟨Z_κ(x,ξ), Z_κ(y,η)⟩ = ¼(⟨x,η⟩ + ⟨y,ξ⟩)`.
pub fn inner_g(kappa: Curvature, a: &LieElementZ, b: &LieElementZ) -> Result<f64, MetricError> {
    for k in [a.kappa, b.kappa] {
        if k != kappa {
            return Err(crate::error::GroupError::KappaMismatch {
                left: kappa.as_i32(),
                right: k.as_i32(),
            }
            .into());
        }
    }
    Ok(0.25 * (a.x.dot(b.xi) + b.x.dot(a.xi)))
}

/// `½(⟨x,η⟩ + ⟨y,ξ⟩)` for `v = (x, ξ)`, `w = (y, η)` at the identity.
pub fn inner_spin(v: &Tangent6, w: &Tangent6) -> f64 {
    0.5 * (v.a.dot(w.b) + w.a.dot(v.b))
}

/// `½(⟨x,x′⟩ − ⟨y,y′⟩)` for `v = (x, y)`, `w = (x′, y′)` at `(1, 1)`.
pub fn inner_s3xs3(v: &Tangent6, w: &Tangent6) -> f64 {
    0.5 * (v.a.dot(w.a) - v.b.dot(w.b))
}

/// Inner product of left-trivialized components.
pub fn inner(kind: MetricKind, v: &Tangent6, w: &Tangent6) -> f64 {
    match kind {
        MetricKind::Isometry(_) => 0.25 * (v.a.dot(w.b) + w.a.dot(v.b)),
        MetricKind::Spin => inner_spin(v, w),
        MetricKind::S3xS3 => inner_s3xs3(v, w),
    }
}

/// `‖v‖ = ⟨v, v⟩` (the quadratic form, not its square root).
pub fn norm(kind: MetricKind, v: &Tangent6) -> f64 {
    inner(kind, v, v)
}

/// Applies `(dL_{g⁻¹})` to an ambient tangent vector at `g`.
pub fn pull_to_identity(base: &GroupPoint, v: &AmbientTangent) -> Result<Tangent6, MetricError> {
    match (base, v) {
        (GroupPoint::Isometry(g), AmbientTangent::Matrix(m)) => {
            let w = g.inverse().m * *m;
            let scale = 1.0f64.max(w.max_abs());
            z_unpack(g.kappa, &w, TANGENT_TOL * scale)
                .map(Tangent6::from)
                .map_err(|e| match e {
                    crate::error::GroupError::NotLieElement { defect } => {
                        MetricError::NotTangent { defect }
                    }
                    other => other.into(),
                })
        }
        (GroupPoint::Spin(g), AmbientTangent::Spin(sv)) => {
            let (xi, eta, defect) = left_diff_spin_inv(g, sv);
            check_normal(defect, sv.dx.max_abs().max(sv.dq.max_abs()))?;
            Ok(Tangent6::new(xi, eta))
        }
        (GroupPoint::S3xS3(p, q), AmbientTangent::S3xS3(dp, dq)) => {
            let v = p.inverse().quaternion() * *dp;
            let w = q.inverse().quaternion() * *dq;
            check_normal(v.w.abs().max(w.w.abs()), dp.max_abs().max(dq.max_abs()))?;
            Ok(Tangent6::new(v.vector(), w.vector()))
        }
        _ => Err(MetricError::GroupMismatch),
    }
}

fn check_normal(defect: f64, scale: f64) -> Result<(), MetricError> {
    if defect <= TANGENT_TOL * scale.max(1.0) {
        Ok(())
    } else {
        Err(MetricError::NotTangent { defect })
    }
}

/// Inverse of [`pull_to_identity`].
pub fn push_from_identity(base: &GroupPoint, v: &Tangent6) -> AmbientTangent {
    match base {
        GroupPoint::Isometry(g) => AmbientTangent::Matrix(g.m * z_matrix(g.kappa, v.a, v.b)),
        GroupPoint::Spin(g) => AmbientTangent::Spin(left_diff_spin(g, v.a, v.b)),
        GroupPoint::S3xS3(p, q) => AmbientTangent::S3xS3(
            p.quaternion() * Quaternion::pure(v.a),
            q.quaternion() * Quaternion::pure(v.b),
        ),
    }
}

/// Causal character of a tangent vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalType {
    Spacelike,
    Null,
    Timelike,
}

/// Sign of `‖v‖` with the null band `|‖v‖| ≤ tol`.
pub fn causal_type(kind: MetricKind, v: &Tangent6, tol: f64) -> CausalType {
    let n = norm(kind, v);
    if n.abs() <= tol {
        CausalType::Null
    } else if n > 0.0 {
        CausalType::Spacelike
    } else {
        CausalType::Timelike
    }
}

/// Gram matrix of the metric on the canonical basis of [`Tangent6::basis`].
pub fn gram_matrix(kind: MetricKind) -> [[f64; 6]; 6] {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| inner(kind, &Tangent6::basis(i), &Tangent6::basis(j)))
    })
}

/// `(positive, negative, zero)` eigenvalue counts of [`gram_matrix`].
pub fn signature(kind: MetricKind) -> (usize, usize, usize) {
    inertia(&gram_matrix(kind), 1e-12)
}

fn random_z(kappa: Curvature, rng: &mut impl rand::Rng) -> LieElementZ {
    LieElementZ::new(kappa, random_vec3(rng, 1.0), random_vec3(rng, 1.0))
}

/// Max of `|⟨[Z,W],V⟩ + ⟨W,[Z,V]⟩|` over random triples of `𝔤_κ`.
pub fn check_ad_skew(kappa: Curvature, n_samples: usize, seed: u64) -> f64 {
    let defects = map_indexed(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let (z, w, v) = (
            random_z(kappa, &mut rng),
            random_z(kappa, &mut rng),
            random_z(kappa, &mut rng),
        );
        let zw = bracket_z(&z, &w).expect("same curvature");
        let zv = bracket_z(&z, &v).expect("same curvature");
        let lhs = inner_g(kappa, &zw, &v).expect("same curvature");
        let rhs = inner_g(kappa, &w, &zv).expect("same curvature");
        (lhs + rhs).abs()
    });
    max_with_nan(defects)
}

/// Max over random base points `g ∈ ℝ³⋊S³` and tangent pairs `v, w` of
/// `|⟨dΠ v, dΠ w⟩_{G₀} − ⟨v, w⟩_{spin}|`, with both sides evaluated by
/// pulling back to the identity of the respective group.
pub fn pi_isometry_defect(n_samples: usize, seed: u64) -> f64 {
    let defects = map_indexed(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let g = SpinMotion::new(random_vec3(&mut rng, 3.0), random_unit_quaternion(&mut rng));
        let v = Tangent6::new(random_vec3(&mut rng, 1.0), random_vec3(&mut rng, 1.0));
        let w = Tangent6::new(random_vec3(&mut rng, 1.0), random_vec3(&mut rng, 1.0));
        let base = GroupPoint::Isometry(covering_pi(&g).to_isometry());
        let image = |t: &Tangent6| -> Result<Tangent6, MetricError> {
            let (dx, da) = covering_pi_diff(&g, &left_diff_spin(&g, t.a, t.b));
            let mut m = Mat4::block_diag(0.0, &da);
            m.0[1][0] = dx.x;
            m.0[2][0] = dx.y;
            m.0[3][0] = dx.z;
            pull_to_identity(&base, &AmbientTangent::Matrix(m))
        };
        match (image(&v), image(&w)) {
            (Ok(dv), Ok(dw)) => {
                let kind = MetricKind::Isometry(Curvature::Flat);
                (inner(kind, &dv, &dw) - inner_spin(&v, &w))
                    .abs()
                    .max((norm(kind, &dv) - norm(MetricKind::Spin, &v)).abs())
            }
            _ => f64::NAN,
        }
    });
    max_with_nan(defects)
}

/// Same as [`pi_isometry_defect`] for `P : S³×S³ → G₁`, `P(p,q) = L_p R_q̄`.
pub fn p_isometry_defect(n_samples: usize, seed: u64) -> f64 {
    let defects = map_indexed(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let (p, q) = (
            random_unit_quaternion(&mut rng),
            random_unit_quaternion(&mut rng),
        );
        let v = Tangent6::new(random_vec3(&mut rng, 1.0), random_vec3(&mut rng, 1.0));
        let w = Tangent6::new(random_vec3(&mut rng, 1.0), random_vec3(&mut rng, 1.0));
        let pt = GroupPoint::S3xS3(p, q);
        let base = GroupPoint::Isometry(IsometryG::new_unchecked(
            Curvature::Spherical,
            p_morphism(&p, &q),
        ));
        let image = |t: &Tangent6| -> Result<Tangent6, MetricError> {
            let AmbientTangent::S3xS3(dp, dq) = push_from_identity(&pt, t) else {
                return Err(MetricError::GroupMismatch);
            };
            pull_to_identity(
                &base,
                &AmbientTangent::Matrix(p_morphism_diff(&p, &q, &dp, &dq)),
            )
        };
        match (image(&v), image(&w)) {
            (Ok(dv), Ok(dw)) => {
                let kind = MetricKind::Isometry(Curvature::Spherical);
                (inner(kind, &dv, &dw) - inner_s3xs3(&v, &w))
                    .abs()
                    .max((norm(kind, &dv) - norm(MetricKind::S3xS3, &v)).abs())
            }
            _ => f64::NAN,
        }
    });
    max_with_nan(defects)
}

/// `q · (x, p) = (q x q̄, q p q̄)`.
pub fn conjugation_action(q: &UnitQuaternion, g: &SpinMotion) -> SpinMotion {
    SpinMotion::new(q.conjugate_vec(g.x), *q * g.q * q.inverse())
}

/// Central-difference velocity of a curve in ℝ³⋊S³ at `t = 0`.
pub(crate) fn spin_curve_velocity(curve: impl Fn(f64) -> SpinMotion, h: f64) -> SpinVelocity {
    let (plus, minus) = (curve(h), curve(-h));
    SpinVelocity {
        dx: (plus.x - minus.x).scale(0.5 / h),
        dq: (plus.q.quaternion() - minus.q.quaternion()).scale(0.5 / h),
    }
}

/// Max relative defect of `‖·‖_{spin}` under the conjugation action, with the
/// pushed-forward vectors obtained by central differences (step `1e−5`).
pub fn action_isometry_defect(n_samples: usize, seed: u64) -> f64 {
    let h = 1e-5;
    let defects = map_indexed(n_samples, |i| {
        let mut rng = rng_for(seed, i as u64);
        let g = SpinMotion::new(random_vec3(&mut rng, 2.0), random_unit_quaternion(&mut rng));
        let q = random_unit_quaternion(&mut rng);
        let v = Tangent6::new(random_vec3(&mut rng, 1.0), random_vec3(&mut rng, 1.0));
        let curve = |t: f64| conjugation_action(&q, &(g * spin_exp(v.a.scale(t), v.b.scale(t))));
        let moved = conjugation_action(&q, &g);
        let vel = spin_curve_velocity(curve, h);
        match pull_to_identity(&GroupPoint::Spin(moved), &AmbientTangent::Spin(vel)) {
            Ok(dv) => (norm(MetricKind::Spin, &dv) - norm(MetricKind::Spin, &v)).abs(),
            Err(_) => f64::NAN,
        }
    });
    max_with_nan(defects)
}

/// `dΠ` at the identity in left-trivialized form: `(x, ξ) ↦ Z₀(x, 2ξ)`.
pub fn covering_pi_diff_identity(v: &Tangent6) -> Tangent6 {
    Tangent6::new(v.a, v.b.scale(2.0))
}

/// `dP` at `(1,1)`: `(v, w) ↦ Z₁(v − w, v + w)`.
pub fn p_morphism_diff_identity(v: &Tangent6) -> Tangent6 {
    Tangent6::new(v.a - v.b, v.a + v.b)
}
