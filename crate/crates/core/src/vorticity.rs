//! Sections of the orthonormal frame bundle `SO(M_κ)`, their covariant
//! derivative, the vorticity vector `Xᵇ` with `∇_X b = C_{Xᵇ} ∘ b`, and the
//! vorticity function `hᵇ(x) = ⟨Xᵇ, x⟩`.
//!
//! Frames are identified with isometries through `𝓘(g) = (dg)_o`. Parallel
//! transport along the geodesic `t ↦ g σ(t) o`, `σ(t) = exp(tZ_κ(x, 0))`, is
//! the differential of `g σ(t) g⁻¹`, so
//!
//! `b(p)⁻¹ ∘ (transport back of b(γ(t))) = lower block of σ(−t) g⁻¹ b(γ(t))`,
//!
//! a curve in `SO₃` through the identity whose derivative is `C_w` with
//! `w = b(p)⁻¹ Xᵇ`. The derivative is taken by central differences with one
//! Richardson level.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::algebra::{rotation_exp, skew_axis, Quaternion, Rotation3, UnitQuaternion, Vec3};
use crate::error::VorticityError;
use crate::groups::{
    bracket_z, frame_of, p_morphism, z_unpack, Curvature, Frame, IsometryG, LieElementZ,
};
use crate::linalg::{Mat3, Mat4, Vec4};
use crate::metrics::{inner_g, TANGENT_TOL};
use crate::real;
use crate::sampling::{
    map_indexed, max_with_nan, random_unit_quaternion, random_unit_vec3, random_vec3, rng_for,
};
use crate::screwmaps::{ell, ell_inverse};

/// Base finite-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Largest admissible gap between the Richardson estimate and the finer
/// central difference, relative to the estimate once it exceeds 1.
pub const RICHARDSON_TOL: f64 = 1e-5;
/// Step halvings tried before giving up with `StepTooLarge`.
pub const MAX_HALVINGS: u32 = 10;
/// Admissible symmetric part of `b(p)⁻¹ ∘ ∇_x b`.
pub const SKEW_TOL: f64 = 1e-6;
/// Distance from `r = 2kπ` kept by the sampling helpers: `r(v)` has a
/// cube-root singularity there and the vorticity grows like `1/ℓ′(r)`, so
/// absolute defects in the speed identity pass 1e−5 closer in.
pub const SCREW_MARGIN: f64 = 0.1;
/// Tolerance on frame orthonormality and on points lying on the model.
pub const FRAME_TOL: f64 = 1e-10;
const POINT_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-9;

/// A user-supplied section evaluator.
pub type SectionFn = dyn Fn(&Vec4) -> Result<Frame, VorticityError> + Send + Sync;

#[derive(Clone)]
pub enum SectionKind {
    /// `b₀(x) = R_x` on ℝ³.
    B0,
    /// `b ≡ ι` on ℝ³.
    Constant,
    /// `b(ℓ(r)u) = R_{ru}` on ℝ³, with `ℓ(r) = c(r − sin r)^{1/3}`.
    FromScrew {
        c: f64,
    },
    /// `b(p) = (dL_p)₁` on S³.
    LeftInvariantS3,
    Custom(Arc<SectionFn>),
    /// `b̄ = (dg)⁻¹ ∘ b ∘ g`.
    Transformed {
        inner: Arc<FrameSection>,
        g: IsometryG,
    },
}

/// A local section of `SO(M_κ) → M_κ`, evaluated lazily.
#[derive(Clone)]
pub struct FrameSection {
    kappa: Curvature,
    kind: SectionKind,
}

impl fmt::Debug for FrameSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameSection")
            .field("kappa", &self.kappa)
            .field("name", &self.name())
            .finish()
    }
}

impl FrameSection {
    pub fn b0() -> Self {
        FrameSection {
            kappa: Curvature::Flat,
            kind: SectionKind::B0,
        }
    }

    pub fn constant() -> Self {
        FrameSection {
            kappa: Curvature::Flat,
            kind: SectionKind::Constant,
        }
    }

    pub fn from_screw(c: f64) -> Result<Self, VorticityError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(VorticityError::InvalidParameter);
        }
        Ok(FrameSection {
            kappa: Curvature::Flat,
            kind: SectionKind::FromScrew { c },
        })
    }

    pub fn left_invariant_s3() -> Self {
        FrameSection {
            kappa: Curvature::Spherical,
            kind: SectionKind::LeftInvariantS3,
        }
    }

    pub fn custom(kappa: Curvature, f: Arc<SectionFn>) -> Self {
        FrameSection {
            kappa,
            kind: SectionKind::Custom(f),
        }
    }

    /// `(dg)⁻¹ ∘ b ∘ g`.
    pub fn transformed(&self, g: &IsometryG) -> Result<Self, VorticityError> {
        if g.kappa != self.kappa {
            return Err(VorticityError::KappaMismatch);
        }
        Ok(FrameSection {
            kappa: self.kappa,
            kind: SectionKind::Transformed {
                inner: Arc::new(self.clone()),
                g: *g,
            },
        })
    }

    /// Registry names: `b0`, `constant`, `screw:c=<float>`, `left-invariant-s3`.
    pub fn parse(s: &str) -> Result<Self, VorticityError> {
        match s {
            "b0" => Ok(Self::b0()),
            "constant" => Ok(Self::constant()),
            "left-invariant-s3" => Ok(Self::left_invariant_s3()),
            _ => {
                let c = s
                    .strip_prefix("screw:c=")
                    .ok_or(VorticityError::UnknownSection)?;
                let c: f64 = c
                    .trim()
                    .parse()
                    .map_err(|_| VorticityError::InvalidParameter)?;
                Self::from_screw(c)
            }
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SectionKind::B0 => "b0".into(),
            SectionKind::Constant => "constant".into(),
            SectionKind::FromScrew { c } => format!("screw:c={c}"),
            SectionKind::LeftInvariantS3 => "left-invariant-s3".into(),
            SectionKind::Custom(_) => "custom".into(),
            SectionKind::Transformed { inner, .. } => format!("transformed({})", inner.name()),
        }
    }

    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    pub fn kind(&self) -> &SectionKind {
        &self.kind
    }

    /// `b(p)`; fails when `p` is off the model or the frame is not a direct
    /// isometry to within [`FRAME_TOL`].
    pub fn eval(&self, p: &Vec4) -> Result<Frame, VorticityError> {
        if point_defect(self.kappa, p) > POINT_TOL {
            return Err(VorticityError::OutsideDomain);
        }
        let frame = match &self.kind {
            SectionKind::B0 => flat_frame(p, &rotation_exp(p.spatial())),
            SectionKind::Constant => flat_frame(p, &Rotation3::identity()),
            SectionKind::FromScrew { c } => flat_frame(p, &screw_rotation(*c, p.spatial())),
            SectionKind::LeftInvariantS3 => {
                let q = UnitQuaternion::new_unchecked(Quaternion::from_array(p.0));
                frame_of(&IsometryG::new_unchecked(
                    Curvature::Spherical,
                    p_morphism(&q, &UnitQuaternion::IDENTITY),
                ))
            }
            SectionKind::Custom(f) => f(p)?,
            SectionKind::Transformed { inner, g } => {
                let b = inner.eval(&g.apply(p))?.to_isometry();
                frame_of(&IsometryG::new_unchecked(self.kappa, g.inverse().m * b.m))
            }
        };
        let defect = frame.to_isometry().membership_defect();
        if !(defect <= FRAME_TOL) {
            return Err(VorticityError::Group(
                crate::error::GroupError::NotIsometry { defect },
            ));
        }
        Ok(frame)
    }
}

/// `R_{ru}` at the point `v = ℓ(r)u`.
fn screw_rotation(c: f64, v: Vec3) -> Rotation3 {
    let n = v.norm();
    if n == 0.0 {
        return Rotation3::identity();
    }
    rotation_exp(v.scale(ell_inverse(c, n) / n))
}

fn flat_frame(p: &Vec4, a: &Rotation3) -> Frame {
    let m = a.matrix();
    Frame {
        kappa: Curvature::Flat,
        point: *p,
        axes: [0, 1, 2].map(|j| Vec4::from_parts(0.0, m.column(j))),
    }
}

/// Distance of `p` from the model of `M_κ` in ℝ⁴.
pub fn point_defect(kappa: Curvature, p: &Vec4) -> f64 {
    match kappa {
        Curvature::Flat => (p[0] - 1.0).abs(),
        Curvature::Spherical => (kappa.inner(p, p) - 1.0).abs(),
        Curvature::Hyperbolic => {
            if p[0] <= 0.0 {
                f64::INFINITY
            } else {
                (kappa.inner(p, p) + 1.0).abs()
            }
        }
    }
}

/// `exp_o(x)`, the point reached from `o` along the geodesic with velocity `x`.
pub fn point_from_tangent(kappa: Curvature, x: Vec3) -> Vec4 {
    IsometryG::transvection(kappa, x).basepoint()
}

/// The point `ℓ(r)u` of ℝ³ carrying the frame `R_{ru}` of the screw section.
pub fn screw_point(c: f64, r: f64, u: Vec3) -> Vec4 {
    Vec4::from_parts(1.0, u.scale(ell(c, r)))
}

/// Pushes the segment `p + t y` back onto the model.
fn retract(kappa: Curvature, q: &Vec4) -> Vec4 {
    match kappa {
        Curvature::Flat => *q,
        Curvature::Spherical => q.scale(1.0 / q.norm()),
        Curvature::Hyperbolic => q.scale(1.0 / real::sqrt(-kappa.inner(q, q))),
    }
}

/// `(4D(h/2) − D(h))/3` for a central difference `D`, and its gap to `D(h/2)`.
/// The step is halved up to [`MAX_HALVINGS`] times until the gap is within
/// `RICHARDSON_TOL · max(1, |estimate|)`.
fn richardson<const N: usize>(
    f: impl Fn(f64) -> Result<[[f64; N]; N], VorticityError>,
    h: f64,
) -> Result<([[f64; N]; N], f64), VorticityError> {
    let central = |s: f64| -> Result<[[f64; N]; N], VorticityError> {
        let (a, b) = (f(s)?, f(-s)?);
        let mut d = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                d[i][j] = (a[i][j] - b[i][j]) / (2.0 * s);
            }
        }
        Ok(d)
    };
    let mut step = h;
    let mut coarse = central(step)?;
    let mut gap = f64::NAN;
    for _ in 0..=MAX_HALVINGS {
        let fine = central(0.5 * step)?;
        let mut out = [[0.0; N]; N];
        let (mut size, mut diff) = (0.0f64, 0.0f64);
        for i in 0..N {
            for j in 0..N {
                out[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
                size = size.max(out[i][j].abs());
                diff = diff.max((out[i][j] - fine[i][j]).abs());
            }
        }
        gap = diff;
        if diff <= RICHARDSON_TOL * size.max(1.0) {
            return Ok((out, diff));
        }
        step *= 0.5;
        coarse = fine;
    }
    Err(VorticityError::StepTooLarge { disagreement: gap })
}

/// `∇_x b` at `p`, stored through `b(p)⁻¹ ∘ ∇_x b`, an operator on `T_o M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovariantDerivative {
    pub frame: Frame,
    pub rate: Mat3,
    pub disagreement: f64,
}

impl CovariantDerivative {
    /// `(∇_x b)(y)` for `y ∈ T_o M`.
    pub fn apply(&self, y: Vec3) -> Vec4 {
        self.frame.apply(self.rate * y)
    }

    /// Symmetric part of `b(p)⁻¹ ∘ ∇_x b`, zero for an exact derivative.
    pub fn skewness_defect(&self) -> f64 {
        self.rate.symmetric_part().max_abs()
    }
}

fn check_tangent(kappa: Curvature, p: &Vec4, x: &Vec4) -> Result<(), VorticityError> {
    if !(kappa.tangency_defect(p, x) <= TANGENT_TOL * x.max_abs().max(1.0)) {
        return Err(VorticityError::NotTangent);
    }
    Ok(())
}

/// Covariant derivative of `b` at `p` in the direction `x ∈ T_p M`.
pub fn nabla_b(
    section: &FrameSection,
    p: &Vec4,
    x: &Vec4,
) -> Result<CovariantDerivative, VorticityError> {
    let kappa = section.kappa;
    let frame = section.eval(p)?;
    check_tangent(kappa, p, x)?;
    let g = frame.to_isometry();
    let g_inv = g.inverse();
    let x0 = g_inv.apply(x).spatial();
    let transported = |t: f64| -> Result<[[f64; 3]; 3], VorticityError> {
        let gamma = g.apply(&point_from_tangent(kappa, x0.scale(t)));
        let b = section.eval(&gamma)?.to_isometry();
        let m: Mat4 = IsometryG::transvection(kappa, x0.scale(-t)).m * g_inv.m * b.m;
        Ok(m.lower_block().0)
    };
    let (rate, disagreement) = richardson(transported, FD_STEP)?;
    Ok(CovariantDerivative {
        frame,
        rate: Mat3(rate),
        disagreement,
    })
}

/// `Xᵇ` at `p` for `x ∈ T_p M`, as an ambient vector of `T_p M`.
pub fn vorticity_vector(
    section: &FrameSection,
    p: &Vec4,
    x: &Vec4,
) -> Result<Vec4, VorticityError> {
    let d = nabla_b(section, p, x)?;
    let w = skew_axis(&d.rate, SKEW_TOL)?;
    Ok(d.frame.apply(w))
}

/// `hᵇ(x) = ⟨Xᵇ, x⟩` for a unit `x ∈ T_p M`.
pub fn vorticity_h(section: &FrameSection, p: &Vec4, x: &Vec4) -> Result<f64, VorticityError> {
    let kappa = section.kappa;
    if (kappa.inner(x, x) - 1.0).abs() > UNIT_TOL {
        return Err(VorticityError::NotUnit);
    }
    let xb = vorticity_vector(section, p, x)?;
    Ok(kappa.inner(&xb, x))
}

/// `‖(db)_p(y)‖ = ⟨(db)_p(y), (db)_p(y)⟩` in the metric `¼(⟨x,η⟩ + ⟨y,ξ⟩)`,
/// from the curve `t ↦ b(p + ty)` (retracted onto the model) in `G_κ`,
/// independently of the transport used by [`nabla_b`].
pub fn section_speed(section: &FrameSection, p: &Vec4, y: &Vec4) -> Result<f64, VorticityError> {
    let kappa = section.kappa;
    let frame = section.eval(p)?;
    check_tangent(kappa, p, y)?;
    let base_inv = frame.to_isometry().inverse();
    let curve = |t: f64| -> Result<[[f64; 4]; 4], VorticityError> {
        let q = retract(kappa, &(*p + y.scale(t)));
        Ok((base_inv.m * section.eval(&q)?.to_isometry().m).0)
    };
    let (dm, _) = richardson(curve, FD_STEP)?;
    let z = z_unpack(kappa, &Mat4(dm), 1e-6)?;
    Ok(inner_g(kappa, &z, &z).expect("same curvature"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VorticityReport {
    pub point: Vec4,
    pub direction: Vec4,
    pub xb: Vec4,
    pub h: f64,
    /// `‖(db)(direction)‖` from [`section_speed`].
    pub spacelike_norm: f64,
}

pub fn vorticity_report(
    section: &FrameSection,
    p: &Vec4,
    x: &Vec4,
) -> Result<VorticityReport, VorticityError> {
    let xb = vorticity_vector(section, p, x)?;
    Ok(VorticityReport {
        point: *p,
        direction: *x,
        xb,
        h: section.kappa.inner(&xb, x),
        spacelike_norm: section_speed(section, p, x)?,
    })
}

/// Outcome of comparing `‖(db)(y)‖` with `½⟨y, yᵇ⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacelikeCheck {
    pub samples: usize,
    pub max_defect: f64,
    pub min_h: f64,
    pub max_h: f64,
    pub negative: usize,
    /// Samples with `|⟨y, yᵇ⟩| > 1e−6` whose sign differs from `‖(db)(y)‖`.
    pub sign_mismatches: usize,
}

/// Max of `|‖(db)_p(y)‖ − ½⟨y, yᵇ⟩|` over the `(p, y)` pairs.
pub fn spacelike_vorticity_check(
    section: &FrameSection,
    samples: &[(Vec4, Vec4)],
) -> Result<SpacelikeCheck, VorticityError> {
    let kappa = section.kappa;
    let rows = map_indexed(samples.len(), |i| {
        let (p, y) = &samples[i];
        let xb = vorticity_vector(section, p, y)?;
        let h = kappa.inner(y, &xb);
        let speed = section_speed(section, p, y)?;
        Ok::<_, VorticityError>((h, speed))
    });
    let mut check = SpacelikeCheck {
        samples: samples.len(),
        max_defect: 0.0,
        min_h: f64::INFINITY,
        max_h: f64::NEG_INFINITY,
        negative: 0,
        sign_mismatches: 0,
    };
    let mut defects = Vec::with_capacity(rows.len());
    for row in rows {
        let (h, speed) = row?;
        defects.push((speed - 0.5 * h).abs());
        check.min_h = check.min_h.min(h);
        check.max_h = check.max_h.max(h);
        if h < 0.0 {
            check.negative += 1;
        }
        if h.abs() > 1e-6 && (h > 0.0) != (speed > 0.0) {
            check.sign_mismatches += 1;
        }
    }
    check.max_defect = max_with_nan(defects);
    Ok(check)
}

/// A point of `M_κ` drawn for residual sampling: unit quaternions on S³,
/// `exp_o` of a vector in the cube `[−1.2, 1.2]³` otherwise.
pub fn random_point(kappa: Curvature, rng: &mut impl Rng) -> Vec4 {
    match kappa {
        Curvature::Spherical => Vec4(random_unit_quaternion(rng).quaternion().to_array()),
        k => point_from_tangent(k, random_vec3(rng, 1.2)),
    }
}

/// A unit tangent vector at `p`.
pub fn random_unit_tangent(kappa: Curvature, p: &Vec4, rng: &mut impl Rng) -> Vec4 {
    loop {
        let v = Vec4::from_parts(rng.random_range(-1.0..=1.0), random_unit_vec3(rng));
        let t = kappa.project_tangent(p, &v);
        let n = kappa.inner(&t, &t);
        if n > 1e-3 {
            return t.scale(1.0 / real::sqrt(n));
        }
    }
}

/// `n` pairs `(p, y)` with `p = F(ru)`, `r` uniform in `[lo, hi)`, `u`
/// uniform on the sphere, and `y` a unit vector.
pub fn screw_samples(c: f64, lo: f64, hi: f64, n: usize, seed: u64) -> Vec<(Vec4, Vec4)> {
    (0..n)
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let r = rng.random_range(lo..hi);
            let u = random_unit_vec3(&mut rng);
            (
                screw_point(c, r, u),
                Vec4::from_parts(0.0, random_unit_vec3(&mut rng)),
            )
        })
        .collect()
}

/// `n` pairs from [`random_point`] and [`random_unit_tangent`].
pub fn generic_samples(kappa: Curvature, n: usize, seed: u64) -> Vec<(Vec4, Vec4)> {
    (0..n)
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let p = random_point(kappa, &mut rng);
            (p, random_unit_tangent(kappa, &p, &mut rng))
        })
        .collect()
}

/// `max |Xᵇ − X|` over `n` random points and unit directions.
pub fn optimality_residual(
    section: &FrameSection,
    n: usize,
    seed: u64,
) -> Result<f64, VorticityError> {
    let kappa = section.kappa;
    let rows = map_indexed(n, |i| {
        let mut rng = rng_for(seed, i as u64);
        let p = random_point(kappa, &mut rng);
        let x = random_unit_tangent(kappa, &p, &mut rng);
        let d = vorticity_vector(section, &p, &x)? - x;
        Ok::<_, VorticityError>(real::sqrt(kappa.inner(&d, &d).max(0.0)))
    });
    let mut values = Vec::with_capacity(n);
    for r in rows {
        values.push(r?);
    }
    Ok(max_with_nan(values))
}

/// `[Z_κ(x,x), Z_κ(y,y)]`.
pub fn involutivity_bracket(kappa: Curvature, x: Vec3, y: Vec3) -> LieElementZ {
    bracket_z(
        &LieElementZ::new(kappa, x, x),
        &LieElementZ::new(kappa, y, y),
    )
    .expect("same curvature")
}

/// Size of the component of `[Z_κ(x,x), Z_κ(y,y)]` transverse to
/// `𝒟 = {Z_κ(v,v)}`: writing the bracket as `Z_κ(a,b)`, this is `|a − b|`.
pub fn involutivity_defect(kappa: Curvature, x: Vec3, y: Vec3) -> f64 {
    let z = involutivity_bracket(kappa, x, y);
    (z.x - z.xi).norm()
}
