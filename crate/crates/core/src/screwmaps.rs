//! Screw-radial maps `φ(ru) = (l(r)u, exp(θ(r)u))` from ℝ³ into ℝ³⋊S³, the
//! profile `ℓ(r) = c(r − sin r)^{1/3}`, tangent blades, pullback metrics and
//! the space-likeness classifier.

use alloc::format;
use alloc::string::String;

use crate::algebra::{cross, quat_exp, rotation_exp, Vec3};
use crate::error::{MetricError, ProfileError};
use crate::groups::{left_diff_spin_inv, EuclideanMotion, SpinMotion};
use crate::linalg::Mat3;
use crate::metrics::{inner_spin, spin_curve_velocity, Tangent6, NULL_BAND};
use crate::real;

/// `r − sin r`, accurate near zero.
pub fn r_minus_sin(r: f64) -> f64 {
    if r.abs() < 1.0 {
        // alternating series r³/3! − r⁵/5! + …; 12 terms reach rounding level at |r| = 1
        let r2 = r * r;
        let mut term = r * r2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        for _ in 0..12 {
            term *= -r2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        r - real::sin(r)
    }
}

/// `ℓ(r) = c(r − sin r)^{1/3}`.
pub fn ell(c: f64, r: f64) -> f64 {
    c * real::cbrt(r_minus_sin(r))
}

/// `ℓ′(r) = (c/3)(1 − cos r)/(r − sin r)^{2/3}`, with `ℓ′(0) = c·6^{−1/3}`.
pub fn ell_prime(c: f64, r: f64) -> f64 {
    let a = r.abs();
    if a < 1e-8 {
        return c / real::cbrt(6.0);
    }
    let s = real::sin(0.5 * a);
    let cb = real::cbrt(r_minus_sin(a));
    c / 3.0 * (2.0 * s * s) / (cb * cb)
}

/// Inverse of [`ell`]: the `r` with `ℓ(r) = y`. Safeguarded Newton on
/// `r − sin r = (y/c)³` with a bisection fallback.
pub fn ell_inverse(c: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    if y < 0.0 {
        return -ell_inverse(c, -y);
    }
    let t = y / c;
    let target = t * t * t;
    // r − sin r ≥ r − 1
    let (mut lo, mut hi) = (0.0f64, target + 1.0);
    let mut r = real::cbrt(6.0 * target).clamp(lo, hi);
    for _ in 0..200 {
        let f = r_minus_sin(r) - target;
        if f == 0.0 {
            return r;
        }
        if f < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let d = 1.0 - real::cos(r);
        let newton = r - f / d;
        let next = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - r).abs() <= 1e-15 * r.max(1e-300) || hi - lo <= 1e-15 * hi {
            return next;
        }
        r = next;
    }
    r
}

/// The translation profile `l`.
#[derive(Clone, Copy, Debug)]
pub enum LProfile {
    /// `c(r − sin r)^{1/3}`.
    Ell { c: f64 },
    /// `k r`.
    Linear { slope: f64 },
    /// A user-supplied odd function and its derivative.
    Custom {
        value: fn(f64) -> f64,
        derivative: fn(f64) -> f64,
    },
}

impl LProfile {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            LProfile::Ell { c } => ell(c, r),
            LProfile::Linear { slope } => slope * r,
            LProfile::Custom { value, .. } => value(r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            LProfile::Ell { c } => ell_prime(c, r),
            LProfile::Linear { slope } => slope,
            LProfile::Custom { derivative, .. } => derivative(r),
        }
    }

    pub fn name(&self) -> String {
        match self {
            LProfile::Ell { c } => format!("ell:c={c}"),
            LProfile::Linear { slope } => format!("linear:k={slope}"),
            LProfile::Custom { .. } => String::from("custom"),
        }
    }

    /// Parses `"ell:c=<float>"` or `"linear:k=<float>"`.
    pub fn parse(s: &str) -> Result<Self, ProfileError> {
        if let Some(rest) = s.strip_prefix("ell:c=") {
            let c = parse_param(rest)?;
            if c <= 0.0 {
                return Err(ProfileError::InvalidParameter);
            }
            Ok(LProfile::Ell { c })
        } else if let Some(rest) = s.strip_prefix("linear:k=") {
            Ok(LProfile::Linear {
                slope: parse_param(rest)?,
            })
        } else {
            Err(ProfileError::UnknownName)
        }
    }
}

/// Default amplitude of the distorted angle profile `r/2 + a sin r`.
pub const CUSTOM_THETA_AMPLITUDE: f64 = 0.2;

/// The rotation-angle profile `θ`.
#[derive(Clone, Copy, Debug)]
pub enum ThetaProfile {
    /// `r/2`.
    Half,
    /// `k r`.
    Scaled { factor: f64 },
    /// `r/2 + a sin r`.
    Distorted { amplitude: f64 },
    Custom {
        value: fn(f64) -> f64,
        derivative: fn(f64) -> f64,
    },
}

impl ThetaProfile {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            ThetaProfile::Half => 0.5 * r,
            ThetaProfile::Scaled { factor } => factor * r,
            ThetaProfile::Distorted { amplitude } => 0.5 * r + amplitude * real::sin(r),
            ThetaProfile::Custom { value, .. } => value(r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            ThetaProfile::Half => 0.5,
            ThetaProfile::Scaled { factor } => factor,
            ThetaProfile::Distorted { amplitude } => 0.5 + amplitude * real::cos(r),
            ThetaProfile::Custom { derivative, .. } => derivative(r),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ThetaProfile::Half => String::from("theta:half"),
            ThetaProfile::Scaled { factor } => format!("theta:scaled:k={factor}"),
            ThetaProfile::Distorted { amplitude } => format!("theta:custom:a={amplitude}"),
            ThetaProfile::Custom { .. } => String::from("custom"),
        }
    }

    /// Parses `"theta:half"`, `"theta:custom"` (optionally `":a=<float>"`)
    /// or `"theta:scaled:k=<float>"`.
    pub fn parse(s: &str) -> Result<Self, ProfileError> {
        match s {
            "theta:half" => Ok(ThetaProfile::Half),
            "theta:custom" => Ok(ThetaProfile::Distorted {
                amplitude: CUSTOM_THETA_AMPLITUDE,
            }),
            _ => {
                if let Some(rest) = s.strip_prefix("theta:custom:a=") {
                    Ok(ThetaProfile::Distorted {
                        amplitude: parse_param(rest)?,
                    })
                } else if let Some(rest) = s.strip_prefix("theta:scaled:k=") {
                    Ok(ThetaProfile::Scaled {
                        factor: parse_param(rest)?,
                    })
                } else {
                    Err(ProfileError::UnknownName)
                }
            }
        }
    }
}

fn parse_param(s: &str) -> Result<f64, ProfileError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ProfileError::InvalidParameter),
    }
}

/// A pair `(l, θ)` of odd profiles.
#[derive(Clone, Copy, Debug)]
pub struct Profile {
    pub l: LProfile,
    pub theta: ThetaProfile,
}

impl Profile {
    /// `(ℓ, r/2)` with scale `c`.
    pub fn standard(c: f64) -> Self {
        Profile {
            l: LProfile::Ell { c },
            theta: ThetaProfile::Half,
        }
    }

    pub fn name(&self) -> String {
        format!("{},{}", self.l.name(), self.theta.name())
    }

    /// Parses `"<l-profile>,<theta-profile>"`.
    pub fn parse(s: &str) -> Result<Self, ProfileError> {
        let (l, t) = s.split_once(',').ok_or(ProfileError::UnknownName)?;
        Ok(Profile {
            l: LProfile::parse(l.trim())?,
            theta: ThetaProfile::parse(t.trim())?,
        })
    }
}

/// The map `φ(ru) = (l(r)u, exp(θ(r)u))`.
#[derive(Clone, Copy, Debug)]
pub struct ScrewRadialMap {
    pub profile: Profile,
}

/// Orthonormal frame `(u, z₁, z₂ = u × z₁)` at a direction `u`, with `z₁`
/// obtained by Gram–Schmidt against the coordinate axis where `u` is smallest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialFrame {
    pub u: Vec3,
    pub z1: Vec3,
    pub z2: Vec3,
}

impl RadialFrame {
    pub fn new(u: Vec3) -> Self {
        let z1 = u.any_orthonormal();
        RadialFrame {
            u,
            z1,
            z2: cross(u, z1),
        }
    }

    /// Columns `u, z₁, z₂`.
    pub fn matrix(&self) -> Mat3 {
        Mat3::from_columns(self.u, self.z1, self.z2)
    }
}

/// Three ordered tangent vectors at the identity of ℝ³⋊S³.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BladeAtIdentity {
    pub rows: [Tangent6; 3],
}

impl BladeAtIdentity {
    /// Gram matrix under the spin metric.
    pub fn gram(&self) -> Mat3 {
        Mat3::from_fn(|i, j| inner_spin(&self.rows[i], &self.rows[j]))
    }

    /// Rows recombined by `m`: row `i` of the result is `Σⱼ m[i][j] rowⱼ`.
    pub fn transform(&self, m: &Mat3) -> Self {
        BladeAtIdentity {
            rows: core::array::from_fn(|i| {
                (0..3).fold(Tangent6::default(), |acc, j| {
                    acc.add(&self.rows[j].scale(m.0[i][j]))
                })
            }),
        }
    }
}

impl ScrewRadialMap {
    pub fn new(profile: Profile) -> Self {
        ScrewRadialMap { profile }
    }

    /// The map of `(ℓ, r/2)` with scale `c`.
    pub fn standard(c: f64) -> Self {
        ScrewRadialMap {
            profile: Profile::standard(c),
        }
    }

    pub fn eval(&self, v: Vec3) -> SpinMotion {
        phi_eval(self, v)
    }
}

/// `φ(v)`.
pub fn phi_eval(map: &ScrewRadialMap, v: Vec3) -> SpinMotion {
    let r = v.norm();
    if r == 0.0 {
        return SpinMotion::IDENTITY;
    }
    let u = v.scale(1.0 / r);
    let p = &map.profile;
    SpinMotion::new(u.scale(p.l.value(r)), quat_exp(u.scale(p.theta.value(r))))
}

/// `Φ(ru) = (ℓ(r)u, exp(C_{ru}))` in ℝ³⋊SO₃.
pub fn phi_euclidean(c: f64, v: Vec3) -> EuclideanMotion {
    let r = v.norm();
    let x = if r == 0.0 {
        Vec3::ZERO
    } else {
        v.scale(ell(c, r) / r)
    };
    EuclideanMotion::new(x, rotation_exp(v))
}

/// Left-trivialized differential of `φ` at `ru` on the frame `(u, z₁, z₂)`.
/// At `r = 0` this is the limit blade with rows `(l′(0)w, θ′(0)w)`.
pub fn dphi_closed(map: &ScrewRadialMap, r: f64, u: Vec3) -> BladeAtIdentity {
    let f = RadialFrame::new(u);
    let p = &map.profile;
    let (lp, tp) = (p.l.derivative(r), p.theta.derivative(r));
    let radial = Tangent6::new(u.scale(lp), u.scale(tp));
    if r == 0.0 {
        let t = |z: Vec3| Tangent6::new(z.scale(lp), z.scale(tp));
        return BladeAtIdentity {
            rows: [radial, t(f.z1), t(f.z2)],
        };
    }
    let (l, th) = (p.l.value(r), p.theta.value(r));
    let (s, c) = (real::sin(th), real::cos(th));
    let (s2, c2) = (real::sin(2.0 * th), real::cos(2.0 * th));
    let tangential = |z: Vec3| {
        let w = cross(u, z);
        Tangent6::new(
            (z.scale(c2) - w.scale(s2)).scale(l / r),
            (z.scale(c) - w.scale(s)).scale(s / r),
        )
    };
    BladeAtIdentity {
        rows: [radial, tangential(f.z1), tangential(f.z2)],
    }
}

/// Left-trivialized differential of `φ` at `v` along the coordinate axes.
pub fn dphi_cartesian(map: &ScrewRadialMap, v: Vec3) -> BladeAtIdentity {
    let r = v.norm();
    let u = if r == 0.0 { Vec3::E1 } else { v.scale(1.0 / r) };
    let frame = RadialFrame::new(u).matrix();
    // eᵢ = Σⱼ frame[i][j] fⱼ
    dphi_closed(map, r, u).transform(&frame)
}

/// Central difference of `t ↦ φ(v + tw)` at `t = 0`, pulled to the identity.
pub fn dphi_fd(map: &ScrewRadialMap, v: Vec3, w: Vec3, step: f64) -> Result<Tangent6, MetricError> {
    let vel = spin_curve_velocity(|t| phi_eval(map, v + w.scale(t)), step);
    let (xi, eta, defect) = left_diff_spin_inv(&phi_eval(map, v), &vel);
    if defect > 1e-6 * (1.0 + vel.dq.max_abs()) {
        return Err(MetricError::NotTangent { defect });
    }
    Ok(Tangent6::new(xi, eta))
}

/// Pullback of the spin metric by `φ` at `v`, in Cartesian coordinates.
pub fn pullback_metric(map: &ScrewRadialMap, v: Vec3) -> Mat3 {
    dphi_cartesian(map, v).gram()
}

/// Pullback on the frame `(u, z₁, z₂)` at `ru`.
pub fn pullback_metric_frame(map: &ScrewRadialMap, r: f64, u: Vec3) -> Mat3 {
    dphi_closed(map, r, u).gram()
}

/// Outcome of [`spacelike_classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpacelikeClass {
    Spacelike,
    Degenerate,
    NotSpacelike,
}

/// Space-likeness of `φ` on the sphere of radius `r` from the profile alone:
/// `l′(r) > 0`, `θ′(r) > 0` and, for `r > 0`, `l(r) > 0` and
/// `θ(r) ∈ (kπ, kπ + π/2)` for some integer `k ≥ 0`. Any quantity within
/// `tol` of its boundary gives [`SpacelikeClass::Degenerate`].
pub fn spacelike_classify_tol(profile: &Profile, r: f64, tol: f64) -> SpacelikeClass {
    let mut quantities = [0.0; 4];
    quantities[0] = profile.l.derivative(r);
    quantities[1] = profile.theta.derivative(r);
    let n = if r > 0.0 {
        let th = profile.theta.value(r);
        let half_pi = core::f64::consts::FRAC_PI_2;
        let k = real::floor(th / half_pi);
        // signed distance into the allowed half of the period
        let phase = th - k * half_pi;
        let inside = k >= 0.0 && (k as i64) % 2 == 0;
        let dist = phase.min(half_pi - phase);
        quantities[2] = if inside { dist } else { -dist };
        quantities[3] = profile.l.value(r);
        4
    } else {
        2
    };
    let q = &quantities[..n];
    if q.iter().any(|v| v.abs() <= tol) {
        SpacelikeClass::Degenerate
    } else if q.iter().all(|v| *v > 0.0) {
        SpacelikeClass::Spacelike
    } else {
        SpacelikeClass::NotSpacelike
    }
}

/// [`spacelike_classify_tol`] with the default null band.
pub fn spacelike_classify(profile: &Profile, r: f64) -> SpacelikeClass {
    spacelike_classify_tol(profile, r, NULL_BAND)
}
