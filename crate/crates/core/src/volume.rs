//! Three-dimensional volumes of space-like maps into ℝ³⋊S³, competitors
//! obtained by compactly supported right translations, and the
//! volume-maximization experiment.
//!
//! Integration uses a product grid in spherical coordinates: Gauss–Legendre
//! in `r`, Gauss–Legendre in `cos ϑ` and the trapezoid rule in the azimuth.
//! The spherical Jacobian `r²` is folded into the densities.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::algebra::Vec3;
use crate::calibration::{omega_at_identity, CalibrationForm, ThreeBlade};
use crate::error::VolumeError;
use crate::groups::{spin_adjoint, spin_exp, SpinMotion};
use crate::linalg::cholesky;
use crate::metrics::Tangent6;
use crate::quadrature::GaussLegendre;
use crate::real;
use crate::sampling::{map_indexed, pairwise_sum};
use crate::screwmaps::{dphi_cartesian, ScrewRadialMap};

/// Default resolution: radial nodes, `cos ϑ` nodes, azimuthal nodes.
pub const DEFAULT_RESOLUTION: Resolution = Resolution {
    n_r: 48,
    n_cos: 20,
    n_phi: 30,
};
/// Default amount by which shells are shrunk at each end.
pub const DEFAULT_SHELL_DELTA: f64 = 0.2;
/// Relative slack on `vol(competitor) ≤ vol(φ)`.
pub const VOLUME_TOL_REL: f64 = 1e-7;
/// Relative slack on the constancy of `∫ω` across amplitudes.
pub const OMEGA_TOL_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub n_r: usize,
    pub n_cos: usize,
    pub n_phi: usize,
}

impl Resolution {
    pub fn doubled(&self) -> Self {
        Resolution {
            n_r: 2 * self.n_r,
            n_cos: 2 * self.n_cos,
            n_phi: 2 * self.n_phi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainKind {
    /// `|v| < r0`.
    Ball { r0: f64 },
    /// `inner < |v| < outer`.
    Shell { inner: f64, outer: f64 },
    /// `r_lo < |v| < r_hi` within polar angle `cap` of the `e₃` axis.
    Patch { r_lo: f64, r_hi: f64, cap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub resolution: Resolution,
}

impl DomainSpec {
    pub fn ball(r0: f64) -> Self {
        DomainSpec {
            kind: DomainKind::Ball { r0 },
            resolution: DEFAULT_RESOLUTION,
        }
    }

    /// The shell `(2kπ + δ, (2k+1)π − δ)`.
    pub fn shell(k: u32, delta: f64) -> Self {
        let base = 2.0 * PI * k as f64;
        DomainSpec {
            kind: DomainKind::Shell {
                inner: base + delta,
                outer: base + PI - delta,
            },
            resolution: DEFAULT_RESOLUTION,
        }
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    /// `(r_lo, r_hi, cos ϑ_min)`.
    fn bounds(&self) -> Result<(f64, f64, f64), VolumeError> {
        let (lo, hi, cap) = match self.kind {
            DomainKind::Ball { r0 } => (0.0, r0, PI),
            DomainKind::Shell { inner, outer } => (inner, outer, PI),
            DomainKind::Patch { r_lo, r_hi, cap } => (r_lo, r_hi, cap),
        };
        let res = self.resolution;
        let ok = lo >= 0.0
            && hi >= lo
            && hi.is_finite()
            && (0.0..=PI).contains(&cap)
            && res.n_r > 0
            && res.n_cos > 0
            && res.n_phi > 0;
        if !ok {
            return Err(VolumeError::InvalidDomain);
        }
        Ok((lo, hi, real::cos(cap)))
    }

    pub fn radial_range(&self) -> (f64, f64) {
        match self.kind {
            DomainKind::Ball { r0 } => (0.0, r0),
            DomainKind::Shell { inner, outer } => (inner, outer),
            DomainKind::Patch { r_lo, r_hi, .. } => (r_lo, r_hi),
        }
    }
}

/// A quadrature node: position, weight (including `r²`), and grid indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub v: Vec3,
    pub r: f64,
    pub weight: f64,
    pub index: [usize; 3],
}

/// Product-grid nodes of the domain, in `(r, cos ϑ, azimuth)` order.
pub fn grid_nodes(domain: &DomainSpec) -> Result<Vec<Node>, VolumeError> {
    let (lo, hi, cos_min) = domain.bounds()?;
    let res = domain.resolution;
    let radial: Vec<(f64, f64)> = GaussLegendre::new(res.n_r).on(lo, hi).collect();
    let polar: Vec<(f64, f64)> = GaussLegendre::new(res.n_cos).on(cos_min, 1.0).collect();
    let dphi = 2.0 * PI / res.n_phi as f64;
    let mut nodes = Vec::with_capacity(res.n_r * res.n_cos * res.n_phi);
    for (i, &(r, wr)) in radial.iter().enumerate() {
        for (j, &(ct, wc)) in polar.iter().enumerate() {
            let st = real::sqrt((1.0 - ct * ct).max(0.0));
            for k in 0..res.n_phi {
                // half-step offset keeps nodes off the seam
                let az = dphi * (k as f64 + 0.5);
                let u = Vec3::new(st * real::cos(az), st * real::sin(az), ct);
                nodes.push(Node {
                    v: u.scale(r),
                    r,
                    weight: wr * wc * dphi * r * r,
                    index: [i, j, k],
                });
            }
        }
    }
    Ok(nodes)
}

/// Radial bump vanishing with its first derivative at the outer edge of a
/// ball, or at both edges of a radial interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bump {
    /// `(1 − (r/r₀)²)²` on `[0, r₀]`, even in `r` so smooth at the centre.
    Ball { r0: f64 },
    /// `16 t²(1 − t)²` with `t = (r − a)/(b − a)`.
    Interval { a: f64, b: f64 },
}

impl Bump {
    pub fn for_domain(domain: &DomainSpec) -> Self {
        match domain.kind {
            DomainKind::Ball { r0 } => Bump::Ball { r0 },
            _ => {
                let (a, b) = domain.radial_range();
                Bump::Interval { a, b }
            }
        }
    }

    /// `(ρ(r), ρ′(r))`, zero outside the support.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        match *self {
            Bump::Ball { r0 } => {
                if r >= r0 {
                    return (0.0, 0.0);
                }
                let s = 1.0 - (r / r0) * (r / r0);
                (s * s, -4.0 * s * r / (r0 * r0))
            }
            Bump::Interval { a, b } => {
                if r <= a || r >= b {
                    return (0.0, 0.0);
                }
                let w = b - a;
                let t = (r - a) / w;
                let s = t * (1.0 - t);
                (16.0 * s * s, 32.0 * s * (1.0 - 2.0 * t) / w)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationSpec {
    pub w: Tangent6,
    pub bump: Bump,
    pub amplitude: f64,
}

/// `ψ(v) = φ(v) · exp(ε ρ(|v|) W)`.
#[derive(Clone, Copy, Debug)]
pub struct PerturbedMap {
    pub base: ScrewRadialMap,
    pub spec: PerturbationSpec,
}

pub fn perturb_map(base: &ScrewRadialMap, spec: &PerturbationSpec) -> PerturbedMap {
    PerturbedMap {
        base: *base,
        spec: *spec,
    }
}

impl PerturbedMap {
    fn exponent(&self, r: f64) -> (f64, f64) {
        let (rho, drho) = self.spec.bump.eval(r);
        (self.spec.amplitude * rho, self.spec.amplitude * drho)
    }

    pub fn eval(&self, v: Vec3) -> SpinMotion {
        let (s, _) = self.exponent(v.norm());
        let g = self.base.eval(v);
        if s == 0.0 {
            return g;
        }
        g * spin_exp(self.spec.w.a.scale(s), self.spec.w.b.scale(s))
    }

    /// Left-trivialized differential along the coordinate axes:
    /// `ψ⁻¹dψ = Ad_{E⁻¹}(φ⁻¹dφ) + ds·W` with `E = exp(sW)`.
    pub fn blade(&self, v: Vec3) -> ThreeBlade {
        let base = dphi_cartesian(&self.base, v);
        let r = v.norm();
        let (s, ds) = self.exponent(r);
        if s == 0.0 && ds == 0.0 {
            return base;
        }
        let e_inv = spin_exp(self.spec.w.a.scale(s), self.spec.w.b.scale(s)).inverse();
        let grad = if r == 0.0 {
            Vec3::ZERO
        } else {
            v.scale(ds / r)
        };
        let g = [grad.x, grad.y, grad.z];
        ThreeBlade {
            rows: core::array::from_fn(|i| {
                let (a, b) = spin_adjoint(&e_inv, base.rows[i].a, base.rows[i].b);
                Tangent6::new(a, b).add(&self.spec.w.scale(g[i]))
            }),
        }
    }
}

/// Anything integrated by this module: a base map or a competitor.
pub trait SpinSubmanifold: Sync {
    fn point(&self, v: Vec3) -> SpinMotion;
    fn blade(&self, v: Vec3) -> ThreeBlade;
}

impl SpinSubmanifold for ScrewRadialMap {
    fn point(&self, v: Vec3) -> SpinMotion {
        self.eval(v)
    }

    fn blade(&self, v: Vec3) -> ThreeBlade {
        dphi_cartesian(self, v)
    }
}

impl SpinSubmanifold for PerturbedMap {
    fn point(&self, v: Vec3) -> SpinMotion {
        self.eval(v)
    }

    fn blade(&self, v: Vec3) -> ThreeBlade {
        PerturbedMap::blade(self, v)
    }
}

/// `√det G` of a blade, `None` unless `G` is positive definite.
fn volume_density(blade: &ThreeBlade) -> Option<f64> {
    let l = cholesky(&blade.gram().0, 0.0)?;
    Some(l[0][0] * l[1][1] * l[2][2])
}

/// One row of a grid dump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRow {
    pub node: Node,
    /// `√det G`, `NaN` where the blade is not space-like.
    pub volume_density: f64,
    pub omega_density: f64,
}

fn form_constant(c: f64) -> Result<f64, VolumeError> {
    CalibrationForm::for_scale(c)
        .map(|f| f.constant())
        .map_err(|_| VolumeError::InvalidScale)
}

/// Densities at every node (without weights); `ω` uses `C = √(3/(4c³))`.
pub fn grid_densities(
    map: &impl SpinSubmanifold,
    domain: &DomainSpec,
    c: f64,
) -> Result<Vec<GridRow>, VolumeError> {
    let constant = form_constant(c)?;
    let nodes = grid_nodes(domain)?;
    Ok(map_indexed(nodes.len(), |i| {
        let node = nodes[i];
        let blade = map.blade(node.v);
        GridRow {
            node,
            volume_density: volume_density(&blade).unwrap_or(f64::NAN),
            omega_density: omega_at_identity(constant, &blade),
        }
    }))
}

/// A quadrature value with an error estimate from doubling the resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Integrals {
    volume: Option<f64>,
    first_failure: Option<Vec3>,
    omega: f64,
}

fn integrate(
    map: &impl SpinSubmanifold,
    domain: &DomainSpec,
    c: f64,
) -> Result<Integrals, VolumeError> {
    let constant = form_constant(c)?;
    let nodes = grid_nodes(domain)?;
    let rows = map_indexed(nodes.len(), |i| {
        let blade = map.blade(nodes[i].v);
        (
            volume_density(&blade).map(|d| d * nodes[i].weight),
            omega_at_identity(constant, &blade) * nodes[i].weight,
        )
    });
    let first_failure = rows
        .iter()
        .zip(&nodes)
        .find(|(row, _)| row.0.is_none())
        .map(|(_, n)| n.v);
    let omega = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let volume = if first_failure.is_none() {
        Some(pairwise_sum(
            &rows.iter().map(|r| r.0.unwrap_or(0.0)).collect::<Vec<_>>(),
        ))
    } else {
        None
    };
    Ok(Integrals {
        volume,
        first_failure,
        omega,
    })
}

/// `∫ √det G` over the domain, with the doubled-grid difference as error.
pub fn submanifold_volume(
    map: &impl SpinSubmanifold,
    domain: &DomainSpec,
) -> Result<Estimate, VolumeError> {
    let coarse = integrate(map, domain, 1.0)?;
    let fine = integrate(
        map,
        &domain.with_resolution(domain.resolution.doubled()),
        1.0,
    )?;
    match (coarse.volume, fine.volume) {
        (Some(a), Some(b)) => Ok(Estimate {
            value: b,
            error: (a - b).abs(),
        }),
        _ => Err(VolumeError::NotSpacelike(
            coarse
                .first_failure
                .or(fine.first_failure)
                .unwrap_or(Vec3::ZERO),
        )),
    }
}

/// `∫ ω` with `C = √(3/(4c³))`.
pub fn omega_integral(
    map: &impl SpinSubmanifold,
    domain: &DomainSpec,
    c: f64,
) -> Result<Estimate, VolumeError> {
    let coarse = integrate(map, domain, c)?;
    let fine = integrate(map, &domain.with_resolution(domain.resolution.doubled()), c)?;
    Ok(Estimate {
        value: fine.omega,
        error: (coarse.omega - fine.omega).abs(),
    })
}

/// The six coordinate directions of the Lie algebra.
pub fn default_directions() -> Vec<Tangent6> {
    (0..6).map(Tangent6::basis).collect()
}

pub const DEFAULT_AMPLITUDES: [f64; 7] = [0.0, -0.1, -0.05, -0.01, 0.01, 0.05, 0.1];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Competitor {
    pub direction: usize,
    pub amplitude: f64,
    pub spacelike: bool,
    /// Present only for space-like competitors.
    pub volume: Option<f64>,
    pub omega: f64,
}

/// Least-squares fit of `vol(ε) − vol(0) = aε + bε²` for one direction, and
/// `R²` of the pure quadratic `bε²` fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeficitFit {
    pub direction: usize,
    pub linear: f64,
    pub quadratic: f64,
    pub quadratic_only: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport {
    pub c: f64,
    pub domain: DomainSpec,
    pub directions: Vec<Tangent6>,
    pub amplitudes: Vec<f64>,
    pub base_volume: Estimate,
    pub base_omega: Estimate,
    pub competitors: Vec<Competitor>,
    pub fits: Vec<DeficitFit>,
    /// Space-like competitors with `vol > vol(φ)(1 + VOLUME_TOL_REL)`.
    pub violations: usize,
    /// `max |∫ω(ε) − ∫ω(0)| / |∫ω(0)|`.
    pub omega_spread: f64,
}

impl VolumeReport {
    pub fn max_relative_gain(&self) -> f64 {
        self.competitors
            .iter()
            .filter_map(|c| c.volume)
            .map(|v| (v - self.base_volume.value) / self.base_volume.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn fit_deficit(direction: usize, points: &[(f64, f64)]) -> DeficitFit {
    // normal equations for (a, b)
    let (mut s2, mut s3, mut s4, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(e, d) in points {
        s2 += e * e;
        s3 += e * e * e;
        s4 += e * e * e * e;
        y1 += e * d;
        y2 += e * e * d;
    }
    let det = s2 * s4 - s3 * s3;
    let (linear, quadratic) = if det.abs() > 0.0 {
        ((y1 * s4 - y2 * s3) / det, (s2 * y2 - s3 * y1) / det)
    } else {
        (0.0, 0.0)
    };
    let quadratic_only = if s4 > 0.0 { y2 / s4 } else { 0.0 };
    let mean = points.iter().map(|p| p.1).sum::<f64>() / points.len().max(1) as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(e, d) in points {
        ss_res += (d - quadratic_only * e * e) * (d - quadratic_only * e * e);
        ss_tot += (d - mean) * (d - mean);
    }
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    DeficitFit {
        direction,
        linear,
        quadratic,
        quadratic_only,
        r_squared,
    }
}

/// Compares `φ` with `φ · exp(ερW)` for every direction and amplitude.
pub fn maximization_experiment(
    c: f64,
    domain: &DomainSpec,
    directions: &[Tangent6],
    amplitudes: &[f64],
) -> Result<VolumeReport, VolumeError> {
    if !amplitudes.contains(&0.0) {
        return Err(VolumeError::MissingZeroAmplitude);
    }
    form_constant(c)?;
    let base = ScrewRadialMap::standard(c);
    let base_volume = submanifold_volume(&base, domain)?;
    let base_omega = omega_integral(&base, domain, c)?;
    let bump = Bump::for_domain(domain);
    let mut competitors = Vec::new();
    for (d, w) in directions.iter().enumerate() {
        for &amplitude in amplitudes {
            let psi = perturb_map(
                &base,
                &PerturbationSpec {
                    w: *w,
                    bump,
                    amplitude,
                },
            );
            let run = integrate(&psi, domain, c)?;
            competitors.push(Competitor {
                direction: d,
                amplitude,
                spacelike: run.volume.is_some(),
                volume: run.volume,
                omega: run.omega,
            });
        }
    }
    // compare on the same grid as the competitors
    let grid_base = integrate(&base, domain, c)?;
    let v0 = grid_base.volume.ok_or(VolumeError::NotSpacelike(
        grid_base.first_failure.unwrap_or(Vec3::ZERO),
    ))?;
    let w0 = grid_base.omega;
    let violations = competitors
        .iter()
        .filter(|k| k.volume.is_some_and(|v| v > v0 + VOLUME_TOL_REL * v0.abs()))
        .count();
    let omega_spread = competitors
        .iter()
        .map(|k| (k.omega - w0).abs() / w0.abs())
        .fold(0.0, f64::max);
    let fits = (0..directions.len())
        .map(|d| {
            let pts: Vec<(f64, f64)> = competitors
                .iter()
                .filter(|k| k.direction == d)
                .filter_map(|k| k.volume.map(|v| (k.amplitude, v - v0)))
                .collect();
            fit_deficit(d, &pts)
        })
        .collect();
    Ok(VolumeReport {
        c,
        domain: *domain,
        directions: directions.to_vec(),
        amplitudes: amplitudes.to_vec(),
        base_volume,
        base_omega,
        competitors,
        fits,
        violations,
        omega_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::blade_volume;
    use crate::groups::left_diff_spin_inv;
    use crate::metrics::spin_curve_velocity;
    use crate::quadrature::adaptive_simpson;
    use crate::screwmaps::{ell, ell_prime};

    fn ball_closed_form(c: f64, r0: f64) -> f64 {
        2.0 * PI
            * adaptive_simpson(
                |r| real::sqrt(ell_prime(c, r) / 2.0) * ell(c, r) * real::sin(r),
                0.0,
                r0,
                1e-14,
            )
    }

    fn small() -> Resolution {
        Resolution {
            n_r: 24,
            n_cos: 10,
            n_phi: 16,
        }
    }

    #[test]
    fn ball_volume_matches_radial_reduction() {
        let map = ScrewRadialMap::standard(1.0);
        let v = submanifold_volume(&map, &DomainSpec::ball(PI / 2.0)).unwrap();
        let exact = ball_closed_form(1.0, PI / 2.0);
        assert!(
            (v.value - exact).abs() / exact < 1e-8,
            "{} {}",
            v.value,
            exact
        );
        assert!(v.error / v.value < 1e-7);
        let empty = submanifold_volume(&map, &DomainSpec::ball(0.0)).unwrap();
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn shell_volume_matches_radial_reduction() {
        let map = ScrewRadialMap::standard(2.0);
        let d = DomainSpec::shell(1, 0.2);
        let v = submanifold_volume(&map, &d).unwrap();
        let exact = 2.0
            * PI
            * adaptive_simpson(
                |r| real::sqrt(ell_prime(2.0, r) / 2.0) * ell(2.0, r) * real::sin(r),
                2.0 * PI + 0.2,
                3.0 * PI - 0.2,
                1e-13,
            );
        assert!((v.value - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn omega_integral_exceeds_volume_by_the_secant_factor() {
        let map = ScrewRadialMap::standard(1.0);
        let w = omega_integral(&map, &DomainSpec::ball(PI / 2.0), 1.0).unwrap();
        let exact = 2.0
            * PI
            * adaptive_simpson(
                |r| {
                    real::sqrt(ell_prime(1.0, r) / 2.0) * ell(1.0, r) * real::sin(r)
                        / real::cos(0.5 * r)
                },
                0.0,
                PI / 2.0,
                1e-14,
            );
        assert!((w.value - exact).abs() / exact < 1e-8);
    }

    #[test]
    fn non_spacelike_domain_is_rejected() {
        let map = ScrewRadialMap::standard(1.0);
        let d = DomainSpec {
            kind: DomainKind::Shell {
                inner: PI + 0.3,
                outer: 2.0 * PI - 0.3,
            },
            resolution: small(),
        };
        assert!(matches!(
            submanifold_volume(&map, &d),
            Err(VolumeError::NotSpacelike(_))
        ));
        let bad = DomainSpec {
            kind: DomainKind::Shell {
                inner: 2.0,
                outer: 1.0,
            },
            resolution: small(),
        };
        assert_eq!(grid_nodes(&bad).unwrap_err(), VolumeError::InvalidDomain);
    }

    #[test]
    fn patch_is_a_fraction_of_the_ball() {
        let map = ScrewRadialMap::standard(1.0);
        let full = submanifold_volume(&map, &DomainSpec::ball(1.0))
            .unwrap()
            .value;
        let cap = DomainSpec {
            kind: DomainKind::Patch {
                r_lo: 0.0,
                r_hi: 1.0,
                cap: PI / 3.0,
            },
            resolution: DEFAULT_RESOLUTION,
        };
        let part = submanifold_volume(&map, &cap).unwrap().value;
        assert!((part / full - 0.25).abs() < 1e-10);
    }

    #[test]
    fn bumps_vanish_with_derivative_at_the_edges() {
        let b = Bump::Interval { a: 1.0, b: 2.0 };
        assert_eq!(b.eval(1.0), (0.0, 0.0));
        assert_eq!(b.eval(2.0), (0.0, 0.0));
        assert!((b.eval(1.5).0 - 1.0).abs() < 1e-15);
        let ball = Bump::Ball { r0: 1.5 };
        assert_eq!(ball.eval(1.5), (0.0, 0.0));
        assert_eq!(ball.eval(0.0), (1.0, 0.0));
        for bump in [b, ball] {
            for r in [0.3, 1.2, 1.4, 1.7] {
                let h = 1e-6;
                let fd = (bump.eval(r + h).0 - bump.eval(r - h).0) / (2.0 * h);
                assert!((fd - bump.eval(r).1).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn perturbed_differential_matches_finite_differences() {
        let base = ScrewRadialMap::standard(1.0);
        let spec = PerturbationSpec {
            w: Tangent6::new(Vec3::new(0.3, -0.2, 0.5), Vec3::new(-0.4, 0.1, 0.7)),
            bump: Bump::Ball { r0: PI / 2.0 },
            amplitude: 0.3,
        };
        let psi = perturb_map(&base, &spec);
        for v in [
            Vec3::new(0.2, 0.5, -0.3),
            Vec3::new(-0.9, 0.4, 0.6),
            Vec3::new(0.01, 0.0, 0.02),
        ] {
            let blade = psi.blade(v);
            for (i, row) in blade.rows.iter().enumerate() {
                let e = Vec3::basis(i);
                let vel = spin_curve_velocity(|t| psi.eval(v + e.scale(t)), 1e-5);
                let (xi, eta, defect) = left_diff_spin_inv(&psi.eval(v), &vel);
                assert!(defect < 1e-8);
                assert!((xi - row.a).max_abs() < 1e-7 && (eta - row.b).max_abs() < 1e-7);
            }
        }
    }

    #[test]
    fn perturbation_is_trivial_at_zero_amplitude_and_on_the_boundary() {
        let base = ScrewRadialMap::standard(1.0);
        let mut spec = PerturbationSpec {
            w: Tangent6::basis(3),
            bump: Bump::Ball { r0: PI / 2.0 },
            amplitude: 0.0,
        };
        let v = Vec3::new(0.3, 0.2, 0.1);
        assert_eq!(perturb_map(&base, &spec).eval(v), base.eval(v));
        spec.amplitude = 0.05;
        let psi = perturb_map(&base, &spec);
        let edge = Vec3::new(0.0, PI / 2.0, 0.0);
        assert!(psi.eval(edge).component_distance(&base.eval(edge)) < 1e-14);
        // group distance O(ε)
        let mut worst: f64 = 0.0;
        for k in 0..50 {
            let v = Vec3::new(0.03 * k as f64, -0.01 * k as f64, 0.005 * k as f64);
            worst = worst.max(psi.eval(v).component_distance(&base.eval(v)));
        }
        assert!(worst <= 0.05 * 1.01 && worst > 0.01);
    }

    #[test]
    fn grid_is_deterministic_and_consistent() {
        let map = ScrewRadialMap::standard(1.0);
        let d = DomainSpec::ball(1.0).with_resolution(small());
        let a = grid_densities(&map, &d, 1.0).unwrap();
        let b = grid_densities(&map, &d, 1.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 24 * 10 * 16);
        let row = a[100];
        let direct = blade_volume(&dphi_cartesian(&map, row.node.v)).unwrap();
        assert!((row.volume_density - direct).abs() < 1e-15);
    }

    #[test]
    fn deficit_fit_recovers_a_parabola() {
        let pts: Vec<(f64, f64)> = [-0.1, -0.05, 0.0, 0.05, 0.1]
            .iter()
            .map(|&e| (e, -3.0 * e * e))
            .collect();
        let f = fit_deficit(0, &pts);
        assert!((f.quadratic + 3.0).abs() < 1e-12 && f.linear.abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ball_experiment_has_no_gainers_and_constant_omega() {
        let d = DomainSpec::ball(PI / 2.0).with_resolution(Resolution {
            n_r: 24,
            n_cos: 12,
            n_phi: 16,
        });
        let rep =
            maximization_experiment(1.0, &d, &default_directions(), &DEFAULT_AMPLITUDES).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.omega_spread < OMEGA_TOL_REL);
        assert!(rep.competitors.iter().all(|c| c.spacelike));
        for f in &rep.fits {
            assert!(f.quadratic_only < 0.0 && f.r_squared > 0.99, "{f:?}");
        }
    }

    #[test]
    fn shell_experiment_flags_non_spacelike_competitors() {
        let d = DomainSpec::shell(1, DEFAULT_SHELL_DELTA).with_resolution(Resolution {
            n_r: 24,
            n_cos: 12,
            n_phi: 16,
        });
        let rep =
            maximization_experiment(1.0, &d, &default_directions(), &DEFAULT_AMPLITUDES).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.omega_spread < OMEGA_TOL_REL);
        assert!(rep
            .competitors
            .iter()
            .any(|c| !c.spacelike && c.volume.is_none()));
        assert!(rep
            .competitors
            .iter()
            .filter(|c| c.amplitude.abs() <= 0.01)
            .all(|c| c.spacelike));
    }

    #[test]
    fn experiment_requires_zero_amplitude() {
        let d = DomainSpec::ball(1.0).with_resolution(small());
        assert_eq!(
            maximization_experiment(1.0, &d, &default_directions(), &[0.1]).unwrap_err(),
            VolumeError::MissingZeroAmplitude
        );
    }
}
