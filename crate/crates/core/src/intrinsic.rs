//! Intrinsic geometry of the ball `B = {|v| < π}` with the metric induced by
//! `φ(ru) = (ℓ(r)u, exp(ru/2))`: radial arclength `σ`, the completion length
//! `L = σ(π)`, circumferences and areas of the spheres `|v| = r`, and the
//! area ratio of distance spheres about the completion point.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::algebra::Vec3;
use crate::error::IntrinsicError;
use crate::linalg::Mat3;
use crate::quadrature::{adaptive_simpson, composite_gauss, GaussLegendre};
use crate::real;
use crate::screwmaps::{ell, ell_prime, pullback_metric, RadialFrame, ScrewRadialMap};

/// Number of cells of the `σ` table.
pub const TABLE_CELLS: usize = 4096;
const UNIT_TOL: f64 = 1e-12;

fn check_scale(c: f64) -> Result<(), IntrinsicError> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(IntrinsicError::InvalidScale)
    }
}

fn check_radius(r: f64, open_top: bool) -> Result<(), IntrinsicError> {
    let ok = r >= 0.0 && if open_top { r < PI } else { r <= PI };
    if ok {
        Ok(())
    } else {
        Err(IntrinsicError::OutOfDomain(r))
    }
}

fn speed(c: f64, r: f64) -> f64 {
    real::sqrt(0.5 * ell_prime(c, r))
}

/// `|α′(r)| = √(ℓ′(r)/2)` for the radial curve `α(r) = ru`.
pub fn radial_speed(c: f64, r: f64) -> Result<f64, IntrinsicError> {
    check_scale(c)?;
    check_radius(r, false)?;
    Ok(speed(c, r))
}

/// `σ` tabulated for one `c`, with cubic Hermite interpolation that uses the
/// exact derivative `σ′ = √(ℓ′/2)` at the table nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicProfile {
    c: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl IntrinsicProfile {
    pub fn new(c: f64) -> Result<Self, IntrinsicError> {
        check_scale(c)?;
        let step = PI / TABLE_CELLS as f64;
        let rule = GaussLegendre::new(8);
        let mut values = Vec::with_capacity(TABLE_CELLS + 1);
        let mut slopes = Vec::with_capacity(TABLE_CELLS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        slopes.push(speed(c, 0.0));
        for k in 0..TABLE_CELLS {
            let (a, b) = (
                step * k as f64,
                if k + 1 == TABLE_CELLS {
                    PI
                } else {
                    step * (k + 1) as f64
                },
            );
            acc += rule.integrate(a, b, |t| speed(c, t));
            values.push(acc);
            slopes.push(speed(c, b));
        }
        Ok(IntrinsicProfile {
            c,
            step,
            values,
            slopes,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `σ(r) = ∫₀^r √(ℓ′/2)`, `0 ≤ r ≤ π`.
    pub fn sigma(&self, r: f64) -> Result<f64, IntrinsicError> {
        check_radius(r, false)?;
        let k = ((r / self.step) as usize).min(TABLE_CELLS - 1);
        let a = self.step * k as f64;
        let h = self.step;
        let t = (r - a) / h;
        let (t2, t3) = (t * t, t * t * t);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        Ok((2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1)
    }

    /// `L = σ(π)`.
    pub fn completion_length(&self) -> f64 {
        self.values[TABLE_CELLS]
    }

    /// `L − σ(r) = ∫_r^π √(ℓ′/2)`, integrated directly so it keeps its
    /// relative accuracy as `r → π`.
    pub fn tail(&self, r: f64) -> Result<f64, IntrinsicError> {
        check_radius(r, false)?;
        let panels = real::ceil((PI - r) / 0.25).max(1.0) as usize;
        Ok(composite_gauss(
            &GaussLegendre::new(12),
            r,
            PI,
            panels,
            |t| speed(self.c, t),
        ))
    }

    /// `σ(r)` by adaptive Simpson, independent of the table.
    pub fn sigma_oracle(&self, r: f64, tol: f64) -> Result<f64, IntrinsicError> {
        check_radius(r, false)?;
        Ok(adaptive_simpson(|t| speed(self.c, t), 0.0, r, tol))
    }

    /// `area(S_r) / (4π (L − σ(r))²)` for `0 < r < π`.
    pub fn area_ratio(&self, r: f64) -> Result<f64, IntrinsicError> {
        if !(r > 0.0) {
            return Err(IntrinsicError::OutOfDomain(r));
        }
        check_radius(r, true)?;
        let area = sphere_area(self.c, r)?;
        let d = self.tail(r)?;
        Ok(area / (4.0 * PI * d * d))
    }

    /// Length of the curve made of the radial segment from `su` to `ru`
    /// and half a great circle of `S_r`: an upper bound for `d(su, rv)`.
    pub fn completion_distance_bound(
        &self,
        r: f64,
        s: f64,
        u: Vec3,
        v: Vec3,
    ) -> Result<f64, IntrinsicError> {
        check_radius(r, true)?;
        if !(s >= 0.0 && s <= r) {
            return Err(IntrinsicError::OutOfDomain(s));
        }
        if (u.norm() - 1.0).abs() > UNIT_TOL || (v.norm() - 1.0).abs() > UNIT_TOL {
            return Err(IntrinsicError::NotUnit);
        }
        let radial = if s == r {
            0.0
        } else {
            self.sigma(r)? - self.sigma(s)?
        };
        Ok(radial + 0.5 * circle_length(self.c, r)?)
    }

    /// `r` near `π` where the area ratio first exceeds `threshold`, probing
    /// `r = π − 10^{−k}` for `k = 1, …, 12`.
    pub fn divergence_witness(&self, threshold: f64) -> Result<Option<(f64, f64)>, IntrinsicError> {
        for k in 1..=12 {
            let r = PI - real::powf(10.0, -(k as f64));
            let ratio = self.area_ratio(r)?;
            if ratio > threshold {
                return Ok(Some((r, ratio)));
            }
        }
        Ok(None)
    }

    /// Smallest grid radius from which the area ratio increases at every
    /// later grid point, on `n` equally spaced radii in `(0, π)`.
    pub fn monotone_onset(&self, n: usize) -> Result<Option<f64>, IntrinsicError> {
        let radii: Vec<f64> = (1..=n).map(|i| PI * i as f64 / (n + 1) as f64).collect();
        let mut ratios = Vec::with_capacity(n);
        for &r in &radii {
            ratios.push(self.area_ratio(r)?);
        }
        let mut onset = None;
        for i in (0..n.saturating_sub(1)).rev() {
            if ratios[i + 1] > ratios[i] {
                onset = Some(radii[i]);
            } else {
                break;
            }
        }
        Ok(onset)
    }
}

/// `√2 π (ℓ(r) sin r)^{1/2}`, the length of a great circle of `S_r`.
pub fn circle_length(c: f64, r: f64) -> Result<f64, IntrinsicError> {
    check_scale(c)?;
    check_radius(r, false)?;
    Ok(SQRT_2 * PI * real::sqrt((ell(c, r) * real::sin(r)).max(0.0)))
}

/// `2π ℓ(r) sin r`, the area of `S_r`.
pub fn sphere_area(c: f64, r: f64) -> Result<f64, IntrinsicError> {
    check_scale(c)?;
    check_radius(r, false)?;
    Ok(2.0 * PI * ell(c, r) * real::sin(r))
}

fn quadratic_form(g: &Mat3, w: Vec3) -> f64 {
    w.dot(*g * w)
}

/// Length of the great circle of `S_r` orthogonal to `axis`, integrating the
/// raw pullback metric along it.
pub fn circle_length_quadrature(
    c: f64,
    r: f64,
    axis: Vec3,
    nodes: usize,
) -> Result<f64, IntrinsicError> {
    check_scale(c)?;
    check_radius(r, false)?;
    let f = RadialFrame::new(axis.normalized().ok_or(IntrinsicError::NotUnit)?);
    let map = ScrewRadialMap::standard(c);
    let h = 2.0 * PI / nodes as f64;
    let mut sum = 0.0;
    for k in 0..nodes {
        let t = h * k as f64;
        let (s, co) = (real::sin(t), real::cos(t));
        let point = (f.z1.scale(co) + f.z2.scale(s)).scale(r);
        let velocity = (f.z2.scale(co) - f.z1.scale(s)).scale(r);
        sum += real::sqrt(quadratic_form(&pullback_metric(&map, point), velocity).max(0.0));
    }
    Ok(sum * h)
}

/// Area of `S_r` from the raw pullback metric, Gauss in `cos ϑ` and the
/// trapezoid rule in the azimuth.
pub fn sphere_area_quadrature(
    c: f64,
    r: f64,
    n_cos: usize,
    n_phi: usize,
) -> Result<f64, IntrinsicError> {
    check_scale(c)?;
    check_radius(r, false)?;
    let map = ScrewRadialMap::standard(c);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut total = 0.0;
    for (ct, wc) in GaussLegendre::new(n_cos).on(-1.0, 1.0) {
        let st = real::sqrt(1.0 - ct * ct);
        for k in 0..n_phi {
            let az = dphi * (k as f64 + 0.5);
            let (sa, ca) = (real::sin(az), real::cos(az));
            let u = Vec3::new(st * ca, st * sa, ct);
            // ∂/∂(cos ϑ) and ∂/∂az of r·u
            let d_ct = Vec3::new(-ct / st * ca, -ct / st * sa, 1.0).scale(r);
            let d_az = Vec3::new(-st * sa, st * ca, 0.0).scale(r);
            let g = pullback_metric(&map, u.scale(r));
            let (a, b, d) = (
                quadratic_form(&g, d_ct),
                d_ct.dot(g * d_az),
                quadratic_form(&g, d_az),
            );
            total += wc * dphi * real::sqrt((a * d - b * b).max(0.0));
        }
    }
    Ok(total)
}
