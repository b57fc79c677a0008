//! Seeded sampling helpers and an order-preserving indexed map that runs in
//! parallel when the `parallel` feature is enabled.
//!
//! Every sample index owns an independent ChaCha stream derived from
//! `(seed, index)`, so results do not depend on how indices are scheduled.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Quaternion, UnitQuaternion, Vec3};
use crate::groups::{Curvature, IsometryG};

/// RNG for sample `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform in the cube `[−scale, scale]³`.
pub fn random_vec3(rng: &mut impl Rng, scale: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
    )
}

/// Uniform on the unit sphere S².
pub fn random_unit_vec3(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = random_vec3(rng, 1.0);
        let n = v.norm_sq();
        if n > 1e-6 && n <= 1.0 {
            return v.scale(1.0 / crate::real::sqrt(n));
        }
    }
}

/// Uniform in the ball of the given radius.
pub fn random_in_ball(rng: &mut impl Rng, radius: f64) -> Vec3 {
    loop {
        let v = random_vec3(rng, 1.0);
        if v.norm_sq() <= 1.0 {
            return v.scale(radius);
        }
    }
}

/// Uniform (Haar) on S³.
pub fn random_unit_quaternion(rng: &mut impl Rng) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n = q.norm_sq();
        if n > 1e-6 && n <= 1.0 {
            return UnitQuaternion::new_unchecked(q.scale(1.0 / crate::real::sqrt(n)));
        }
    }
}

/// A random element of `G_κ`: a transvection of length up to about 2 composed
/// with an arbitrary rotation about `o`.
pub fn random_isometry(kappa: Curvature, rng: &mut impl Rng) -> IsometryG {
    let x = random_vec3(rng, 1.2);
    let xi = random_vec3(rng, 2.0);
    let t = IsometryG::transvection(kappa, x);
    IsometryG::new_unchecked(kappa, t.m * IsometryG::rotation(kappa, xi).m)
}

/// `(0..n).map(f)` collected in index order. Parallel under the `parallel`
/// feature; the output is identical either way.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Pairwise summation; the result depends only on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Maximum that propagates NaN, so a failed sample can never hide.
pub fn max_with_nan(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for v in values {
        if v.is_nan() {
            return f64::NAN;
        }
        if v > m {
            m = v;
        }
    }
    m
}
