//! Split bi-invariant geometry of the isometry groups of the three-dimensional
//! space forms.
//!
//! The crate covers the quaternionic and matrix models of the groups
//! ([`groups`]), their split inner products of signature (3,3) ([`metrics`]),
//! screw-radial maps `φ(ru) = (l(r)u, exp(θ(r)u))` into ℝ³⋊S³
//! ([`screwmaps`]), frame vorticity of sections of the orthonormal frame
//! bundle ([`vorticity`]), the split special Lagrangian calibration
//! ([`calibration`]), numerical volumes of space-like submanifolds and
//! perturbation experiments ([`volume`]), and the intrinsic geometry of the
//! calibrated ball ([`intrinsic`]).
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature enables
//! rayon-backed sampling loops; results are identical with and without it.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// NaN must fail range checks, and the dense kernels index by position.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod calibration;
pub mod error;
pub mod groups;
pub mod intrinsic;
pub mod linalg;
pub mod metrics;
pub mod quadrature;
pub mod sampling;
pub mod screwmaps;
pub mod volume;
pub mod vorticity;

mod real;

pub use algebra::{Quaternion, Rotation3, Skew3, UnitQuaternion, Vec3};
pub use groups::{Curvature, EuclideanMotion, IsometryG, LieElementZ, SpinMotion};
pub use linalg::{Mat3, Mat4, Vec4};

#[cfg(test)]
mod proptests;
