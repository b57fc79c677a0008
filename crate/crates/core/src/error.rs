use thiserror::Error;

use crate::algebra::Vec3;

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not skew-symmetric (symmetric part {defect:e})")]
    NotSkew { defect: f64 },
    #[error("matrix is not a rotation (orthogonality defect {defect:e})")]
    NotRotation { defect: f64 },
    #[error("cannot normalize a zero quaternion")]
    ZeroQuaternion,
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("curvature must be -1, 0 or 1, got {0}")]
    InvalidKappa(i32),
    #[error("curvature mismatch: {left} vs {right}")]
    KappaMismatch { left: i32, right: i32 },
    #[error("matrix does not have the Lie algebra pattern (defect {defect:e})")]
    NotLieElement { defect: f64 },
    #[error("matrix is not an orientation-preserving isometry (defect {defect:e})")]
    NotIsometry { defect: f64 },
    #[error("g(o) is antipodal to o; the decomposition is not unique")]
    AntipodalPoint,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("tangent vector and base point belong to different groups")]
    GroupMismatch,
    #[error("vector is not tangent at the base point (defect {defect:e})")]
    NotTangent { defect: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("unknown profile name")]
    UnknownName,
    #[error("invalid profile parameter")]
    InvalidParameter,
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum VorticityError {
    #[error("Richardson estimates disagree by {disagreement:e}; step too large")]
    StepTooLarge { disagreement: f64 },
    #[error("point lies outside the section's domain")]
    OutsideDomain,
    #[error("direction is not tangent to the space form at the point")]
    NotTangent,
    #[error("direction is not a unit vector")]
    NotUnit,
    #[error("unknown section name")]
    UnknownSection,
    #[error("invalid section parameter")]
    InvalidParameter,
    #[error("curvature mismatch between section and isometry")]
    KappaMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum CalibrationError {
    #[error("calibration constant must be positive and finite")]
    InvalidConstant,
    #[error("blade is not space-like")]
    NotSpacelike,
    #[error("number of samples must be positive")]
    NoSamples,
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum VolumeError {
    #[error("map is not space-like at {0:?}")]
    NotSpacelike(Vec3),
    #[error("invalid domain")]
    InvalidDomain,
    #[error("c must be positive and finite")]
    InvalidScale,
    #[error("amplitudes must include 0")]
    MissingZeroAmplitude,
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Clone, Copy, Debug, Error, PartialEq)]
pub enum IntrinsicError {
    #[error("radius {0} outside the admissible range")]
    OutOfDomain(f64),
    #[error("direction is not a unit vector")]
    NotUnit,
    #[error("c must be positive and finite")]
    InvalidScale,
}
