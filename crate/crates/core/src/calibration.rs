//! The split special Lagrangian 3-form `ω = ½(C π₁*ω¹ + (1/C) π₂*ω²)` on
//! ℝ³⋊S³, blade volumes under the spin metric, the Warren condition, and the
//! one-point calibration on S³×S³.
//!
//! At the identity `ω = ½(C e¹∧e²∧e³ + (1/C) ε¹∧ε²∧ε³)`, where `eⁱ` reads the
//! translation components and `εⁱ` the rotation components of a
//! left-trivialized vector.

use rand::Rng;

use crate::algebra::{conjugation_rotation, Vec3};
use crate::error::{CalibrationError, MetricError};
use crate::groups::{left_diff_spin_inv, SpinMotion, SpinVelocity};
use crate::linalg::{cholesky, Mat3};
use crate::metrics::{inner_s3xs3, pull_to_identity, AmbientTangent, GroupPoint, Tangent6};
use crate::real;
use crate::sampling::{map_indexed, max_with_nan, random_unit_quaternion, rng_for};
use crate::screwmaps::{dphi_closed, BladeAtIdentity, ScrewRadialMap};

/// Ordered triple of left-trivialized tangent vectors of ℝ³⋊S³.
pub type ThreeBlade = BladeAtIdentity;

/// Tolerance of the calibration inequality `ω ≥ vol − tol` on unit blades.
pub const INEQUALITY_TOL: f64 = 1e-9;

/// The form `ω` with constant `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationForm {
    constant: f64,
}

impl CalibrationForm {
    pub fn new(constant: f64) -> Result<Self, CalibrationError> {
        if constant > 0.0 && constant.is_finite() {
            Ok(CalibrationForm { constant })
        } else {
            Err(CalibrationError::InvalidConstant)
        }
    }

    /// The constant with `4c³C² = 3` that makes `φ` satisfy the Warren
    /// condition for the profile `ℓ` with scale `c`.
    pub fn for_scale(c: f64) -> Result<Self, CalibrationError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(CalibrationError::InvalidConstant);
        }
        Self::new(real::sqrt(3.0 / (4.0 * c * c * c)))
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn at_identity(&self, blade: &ThreeBlade) -> f64 {
        omega_at_identity(self.constant, blade)
    }
}

/// `e¹∧e²∧e³` of the blade.
pub fn e_det(blade: &ThreeBlade) -> f64 {
    Mat3::from_rows(blade.rows[0].a, blade.rows[1].a, blade.rows[2].a).det()
}

/// `ε¹∧ε²∧ε³` of the blade.
pub fn eps_det(blade: &ThreeBlade) -> f64 {
    Mat3::from_rows(blade.rows[0].b, blade.rows[1].b, blade.rows[2].b).det()
}

/// `½(C·det[e-parts] + det[ε-parts]/C)`.
pub fn omega_at_identity(constant: f64, blade: &ThreeBlade) -> f64 {
    0.5 * (constant * e_det(blade) + eps_det(blade) / constant)
}

/// `ω` on three ambient vectors at `base`, by left invariance.
pub fn omega_eval(
    constant: f64,
    base: &SpinMotion,
    vectors: &[SpinVelocity; 3],
) -> Result<f64, MetricError> {
    let mut rows = [Tangent6::default(); 3];
    for (row, v) in rows.iter_mut().zip(vectors) {
        *row = pull_to_identity(&GroupPoint::Spin(*base), &AmbientTangent::Spin(*v))?;
    }
    Ok(omega_at_identity(constant, &ThreeBlade { rows }))
}

/// `√det(Gram)` under the spin metric; fails unless the Gram matrix is
/// positive definite.
pub fn blade_volume(blade: &ThreeBlade) -> Result<f64, CalibrationError> {
    gram_volume(&blade.gram())
}

fn gram_volume(g: &Mat3) -> Result<f64, CalibrationError> {
    let l = cholesky(&g.0, 0.0).ok_or(CalibrationError::NotSpacelike)?;
    Ok(l[0][0] * l[1][1] * l[2][2])
}

/// `|ε-det − C² e-det| / max(1, |e-det|)`.
pub fn warren_residual(blade: &ThreeBlade, c: f64) -> f64 {
    let e = e_det(blade);
    (eps_det(blade) - c * c * e).abs() / e.abs().max(1.0)
}

/// Max of `|⟨xᵢ, yⱼ⟩ − ⟨xⱼ, yᵢ⟩|`: zero exactly when the blade spans a
/// Lagrangian plane for `Σ eⁱ∧εⁱ`.
pub fn lagrangian_defect(blade: &ThreeBlade) -> f64 {
    let r = &blade.rows;
    let mut m: f64 = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        m = m.max((r[i].a.dot(r[j].b) - r[j].a.dot(r[i].b)).abs());
    }
    m
}

/// Blade spanned by `(bᵢ, M bᵢ)` for the columns `bᵢ` of `basis`.
pub fn graph_blade(m: &Mat3, basis: &Mat3) -> ThreeBlade {
    ThreeBlade {
        rows: core::array::from_fn(|i| Tangent6::new(basis.column(i), *m * basis.column(i))),
    }
}

/// `M = S + A` with `S` symmetric with eigenvalues in `[0.1, 3]` and `A`
/// antisymmetric with entries in `[−1, 1]`. The graph of `M` is space-like
/// since `‖(x, Mx)‖ = xᵀSx`.
pub fn random_graph_matrix(rng: &mut impl Rng) -> Mat3 {
    let q = conjugation_rotation(&random_unit_quaternion(rng));
    let d = Mat3::diag([
        rng.random_range(0.1..=3.0),
        rng.random_range(0.1..=3.0),
        rng.random_range(0.1..=3.0),
    ]);
    let s = *q.matrix() * d * q.matrix().transpose();
    let (a, b, c) = (
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    );
    let skew = Mat3([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]]);
    s + skew
}

/// A random basis with positive determinant, well conditioned.
fn random_positive_basis(rng: &mut impl Rng) -> Mat3 {
    loop {
        let m = Mat3::from_fn(|_, _| rng.random_range(-1.0..=1.0)) + Mat3::identity();
        let d = m.det();
        if d > 0.2 {
            return m;
        }
    }
}

/// Outcome of [`calibration_inequality_test`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityReport {
    pub samples: usize,
    /// Unit blades with `ω > 0` and `ω < vol − 1e−9`.
    pub violations: usize,
    /// Max of `vol/ω` over blades with `ω > 0`.
    pub max_ratio: f64,
}

/// Samples `n` space-like graph 3-planes in random positive bases and checks
/// `ω(ξ) ≥ vol(ξ)` on the unit-volume blades.
pub fn calibration_inequality_test(
    c: f64,
    n: usize,
    seed: u64,
) -> Result<InequalityReport, CalibrationError> {
    let form = CalibrationForm::new(c)?;
    if n == 0 {
        return Err(CalibrationError::NoSamples);
    }
    let ratios = map_indexed(n, |i| {
        let mut rng = rng_for(seed, i as u64);
        let m = random_graph_matrix(&mut rng);
        let blade = graph_blade(&m, &random_positive_basis(&mut rng));
        let vol = blade_volume(&blade).ok()?;
        let omega = form.at_identity(&blade) / vol;
        (omega > 0.0).then_some(1.0 / omega)
    });
    let violations = ratios
        .iter()
        .flatten()
        .filter(|r| 1.0 / **r < 1.0 - INEQUALITY_TOL)
        .count();
    let max_ratio = max_with_nan(ratios.iter().flatten().copied());
    Ok(InequalityReport {
        samples: n,
        violations,
        max_ratio,
    })
}

/// Outcome of [`calibrated_equality_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EqualityReport {
    pub radii: usize,
    /// Max of `|ω − vol| / vol` over the tangent blades of `φ`.
    pub max_omega_defect: f64,
    /// Max of `ω / vol`.
    pub max_omega_ratio: f64,
    pub max_warren_residual: f64,
    pub max_lagrangian_defect: f64,
}

/// Compares `ω` and the volume on the tangent blades of `φ` for the profile
/// `(ℓ, r/2)` at the given radii, with `C` chosen by `4c³C² = 3`.
///
/// The blades satisfy the Warren equation, but they are not Lagrangian for
/// `r > 0`: the rotation parts are turned by `θ` and the translation parts by
/// `2θ`, and one finds `ω / vol = 1/|cos θ(r)|`.
pub fn calibrated_equality_check(
    c: f64,
    radii: &[f64],
) -> Result<EqualityReport, CalibrationError> {
    let form = CalibrationForm::for_scale(c)?;
    if radii.is_empty() {
        return Err(CalibrationError::NoSamples);
    }
    let map = ScrewRadialMap::standard(c);
    let dirs = [
        Vec3::E1,
        Vec3::new(1.0, 1.0, 1.0).scale(1.0 / real::sqrt(3.0)),
        Vec3::new(0.0, -0.6, 0.8),
    ];
    let mut report = EqualityReport {
        radii: radii.len(),
        max_omega_defect: 0.0,
        max_omega_ratio: 0.0,
        max_warren_residual: 0.0,
        max_lagrangian_defect: 0.0,
    };
    for &r in radii {
        for u in dirs {
            let blade = dphi_closed(&map, r, u);
            let vol = match blade_volume(&blade) {
                Ok(v) => v,
                Err(_) => {
                    report.max_omega_defect = f64::INFINITY;
                    continue;
                }
            };
            let omega = form.at_identity(&blade);
            report.max_omega_defect = report.max_omega_defect.max((omega - vol).abs() / vol);
            report.max_omega_ratio = report.max_omega_ratio.max(omega / vol);
            // normalize so the residual is scale free
            let unit = blade.transform(&Mat3::identity().scale(real::cbrt(1.0 / vol)));
            report.max_warren_residual = report
                .max_warren_residual
                .max(warren_residual(&unit, form.constant()));
            report.max_lagrangian_defect =
                report.max_lagrangian_defect.max(lagrangian_defect(&unit));
        }
    }
    Ok(report)
}

/// Outcome of [`equality_case_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EqualityCaseReport {
    /// Max `|ω − vol|` on unit special Lagrangian blades.
    pub special_lagrangian_defect: f64,
    /// Max Warren residual on the same blades.
    pub special_lagrangian_warren: f64,
    /// Min `ω − vol` on unit blades that satisfy the Warren equation but are
    /// not Lagrangian.
    pub non_lagrangian_min_gap: f64,
    /// Min Warren residual on unit blades with `ω − vol > 1e−6`.
    pub strict_min_warren: f64,
}

/// Samples the equality case of the calibration inequality in both
/// directions.
///
/// Special Lagrangian blades are graphs of symmetric positive `M` with
/// `det M = C²`; non-Lagrangian blades add an antisymmetric part and are
/// rescaled to `det M = C²`.
pub fn equality_case_check(
    c: f64,
    n: usize,
    seed: u64,
) -> Result<EqualityCaseReport, CalibrationError> {
    let form = CalibrationForm::new(c)?;
    if n == 0 {
        return Err(CalibrationError::NoSamples);
    }
    let samples = map_indexed(n, |i| {
        let mut rng = rng_for(seed, i as u64);
        let m = random_graph_matrix(&mut rng);
        let basis = random_positive_basis(&mut rng);
        let sym = m.symmetric_part();
        let unit = |mat: Mat3| {
            let s = real::cbrt(c * c / mat.det());
            let blade = graph_blade(&mat.scale(s), &basis);
            let vol = blade_volume(&blade).unwrap_or(f64::NAN);
            let scaled = blade.transform(&Mat3::identity().scale(real::cbrt(1.0 / vol)));
            (form.at_identity(&scaled) - 1.0, warren_residual(&scaled, c))
        };
        (unit(sym), unit(m))
    });
    Ok(EqualityCaseReport {
        special_lagrangian_defect: max_with_nan(samples.iter().map(|s| s.0 .0.abs())),
        special_lagrangian_warren: max_with_nan(samples.iter().map(|s| s.0 .1)),
        non_lagrangian_min_gap: -max_with_nan(samples.iter().map(|s| -s.1 .0)),
        strict_min_warren: -max_with_nan(samples.iter().filter(|s| s.1 .0 > 1e-6).map(|s| -s.1 .1)),
    })
}

/// `2^{−3/2}`, the value of the one-point form on `((i,0), (j,0), (k,0))`.
pub const ONE_POINT_SCALE: f64 = 0.353_553_390_593_273_8;

/// The invariant form on S³×S³ equal at `(1, 1)` to `α¹∧α²∧α³`, where `αⁱ`
/// is dual to `√2(eᵢ, 0)`, evaluated on left-trivialized vectors.
pub fn onepoint_form(rows: &[Tangent6; 3]) -> f64 {
    ONE_POINT_SCALE * Mat3::from_rows(rows[0].a, rows[1].a, rows[2].a).det()
}

/// `√det(Gram)` under the S³×S³ metric.
pub fn s3xs3_volume(rows: &[Tangent6; 3]) -> Result<f64, CalibrationError> {
    gram_volume(&Mat3::from_fn(|i, j| inner_s3xs3(&rows[i], &rows[j])))
}

/// Outcome of [`onepoint_calibration_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OnePointReport {
    /// Form value on `√2((i,0), (j,0), (k,0))` at `(1, 1)`.
    pub identity_value: f64,
    /// Volume of the same blade.
    pub identity_volume: f64,
    /// Max `|form − vol|` on unit blades tangent to `S³×{1}` at random points.
    pub equality_defect: f64,
    /// Tilted space-like blades with form value below their volume.
    pub tilted_violations: usize,
    /// Tilted space-like blades with form value strictly above their volume.
    pub tilted_strict: usize,
    /// Tilted samples that were not space-like.
    pub tilted_not_spacelike: usize,
}

/// Checks that the one-point form calibrates `S³×{1}` at random points, and
/// samples blades tilted into the second factor.
pub fn onepoint_calibration_check(n: usize, seed: u64) -> Result<OnePointReport, CalibrationError> {
    if n == 0 {
        return Err(CalibrationError::NoSamples);
    }
    let s2 = real::sqrt(2.0);
    let id_rows: [Tangent6; 3] =
        core::array::from_fn(|i| Tangent6::new(Vec3::basis(i).scale(s2), Vec3::ZERO));
    let identity_value = onepoint_form(&id_rows);
    let identity_volume = s3xs3_volume(&id_rows)?;

    let samples = map_indexed(n, |i| {
        let mut rng = rng_for(seed, i as u64);
        let p = random_unit_quaternion(&mut rng);
        let one = crate::algebra::UnitQuaternion::IDENTITY;
        let basis = random_positive_basis(&mut rng);
        let base = GroupPoint::S3xS3(p, one);
        let mut rows = [Tangent6::default(); 3];
        for (k, row) in rows.iter_mut().enumerate() {
            let v = crate::algebra::Quaternion::pure(basis.column(k));
            let amb = AmbientTangent::S3xS3(p.quaternion() * v, crate::algebra::Quaternion::ZERO);
            *row = pull_to_identity(&base, &amb).unwrap_or_default();
        }
        let equality = match s3xs3_volume(&rows) {
            Ok(vol) => (onepoint_form(&rows) / vol - 1.0).abs(),
            Err(_) => f64::NAN,
        };
        let tilt = Mat3::from_fn(|_, _| rng.random_range(-0.6..=0.6));
        let tilted: [Tangent6; 3] =
            core::array::from_fn(|k| Tangent6::new(basis.column(k), tilt * basis.column(k)));
        let tilted_outcome = s3xs3_volume(&tilted)
            .ok()
            .map(|vol| onepoint_form(&tilted) / vol);
        (equality, tilted_outcome)
    });
    Ok(OnePointReport {
        identity_value,
        identity_volume,
        equality_defect: max_with_nan(samples.iter().map(|s| s.0)),
        tilted_violations: samples
            .iter()
            .filter_map(|s| s.1)
            .filter(|r| *r < 1.0 - INEQUALITY_TOL)
            .count(),
        tilted_strict: samples
            .iter()
            .filter_map(|s| s.1)
            .filter(|r| *r > 1.0 + INEQUALITY_TOL)
            .count(),
        tilted_not_spacelike: samples.iter().filter(|s| s.1.is_none()).count(),
    })
}

/// Left-trivializes three ambient vectors at `base` (a convenience for
/// [`omega_eval`] callers holding a [`SpinMotion`]).
pub fn trivialize(base: &SpinMotion, vectors: &[SpinVelocity; 3]) -> ThreeBlade {
    ThreeBlade {
        rows: core::array::from_fn(|i| {
            let (xi, eta, _) = left_diff_spin_inv(base, &vectors[i]);
            Tangent6::new(xi, eta)
        }),
    }
}
