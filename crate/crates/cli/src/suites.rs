//! The property suites behind `screwcal verify`.

use std::f64::consts::PI;

use rand::Rng;
use screwcal_core::algebra::{
    conjugation_rotation, cross, cross_operator, quat_exp, rotation_exp, Vec3,
};
use screwcal_core::calibration::{
    calibrated_equality_check, calibration_inequality_test, equality_case_check,
    onepoint_calibration_check,
};
use screwcal_core::groups::{bracket_z, Curvature, LieElementZ};
use screwcal_core::intrinsic::{
    circle_length, circle_length_quadrature, sphere_area, sphere_area_quadrature, IntrinsicProfile,
};
use screwcal_core::linalg::{symmetric_eigenvalues, Mat3, Mat4, Vec4};
use screwcal_core::metrics::{
    action_isometry_defect, check_ad_skew, p_isometry_defect, pi_isometry_defect,
};
use screwcal_core::sampling::{map_indexed, random_unit_vec3, random_vec3, rng_for};
use screwcal_core::screwmaps::{
    ell, pullback_metric_frame, spacelike_classify, LProfile, Profile, ScrewRadialMap,
    SpacelikeClass, ThetaProfile,
};
use screwcal_core::vorticity::{
    generic_samples, involutivity_defect, optimality_residual, screw_point, screw_samples,
    spacelike_vorticity_check, vorticity_h, vorticity_vector, FrameSection, SCREW_MARGIN,
};

use crate::report::{Bound, Check, RunConfig};
use crate::CliError;

pub const SUITES: [&str; 10] = [
    "algebra",
    "bi-invariance",
    "local-isometry",
    "spacelike-lemma",
    "calibration",
    "warren",
    "vorticity",
    "optimal-s3",
    "involutivity",
    "intrinsic",
];

pub fn run(suite: &str, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    match suite {
        "algebra" => Ok(algebra(cfg)),
        "bi-invariance" => bi_invariance(cfg),
        "local-isometry" => Ok(local_isometry(cfg)),
        "spacelike-lemma" => Ok(spacelike_lemma(cfg)),
        "calibration" => calibration(cfg),
        "warren" => warren(cfg),
        "vorticity" => vorticity(cfg),
        "optimal-s3" => optimal_s3(cfg),
        "involutivity" => involutivity(cfg),
        "intrinsic" => intrinsic(cfg),
        other => Err(CliError::Config(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn kappas(cfg: &RunConfig) -> Result<Vec<Curvature>, CliError> {
    match cfg.kappa {
        None => Ok(Curvature::ALL.to_vec()),
        Some(k) => Curvature::try_from(k)
            .map(|k| vec![k])
            .map_err(|_| CliError::Config(format!("kappa must be -1, 0 or 1, got {k}"))),
    }
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v)
        }
    })
}

fn mat3_diff(a: &Mat3, b: &Mat3) -> f64 {
    (*a - *b).max_abs()
}

fn series_exp3(m: &Mat3) -> Mat3 {
    let mut acc = Mat3::identity();
    let mut term = Mat3::identity();
    for n in 1..60 {
        term = (term * *m).scale(1.0 / n as f64);
        acc = acc + term;
    }
    acc
}

fn algebra(cfg: &RunConfig) -> Vec<Check> {
    let n = cfg.samples_or(1000);
    let rows = map_indexed(n, |i| {
        let mut rng = rng_for(cfg.seed, i as u64);
        let x = random_vec3(&mut rng, PI);
        let series = mat3_diff(
            rotation_exp(x).matrix(),
            &series_exp3(&cross_operator(x).matrix()),
        );
        let conj = mat3_diff(
            rotation_exp(x).matrix(),
            conjugation_rotation(&quat_exp(x.scale(0.5))).matrix(),
        );
        let xi = random_vec3(&mut rng, 1.0);
        let h = 1e-5;
        let fd = (*conjugation_rotation(&quat_exp(xi.scale(h))).matrix()
            - *conjugation_rotation(&quat_exp(xi.scale(-h))).matrix())
        .scale(0.5 / h);
        let diff = mat3_diff(&fd, &cross_operator(xi.scale(2.0)).matrix());
        (series, conj, diff)
    });
    let tol = cfg.tolerance("algebra", 1e-8);
    vec![
        Check::new(
            "rotation_exp_vs_series",
            "exponential of the cross-product operator",
            max(rows.iter().map(|r| r.0)),
            tol,
            Bound::Below,
        ),
        Check::new(
            "rotation_exp_vs_conjugation",
            "rotation by unit-quaternion conjugation",
            max(rows.iter().map(|r| r.1)),
            tol,
            Bound::Below,
        ),
        Check::new(
            "conjugation_differential",
            "differential of the covering at the identity",
            max(rows.iter().map(|r| r.2)),
            tol,
            Bound::Below,
        ),
    ]
}

fn bi_invariance(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let n = cfg.samples_or(1000);
    let mut checks = Vec::new();
    for kappa in kappas(cfg)? {
        let k = kappa.as_i32();
        let skew = check_ad_skew(kappa, n, cfg.seed);
        checks.push(Check::new(
            format!("ad_skewness[kappa={k}]"),
            "bi-invariant split metric on the isometry group",
            skew,
            cfg.tolerance("ad-skew", 1e-11),
            Bound::Below,
        ));
        let defects = map_indexed(n, |i| {
            let mut rng = rng_for(cfg.seed ^ 0x5eed, i as u64);
            let a = LieElementZ::new(
                kappa,
                random_vec3(&mut rng, 1.0),
                random_vec3(&mut rng, 1.0),
            );
            let b = LieElementZ::new(
                kappa,
                random_vec3(&mut rng, 1.0),
                random_vec3(&mut rng, 1.0),
            );
            let (ma, mb): (Mat4, Mat4) = (a.matrix(), b.matrix());
            let commutator = ma * mb - mb * ma;
            bracket_z(&a, &b).map(|z| (z.matrix() - commutator).max_abs())
        });
        let defects: Vec<f64> = defects
            .into_iter()
            .collect::<Result<_, _>>()
            .map_err(failed)?;
        checks.push(Check::new(
            format!("bracket_vs_commutator[kappa={k}]"),
            "Lie bracket in the Z parametrization",
            max(defects),
            cfg.tolerance("bracket", 1e-12),
            Bound::Below,
        ));
    }
    Ok(checks)
}

fn local_isometry(cfg: &RunConfig) -> Vec<Check> {
    let n = cfg.samples_or(1000);
    let tol = cfg.tolerance("isometry", 1e-10);
    vec![
        Check::new(
            "covering_norm_defect",
            "double cover of the Euclidean motions is a local isometry",
            pi_isometry_defect(n, cfg.seed),
            tol,
            Bound::Below,
        ),
        Check::new(
            "s3xs3_norm_defect",
            "S3xS3 covering of SO4 is a local isometry",
            p_isometry_defect(n, cfg.seed),
            tol,
            Bound::Below,
        ),
        Check::new(
            "conjugation_action_defect",
            "conjugation acts by isometries",
            action_isometry_defect(n, cfg.seed),
            tol,
            Bound::Below,
        ),
    ]
}

fn spacelike_lemma(cfg: &RunConfig) -> Vec<Check> {
    let n = cfg.samples_or(1000);
    let tol = cfg.tolerance("eigenvalue", 1e-10);
    let profiles = [
        Profile::standard(cfg.c.unwrap_or(1.0)),
        Profile {
            l: LProfile::Ell { c: 1.0 },
            theta: ThetaProfile::Distorted { amplitude: 0.2 },
        },
        Profile {
            l: LProfile::Linear { slope: 1.0 },
            theta: ThetaProfile::Scaled { factor: 1.0 },
        },
    ];
    let disagreements: usize = map_indexed(n, |i| {
        let mut rng = rng_for(cfg.seed, i as u64);
        let p = profiles[i % profiles.len()];
        let r = rng.random_range(0.0..3.0 * PI);
        let ev = symmetric_eigenvalues(
            &pullback_metric_frame(&ScrewRadialMap::new(p), r, random_unit_vec3(&mut rng)).0,
        );
        let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
        let ok = match spacelike_classify(&p, r) {
            SpacelikeClass::Spacelike => min > 0.0,
            SpacelikeClass::NotSpacelike => min < tol,
            SpacelikeClass::Degenerate => min < tol,
        };
        usize::from(!ok)
    })
    .into_iter()
    .sum();
    let standard = profiles[0];
    let map = ScrewRadialMap::new(standard);
    let boundary = [PI, 2.0 * PI];
    let not_flagged = boundary
        .iter()
        .filter(|r| spacelike_classify(&standard, **r) != SpacelikeClass::Degenerate)
        .count();
    let boundary_eig = max(boundary.iter().map(|r| {
        let ev = symmetric_eigenvalues(&pullback_metric_frame(&map, *r, Vec3::E3).0);
        ev.iter().copied().fold(f64::INFINITY, f64::min).abs()
    }));
    vec![
        Check::new(
            "classifier_vs_eigenvalues",
            "space-likeness of screw-radial maps",
            disagreements as f64,
            0.0,
            Bound::AtMost,
        ),
        Check::new(
            "boundary_radii_degenerate",
            "space-likeness of screw-radial maps",
            not_flagged as f64,
            0.0,
            Bound::AtMost,
        ),
        Check::new(
            "boundary_min_eigenvalue",
            "space-likeness of screw-radial maps",
            boundary_eig,
            tol,
            Bound::Below,
        ),
    ]
}

fn calibration(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let n = cfg.samples_or(10_000);
    let constants = match cfg.c {
        Some(c) => vec![c],
        None => vec![3f64.sqrt() / 2.0, 1.0, 2.0],
    };
    let mut checks = Vec::new();
    for k in constants {
        let report = calibration_inequality_test(k, n, cfg.seed)
            .map_err(|e| CliError::Config(e.to_string()))?;
        checks.push(Check::new(
            format!("inequality_violations[C={k}]"),
            "split special Lagrangian calibration",
            report.violations as f64,
            0.0,
            Bound::AtMost,
        ));
        let eq = equality_case_check(k, n.min(2000), cfg.seed).map_err(failed)?;
        checks.push(Check::new(
            format!("special_lagrangian_equality[C={k}]"),
            "equality on split special Lagrangian planes",
            eq.special_lagrangian_defect,
            cfg.tolerance("equality", 1e-9),
            Bound::Below,
        ));
    }
    Ok(checks)
}

pub fn warren_radii(n: usize) -> Vec<f64> {
    let inner = (0..n).map(|i| PI * (i as f64 + 0.5) / n as f64);
    let outer = (0..n).map(|i| 2.0 * PI + PI * (i as f64 + 0.5) / n as f64);
    inner.chain(outer).collect()
}

fn warren(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let scales = match cfg.c {
        Some(c) => vec![c],
        None => vec![0.5, 1.0, 2.0],
    };
    let radii = warren_radii(cfg.samples_or(200));
    let tol = cfg.tolerance("warren", 1e-9);
    let mut checks = Vec::new();
    for c in scales {
        let report =
            calibrated_equality_check(c, &radii).map_err(|e| CliError::Config(e.to_string()))?;
        checks.push(Check::new(
            format!("warren_residual[c={c}]"),
            "Warren equation for the screw-radial blades",
            report.max_warren_residual,
            tol,
            Bound::Below,
        ));
        checks.push(Check::new(
            format!("omega_minus_volume[c={c}]"),
            "calibrated screw-radial submanifold",
            report.max_omega_defect,
            tol,
            Bound::Below,
        ));
    }
    Ok(checks)
}

fn flat(x: Vec3) -> Vec4 {
    Vec4::from_parts(0.0, x)
}

fn vorticity(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let n = cfg.samples_or(100);
    let c = cfg.c.unwrap_or(1.0);
    let tol = cfg.tolerance("vorticity", 1e-5);
    let b0 = FrameSection::b0();
    let screw = FrameSection::from_screw(c).map_err(|e| CliError::Config(e.to_string()))?;
    let origin = Vec4::from_parts(1.0, Vec3::ZERO);
    let mut origin_defect: f64 = 0.0;
    for i in 0..n {
        let x = random_unit_vec3(&mut rng_for(cfg.seed, i as u64));
        let xb = vorticity_vector(&b0, &origin, &flat(x)).map_err(failed)?;
        origin_defect = origin_defect.max((xb - flat(x)).max_abs());
    }
    let mut checks = vec![Check::new(
        "b0_origin_identity",
        "vorticity of the parallel section at its origin",
        origin_defect,
        cfg.tolerance("origin", 1e-6),
        Bound::Below,
    )];
    let cases = [
        ("b0", &b0, generic_samples(Curvature::Flat, n, cfg.seed)),
        (
            "left-invariant-s3",
            &FrameSection::left_invariant_s3(),
            generic_samples(Curvature::Spherical, n, cfg.seed),
        ),
        (
            "screw-ball",
            &screw,
            screw_samples(c, 0.1, PI - 0.1, n, cfg.seed),
        ),
        (
            "screw-outer-shell",
            &screw,
            screw_samples(c, 2.0 * PI + SCREW_MARGIN, 3.0 * PI - 0.1, n, cfg.seed),
        ),
    ];
    for (name, section, samples) in cases {
        let report = spacelike_vorticity_check(section, &samples).map_err(failed)?;
        checks.push(Check::new(
            format!("speed_identity[{name}]"),
            "section speed equals half the vorticity",
            report.max_defect,
            tol,
            Bound::Below,
        ));
    }
    let inner = spacelike_vorticity_check(
        &screw,
        &screw_samples(c, PI + 0.1, 2.0 * PI - SCREW_MARGIN, n, cfg.seed),
    )
    .map_err(failed)?;
    checks.push(Check::new(
        "speed_identity[screw-inner-shell]",
        "section speed equals half the vorticity",
        inner.max_defect,
        tol,
        Bound::Below,
    ));
    checks.push(Check::new(
        "negative_h_on_inner_shell",
        "vorticity changes sign between the shells",
        inner.negative as f64,
        0.0,
        Bound::Above,
    ));
    let (mut axis, mut ortho) = (0.0f64, 0.0f64);
    for i in 0..n {
        let mut rng = rng_for(cfg.seed ^ 0xb0, i as u64);
        let u = random_unit_vec3(&mut rng);
        let y = random_unit_vec3(&mut rng);
        let y = (y - u.scale(y.dot(u)))
            .normalized()
            .unwrap_or_else(|| u.any_orthonormal());
        let p = screw_point(c, PI, u);
        let x = flat(y.scale(ell(c, PI)));
        let xb = vorticity_vector(&screw, &p, &x).map_err(failed)?;
        axis = axis.max((xb - flat(cross(u, y).scale(2.0))).max_abs());
        ortho = ortho.max(vorticity_h(&screw, &p, &flat(y)).map_err(failed)?.abs());
    }
    checks.push(Check::new(
        "boundary_vorticity_axis",
        "vorticity on the boundary sphere",
        axis,
        tol,
        Bound::Below,
    ));
    checks.push(Check::new(
        "boundary_vorticity_orthogonal",
        "vorticity on the boundary sphere",
        ortho,
        tol,
        Bound::Below,
    ));
    Ok(checks)
}

fn optimal_s3(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let n = cfg.samples_or(200);
    let residual =
        optimality_residual(&FrameSection::left_invariant_s3(), n, cfg.seed).map_err(failed)?;
    let onepoint = onepoint_calibration_check(n, cfg.seed).map_err(failed)?;
    Ok(vec![
        Check::new(
            "optimality_residual",
            "left-invariant framing of S3 has optimal vorticity",
            residual,
            cfg.tolerance("optimal", 1e-6),
            Bound::Below,
        ),
        Check::new(
            "onepoint_equality",
            "one-point calibration of S3x{1}",
            onepoint.equality_defect,
            cfg.tolerance("onepoint", 1e-10),
            Bound::Below,
        ),
        Check::new(
            "onepoint_tilted_violations",
            "one-point calibration of S3x{1}",
            onepoint.tilted_violations as f64,
            0.0,
            Bound::AtMost,
        ),
    ])
}

fn involutivity(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let n = cfg.samples_or(1000);
    let mut checks = Vec::new();
    for kappa in kappas(cfg)? {
        let defects = map_indexed(n, |i| {
            let mut rng = rng_for(cfg.seed, i as u64);
            let x = random_unit_vec3(&mut rng);
            let y = x.any_orthonormal();
            let t = rng.random_range(0.0..2.0 * PI);
            let y = y.scale(t.cos()) + cross(x, y).scale(t.sin());
            involutivity_defect(kappa, x, y)
        });
        let k = kappa.as_i32();
        let check = if kappa == Curvature::Spherical {
            Check::new(
                format!("max_defect[kappa={k}]"),
                "optimal sections exist only on S3",
                max(defects),
                cfg.tolerance("involutive", 1e-12),
                Bound::Below,
            )
        } else {
            let min = defects.iter().copied().fold(f64::INFINITY, f64::min);
            Check::new(
                format!("min_defect[kappa={k}]"),
                "no local section with optimal vorticity",
                min,
                cfg.tolerance("non-involutive", 0.5),
                Bound::Above,
            )
        };
        checks.push(check);
    }
    Ok(checks)
}

fn intrinsic(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let c = cfg.c.unwrap_or(1.0);
    let profile = IntrinsicProfile::new(c).map_err(|e| CliError::Config(e.to_string()))?;
    let n = cfg.samples_or(50);
    let rows = map_indexed(n, |i| {
        let r = PI * (i as f64 + 0.5) / n as f64;
        let area = sphere_area(c, r)?;
        let area_q = sphere_area_quadrature(c, r, 16, 24)?;
        let circle = circle_length(c, r)?;
        let axis = random_unit_vec3(&mut rng_for(cfg.seed, i as u64));
        let circle_q = circle_length_quadrature(c, r, axis, 32)?;
        Ok((
            (area_q - area).abs() / area,
            (circle_q - circle).abs() / circle,
        ))
    });
    let rows: Vec<(f64, f64)> = rows
        .into_iter()
        .collect::<Result<_, screwcal_core::error::IntrinsicError>>()
        .map_err(failed)?;
    let l = profile.completion_length();
    let simpson = profile.sigma_oracle(PI, 1e-13).map_err(failed)?;
    let ratio = profile
        .divergence_witness(1e3)
        .map_err(failed)?
        .map_or(0.0, |(_, v)| v);
    let r = PI - 1e-6;
    let bound = profile
        .completion_distance_bound(r, r, Vec3::E1, Vec3::E2)
        .map_err(failed)?;
    let tol = cfg.tolerance("area", 1e-8);
    Ok(vec![
        Check::new(
            "sphere_area_vs_quadrature",
            "area of the distance spheres",
            max(rows.iter().map(|r| r.0)),
            tol,
            Bound::Below,
        ),
        Check::new(
            "circle_length_vs_quadrature",
            "length of great circles",
            max(rows.iter().map(|r| r.1)),
            tol,
            Bound::Below,
        ),
        Check::new(
            "completion_length_finite",
            "finite radial length to the boundary",
            l,
            1e300,
            Bound::Below,
        ),
        Check::new(
            "completion_length_dual_quadrature",
            "finite radial length to the boundary",
            (l - simpson).abs(),
            cfg.tolerance("quadrature", 1e-9),
            Bound::Below,
        ),
        Check::new(
            "area_ratio_divergence",
            "area ratio of spheres about the completion point",
            ratio,
            1e3,
            Bound::Above,
        ),
        Check::new(
            "completion_distance_bound",
            "metric completion adds one point",
            bound,
            cfg.tolerance("completion", 0.01),
            Bound::Below,
        ),
    ])
}
