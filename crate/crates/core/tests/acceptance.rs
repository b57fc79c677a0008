//! Acceptance criteria 1 to 10. Each test prints one `criterion N: PASS|FAIL`
//! line to stderr (uncaptured) before asserting, so a full run shows the
//! status of every criterion.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Matrix4, SymmetricEigen, UnitQuaternion as NaQuat, Vector3};
use rand::Rng;
use screwcal_core::algebra::{
    conjugation_rotation, cross, cross_operator, quat_exp, rotation_exp, Vec3,
};
use screwcal_core::calibration::{
    calibrated_equality_check, calibration_inequality_test, onepoint_calibration_check,
};
use screwcal_core::groups::{bracket_z, z_matrix, z_unpack, Curvature, LieElementZ};
use screwcal_core::intrinsic::{
    circle_length, circle_length_quadrature, sphere_area, sphere_area_quadrature, IntrinsicProfile,
};
use screwcal_core::linalg::{Mat3, Mat4, Vec4};
use screwcal_core::metrics::{p_isometry_defect, pi_isometry_defect};
use screwcal_core::sampling::{random_unit_vec3, random_vec3, rng_for};
use screwcal_core::screwmaps::{
    ell, pullback_metric_frame, spacelike_classify, LProfile, Profile, ScrewRadialMap,
    SpacelikeClass, ThetaProfile,
};
use screwcal_core::volume::{default_directions, maximization_experiment, DomainSpec};
use screwcal_core::vorticity::{
    generic_samples, involutivity_defect, optimality_residual, screw_point, screw_samples,
    spacelike_vorticity_check, vorticity_h, vorticity_vector, FrameSection, SCREW_MARGIN,
};

// Tolerances and budgets, one block per criterion.
const C1_TOL: f64 = 1e-8;
const C1_SAMPLES: usize = 1000;
const C1_BUDGET: Duration = Duration::from_secs(5);
const C2_SKEW_TOL: f64 = 1e-11;
const C2_BRACKET_TOL: f64 = 1e-12;
const C2_SAMPLES: usize = 1000;
const C2_BUDGET: Duration = Duration::from_secs(5);
const C3_TOL: f64 = 1e-10;
const C3_SAMPLES: usize = 1000;
const C3_BUDGET: Duration = Duration::from_secs(5);
const C4_TOL: f64 = 1e-10;
const C4_SAMPLES: usize = 1000;
const C5_TOL: f64 = 1e-9;
const C5_SAMPLES: usize = 10_000;
const C5_BUDGET: Duration = Duration::from_secs(30);
const C6_TOL: f64 = 1e-9;
const C6_RADII: usize = 200;
const C7_VOLUME_REL: f64 = 1e-7;
const C7_OMEGA_REL: f64 = 1e-6;
const C7_R_SQUARED: f64 = 0.99;
const C7_BUDGET: Duration = Duration::from_secs(300);
const C8_ORIGIN_TOL: f64 = 1e-6;
const C8_TOL: f64 = 1e-5;
const C8_SAMPLES: usize = 100;
const C9_RESIDUAL_TOL: f64 = 1e-6;
const C9_ONEPOINT_TOL: f64 = 1e-10;
const C9_INVOLUTIVE_TOL: f64 = 1e-12;
const C9_NON_INVOLUTIVE_MIN: f64 = 0.5;
const C9_SAMPLES: usize = 200;
const C10_QUADRATURE_REL: f64 = 1e-8;
const C10_DUAL_TOL: f64 = 1e-9;
const C10_RATIO: f64 = 1e3;
const C10_BOUND: f64 = 0.01;
const C10_RADII: usize = 50;

struct Outcome {
    lines: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { lines: Vec::new() }
    }

    fn below(&mut self, what: &str, measured: f64, tol: f64) {
        self.lines.push((
            format!("{what} = {measured:.3e} (< {tol:.0e})"),
            measured < tol,
        ));
    }

    fn above(&mut self, what: &str, measured: f64, floor: f64) {
        self.lines.push((
            format!("{what} = {measured:.3e} (> {floor:.1e})"),
            measured > floor,
        ));
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.lines.push((what.to_string(), ok));
    }

    fn within(&mut self, elapsed: Duration, budget: Duration) {
        self.lines.push((
            format!(
                "runtime {:.2}s (< {}s)",
                elapsed.as_secs_f64(),
                budget.as_secs()
            ),
            elapsed < budget,
        ));
    }

    /// Prints the summary line and panics listing every failed part.
    fn finish(self, n: u32, title: &str) {
        let pass = self.lines.iter().all(|l| l.1);
        let details: Vec<String> = self
            .lines
            .iter()
            .map(|(s, ok)| format!("{}{s}", if *ok { "" } else { "FAILED " }))
            .collect();
        let line = format!(
            "criterion {n:>2}: {} {title}: {}\n",
            if pass { "PASS" } else { "FAIL" },
            details.join("; ")
        );
        std::io::stderr().write_all(line.as_bytes()).ok();
        assert!(pass, "{line}");
    }
}

fn na3(m: &Mat3) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m.0[i][j])
}

fn na4(m: &Mat4) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m.0[i][j])
}

fn nav(v: Vec3) -> Vector3<f64> {
    Vector3::new(v.x, v.y, v.z)
}

fn max_abs3(m: &Matrix3<f64>) -> f64 {
    m.amax()
}

#[test]
fn criterion_01_algebra_identities() {
    let start = Instant::now();
    let (mut series, mut rxq, mut di1) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..C1_SAMPLES {
        let mut rng = rng_for(101, i as u64);
        let x = random_vec3(&mut rng, PI);
        let r = na3(rotation_exp(x).matrix());
        series = series.max(max_abs3(&(r - na3(&cross_operator(x).matrix()).exp())));
        let via_quat = na3(conjugation_rotation(&quat_exp(x.scale(0.5))).matrix());
        let nalgebra_rot = NaQuat::from_scaled_axis(nav(x))
            .to_rotation_matrix()
            .into_inner();
        rxq = rxq.max(max_abs3(&(r - via_quat)).max(max_abs3(&(r - nalgebra_rot))));
        // derivative of q ↦ (y ↦ q y q̄) at q = 1 along the pure quaternion ξ
        let xi = random_vec3(&mut rng, 1.0);
        let h = 1e-5;
        let at = |t: f64| {
            let q = NaQuat::from_quaternion(nalgebra::Quaternion::new(
                1.0,
                t * xi.x,
                t * xi.y,
                t * xi.z,
            ));
            q.to_rotation_matrix().into_inner()
        };
        let d1 = (at(h) - at(-h)) / (2.0 * h);
        let d2 = (at(0.5 * h) - at(-0.5 * h)) / h;
        let fd = (4.0 * d2 - d1) / 3.0;
        di1 = di1.max(max_abs3(
            &(fd - na3(&cross_operator(xi.scale(2.0)).matrix())),
        ));
    }
    let mut o = Outcome::new();
    o.below("rotation_exp vs matrix exponential", series, C1_TOL);
    o.below(
        "rotation_exp(ru) vs conjugation by quat_exp(ru/2)",
        rxq,
        C1_TOL,
    );
    o.below("dI1(xi) vs C_2xi", di1, C1_TOL);
    o.within(start.elapsed(), C1_BUDGET);
    o.finish(1, "algebra identities");
}

fn quarter_form(a: &LieElementZ, b: &LieElementZ) -> f64 {
    0.25 * (a.x.dot(b.xi) + b.x.dot(a.xi))
}

#[test]
fn criterion_02_bi_invariance() {
    let start = Instant::now();
    let mut o = Outcome::new();
    for kappa in Curvature::ALL {
        let (mut skew, mut bracket) = (0.0f64, 0.0f64);
        for i in 0..C2_SAMPLES {
            let mut rng = rng_for(202 + (kappa.as_i32() + 1) as u64, i as u64);
            let mut z = || {
                LieElementZ::new(
                    kappa,
                    random_vec3(&mut rng, 1.0),
                    random_vec3(&mut rng, 1.0),
                )
            };
            let (a, b, c) = (z(), z(), z());
            let (ma, mb, mc) = (na4(&a.matrix()), na4(&b.matrix()), na4(&c.matrix()));
            let unpack = |m: Matrix4<f64>| {
                z_unpack(
                    kappa,
                    &Mat4(core::array::from_fn(|i| {
                        core::array::from_fn(|j| m[(i, j)])
                    })),
                    1e-9,
                )
                .unwrap()
            };
            let ab = unpack(ma * mb - mb * ma);
            let ac = unpack(ma * mc - mc * ma);
            skew = skew.max((quarter_form(&ab, &c) + quarter_form(&b, &ac)).abs());
            let z = bracket_z(&a, &b).unwrap();
            bracket = bracket.max((na4(&z_matrix(kappa, z.x, z.xi)) - (ma * mb - mb * ma)).amax());
        }
        let k = kappa.as_i32();
        o.below(&format!("ad-skewness kappa={k}"), skew, C2_SKEW_TOL);
        o.below(
            &format!("bracket_z vs commutator kappa={k}"),
            bracket,
            C2_BRACKET_TOL,
        );
    }
    o.within(start.elapsed(), C2_BUDGET);
    o.finish(2, "bi-invariance");
}

#[test]
fn criterion_03_local_isometries() {
    let start = Instant::now();
    let mut o = Outcome::new();
    o.below(
        "covering norm defect",
        pi_isometry_defect(C3_SAMPLES, 303),
        C3_TOL,
    );
    o.below(
        "S3xS3 -> SO4 norm defect",
        p_isometry_defect(C3_SAMPLES, 304),
        C3_TOL,
    );
    o.within(start.elapsed(), C3_BUDGET);
    o.finish(3, "local isometries");
}

#[test]
fn criterion_04_spacelike_lemma() {
    let profiles = [
        Profile::standard(1.0),
        Profile::standard(0.5),
        Profile {
            l: LProfile::Ell { c: 1.0 },
            theta: ThetaProfile::Distorted { amplitude: 0.2 },
        },
        Profile {
            l: LProfile::Linear { slope: 1.0 },
            theta: ThetaProfile::Scaled { factor: 1.0 },
        },
    ];
    let mut worst = 0.0f64;
    let mut disagreements = 0;
    for i in 0..C4_SAMPLES {
        let mut rng = rng_for(404, i as u64);
        let p = profiles[i % profiles.len()];
        let r = rng.random_range(0.0..3.0 * PI);
        let g = na3(&pullback_metric_frame(
            &ScrewRadialMap::new(p),
            r,
            random_unit_vec3(&mut rng),
        ));
        let min = SymmetricEigen::new(g).eigenvalues.min();
        let ok = match spacelike_classify(&p, r) {
            SpacelikeClass::Spacelike => min > 0.0,
            SpacelikeClass::NotSpacelike => min < C4_TOL,
            SpacelikeClass::Degenerate => min.abs() < C4_TOL || min < 0.0,
        };
        if !ok {
            disagreements += 1;
            worst = worst.max(min.abs());
        }
    }
    let standard = Profile::standard(1.0);
    let map = ScrewRadialMap::new(standard);
    let mut boundary_defect = 0.0f64;
    let mut boundary_flagged = true;
    for r in [PI, 2.0 * PI] {
        boundary_flagged &= spacelike_classify(&standard, r) == SpacelikeClass::Degenerate;
        boundary_defect = boundary_defect.max(
            SymmetricEigen::new(na3(&pullback_metric_frame(&map, r, Vec3::E2)))
                .eigenvalues
                .min()
                .abs(),
        );
    }
    let mut o = Outcome::new();
    o.holds(
        &format!("{disagreements} classifier disagreements over {C4_SAMPLES} (profile, r)"),
        disagreements == 0,
    );
    o.holds("r = pi and 2pi flagged degenerate", boundary_flagged);
    o.below(
        "smallest |eigenvalue| at r = pi, 2pi",
        boundary_defect,
        C4_TOL,
    );
    o.finish(4, "space-like lemma");
}

#[test]
fn criterion_05_calibration_inequality() {
    let start = Instant::now();
    let mut o = Outcome::new();
    for k in [3f64.sqrt() / 2.0, 1.0, 2.0] {
        let report = calibration_inequality_test(k, C5_SAMPLES, 505).unwrap();
        o.holds(
            &format!(
                "C={k:.4}: {} violations of omega >= vol - {C5_TOL:.0e}",
                report.violations
            ),
            report.violations == 0,
        );
    }
    o.within(start.elapsed(), C5_BUDGET);
    o.finish(5, "calibration inequality");
}

#[test]
fn criterion_06_calibrated_equality() {
    let inner = (0..C6_RADII).map(|i| PI * (i as f64 + 0.5) / C6_RADII as f64);
    let outer = (0..C6_RADII).map(|i| 2.0 * PI + PI * (i as f64 + 0.5) / C6_RADII as f64);
    let radii: Vec<f64> = inner.chain(outer).collect();
    let mut o = Outcome::new();
    for c in [0.5, 1.0, 2.0] {
        let report = calibrated_equality_check(c, &radii).unwrap();
        o.below(
            &format!("c={c} Warren residual"),
            report.max_warren_residual,
            C6_TOL,
        );
        o.below(
            &format!("c={c} |omega - vol|/vol"),
            report.max_omega_defect,
            C6_TOL,
        );
    }
    o.finish(6, "calibrated equality");
}

#[test]
fn criterion_07_volume_maximization() {
    let start = Instant::now();
    let amplitudes = [0.0, 0.01, -0.01, 0.05, -0.05, 0.1, -0.1];
    let directions = default_directions();
    let mut o = Outcome::new();
    for (name, domain) in [
        ("ball pi/2", DomainSpec::ball(PI / 2.0)),
        ("shell (2pi+0.2, 3pi-0.2)", DomainSpec::shell(1, 0.2)),
    ] {
        let report = maximization_experiment(1.0, &domain, &directions, &amplitudes).unwrap();
        o.holds(
            &format!("{name}: {} directions", directions.len()),
            directions.len() >= 6,
        );
        o.holds(
            &format!(
                "{name}: {} space-like competitors above vol(1 + {C7_VOLUME_REL:.0e})",
                report.violations
            ),
            report.violations == 0 && report.max_relative_gain() <= C7_VOLUME_REL,
        );
        o.below(
            &format!("{name}: omega spread"),
            report.omega_spread,
            C7_OMEGA_REL,
        );
        let leading = report
            .fits
            .iter()
            .map(|f| f.quadratic_only)
            .fold(f64::NEG_INFINITY, f64::max);
        let r2 = report
            .fits
            .iter()
            .map(|f| f.r_squared)
            .fold(f64::INFINITY, f64::min);
        o.holds(
            &format!("{name}: largest quadratic coefficient {leading:.3e} <= 0"),
            leading <= 0.0,
        );
        o.above(&format!("{name}: smallest R^2"), r2, C7_R_SQUARED);
    }
    o.within(start.elapsed(), C7_BUDGET);
    o.finish(7, "volume maximization");
}

fn flat(x: Vec3) -> Vec4 {
    Vec4::from_parts(0.0, x)
}

#[test]
fn criterion_08_vorticity() {
    let b0 = FrameSection::b0();
    let screw = FrameSection::from_screw(1.0).unwrap();
    let origin = Vec4::from_parts(1.0, Vec3::ZERO);
    let mut origin_defect = 0.0f64;
    for i in 0..C8_SAMPLES {
        let x = random_vec3(&mut rng_for(808, i as u64), 1.0);
        let xb = vorticity_vector(&b0, &origin, &flat(x)).unwrap();
        origin_defect = origin_defect.max((xb - flat(x)).max_abs());
    }
    let mut o = Outcome::new();
    o.below("(a) b0 at origin |X^b - x|", origin_defect, C8_ORIGIN_TOL);
    let left = FrameSection::left_invariant_s3();
    let cases = [
        ("b0", &b0, generic_samples(Curvature::Flat, C8_SAMPLES, 811)),
        (
            "left-invariant S3",
            &left,
            generic_samples(Curvature::Spherical, C8_SAMPLES, 812),
        ),
        (
            "screw ball",
            &screw,
            screw_samples(1.0, 0.05, PI - 0.05, C8_SAMPLES, 813),
        ),
        (
            "screw shell (2pi, 3pi)",
            &screw,
            screw_samples(
                1.0,
                2.0 * PI + SCREW_MARGIN,
                3.0 * PI - 0.05,
                C8_SAMPLES,
                814,
            ),
        ),
        (
            "screw shell (pi, 2pi)",
            &screw,
            screw_samples(1.0, PI + 0.05, 2.0 * PI - SCREW_MARGIN, C8_SAMPLES, 815),
        ),
    ];
    let mut negative = 0;
    for (name, section, samples) in cases {
        let report = spacelike_vorticity_check(section, &samples).unwrap();
        o.below(
            &format!("(b) {name} speed identity"),
            report.max_defect,
            C8_TOL,
        );
        if name == "screw shell (pi, 2pi)" {
            negative = report.negative;
        }
    }
    let (mut axis, mut ortho) = (0.0f64, 0.0f64);
    for i in 0..C8_SAMPLES {
        let mut rng = rng_for(816, i as u64);
        let u = random_unit_vec3(&mut rng);
        let y = random_unit_vec3(&mut rng);
        let y = (y - u.scale(y.dot(u))).normalized().unwrap();
        let p = screw_point(1.0, PI, u);
        let x = flat(y.scale(ell(1.0, PI)));
        let xb = vorticity_vector(&screw, &p, &x).unwrap();
        axis = axis.max((xb - flat(cross(u, y).scale(2.0))).max_abs());
        ortho = ortho
            .max(Curvature::Flat.inner(&xb, &x).abs())
            .max(vorticity_h(&screw, &p, &flat(y)).unwrap().abs());
    }
    o.below("(c) boundary |x^b - 2 u x y|", axis, C8_TOL);
    o.below("(c) boundary |<x^b, x>|", ortho, C8_TOL);
    o.holds(
        &format!("(d) {negative} negative-h directions on (pi, 2pi)"),
        negative > 0,
    );
    o.finish(8, "vorticity");
}

#[test]
fn criterion_09_optimal_vorticity_on_s3() {
    let mut o = Outcome::new();
    o.below(
        "left-invariant residual max|X^b - X|",
        optimality_residual(&FrameSection::left_invariant_s3(), C9_SAMPLES, 909).unwrap(),
        C9_RESIDUAL_TOL,
    );
    o.below(
        "one-point calibration on S3x{1}",
        onepoint_calibration_check(C9_SAMPLES, 910)
            .unwrap()
            .equality_defect,
        C9_ONEPOINT_TOL,
    );
    for kappa in Curvature::ALL {
        let defects: Vec<f64> = (0..C9_SAMPLES)
            .map(|i| {
                let mut rng = rng_for(911, i as u64);
                let x = random_unit_vec3(&mut rng);
                let y = cross(x, random_unit_vec3(&mut rng)).normalized().unwrap();
                involutivity_defect(kappa, x, y)
            })
            .collect();
        let (lo, hi) = defects
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), d| (a.min(*d), b.max(*d)));
        match kappa {
            Curvature::Spherical => o.below("involutivity defect kappa=1", hi, C9_INVOLUTIVE_TOL),
            k => o.above(
                &format!("involutivity defect kappa={}", k.as_i32()),
                lo,
                C9_NON_INVOLUTIVE_MIN,
            ),
        }
    }
    o.finish(9, "optimal vorticity on S3");
}

/// Composite Simpson with `2n` panels, independent of the library quadrature.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (2 * n) as f64;
    let mut s = f(a) + f(b);
    for k in 1..2 * n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * k as f64);
    }
    s * h / 3.0
}

#[test]
fn criterion_10_intrinsic_geometry() {
    let c = 1.0;
    let (mut area, mut circle) = (0.0f64, 0.0f64);
    for i in 0..C10_RADII {
        let r = PI * (i as f64 + 0.5) / C10_RADII as f64;
        let exact = 2.0 * PI * ell(c, r) * r.sin();
        assert!((sphere_area(c, r).unwrap() - exact).abs() <= 1e-14 * exact.max(1.0));
        area = area.max((sphere_area_quadrature(c, r, 16, 24).unwrap() - exact).abs() / exact);
        let exact = 2f64.sqrt() * PI * (ell(c, r) * r.sin()).sqrt();
        assert!((circle_length(c, r).unwrap() - exact).abs() <= 1e-14 * exact.max(1.0));
        let axis = random_unit_vec3(&mut rng_for(1010, i as u64));
        circle =
            circle.max((circle_length_quadrature(c, r, axis, 32).unwrap() - exact).abs() / exact);
    }
    let profile = IntrinsicProfile::new(c).unwrap();
    let l = profile.completion_length();
    // σ′ = √(ℓ′/2) with ℓ′ from the closed form of ℓ = (r − sin r)^{1/3}
    let speed = |r: f64| {
        let s = r - r.sin();
        if s < 1e-12 {
            (1.0 / (2.0 * 6f64.cbrt())).sqrt()
        } else {
            ((1.0 - r.cos()) / (6.0 * s.cbrt().powi(2))).sqrt()
        }
    };
    let independent = simpson(speed, 0.0, PI, 1 << 14);
    let simpson_lib = profile.sigma_oracle(PI, 1e-13).unwrap();
    let (r_star, ratio) = profile
        .divergence_witness(C10_RATIO)
        .unwrap()
        .unwrap_or((PI, 0.0));
    let r = PI - 1e-6;
    let bound = profile
        .completion_distance_bound(r, r, Vec3::E1, -Vec3::E1)
        .unwrap();
    let mut o = Outcome::new();
    o.below(
        "sphere area closed form vs quadrature (rel)",
        area,
        C10_QUADRATURE_REL,
    );
    o.below(
        "great circle closed form vs quadrature (rel)",
        circle,
        C10_QUADRATURE_REL,
    );
    o.holds(&format!("L = {l:.12} finite"), l.is_finite() && l > 0.0);
    o.below(
        "L table vs independent Simpson",
        (l - independent).abs(),
        C10_DUAL_TOL,
    );
    o.below(
        "L table vs adaptive Simpson",
        (l - simpson_lib).abs(),
        C10_DUAL_TOL,
    );
    o.above(
        &format!("area ratio at r = pi - {:.0e}", PI - r_star),
        ratio,
        C10_RATIO,
    );
    o.below("completion bound at r = s = pi - 1e-6", bound, C10_BOUND);
    o.finish(10, "intrinsic geometry");
}
