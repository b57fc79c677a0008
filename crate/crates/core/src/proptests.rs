//! Property tests for invariants that span several modules.

use core::f64::consts::PI;

use proptest::prelude::*;

use crate::algebra::{quat_exp, Vec3};
use crate::calibration::{omega_at_identity, ThreeBlade};
use crate::groups::{
    bracket_z, covering_pi, euclid_mul, spin_mul, Curvature, IsometryG, LieElementZ, SpinMotion,
};
use crate::intrinsic::{radial_speed, IntrinsicProfile};
use crate::linalg::{symmetric_eigenvalues, Vec4};
use crate::metrics::Tangent6;
use crate::screwmaps::{
    ell, pullback_metric, pullback_metric_frame, spacelike_classify, LProfile, Profile,
    ScrewRadialMap, SpacelikeClass, ThetaProfile,
};
use crate::volume::{grid_densities, perturb_map, Bump, DomainSpec, PerturbationSpec, Resolution};
use crate::vorticity::{nabla_b, vorticity_vector, FrameSection};

fn vec3(scale: f64) -> impl Strategy<Value = Vec3> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vec3> {
    vec3(1.0).prop_filter_map("too short", |v| {
        (v.norm() > 1e-2).then(|| v.normalized().unwrap())
    })
}

fn kappa() -> impl Strategy<Value = Curvature> {
    prop_oneof![
        Just(Curvature::Hyperbolic),
        Just(Curvature::Flat),
        Just(Curvature::Spherical)
    ]
}

fn motion() -> impl Strategy<Value = SpinMotion> {
    (vec3(2.0), unit(), -PI..PI)
        .prop_map(|(x, axis, t)| SpinMotion::new(x, quat_exp(axis.scale(0.5 * t))))
}

fn tangent6() -> impl Strategy<Value = Tangent6> {
    (vec3(1.0), vec3(1.0)).prop_map(|(a, b)| Tangent6 { a, b })
}

fn blade() -> impl Strategy<Value = ThreeBlade> {
    (tangent6(), tangent6(), tangent6()).prop_map(|(a, b, c)| ThreeBlade { rows: [a, b, c] })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_satisfies_jacobi(k in kappa(), a in (vec3(1.0), vec3(1.0)), b in (vec3(1.0), vec3(1.0)), c in (vec3(1.0), vec3(1.0))) {
        let (a, b, c) = (LieElementZ::new(k, a.0, a.1), LieElementZ::new(k, b.0, b.1), LieElementZ::new(k, c.0, c.1));
        let br = |p: &LieElementZ, q: &LieElementZ| bracket_z(p, q).unwrap();
        let total = br(&a, &br(&b, &c)).add(&br(&b, &br(&c, &a))).unwrap().add(&br(&c, &br(&a, &b))).unwrap();
        prop_assert!(total.x.max_abs().max(total.xi.max_abs()) < 1e-11);
    }

    #[test]
    fn covering_is_a_morphism(g in motion(), h in motion()) {
        let lhs = covering_pi(&spin_mul(&g, &h));
        let rhs = euclid_mul(&covering_pi(&g), &covering_pi(&h));
        prop_assert!(lhs.component_distance(&rhs) < 1e-10);
    }

    #[test]
    fn spherical_transvection_follows_the_great_circle(x in vec3(3.0)) {
        prop_assume!(x.norm() > 1e-6);
        let p = IsometryG::transvection(Curvature::Spherical, x).basepoint();
        let (t, u) = (x.norm(), x.normalized().unwrap());
        let expected = Vec4::from_parts(t.cos(), u.scale(t.sin()));
        prop_assert!((p - expected).max_abs() < 1e-12);
    }

    #[test]
    fn screw_map_is_odd(v in vec3(3.0)) {
        let map = ScrewRadialMap::standard(1.3);
        let prod = spin_mul(&map.eval(-v), &map.eval(v));
        prop_assert!(prod.component_distance(&SpinMotion::IDENTITY) < 1e-12);
    }

    #[test]
    fn ell_cubed_is_r_minus_sin(c in 0.2f64..3.0, r in 0.0f64..10.0) {
        let l = ell(c, r);
        prop_assert!((l * l * l - c * c * c * (r - r.sin())).abs() <= 1e-12 * (1.0 + c * c * c * r));
    }

    #[test]
    fn classifier_matches_eigenvalues(r in 0.0f64..(3.0 * PI), u in unit(), which in 0usize..3) {
        let p = [
            Profile::standard(1.0),
            Profile { l: LProfile::Ell { c: 1.0 }, theta: ThetaProfile::Distorted { amplitude: 0.2 } },
            Profile { l: LProfile::Ell { c: 2.0 }, theta: ThetaProfile::Half },
        ][which];
        let ev = symmetric_eigenvalues(&pullback_metric_frame(&ScrewRadialMap::new(p), r, u).0);
        match spacelike_classify(&p, r) {
            SpacelikeClass::Spacelike => prop_assert!(ev.iter().all(|e| *e > 0.0)),
            SpacelikeClass::NotSpacelike => prop_assert!(ev.iter().any(|e| *e <= 1e-10)),
            SpacelikeClass::Degenerate => {}
        }
    }

    #[test]
    fn pullback_does_not_depend_on_the_completion(r in 0.05f64..3.0, u in unit()) {
        let map = ScrewRadialMap::standard(1.0);
        let g = pullback_metric(&map, u.scale(r));
        let radial = u.dot(g * u);
        let f = pullback_metric_frame(&map, r, u);
        prop_assert!((radial - f.0[0][0]).abs() < 1e-12);
        let w = u.any_orthonormal();
        prop_assert!((w.dot(g * w) * r * r - f.0[1][1] * r * r).abs() < 1e-9 * (1.0 + f.0[1][1] * r * r));
    }

    #[test]
    fn omega_is_alternating_and_multilinear(b in blade(), extra in tangent6(), s in -2.0f64..2.0, t in -2.0f64..2.0, k in 0.5f64..2.0) {
        let w = omega_at_identity(k, &b);
        let swapped = ThreeBlade { rows: [b.rows[1], b.rows[0], b.rows[2]] };
        prop_assert!((omega_at_identity(k, &swapped) + w).abs() < 1e-12 * (1.0 + w.abs()));
        let cyc = ThreeBlade { rows: [b.rows[1], b.rows[2], b.rows[0]] };
        prop_assert!((omega_at_identity(k, &cyc) - w).abs() < 1e-12 * (1.0 + w.abs()));
        let mixed = ThreeBlade { rows: [b.rows[0].scale(s).add(&extra.scale(t)), b.rows[1], b.rows[2]] };
        let other = omega_at_identity(k, &ThreeBlade { rows: [extra, b.rows[1], b.rows[2]] });
        let lhs = omega_at_identity(k, &mixed);
        prop_assert!((lhs - (s * w + t * other)).abs() < 1e-11 * (1.0 + lhs.abs()));
        let repeated = ThreeBlade { rows: [b.rows[0], b.rows[0], b.rows[2]] };
        prop_assert!(omega_at_identity(k, &repeated).abs() < 1e-12);
    }

    #[test]
    fn sigma_grows_at_the_radial_speed(c in 0.3f64..3.0, r in 0.01f64..3.13) {
        let p = IntrinsicProfile::new(c).unwrap();
        let h = 1e-5;
        let d = (p.sigma(r + h).unwrap() - p.sigma(r - h).unwrap()) / (2.0 * h);
        prop_assert!((d - radial_speed(c, r).unwrap()).abs() < 1e-7);
        prop_assert!(p.sigma(r).unwrap() < p.sigma(r + 0.01).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn vorticity_is_linear_and_skew(p in vec3(1.0), x in unit(), y in unit(), s in -2.0f64..2.0) {
        let section = FrameSection::b0();
        let p = Vec4::from_parts(1.0, p);
        let (x, y) = (Vec4::from_parts(0.0, x), Vec4::from_parts(0.0, y));
        let lhs = vorticity_vector(&section, &p, &(x.scale(s) + y)).unwrap();
        let rhs = vorticity_vector(&section, &p, &x).unwrap().scale(s) + vorticity_vector(&section, &p, &y).unwrap();
        prop_assert!((lhs - rhs).max_abs() < 1e-6);
        prop_assert!(nabla_b(&section, &p, &x).unwrap().skewness_defect() < 1e-6);
    }

    #[test]
    fn small_perturbations_do_not_gain_volume(w in tangent6(), eps in -0.02f64..0.02) {
        let domain = DomainSpec::ball(PI / 2.0).with_resolution(Resolution { n_r: 12, n_cos: 8, n_phi: 10 });
        let base = ScrewRadialMap::standard(1.0);
        let psi = perturb_map(&base, &PerturbationSpec { w, bump: Bump::for_domain(&domain), amplitude: eps });
        let total = |rows: Vec<crate::volume::GridRow>| rows.iter().map(|r| r.node.weight * r.volume_density).sum::<f64>();
        let v0 = total(grid_densities(&base, &domain, 1.0).unwrap());
        let v1 = total(grid_densities(&psi, &domain, 1.0).unwrap());
        prop_assume!(v1.is_finite());
        prop_assert!(v0 - v1 >= -1e-9, "gain {}", v1 - v0);
    }
}
