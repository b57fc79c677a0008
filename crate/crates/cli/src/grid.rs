//! `screwcal grid`: radial quantities tabulated as CSV.

use std::f64::consts::PI;

use clap::Args;
use screwcal_core::algebra::Vec3;
use screwcal_core::groups::Curvature;
use screwcal_core::intrinsic::{circle_length, sphere_area, IntrinsicProfile};
use screwcal_core::linalg::{symmetric_eigenvalues, Vec4};
use screwcal_core::screwmaps::{ell, ell_prime, pullback_metric_frame, Profile, ScrewRadialMap};
use screwcal_core::vorticity::{screw_point, vorticity_h, FrameSection, SectionKind};

use crate::{emit, CliError, Common};

pub const QUANTITIES: [&str; 8] = [
    "ell",
    "ell-prime",
    "sigma",
    "circle-length",
    "sphere-area",
    "area-ratio",
    "pullback-eigs",
    "vorticity-h",
];

#[derive(Args, Debug)]
pub struct GridArgs {
    pub quantity: String,
    /// `start:end:count`, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Profile for `pullback-eigs`, e.g. `ell:c=1,theta:half`.
    #[arg(long)]
    pub profile: Option<String>,
    /// Section for `vorticity-h`; defaults to `screw:c=<c>`.
    #[arg(long)]
    pub section: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

/// `count` equally spaced values from `start` to `end`.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("range `{spec}`: {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad("expected start:end:count"));
    };
    let a: f64 = a.parse().map_err(|_| bad("start is not a number"))?;
    let b: f64 = b.parse().map_err(|_| bad("end is not a number"))?;
    let n: usize = n
        .parse()
        .map_err(|_| bad("count is not a non-negative integer"))?;
    if n == 0 || !a.is_finite() || !b.is_finite() || b < a || (n > 1 && a == b) {
        return Err(bad("empty range"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn in_ball(radii: &[f64], open_low: bool, open_high: bool) -> Result<(), CliError> {
    for &r in radii {
        let low = if open_low { r > 0.0 } else { r >= 0.0 };
        let high = if open_high { r < PI } else { r <= PI };
        if !(low && high) {
            return Err(CliError::Config(format!(
                "radius {r} is outside the ball of radius π for this quantity"
            )));
        }
    }
    Ok(())
}

/// Point and radial unit direction at radius `r` along `e₃`, in the model
/// space of `section`.
fn radial_probe(section: &FrameSection, r: f64) -> (Vec4, Vec4) {
    let u = Vec3::E3;
    match (section.kind(), section.kappa()) {
        (SectionKind::FromScrew { c }, _) => (screw_point(*c, r, u), Vec4::from_parts(0.0, u)),
        (_, Curvature::Spherical) => (
            Vec4::from_parts(r.cos(), u.scale(r.sin())),
            Vec4::from_parts(-r.sin(), u.scale(r.cos())),
        ),
        (_, Curvature::Hyperbolic) => (
            Vec4::from_parts(r.cosh(), u.scale(r.sinh())),
            Vec4::from_parts(r.sinh(), u.scale(r.cosh())),
        ),
        (_, Curvature::Flat) => (Vec4::from_parts(1.0, u.scale(r)), Vec4::from_parts(0.0, u)),
    }
}

fn table(args: &GridArgs, radii: &[f64]) -> Result<(Vec<&'static str>, Vec<Vec<f64>>), CliError> {
    let c = args.c;
    if !(c > 0.0 && c.is_finite()) {
        return Err(CliError::Config(format!("c must be positive, got {c}")));
    }
    let single = |f: &dyn Fn(f64) -> Result<f64, CliError>| {
        radii
            .iter()
            .map(|&r| f(r).map(|v| vec![r, v]))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(match args.quantity.as_str() {
        "ell" => (vec!["r", "ell"], single(&|r| Ok(ell(c, r)))?),
        "ell-prime" => (vec!["r", "ell_prime"], single(&|r| Ok(ell_prime(c, r)))?),
        "sigma" => {
            in_ball(radii, false, false)?;
            let p = IntrinsicProfile::new(c).map_err(config)?;
            (vec!["r", "sigma"], single(&|r| p.sigma(r).map_err(config))?)
        }
        "circle-length" => {
            in_ball(radii, false, false)?;
            (
                vec!["r", "circle_length"],
                single(&|r| circle_length(c, r).map_err(config))?,
            )
        }
        "sphere-area" => {
            in_ball(radii, false, false)?;
            (
                vec!["r", "sphere_area"],
                single(&|r| sphere_area(c, r).map_err(config))?,
            )
        }
        "area-ratio" => {
            in_ball(radii, true, true)?;
            let p = IntrinsicProfile::new(c).map_err(config)?;
            (
                vec!["r", "area_ratio"],
                single(&|r| p.area_ratio(r).map_err(config))?,
            )
        }
        "pullback-eigs" => {
            let profile = match &args.profile {
                Some(name) => Profile::parse(name).map_err(config)?,
                None => Profile::standard(c),
            };
            let map = ScrewRadialMap::new(profile);
            let rows = radii
                .iter()
                .map(|&r| {
                    let ev = symmetric_eigenvalues(&pullback_metric_frame(&map, r, Vec3::E3).0);
                    vec![r, ev[0], ev[1], ev[2]]
                })
                .collect();
            (vec!["r", "eig_min", "eig_mid", "eig_max"], rows)
        }
        "vorticity-h" => {
            let name = args
                .section
                .clone()
                .unwrap_or_else(|| format!("screw:c={c}"));
            let section = FrameSection::parse(&name).map_err(config)?;
            let rows = radii
                .iter()
                .map(|&r| {
                    let (p, x) = radial_probe(&section, r);
                    vorticity_h(&section, &p, &x)
                        .map(|h| vec![r, h])
                        .map_err(|e| CliError::Failed(format!("r = {r}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (vec!["r", "h"], rows)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown quantity `{other}`; expected one of {}",
                QUANTITIES.join(", ")
            )))
        }
    })
}

pub fn run(args: &GridArgs) -> Result<(), CliError> {
    let radii = parse_range(&args.r)?;
    let (header, rows) = table(args, &radii)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(e.to_string());
    writer.write_record(&header).map_err(fail)?;
    for row in rows {
        writer
            .write_record(row.iter().map(|v| fmt(*v)))
            .map_err(fail)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    emit(
        args.common.out.as_ref(),
        &String::from_utf8(bytes).expect("CSV is ASCII"),
    )
}
