//! `screwcal volume`: the perturbation experiment as a JSON report.

use clap::Args;
use screwcal_core::volume::{
    default_directions, maximization_experiment, DomainKind, DomainSpec, Resolution, VolumeReport,
    DEFAULT_AMPLITUDES, DEFAULT_RESOLUTION, DEFAULT_SHELL_DELTA,
};
use serde::Serialize;

use crate::{emit, to_json, CliError, Common};

#[derive(Args, Debug)]
pub struct VolumeArgs {
    /// `ball:<r0>` or `shell:<k>` for the shell `(2kπ + δ, (2k+1)π − δ)`.
    #[arg(long)]
    pub domain: Option<String>,
    /// Shell margin `δ`.
    #[arg(long, default_value_t = DEFAULT_SHELL_DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Comma-separated amplitudes; must include 0.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub amplitudes: Option<Vec<f64>>,
    /// Grid sizes `n_r,n_cos,n_phi`.
    #[arg(long, value_delimiter = ',')]
    pub resolution: Option<Vec<usize>>,
    #[command(flatten)]
    pub common: Common,
}

fn parse_domain(spec: &str, delta: f64) -> Result<DomainSpec, CliError> {
    let bad = || CliError::Config(format!("domain `{spec}` is not ball:<r0> or shell:<k>"));
    let (kind, value) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "ball" => {
            let r0: f64 = value.parse().map_err(|_| bad())?;
            Ok(DomainSpec::ball(r0))
        }
        "shell" => {
            let k: u32 = value.parse().map_err(|_| bad())?;
            if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_2) {
                return Err(CliError::Config(format!(
                    "shell margin {delta} must lie in (0, π/2)"
                )));
            }
            Ok(DomainSpec::shell(k, delta))
        }
        _ => Err(bad()),
    }
}

#[derive(Serialize)]
struct DomainJson {
    kind: &'static str,
    r_lo: f64,
    r_hi: f64,
    resolution: [usize; 3],
}

#[derive(Serialize)]
struct CompetitorJson {
    direction: usize,
    amplitude: f64,
    spacelike: bool,
    volume: Option<f64>,
    omega: f64,
}

#[derive(Serialize)]
struct FitJson {
    direction: usize,
    linear: f64,
    quadratic: f64,
    quadratic_only: f64,
    r_squared: f64,
}

#[derive(Serialize)]
struct VolumeJson {
    command: &'static str,
    c: f64,
    seed: u64,
    domain: DomainJson,
    directions: Vec<[f64; 6]>,
    amplitudes: Vec<f64>,
    base_volume: f64,
    base_volume_error: f64,
    base_omega: f64,
    base_omega_error: f64,
    violations: usize,
    max_relative_gain: f64,
    omega_spread: f64,
    competitors: Vec<CompetitorJson>,
    fits: Vec<FitJson>,
    pass: bool,
}

fn to_report_json(report: &VolumeReport, seed: u64) -> VolumeJson {
    let (r_lo, r_hi) = report.domain.radial_range();
    let kind = match report.domain.kind {
        DomainKind::Ball { .. } => "ball",
        DomainKind::Shell { .. } => "shell",
        DomainKind::Patch { .. } => "patch",
    };
    let res = report.domain.resolution;
    VolumeJson {
        command: "volume",
        c: report.c,
        seed,
        domain: DomainJson {
            kind,
            r_lo,
            r_hi,
            resolution: [res.n_r, res.n_cos, res.n_phi],
        },
        directions: report
            .directions
            .iter()
            .map(|w| [w.a.x, w.a.y, w.a.z, w.b.x, w.b.y, w.b.z])
            .collect(),
        amplitudes: report.amplitudes.clone(),
        base_volume: report.base_volume.value,
        base_volume_error: report.base_volume.error,
        base_omega: report.base_omega.value,
        base_omega_error: report.base_omega.error,
        violations: report.violations,
        max_relative_gain: report.max_relative_gain(),
        omega_spread: report.omega_spread,
        competitors: report
            .competitors
            .iter()
            .map(|k| CompetitorJson {
                direction: k.direction,
                amplitude: k.amplitude,
                spacelike: k.spacelike,
                volume: k.volume,
                omega: k.omega,
            })
            .collect(),
        fits: report
            .fits
            .iter()
            .map(|f| FitJson {
                direction: f.direction,
                linear: f.linear,
                quadratic: f.quadratic,
                quadratic_only: f.quadratic_only,
                r_squared: f.r_squared,
            })
            .collect(),
        pass: report.violations == 0,
    }
}

/// Runs the experiment; `Ok(true)` iff no space-like competitor gains volume.
pub fn run(args: &VolumeArgs) -> Result<bool, CliError> {
    let spec = args
        .domain
        .as_deref()
        .ok_or_else(|| CliError::Config("--domain is required (ball:<r0> or shell:<k>)".into()))?;
    let mut domain = parse_domain(spec, args.delta)?;
    let resolution = match args.resolution.as_deref() {
        None => DEFAULT_RESOLUTION,
        Some([n_r, n_cos, n_phi]) if *n_r > 0 && *n_cos > 0 && *n_phi > 0 => Resolution {
            n_r: *n_r,
            n_cos: *n_cos,
            n_phi: *n_phi,
        },
        Some(_) => {
            return Err(CliError::Config(
                "--resolution needs three positive integers n_r,n_cos,n_phi".into(),
            ))
        }
    };
    domain = domain.with_resolution(resolution);
    let amplitudes = args
        .amplitudes
        .clone()
        .unwrap_or_else(|| DEFAULT_AMPLITUDES.to_vec());
    let report = maximization_experiment(args.c, &domain, &default_directions(), &amplitudes)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let json = to_report_json(&report, args.common.seed);
    emit(args.common.out.as_ref(), &to_json(&json))?;
    Ok(json.pass)
}
