use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::json;

use coslab::multipliers::Dim;
use coslab::report::{sort_reports, IdentityReport};
use coslab::starbody::ClassifyOptions;
use coslab::suites::{
    verify_multipliers_suite, verify_s2_suite, verify_starbody_suite, verify_zonal_suite,
    S2SuiteConfig,
};

use crate::config::Settings;
use crate::error::{exit, CliResult};
use crate::io::write_json;
use crate::run_report::{ReportItem, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Multipliers,
    Zonal,
    S2,
    Starbody,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Dimensions for the multiplier and zonal suites.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long)]
    pub jmax: Option<usize>,
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Tolerance of the multiplier identities and of quadrature-limited S² identities.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const MULTIPLIER_TOL: f64 = 1e-10;
pub const S2_TOL: f64 = 1e-6;
const MULTIPLIER_DIMS: [usize; 5] = [2, 3, 4, 5, 8];
const ZONAL_DIMS: [usize; 3] = [3, 4, 5];

fn dims(given: &[usize], default: &[usize]) -> CliResult<Vec<Dim>> {
    let src = if given.is_empty() { default } else { given };
    Ok(src
        .iter()
        .map(|&n| Dim::new(n))
        .collect::<coslab::Result<_>>()?)
}

/// Returns the exit status: 0 when every identity passes.
pub fn run(a: &VerifyArgs, settings: &Settings) -> CliResult<i32> {
    let start = Instant::now();
    let seed = a.seed.unwrap_or(settings.seed);
    let jmax = a.jmax.unwrap_or(settings.jmax);
    let s2 = S2SuiteConfig {
        band: a.lmax.unwrap_or(settings.lmax),
        n_theta: settings.n_theta,
        n_phi: settings.n_phi,
        tol: a.tol.unwrap_or(S2_TOL),
        seed,
        functions: S2SuiteConfig::default().functions,
    };
    let classify = ClassifyOptions {
        t_smooth: settings.smooth,
        margin: settings.margin,
        band: settings.classify_lmax,
    };
    let mult_dims = dims(&a.n, &MULTIPLIER_DIMS)?;
    let zonal_dims = dims(&a.n, &ZONAL_DIMS)?;
    let mult_tol = a.tol.unwrap_or(MULTIPLIER_TOL);
    let want = |s: Suite| a.suite == s || a.suite == Suite::All;

    let ((mult, zonal), (sphere, body)) = rayon::join(
        || {
            rayon::join(
                || {
                    want(Suite::Multipliers)
                        .then(|| verify_multipliers_suite(&mult_dims, jmax, mult_tol))
                },
                || want(Suite::Zonal).then(|| verify_zonal_suite(&zonal_dims, seed)),
            )
        },
        || {
            rayon::join(
                || want(Suite::S2).then(|| verify_s2_suite(&s2)),
                || want(Suite::Starbody).then(|| verify_starbody_suite(seed, &classify)),
            )
        },
    );
    let mut reports: Vec<IdentityReport> = Vec::new();
    reports.extend(mult.into_iter().flatten());
    reports.extend(zonal.into_iter().flatten());
    if let Some(r) = sphere {
        reports.extend(r?);
    }
    reports.extend(body.into_iter().flatten());
    sort_reports(&mut reports);

    let config = json!({
        "suite": format!("{:?}", a.suite).to_lowercase(),
        "seed": seed,
        "multipliers": { "n": mult_dims, "jmax": jmax, "tol": mult_tol },
        "zonal": { "n": zonal_dims },
        "s2": s2,
        "starbody": classify,
    });
    let report = RunReport::new(
        config,
        reports.into_iter().map(ReportItem::Identity).collect(),
        start.elapsed().as_secs_f64(),
    );
    write_json(a.out.as_deref(), &report)?;
    for r in report.results.iter() {
        if let ReportItem::Identity(r) = r {
            if !r.pass {
                eprintln!("FAIL {} {}", r.identity, r.params.sort_key());
            }
        }
    }
    Ok(if report.fail_count == 0 {
        0
    } else {
        exit::IDENTITY_FAILED
    })
}
