use std::fmt::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use coslab::multipliers::{excluded, Dim, Family};
use coslab::starbody::{
    classify_k_alpha, i_intersection_body, i_intersection_pair_check, intersection_body, make_body,
    BodyRepr, ClassVerdict, ClassifyOptions, Membership, Resolution, Shape, StarBody,
};
use coslab::suites::alpha_sweep;

use crate::config::Settings;
use crate::error::{exit, CliError, CliResult};
use crate::io::{read_json, write_json, write_text};
use crate::run_report::{ReportItem, RunReport};

#[derive(Debug, Subcommand)]
pub enum BodyCmd {
    /// Build a body from a closed-form radial function.
    Make(MakeArgs),
    /// Intersection body, or `i`-intersection body with `--i` (n = 3).
    Intersect(IntersectArgs),
    /// Membership in the classes K_{α,n}, for one α or a sweep.
    Classify(ClassifyArgs),
    /// Check the i-intersection relation between K and L (n = 3).
    PairCheck(PairArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Ball,
    Ellipsoid,
    LpBall,
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub axes: Vec<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["alpha_min", "alpha_max"])]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "alpha_max")]
    pub alpha_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "alpha_min")]
    pub alpha_max: Option<f64>,
    /// Number of α values in the sweep, end points included.
    #[arg(long, default_value_t = 59)]
    pub steps: usize,
    #[arg(long)]
    pub smooth: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub lmax: Option<usize>,
    /// CSV summary (alpha, min_value, verdict).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub k: PathBuf,
    #[arg(long)]
    pub l: PathBuf,
    #[arg(long)]
    pub i: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_body(path: &std::path::Path) -> CliResult<StarBody> {
    Ok(StarBody::from_json(read_json(path)?)?)
}

/// Band that the body's representation resolves.
fn natural_band(b: &StarBody) -> usize {
    match &b.repr {
        BodyRepr::Grid(g) => g.grid.max_band(),
        BodyRepr::Zonal(z) => z.degree(),
    }
}

fn make(a: &MakeArgs, settings: &Settings) -> CliResult<()> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| CliError::usage(format!("--{flag} is required")))
    };
    let shape = match a.shape {
        ShapeArg::Ball => Shape::Ball { r: need(a.r, "r")? },
        ShapeArg::Ellipsoid => Shape::Ellipsoid {
            axes: a.axes.clone(),
        },
        ShapeArg::LpBall => Shape::LpBall { p: need(a.p, "p")? },
    };
    let res = Resolution {
        n_theta: settings.n_theta,
        n_phi: settings.n_phi,
        zonal_band: settings.zonal_band,
    };
    let body = make_body(Dim::new(a.n)?, &shape, &res)?;
    write_json(a.out.as_deref(), &body)
}

fn intersect(a: &IntersectArgs) -> CliResult<()> {
    let l = load_body(&a.input)?;
    let band = a.lmax.unwrap_or_else(|| natural_band(&l));
    let k = match a.i {
        None => intersection_body(&l, band)?,
        Some(i) => i_intersection_body(&l, i, band)?,
    };
    write_json(a.out.as_deref(), &k)
}

fn verdict_name(m: Membership) -> &'static str {
    match m {
        Membership::Yes => "yes",
        Membership::No => "no",
        Membership::Inconclusive => "inconclusive",
    }
}

fn classify(a: &ClassifyArgs, settings: &Settings) -> CliResult<i32> {
    let start = Instant::now();
    let k = load_body(&a.input)?;
    let opts = ClassifyOptions {
        t_smooth: a.smooth.unwrap_or(settings.smooth),
        margin: a.margin.unwrap_or(settings.margin),
        band: a.lmax.unwrap_or(settings.classify_lmax),
    };
    let requested = match (a.alpha, a.alpha_min, a.alpha_max) {
        (Some(alpha), _, _) => vec![alpha],
        (None, Some(lo), Some(hi)) => alpha_sweep(lo, hi, a.steps),
        _ => {
            return Err(CliError::usage(
                "give --alpha or both --alpha-min and --alpha-max",
            ))
        }
    };
    // A single excluded α is an error; sweeps skip excluded rows.
    let alphas: Vec<f64> = if requested.len() == 1 {
        requested.clone()
    } else {
        requested
            .iter()
            .copied()
            .filter(|&x| !excluded(k.n, x, Family::StarClass))
            .collect()
    };
    k.ensure_symmetric(opts.band)?;
    let verdicts: Vec<ClassVerdict> = alphas
        .par_iter()
        .map(|&alpha| classify_k_alpha(&k, alpha, &opts))
        .collect::<coslab::Result<_>>()?;
    if let Some(path) = &a.csv {
        let mut s = String::from("alpha,min_value,verdict\n");
        for v in &verdicts {
            writeln!(s, "{},{},{}", v.alpha, v.min_value, verdict_name(v.member))
                .expect("writing to a String cannot fail");
        }
        write_text(Some(path), &s)?;
    }
    let config = json!({
        "body": k.meta,
        "n": k.n,
        "classify": opts,
        "alphas_requested": requested.len(),
        "alphas_skipped": requested.len() - alphas.len(),
    });
    let report = RunReport::new(
        config,
        verdicts.into_iter().map(ReportItem::Verdict).collect(),
        start.elapsed().as_secs_f64(),
    );
    write_json(a.out.as_deref(), &report)?;
    Ok(0)
}

fn pair_check(a: &PairArgs) -> CliResult<i32> {
    let start = Instant::now();
    let k = load_body(&a.k)?;
    let l = load_body(&a.l)?;
    let band = a
        .lmax
        .unwrap_or_else(|| natural_band(&k).min(natural_band(&l)));
    let r = i_intersection_pair_check(&k, &l, a.i, band, a.tol)?;
    let pass = r.pass;
    let config = json!({ "i": a.i, "tol": a.tol, "band": band, "k": k.meta, "l": l.meta });
    let report = RunReport::new(
        config,
        vec![ReportItem::Identity(r)],
        start.elapsed().as_secs_f64(),
    );
    write_json(a.out.as_deref(), &report)?;
    Ok(if pass { 0 } else { exit::IDENTITY_FAILED })
}

pub fn run(cmd: &BodyCmd, settings: &Settings) -> CliResult<i32> {
    match cmd {
        BodyCmd::Make(a) => make(a, settings).map(|_| 0),
        BodyCmd::Intersect(a) => intersect(a).map(|_| 0),
        BodyCmd::Classify(a) => classify(a, settings),
        BodyCmd::PairCheck(a) => pair_check(a),
    }
}
