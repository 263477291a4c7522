use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use coslab::multipliers::Operator;
use coslab::s2::direct::{cosine_direct, funk_direct, lines_alpha_coeffs, poisson_direct};
use coslab::s2::grassmann::{dual_radon, ri_alpha_direct};
use coslab::s2::spectral::{apply_spectral, apply_spectral_grid};
use coslab::s2::{analyze, GrassmannFunctionS2, GrassmannKind, GridFunction, HarmonicCoeffs};
use coslab::zonal::{zonal_analyze, zonal_apply, zonal_cosine_direct, zonal_rule, ZonalFunction};

use crate::error::{CliError, CliResult};
use crate::io::{decode, read_json, write_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Cosine,
    Funk,
    Qalpha,
    Poisson,
    Radon,
    Dualradon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Direct,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long, value_enum)]
    pub op: Op,
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    pub method: Method,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Radon index (1 = lines, 2 = planes).
    #[arg(long, default_value_t = 2)]
    pub i: usize,
    /// Band limit of the analysis; defaults to what the input resolves.
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Input representations, recognized by their distinguishing keys.
enum Repr {
    Grid(GridFunction),
    Coeffs(HarmonicCoeffs),
    Zonal(ZonalFunction),
    Grassmann(GrassmannFunctionS2),
}

impl Repr {
    fn detect(v: Value) -> CliResult<Repr> {
        let has = |k: &str| v.get(k).is_some();
        if has("repr_kind") {
            Err(CliError::representation(
                "star-body files are handled by `body`, not `apply`",
            ))
        } else if has("kind") {
            Ok(Repr::Grassmann(decode(v, "Grassmannian function")?))
        } else if has("basis") {
            Ok(Repr::Zonal(decode(v, "zonal function")?))
        } else if has("ordering") {
            Ok(Repr::Coeffs(decode(v, "harmonic coefficient set")?))
        } else if has("values") {
            Ok(Repr::Grid(decode(v, "grid function")?))
        } else {
            Err(CliError::representation(
                "unrecognized input representation",
            ))
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Repr::Grid(_) => "grid function",
            Repr::Coeffs(_) => "harmonic coefficients",
            Repr::Zonal(_) => "zonal function",
            Repr::Grassmann(_) => "Grassmannian function",
        }
    }
}

fn need(v: Option<f64>, flag: &str, op: Op) -> CliResult<f64> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required for op {op:?}")))
}

fn diagonal(a: &ApplyArgs) -> CliResult<Operator> {
    Ok(match a.op {
        Op::Cosine => Operator::Cosine {
            alpha: need(a.alpha, "alpha", a.op)?,
        },
        Op::Qalpha => Operator::Sine {
            alpha: need(a.alpha, "alpha", a.op)?,
        },
        Op::Funk => Operator::Funk,
        Op::Poisson => Operator::Poisson {
            t: need(a.t, "t", a.op)?,
        },
        Op::Radon | Op::Dualradon => unreachable!("not a diagonal operator"),
    })
}

fn mismatch(a: &ApplyArgs, r: &Repr) -> CliError {
    CliError::representation(format!(
        "op {:?} with method {:?} does not accept a {}",
        a.op,
        a.method,
        r.name()
    ))
}

fn grid_band(a: &ApplyArgs, g: &GridFunction) -> usize {
    a.lmax.unwrap_or_else(|| g.grid.max_band())
}

fn with_meta(value: impl Serialize, meta: Value) -> CliResult<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::usage(e.to_string()))?;
    if let Value::Object(map) = &mut v {
        map.insert("meta".to_string(), meta);
    }
    Ok(v)
}

fn zonal_direct_cosine(f: &ZonalFunction, alpha: f64) -> coslab::Result<ZonalFunction> {
    let band = f.degree();
    let rule = zonal_rule(f.n, band + 1)?;
    let samples = rule
        .nodes
        .iter()
        .map(|&t0| zonal_cosine_direct(f.n, |s| f.eval(s), alpha, t0, band))
        .collect::<coslab::Result<Vec<f64>>>()?;
    zonal_analyze(f.n, &rule, &samples, band)
}

pub fn run(a: &ApplyArgs) -> CliResult<()> {
    let input = Repr::detect(read_json(&a.input)?)?;
    let meta = json!({
        "op": a.op,
        "method": a.method,
        "params": { "alpha": a.alpha, "t": a.t, "i": (matches!(a.op, Op::Radon)).then_some(a.i), "lmax": a.lmax },
    });
    let out = match (a.op, a.method, &input) {
        (Op::Radon, method, Repr::Grid(f)) => {
            let band = grid_band(a, f);
            let kind = GrassmannKind::from_index(a.i)?;
            let phi = match (method, a.alpha) {
                (Method::Direct, Some(alpha)) => ri_alpha_direct(f, a.i, alpha, band)?,
                (Method::Direct, None) => match kind {
                    GrassmannKind::Lines => GrassmannFunctionS2::new(kind, f.even_part())?,
                    GrassmannKind::Planes => {
                        GrassmannFunctionS2::new(kind, funk_direct(f, band)?.even_part())?
                    }
                },
                (Method::Spectral, alpha) => {
                    let op = match (kind, alpha) {
                        (GrassmannKind::Lines, Some(alpha)) => Some(Operator::Sine { alpha }),
                        (GrassmannKind::Planes, Some(alpha)) => Some(Operator::Cosine { alpha }),
                        (GrassmannKind::Planes, None) => Some(Operator::Funk),
                        (GrassmannKind::Lines, None) => None,
                    };
                    let repr = match op {
                        Some(op) => apply_spectral_grid(f, &op, band)?,
                        None => f.clone(),
                    };
                    GrassmannFunctionS2::new(kind, repr.even_part())?
                }
            };
            with_meta(&phi, meta)?
        }
        (Op::Dualradon, method, Repr::Grassmann(phi)) => {
            let band = grid_band(a, &phi.repr);
            let g = match (method, phi.kind) {
                (Method::Direct, _) | (_, GrassmannKind::Lines) => dual_radon(phi, band)?,
                (Method::Spectral, GrassmannKind::Planes) => {
                    apply_spectral_grid(&phi.repr, &Operator::Funk, band)?
                }
            };
            with_meta(&g, meta)?
        }
        (Op::Radon | Op::Dualradon, _, r) => return Err(mismatch(a, r)),
        (_, Method::Spectral, Repr::Grid(f)) => with_meta(
            apply_spectral_grid(f, &diagonal(a)?, grid_band(a, f))?,
            meta,
        )?,
        (_, Method::Spectral, Repr::Coeffs(c)) => {
            let c = match a.lmax {
                Some(l) => c.with_band(l),
                None => c.clone(),
            };
            with_meta(apply_spectral(&c, &diagonal(a)?)?, meta)?
        }
        (_, Method::Spectral, Repr::Zonal(z)) => with_meta(zonal_apply(z, &diagonal(a)?)?, meta)?,
        (Op::Cosine, Method::Direct, Repr::Grid(f)) => with_meta(
            cosine_direct(f, need(a.alpha, "alpha", a.op)?, grid_band(a, f))?,
            meta,
        )?,
        (Op::Cosine, Method::Direct, Repr::Zonal(z)) => {
            with_meta(zonal_direct_cosine(z, need(a.alpha, "alpha", a.op)?)?, meta)?
        }
        (Op::Funk, Method::Direct, Repr::Grid(f)) => {
            with_meta(funk_direct(f, grid_band(a, f))?, meta)?
        }
        (Op::Poisson, Method::Direct, Repr::Grid(f)) => with_meta(
            poisson_direct(f, need(a.t, "t", a.op)?, grid_band(a, f))?,
            meta,
        )?,
        (Op::Qalpha, Method::Direct, Repr::Grid(f)) => {
            let alpha = need(a.alpha, "alpha", a.op)?;
            coslab::zonal::check_window(alpha)?;
            with_meta(
                lines_alpha_coeffs(&analyze(f, grid_band(a, f))?, &f.grid, alpha)?,
                meta,
            )?
        }
        (_, _, r) => return Err(mismatch(a, r)),
    };
    write_json(a.output.as_deref(), &out)
}
