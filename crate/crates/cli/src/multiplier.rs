use std::fmt::Write;

use clap::{Args, ValueEnum};
use serde_json::json;

use coslab::multipliers::{Dim, Operator};

use crate::error::{CliError, CliResult};
use crate::io::write_text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Generalized cosine transform.
    M,
    /// Generalized sine transform.
    Q,
    Qplus,
    Qminus,
    /// Smoothing operator `A_{α,β}`.
    A,
    Funk,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub jmax: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn need(v: Option<f64>, flag: &str, family: FamilyArg) -> CliResult<f64> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required for family {family:?}")))
}

pub fn operator(a: &MultiplierArgs) -> CliResult<Operator> {
    let f = a.family;
    Ok(match f {
        FamilyArg::M => Operator::Cosine {
            alpha: need(a.alpha, "alpha", f)?,
        },
        FamilyArg::Q => Operator::Sine {
            alpha: need(a.alpha, "alpha", f)?,
        },
        FamilyArg::Qplus => Operator::QPlus {
            mu: need(a.mu, "mu", f)?,
            nu: need(a.nu, "nu", f)?,
        },
        FamilyArg::Qminus => Operator::QMinus {
            mu: need(a.mu, "mu", f)?,
            nu: need(a.nu, "nu", f)?,
        },
        FamilyArg::A => Operator::Smoothing {
            alpha: need(a.alpha, "alpha", f)?,
            beta: need(a.beta, "beta", f)?,
        },
        FamilyArg::Funk => Operator::Funk,
        FamilyArg::Poisson => Operator::Poisson {
            t: need(a.t, "t", f)?,
        },
    })
}

pub fn run(a: &MultiplierArgs) -> CliResult<()> {
    let n = Dim::new(a.n)?;
    let op = operator(a)?;
    let values = op.multipliers(n, a.jmax)?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("j,value\n");
            for (j, v) in values.iter().enumerate() {
                writeln!(s, "{j},{v}").expect("writing to a String cannot fail");
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .enumerate()
                .map(|(j, v)| json!({ "j": j, "value": v }))
                .collect();
            let doc = json!({ "n": a.n, "operator": op, "rows": rows });
            let mut s =
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::usage(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    write_text(None, &text)
}
