//! Acceptance criteria for coslab, each evaluated to a pass/fail line.

use std::time::{Duration, Instant};

use coslab::multipliers::{check_identities, m_mult, Dim, Operator};
use coslab::report::IdentityReport;
use coslab::s2::direct::cosine_direct_coeffs;
use coslab::s2::grid::S2Grid;
use coslab::s2::harmonics::synthesize;
use coslab::s2::spectral::apply_spectral;
use coslab::starbody::ClassifyOptions;
use coslab::suites::{
    multiplier_alpha_grid, verify_s2_suite, verify_starbody_suite, verify_zonal_suite,
    S2SuiteConfig,
};
use coslab::testfns::{random_coeffs, random_zonal};
use coslab::zonal::{zonal_apply, zonal_cosine_direct};

const DIMS: [usize; 5] = [2, 3, 4, 5, 8];
const SEED: u64 = 7;

const MULT_TOL: f64 = 1e-10;
const ASYMPTOTIC_BAND: (f64, f64) = (0.98, 1.02);
const CROSS_ENGINE_TOL: f64 = 1e-6;
const SPECTRAL_TOL: f64 = 1e-8;
const QUADRATURE_TOL: f64 = 1e-6;
const BALL_VALUE_TOL: f64 = 1e-10;
const IB_BALL_TOL: f64 = 1e-12;
const PAIR_TOL: f64 = 1e-6;
const CHAIN_TOL: f64 = 1e-8;
const POSITIVITY_TOL: f64 = 1e-8;

pub struct Line {
    pub id: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn d(n: usize) -> Dim {
    Dim::new(n).expect("valid dimension")
}

fn worst(reports: &[&IdentityReport]) -> f64 {
    reports
        .iter()
        .map(|r| r.max_abs_err.min(r.max_rel_err))
        .fold(0.0, f64::max)
}

/// Criterion from suite reports: every named report present, passing, and
/// run at a tolerance no looser than `tol`.
fn from_reports(
    id: &'static str,
    all: &[IdentityReport],
    names: &[&str],
    tol: f64,
    extra: &str,
) -> Line {
    let picked: Vec<&IdentityReport> = all
        .iter()
        .filter(|r| names.contains(&r.identity.as_str()))
        .collect();
    let present = names
        .iter()
        .all(|n| picked.iter().any(|r| r.identity == *n));
    let failing: Vec<String> = picked
        .iter()
        .filter(|r| !r.pass || r.tolerance > tol)
        .map(|r| {
            let n = r.params.n.map(|n| format!(" n={n}")).unwrap_or_default();
            let alpha = r
                .params
                .alpha
                .map(|a| format!(" alpha={a}"))
                .unwrap_or_default();
            format!(
                "{}{n}{alpha} err {:.3e}",
                r.identity,
                r.max_abs_err.min(r.max_rel_err)
            )
        })
        .collect();
    let mut detail = format!(
        "{} reports, worst {:.3e} vs tol {tol:e}",
        picked.len(),
        worst(&picked)
    );
    if !present {
        detail.push_str("; missing reports");
    }
    if !failing.is_empty() {
        detail.push_str(&format!("; failing: {}", failing.join(" | ")));
    }
    if !extra.is_empty() {
        detail.push_str("; ");
        detail.push_str(extra);
    }
    Line {
        id,
        pass: present && failing.is_empty() && !picked.is_empty(),
        detail,
    }
}

fn multiplier_criteria(lines: &mut Vec<Line>) {
    let grid = multiplier_alpha_grid();
    let start = Instant::now();
    let reports: Vec<IdentityReport> = DIMS
        .iter()
        .flat_map(|&n| check_identities(d(n), 200, &grid, MULT_TOL))
        .collect();
    let elapsed = start.elapsed();
    let skipped: usize = reports
        .iter()
        .filter(|r| r.identity == "cosine_inversion")
        .map(|r| r.skipped)
        .sum();
    let mut inv = from_reports(
        "1 inversion",
        &reports,
        &["cosine_inversion"],
        MULT_TOL,
        &format!(
            "{} alphas, {skipped} skipped, {elapsed:.2?} for the full identity set",
            grid.len()
        ),
    );
    inv.pass &= grid.len() == 40 && skipped == 0 && elapsed < Duration::from_secs(1);
    lines.push(inv);
    lines.push(from_reports(
        "2 semigroup",
        &reports,
        &["cosine_semigroup"],
        MULT_TOL,
        "",
    ));

    let grid20: Vec<f64> = (0..20).map(|k| -5.7 + 0.6 * k as f64).collect();
    let fact: Vec<IdentityReport> = DIMS
        .iter()
        .flat_map(|&n| check_identities(d(n), 100, &grid20, MULT_TOL))
        .collect();
    lines.push(from_reports(
        "3a factorization m = m a",
        &fact,
        &["smoothing_factorization"],
        MULT_TOL,
        "",
    ));
    let shifted = worst(
        &fact
            .iter()
            .filter(|r| r.identity == "smoothing_poisson_factorization_shifted")
            .collect::<Vec<_>>(),
    );
    lines.push(from_reports(
        "3b factorization a = q+ q-",
        &fact,
        &["smoothing_poisson_factorization"],
        MULT_TOL,
        &format!("with the plus factor at nu + 1 the worst error is {shifted:.3e}"),
    ));

    let n = d(3);
    let mut worst_dev: f64 = 0.0;
    let mut values = Vec::new();
    for alpha in [-1.0, 0.0, 0.5, 2.0] {
        let v = m_mult(n, 200, alpha).expect("admissible").abs() * 100f64.powf(alpha + 0.5);
        worst_dev = worst_dev.max((v - 1.0).abs());
        values.push(format!("{alpha}: {v:.5}"));
    }
    let all_in = values.len() == 4 && worst_dev <= ASYMPTOTIC_BAND.1 - 1.0;
    lines.push(Line {
        id: "4 asymptotics",
        pass: all_in,
        detail: format!(
            "j = 200, n = 3, scaled |m| {{{}}} in [{}, {}]",
            values.join(", "),
            ASYMPTOTIC_BAND.0,
            ASYMPTOTIC_BAND.1
        ),
    });
}

fn cross_engine(lines: &mut Vec<Line>) {
    let start = Instant::now();
    let alphas = [0.5, 1.5, 2.0, 2.5];
    let band = 16;
    let result = (|| -> coslab::Result<(f64, f64)> {
        let grid = S2Grid::new(64, 128)?;
        let c = random_coeffs(band, SEED, false);
        let mut s2: f64 = 0.0;
        for alpha in alphas {
            let direct = cosine_direct_coeffs(&c, &grid, alpha)?;
            let spectral = synthesize(&apply_spectral(&c, &Operator::Cosine { alpha })?, &grid)?;
            s2 = s2.max(direct.max_diff(&spectral)?);
        }
        let mut zonal: f64 = 0.0;
        for n in [3, 4, 5] {
            let f = random_zonal(d(n), band, SEED, false);
            for alpha in alphas {
                let g = zonal_apply(&f, &Operator::Cosine { alpha })?;
                for k in 0..=20 {
                    let t0 = -1.0 + 0.1 * k as f64;
                    let direct = zonal_cosine_direct(d(n), |t| f.eval(t), alpha, t0, band)?;
                    zonal = zonal.max((direct - g.eval(t0)).abs());
                }
            }
        }
        Ok((s2, zonal))
    })();
    let elapsed = start.elapsed();
    lines.push(match result {
        Ok((s2, zonal)) => Line {
            id: "5 cross-engine M^alpha",
            pass: s2 <= CROSS_ENGINE_TOL && zonal <= CROSS_ENGINE_TOL && elapsed < Duration::from_secs(30),
            detail: format!("S2 L=16 64x128 max {s2:.3e}, zonal n=3,4,5 max {zonal:.3e}, tol {CROSS_ENGINE_TOL:e}, {elapsed:.2?}"),
        },
        Err(e) => Line {
            id: "5 cross-engine M^alpha",
            pass: false,
            detail: e.to_string(),
        },
    });
}

/// Evaluates every criterion in order.
pub fn evaluate() -> Vec<Line> {
    let mut lines = Vec::new();
    multiplier_criteria(&mut lines);
    cross_engine(&mut lines);

    let cfg = S2SuiteConfig {
        seed: SEED,
        ..S2SuiteConfig::default()
    };
    let s2 = verify_s2_suite(&cfg).unwrap_or_else(|e| {
        eprintln!("S2 suite could not run: {e}");
        Vec::new()
    });
    lines.push(from_reports(
        "6 funk factorization",
        &s2,
        &["funk_factorization"],
        SPECTRAL_TOL,
        "",
    ));
    lines.push(from_reports(
        "7a funk inversion, spectral",
        &s2,
        &["funk_inversion_spectral"],
        SPECTRAL_TOL,
        "",
    ));
    lines.push(from_reports(
        "7b funk inversion, quadrature",
        &s2,
        &["funk_inversion_quadrature"],
        QUADRATURE_TOL,
        "",
    ));
    lines.push(from_reports(
        "8 radon-cosine chain",
        &s2,
        &[
            "radon_cosine_link",
            "radon_cosine_orthogonal",
            "dual_cosine_orthogonal",
        ],
        QUADRATURE_TOL,
        "",
    ));
    lines.push(from_reports(
        "9a right-inverse forms",
        &s2,
        &["right_inverse_forms_agree"],
        SPECTRAL_TOL,
        "",
    ));
    lines.push(from_reports(
        "9b right inverse under R2*",
        &s2,
        &["right_inverse_dual_radon"],
        QUADRATURE_TOL,
        "",
    ));
    let lambda2 = worst(
        &s2.iter()
            .filter(|r| r.identity == "dual_family_inversion_lambda2")
            .collect::<Vec<_>>(),
    );
    lines.push(from_reports(
        "10 dual-family inversion",
        &s2,
        &["dual_family_inversion"],
        QUADRATURE_TOL,
        &format!("with lambda = Gamma(1)/Gamma(1/2) instead the error is {lambda2:.3e}"),
    ));

    let body = verify_starbody_suite(SEED, &ClassifyOptions::default());
    let mut ball = from_reports(
        "11a unit-ball values",
        &body,
        &["ball_class_value"],
        BALL_VALUE_TOL,
        "",
    );
    let counts: Vec<&str> = body
        .iter()
        .filter(|r| r.identity == "ball_class_value")
        .filter_map(|r| r.params.note.as_deref())
        .collect();
    ball.pass &= counts.iter().any(|c| c.starts_with("59 alphas"))
        && counts.iter().any(|c| c.starts_with("40 alphas"));
    ball.detail
        .push_str(&format!("; sweeps: {}", counts.join(", ")));
    lines.push(ball);
    lines.push(from_reports(
        "11b unit-ball signs",
        &body,
        &["ball_class_sign"],
        0.0,
        "",
    ));
    lines.push(from_reports(
        "12a intersection body of balls",
        &body,
        &["intersection_body_ball"],
        IB_BALL_TOL,
        "",
    ));
    lines.push(from_reports(
        "12b intersection pairs",
        &body,
        &[
            "i_intersection_pair",
            "i_intersection_pair_symmetric",
            "intersection_body_pair",
            "intersection_body_pair_symmetric",
        ],
        PAIR_TOL,
        "",
    ));
    lines.push(from_reports(
        "12c star chain",
        &s2,
        &["istar_chain"],
        CHAIN_TOL,
        "",
    ));

    let zonal = verify_zonal_suite(&[d(3)], SEED);
    lines.push(from_reports(
        "13 positivity preservation",
        &zonal,
        &["positivity_preservation"],
        POSITIVITY_TOL,
        "",
    ));

    lines
}
