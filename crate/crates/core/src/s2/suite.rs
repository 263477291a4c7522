//! Numerical verification of the Radon-type identities on S².

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::multipliers::{constant, Constant, Operator};
use crate::report::{ErrorTally, IdentityReport, Metric, Params};
use crate::s2::direct::{
    cosine_direct_coeffs, funk_direct, funk_direct_coeffs, lines_alpha_coeffs,
    poisson_direct_coeffs, poisson_nodes,
};
use crate::s2::grassmann::{
    dual_planes_alpha_spectral, dual_radon, radon_r1_grid, radon_r2_grid, ri_alpha_direct,
    GrassmannFunctionS2, GrassmannKind,
};
use crate::s2::grid::{GridFunction, S2Grid};
use crate::s2::harmonics::{analyze, synthesize, HarmonicCoeffs};
use crate::s2::spectral::{apply_spectral, dim3, invert_spectral};
use crate::starbody::istar_chain_check;
use crate::testfns::{random_body_coeffs, random_coeffs};

/// Tolerance for chains that involve no kernel quadrature.
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Tolerance of the `α → 0⁺` extrapolation.
pub const LIMIT_TOL: f64 = 1e-3;
/// Largest odd-degree energy allowed after an even-only operator.
pub const PARITY_TOL: f64 = 1e-10;
/// Round-trip tolerance of analysis and synthesis.
pub const ROUND_TRIP_TOL: f64 = 1e-12;

/// Step of the symmetric extrapolation across the pole at `α = 1`.
const POLE_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2SuiteConfig {
    pub band: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Tolerance for quadrature-limited identities.
    pub tol: f64,
    pub seed: u64,
    pub functions: usize,
}

impl Default for S2SuiteConfig {
    fn default() -> Self {
        S2SuiteConfig {
            band: 12,
            n_theta: 48,
            n_phi: 96,
            tol: 1e-6,
            seed: 7,
            functions: 5,
        }
    }
}

struct Ctx {
    cfg: S2SuiteConfig,
    grid: S2Grid,
    even: Vec<HarmonicCoeffs>,
    general: Vec<HarmonicCoeffs>,
    duals: Vec<HarmonicCoeffs>,
}

impl Ctx {
    fn params(&self) -> Params {
        Params::default()
            .n(3)
            .band(self.cfg.band)
            .seed(self.cfg.seed)
    }

    fn spectral_tol(&self) -> f64 {
        self.cfg.tol.min(SPECTRAL_TOL)
    }

    fn synth(&self, c: &HarmonicCoeffs) -> Result<GridFunction> {
        synthesize(c, &self.grid)
    }
}

fn push_grid(t: &mut ErrorTally, got: &GridFunction, expected: &GridFunction) {
    t.push_slices(&got.values, &expected.values);
}

/// Runs a check and turns an evaluation error into a failed report.
fn run(
    reports: &mut Vec<IdentityReport>,
    name: &str,
    params: Params,
    metric: Metric,
    tol: f64,
    f: impl FnOnce() -> Result<ErrorTally>,
) {
    match f() {
        Ok(t) => reports.push(t.report(name, params, metric, tol)),
        Err(e) => reports.push(IdentityReport::failed_to_evaluate(
            name,
            params,
            tol,
            &e.to_string(),
        )),
    }
}

/// Neville extrapolation of samples `(x_k, y_k)` to `x = 0`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for k in 0..n - m {
            p[k] = (xs[k + m] * p[k] - xs[k] * p[k + 1]) / (xs[k + m] - xs[k]);
        }
    }
    p[0]
}

/// Value at `α = 1` of an operator family analytic there, from samples at
/// `1 ± h` and `1 ± h/2` (error `O(h⁴)`).
fn across_pole(eval: impl Fn(f64) -> Result<GridFunction>) -> Result<GridFunction> {
    let sym = |h: f64| -> Result<GridFunction> {
        let a = eval(1.0 + h)?;
        let b = eval(1.0 - h)?;
        Ok(GridFunction {
            values: a
                .values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| 0.5 * (x + y))
                .collect(),
            ..a
        })
    };
    let full = sym(POLE_STEP)?;
    let half = sym(POLE_STEP / 2.0)?;
    Ok(GridFunction {
        values: half
            .values
            .iter()
            .zip(&full.values)
            .map(|(h, f)| (4.0 * h - f) / 3.0)
            .collect(),
        ..half
    })
}

/// Runs every S² identity on seeded random band-limited functions.
pub fn verify_s2_suite(cfg: &S2SuiteConfig) -> Result<Vec<IdentityReport>> {
    let grid = S2Grid::new(cfg.n_theta, cfg.n_phi)?;
    grid.check_band(cfg.band)?;
    let seeds = (0..cfg.functions as u64).map(|k| cfg.seed.wrapping_add(k));
    let ctx = Ctx {
        cfg: *cfg,
        even: seeds
            .clone()
            .map(|s| random_coeffs(cfg.band, s, true))
            .collect(),
        general: seeds
            .clone()
            .map(|s| random_coeffs(cfg.band, s ^ 0x5a5a, false))
            .collect(),
        duals: seeds
            .map(|s| random_coeffs(cfg.band, s ^ 0xa5a5, true))
            .collect(),
        grid,
    };
    let mut reports = Vec::new();
    harmonic_checks(&ctx, &mut reports);
    engine_checks(&ctx, &mut reports);
    radon_checks(&ctx, &mut reports);
    inversion_checks(&ctx, &mut reports);
    chain_checks(&ctx, &mut reports);
    crate::report::sort_reports(&mut reports);
    Ok(reports)
}

fn harmonic_checks(ctx: &Ctx, reports: &mut Vec<IdentityReport>) {
    let band = ctx.cfg.band;
    run(
        reports,
        "harmonic_round_trip",
        ctx.params(),
        Metric::Mixed,
        ROUND_TRIP_TOL,
        || {
            let mut t = ErrorTally::new();
            for c in &ctx.general {
                let back = analyze(&ctx.synth(c)?, band)?;
                t.push_slices(back.as_slice(), c.as_slice());
            }
            Ok(t)
        },
    );
    run(
        reports,
        "parseval",
        ctx.params(),
        Metric::Mixed,
        ROUND_TRIP_TOL,
        || {
            let mut t = ErrorTally::new();
            for c in &ctx.general {
                let f = ctx.synth(c)?;
                t.push(f.inner(&f)?, c.energy());
            }
            Ok(t)
        },
    );
    run(
        reports,
        "evenness_preservation",
        ctx.params(),
        Metric::Absolute,
        PARITY_TOL,
        || {
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let f = ctx.synth(c)?;
                let outs = [
                    cosine_direct_coeffs(c, &ctx.grid, 1.5)?,
                    funk_direct(&f, band)?,
                    ctx.synth(&apply_spectral(c, &Operator::Sine { alpha: 0.7 })?)?,
                    ctx.synth(&apply_spectral(c, &Operator::Cosine { alpha: -1.3 })?)?,
                ];
                for g in outs {
                    t.push(analyze(&g, band)?.odd_energy(), 0.0);
                }
            }
            Ok(t)
        },
    );
}

fn engine_checks(ctx: &Ctx, reports: &mut Vec<IdentityReport>) {
    let tol = ctx.cfg.tol;
    for alpha in [0.5, 1.5, 2.0, 2.5] {
        run(
            reports,
            "cosine_direct_vs_spectral",
            ctx.params().alpha(alpha),
            Metric::Mixed,
            tol,
            || {
                let mut t = ErrorTally::new();
                for c in &ctx.general {
                    let direct = cosine_direct_coeffs(c, &ctx.grid, alpha)?;
                    push_grid(
                        &mut t,
                        &direct,
                        &ctx.synth(&apply_spectral(c, &Operator::Cosine { alpha })?)?,
                    );
                }
                Ok(t)
            },
        );
    }
    for beta in [0.5, 1.5, 2.5] {
        run(
            reports,
            "lines_alpha_vs_sine",
            ctx.params().i(1).alpha(beta),
            Metric::Mixed,
            tol,
            || {
                let mut t = ErrorTally::new();
                for c in &ctx.general {
                    let direct = lines_alpha_coeffs(c, &ctx.grid, beta)?;
                    push_grid(
                        &mut t,
                        &direct,
                        &ctx.synth(&apply_spectral(c, &Operator::Sine { alpha: beta })?)?,
                    );
                }
                Ok(t)
            },
        );
    }
    for tp in [0.3, 0.7] {
        run(
            reports,
            "poisson_direct_vs_spectral",
            ctx.params().note(format!("t = {tp}")),
            Metric::Mixed,
            tol,
            || {
                let mut t = ErrorTally::new();
                for c in &ctx.general {
                    let direct =
                        poisson_direct_coeffs(c, &ctx.grid, tp, poisson_nodes(c.band(), tp))?;
                    push_grid(
                        &mut t,
                        &direct,
                        &ctx.synth(&apply_spectral(c, &Operator::Poisson { t: tp })?)?,
                    );
                }
                Ok(t)
            },
        );
    }
    run(
        reports,
        "funk_direct_vs_spectral",
        ctx.params(),
        Metric::Mixed,
        ctx.spectral_tol(),
        || {
            let mut t = ErrorTally::new();
            for c in &ctx.general {
                push_grid(
                    &mut t,
                    &funk_direct_coeffs(c, &ctx.grid)?,
                    &ctx.synth(&apply_spectral(c, &Operator::Funk)?)?,
                );
            }
            Ok(t)
        },
    );
    for (name, alphas) in [
        ("cosine_limit_at_zero", [0.4, 0.2, 0.1]),
        ("cosine_limit_at_zero_refined", [0.1, 0.05, 0.025]),
    ] {
        let note = format!("alpha in {alphas:?}");
        run(
            reports,
            name,
            ctx.params().note(note),
            Metric::Mixed,
            LIMIT_TOL,
            || {
                let c_lim = constant(Constant::FunkLimit, dim3(), 2, 0.0)?;
                let mut t = ErrorTally::new();
                for c in &ctx.even {
                    let samples = alphas
                        .iter()
                        .map(|&a| cosine_direct_coeffs(c, &ctx.grid, a))
                        .collect::<Result<Vec<_>>>()?;
                    let funk = funk_direct_coeffs(c, &ctx.grid)?;
                    for k in 0..ctx.grid.len() {
                        let ys: Vec<f64> = samples.iter().map(|s| s.values[k]).collect();
                        t.push(extrapolate_to_zero(&alphas, &ys), c_lim * funk.values[k]);
                    }
                }
                Ok(t)
            },
        );
    }
}

fn planes(repr: GridFunction) -> Result<GrassmannFunctionS2> {
    GrassmannFunctionS2::new(GrassmannKind::Planes, repr.even_part())
}

fn radon_checks(ctx: &Ctx, reports: &mut Vec<IdentityReport>) {
    let band = ctx.cfg.band;
    let tol = ctx.cfg.tol;
    let st = ctx.spectral_tol();
    for i in [1usize, 2] {
        run(
            reports,
            "radon_duality",
            ctx.params().i(i),
            Metric::Mixed,
            st,
            || {
                let mut t = ErrorTally::new();
                for (c, d) in ctx.general.iter().zip(&ctx.duals) {
                    let f = ctx.synth(c)?;
                    let kind = GrassmannKind::from_index(i)?;
                    let phi = GrassmannFunctionS2::new(kind, ctx.synth(d)?)?;
                    let rf = if i == 1 {
                        radon_r1_grid(&f)
                    } else {
                        radon_r2_grid(&f, band)?
                    };
                    t.push(rf.inner(&phi)?, f.inner(&dual_radon(&phi, band)?)?);
                }
                Ok(t)
            },
        );
        run(
            reports,
            "funk_factorization",
            ctx.params().i(i),
            Metric::Mixed,
            st,
            || {
                let mut t = ErrorTally::new();
                for c in &ctx.even {
                    let f = ctx.synth(c)?;
                    let orth = if i == 2 {
                        radon_r1_grid(&f)
                    } else {
                        radon_r2_grid(&f, band)?
                    };
                    push_grid(
                        &mut t,
                        &dual_radon(&orth.perp(), band)?,
                        &funk_direct(&f, band)?,
                    );
                }
                Ok(t)
            },
        );
    }
    let link = constant(Constant::RadonCosineLink, dim3(), 2, 0.0);
    run(
        reports,
        "radon_cosine_link",
        ctx.params().i(2).alpha(0.5),
        Metric::Mixed,
        tol,
        || {
            let link = link.clone()?;
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let lhs = funk_direct(&cosine_direct_coeffs(c, &ctx.grid, 0.5)?, band)?;
                let rhs = lines_alpha_coeffs(c, &ctx.grid, 1.5)?.scale(link);
                push_grid(&mut t, &lhs, &rhs);
            }
            Ok(t)
        },
    );
    run(
        reports,
        "radon_cosine_link",
        ctx.params()
            .i(2)
            .alpha(1.0)
            .note("mean-zero inputs, extrapolated across alpha = 1"),
        Metric::Mixed,
        tol,
        || {
            let link = link.clone()?;
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let mut c0 = c.clone();
                c0.set(0, 0, 0.0);
                let lhs =
                    across_pole(|a| funk_direct(&cosine_direct_coeffs(&c0, &ctx.grid, a)?, band))?;
                let rhs = across_pole(|a| lines_alpha_coeffs(&c0, &ctx.grid, a + 1.0))?.scale(link);
                push_grid(&mut t, &lhs, &rhs);
            }
            Ok(t)
        },
    );
    let tilde = constant(Constant::OrthogonalTilde, dim3(), 2, 0.0);
    run(
        reports,
        "radon_cosine_orthogonal",
        ctx.params().i(2).alpha(-1.0),
        Metric::Mixed,
        tol,
        || {
            let tilde = tilde.clone()?;
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let g = ctx.synth(&apply_spectral(c, &Operator::Cosine { alpha: -1.0 })?)?;
                let lhs = radon_r2_grid(&g, band)?;
                let rhs = radon_r1_grid(&ctx.synth(c)?).perp();
                push_grid(&mut t, &lhs.repr, &rhs.repr.scale(tilde));
            }
            Ok(t)
        },
    );
    run(
        reports,
        "radon_alpha_factorization",
        ctx.params().i(2).alpha(1.5),
        Metric::Mixed,
        tol,
        || {
            let mut t = ErrorTally::new();
            let scale = PI.powf(-0.5) * crate::multipliers::sigma(2) / 2.0;
            for c in &ctx.even {
                let lhs = ri_alpha_direct(&ctx.synth(c)?, 2, 1.5, band)?.repr;
                let f1 = apply_spectral(
                    &apply_spectral(c, &Operator::Cosine { alpha: 1.5 })?,
                    &Operator::Cosine { alpha: -1.0 },
                )?;
                let rhs = funk_direct_coeffs(&f1.scale(scale), &ctx.grid)?;
                push_grid(&mut t, &lhs, &rhs);
            }
            Ok(t)
        },
    );
    run(
        reports,
        "dual_cosine_orthogonal",
        ctx.params().i(2).alpha(-1.0),
        Metric::Mixed,
        tol,
        || {
            let tilde = tilde.clone()?;
            let mut t = ErrorTally::new();
            for d in &ctx.duals {
                let phi = planes(ctx.synth(d)?)?;
                let dual = dual_radon(&phi, band)?;
                let lhs = ctx.synth(&apply_spectral(
                    &analyze(&dual, band)?,
                    &Operator::Cosine { alpha: -1.0 },
                )?)?;
                let rhs = dual_radon(&phi.perp(), band)?.scale(tilde);
                push_grid(&mut t, &lhs, &rhs);
            }
            Ok(t)
        },
    );
}

/// The three forms of a right inverse `A` of `R_2^*`, as functions on planes.
pub fn right_inverse_forms(c: &HarmonicCoeffs, grid: &S2Grid) -> Result<[GridFunction; 3]> {
    let n = dim3();
    let minus_one = apply_spectral(c, &Operator::Cosine { alpha: -1.0 })?;
    let a1 = synthesize(&minus_one, grid)?.even_part().scale(constant(
        Constant::RightInverse1,
        n,
        2,
        0.0,
    )?);
    let a2 = synthesize(&minus_one, grid)?.scale(constant(Constant::RightInverse2, n, 2, 0.0)?);
    let q_inv = invert_spectral(c, &Operator::Sine { alpha: 1.0 })?;
    let a3 = funk_direct_coeffs(&q_inv, grid)?.scale(constant(Constant::RightInverse3, n, 2, 0.0)?);
    Ok([a1, a2, a3])
}

fn inversion_checks(ctx: &Ctx, reports: &mut Vec<IdentityReport>) {
    let band = ctx.cfg.band;
    let tol = ctx.cfg.tol;
    let st = ctx.spectral_tol();
    run(
        reports,
        "funk_inversion_spectral",
        ctx.params(),
        Metric::Mixed,
        st,
        || {
            let c_lim = constant(Constant::FunkLimit, dim3(), 2, 0.0)?;
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let mf = analyze(&funk_direct(&ctx.synth(c)?, band)?, band)?;
                let back = apply_spectral(&mf, &Operator::Cosine { alpha: -1.0 })?.scale(c_lim);
                t.push_slices(back.as_slice(), c.as_slice());
            }
            Ok(t)
        },
    );
    run(
        reports,
        "funk_inversion_quadrature",
        ctx.params(),
        Metric::Mixed,
        tol,
        || {
            let c_lim = constant(Constant::FunkLimit, dim3(), 2, 0.0)?;
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let pre =
                    ctx.synth(&apply_spectral(c, &Operator::Cosine { alpha: -1.0 })?.scale(c_lim))?;
                push_grid(&mut t, &funk_direct(&pre, band)?, &ctx.synth(c)?);
            }
            Ok(t)
        },
    );
    run(
        reports,
        "right_inverse_forms_agree",
        ctx.params().i(2),
        Metric::Mixed,
        st,
        || {
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let [a1, a2, a3] = right_inverse_forms(c, &ctx.grid)?;
                push_grid(&mut t, &a1, &a2);
                push_grid(&mut t, &a2, &a3);
                push_grid(&mut t, &a1, &a3);
            }
            Ok(t)
        },
    );
    run(
        reports,
        "right_inverse_dual_radon",
        ctx.params().i(2),
        Metric::Mixed,
        tol,
        || {
            let mut t = ErrorTally::new();
            for c in &ctx.even {
                let f = ctx.synth(c)?;
                for a in right_inverse_forms(c, &ctx.grid)? {
                    push_grid(&mut t, &dual_radon(&planes(a)?, band)?, &f);
                }
            }
            Ok(t)
        },
    );
    for (name, which) in [
        ("dual_family_inversion", Constant::Lambda1),
        ("dual_family_inversion_lambda2", Constant::Lambda2),
    ] {
        run(
            reports,
            name,
            ctx.params().i(2).alpha(-1.0),
            Metric::Mixed,
            tol,
            || {
                let lambda = constant(which, dim3(), 2, 0.0)?;
                let mut t = ErrorTally::new();
                for c in &ctx.even {
                    let f = ctx.synth(c)?;
                    let lhs = dual_planes_alpha_spectral(&radon_r2_grid(&f, band)?, -1.0, band)?;
                    push_grid(&mut t, &lhs, &f.scale(lambda));
                }
                Ok(t)
            },
        );
    }
}

fn chain_checks(ctx: &Ctx, reports: &mut Vec<IdentityReport>) {
    let band = ctx.cfg.band;
    let st = ctx.spectral_tol();
    let probes: Vec<HarmonicCoeffs> = {
        let mut zonal = HarmonicCoeffs::zeros(band);
        zonal.set(0, 0, 1.0);
        if band >= 2 {
            zonal.set(2, 0, 0.3);
        }
        let mut v = vec![zonal];
        v.extend(
            (0..ctx.cfg.functions as u64)
                .map(|k| random_body_coeffs(band, ctx.cfg.seed.wrapping_add(k), 0.2)),
        );
        v
    };
    let mut t = ErrorTally::new();
    let mut failure = None;
    for c in &probes {
        match ctx.synth(c).and_then(|g| istar_chain_check(&g, band, st)) {
            Ok(r) => {
                t.max_abs = t.max_abs.max(r.max_abs_err);
                t.max_rel = t.max_rel.max(r.max_rel_err);
                t.max_mixed = t.max_mixed.max(r.max_abs_err.min(r.max_rel_err));
                t.count += 1;
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    let params = ctx.params().i(1);
    reports.push(match failure {
        None => t.report("istar_chain", params, Metric::Mixed, st),
        Some(why) => IdentityReport::failed_to_evaluate("istar_chain", params, st, &why),
    });
}
