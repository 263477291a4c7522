//! Aggregate identity suites for multipliers, zonal functions and star bodies.

use std::f64::consts::PI;

use crate::error::Result;
use crate::multipliers::{check_identities, excluded, Dim, Family, Operator};
use crate::report::{sort_reports, ErrorTally, IdentityReport, Metric, Params};
use crate::s2::grid::S2Grid;
use crate::s2::harmonics::synthesize;
use crate::starbody::{
    ball_class_sign, classify_k_alpha, i_intersection_body, i_intersection_pair_check,
    intersection_body, make_body, ClassifyOptions, Membership, Resolution, Shape, StarBody,
};
use crate::testfns::{random_body_coeffs, random_zonal};
use crate::zonal::{zonal_analyze_fn, zonal_apply, zonal_cosine_direct, ZonalFunction};

pub use crate::s2::suite::{verify_s2_suite, S2SuiteConfig};

/// Forty orders `α_k = -5.85 + 0.3k` in `(-6, 6)`, none on an integer.
pub fn multiplier_alpha_grid() -> Vec<f64> {
    (0..40).map(|k| -5.85 + 0.3 * k as f64).collect()
}

/// `steps` equispaced values from `min` to `max` inclusive.
pub fn alpha_sweep(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        s => (0..s)
            .map(|k| min + (max - min) * k as f64 / (s - 1) as f64)
            .collect(),
    }
}

pub fn verify_multipliers_suite(ns: &[Dim], j_max: usize, tol: f64) -> Vec<IdentityReport> {
    let grid = multiplier_alpha_grid();
    let mut reports: Vec<IdentityReport> = ns
        .iter()
        .flat_map(|&n| check_identities(n, j_max, &grid, tol))
        .collect();
    sort_reports(&mut reports);
    reports
}

/// Band of the profiles in the zonal suite.
pub const ZONAL_SUITE_BAND: usize = 16;
pub const ZONAL_CROSS_TOL: f64 = 1e-8;
pub const ZONAL_ROUND_TRIP_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-8;
const CROSS_ALPHAS: [f64; 4] = [0.5, 1.5, 2.0, 2.5];
const CROSS_POINTS: usize = 21;
const POSITIVITY_PROFILES: u64 = 100;

fn equispaced(count: usize) -> Vec<f64> {
    alpha_sweep(-1.0, 1.0, count)
}

fn record(
    reports: &mut Vec<IdentityReport>,
    name: &str,
    params: Params,
    metric: Metric,
    tol: f64,
    t: Result<ErrorTally>,
) {
    reports.push(match t {
        Ok(t) => t.report(name, params, metric, tol),
        Err(e) => IdentityReport::failed_to_evaluate(name, params, tol, &e.to_string()),
    });
}

/// Nonnegative profile `p(t)²` of degree `2·half_band` with random `p`.
pub fn random_square_profile(n: Dim, half_band: usize, seed: u64) -> Result<ZonalFunction> {
    let p = random_zonal(n, half_band, seed, false);
    zonal_analyze_fn(n, |t| p.eval(t).powi(2), 2 * half_band)
}

pub fn verify_zonal_suite(ns: &[Dim], seed: u64) -> Vec<IdentityReport> {
    let band = ZONAL_SUITE_BAND;
    let ts = equispaced(CROSS_POINTS);
    let mut reports = Vec::new();
    for &n in ns {
        let params = || Params::default().n(n.get()).band(band).seed(seed);
        let profiles: Vec<ZonalFunction> = (0..3)
            .map(|k| random_zonal(n, band, seed.wrapping_add(k), false))
            .collect();
        for alpha in CROSS_ALPHAS {
            let t = (|| {
                let mut t = ErrorTally::new();
                for f in &profiles {
                    let spectral = zonal_apply(f, &Operator::Cosine { alpha })?;
                    for &t0 in &ts {
                        t.push(
                            zonal_cosine_direct(n, |s| f.eval(s), alpha, t0, band)?,
                            spectral.eval(t0),
                        );
                    }
                }
                Ok(t)
            })();
            record(
                &mut reports,
                "zonal_cosine_direct_vs_spectral",
                params().alpha(alpha),
                Metric::Mixed,
                ZONAL_CROSS_TOL,
                t,
            );
        }
        let t = (|| {
            let mut t = ErrorTally::new();
            for f in &profiles {
                let back = zonal_analyze_fn(n, |s| f.eval(s), band)?;
                t.push_slices(&back.coeffs, &f.coeffs);
            }
            Ok(t)
        })();
        record(
            &mut reports,
            "zonal_round_trip",
            params(),
            Metric::Mixed,
            ZONAL_ROUND_TRIP_TOL,
            t,
        );
        let ops = [
            Operator::Cosine { alpha: 0.5 },
            Operator::Cosine { alpha: -1.5 },
            Operator::Sine { alpha: 0.5 },
            Operator::Funk,
        ];
        let t = (|| {
            let mut t = ErrorTally::new();
            for f in &profiles {
                for op in ops.iter().filter(|op| op.even_only()) {
                    let g = zonal_apply(f, op)?;
                    for a in g.coeffs.iter().skip(1).step_by(2) {
                        t.push(*a, 0.0);
                    }
                }
            }
            Ok(t)
        })();
        record(
            &mut reports,
            "zonal_parity",
            params(),
            Metric::Absolute,
            0.0,
            t,
        );
    }
    let n3 = Dim::new(3).expect("3 is a valid dimension");
    let t = (|| {
        let mut t = ErrorTally::new();
        let op = Operator::Smoothing {
            alpha: 0.5,
            beta: -0.5,
        };
        let points = equispaced(201);
        for k in 0..POSITIVITY_PROFILES {
            let g = zonal_apply(
                &random_square_profile(n3, band / 2, seed.wrapping_add(k))?,
                &op,
            )?;
            let min = g
                .eval_many(&points)
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            t.push(min.min(0.0), 0.0);
        }
        Ok(t)
    })();
    record(
        &mut reports,
        "positivity_preservation",
        Params::default()
            .n(3)
            .alpha(0.5)
            .beta(-0.5)
            .seed(seed)
            .note("100 profiles p(t)^2, 201 points"),
        Metric::Absolute,
        POSITIVITY_TOL,
        t,
    );
    sort_reports(&mut reports);
    reports
}

/// Ball-class sweeps of the star-body suite.
pub const BALL_SWEEP_N3: (f64, f64, usize) = (-3.0, 2.9, 59);
pub const BALL_SWEEP_N5: (f64, f64, usize) = (-3.0, 6.9, 40);
pub const BALL_VALUE_TOL: f64 = 1e-10;
pub const IB_BALL_TOL: f64 = 1e-12;
pub const PAIR_TOL: f64 = 1e-6;
/// Degree and amplitude of the random perturbation in seeded bodies.
pub const SEEDED_BODY_BAND: usize = 6;
pub const SEEDED_BODY_AMPLITUDE: f64 = 0.2;

/// `ρ = 1 + 0.2·g` with `g` a seeded even random function of degree 6.
pub fn seeded_body(grid: &S2Grid, seed: u64) -> Result<StarBody> {
    let c = random_body_coeffs(SEEDED_BODY_BAND, seed, SEEDED_BODY_AMPLITUDE);
    let meta = crate::starbody::BodyMeta {
        shape: "seeded".to_string(),
        params: serde_json::json!({ "seed": seed, "band": SEEDED_BODY_BAND, "amplitude": SEEDED_BODY_AMPLITUDE }),
    };
    StarBody::from_grid(synthesize(&c, grid)?, meta)
}

fn flag(bad: bool) -> f64 {
    if bad {
        1.0
    } else {
        0.0
    }
}

fn sign_of(m: Membership) -> f64 {
    match m {
        Membership::Yes => 1.0,
        Membership::No => -1.0,
        Membership::Inconclusive => 0.0,
    }
}

/// Classifies balls of radius `r` over the sweep and compares with the closed form.
fn ball_sweep(
    reports: &mut Vec<IdentityReport>,
    n: Dim,
    sweep: (f64, f64, usize),
    res: &Resolution,
    opts: &ClassifyOptions,
) {
    let (lo, hi, steps) = sweep;
    let alphas: Vec<f64> = alpha_sweep(lo, hi, steps)
        .into_iter()
        .filter(|&a| !excluded(n, a, Family::StarClass))
        .collect();
    let params = || {
        Params::default()
            .n(n.get())
            .band(opts.band)
            .note(format!("{} alphas in [{lo}, {hi}]", alphas.len()))
    };
    let sweep = (|| {
        let (mut values, mut signs, mut scale) =
            (ErrorTally::new(), ErrorTally::new(), ErrorTally::new());
        let unit = make_body(n, &Shape::Ball { r: 1.0 }, res)?;
        let others = [
            make_body(n, &Shape::Ball { r: 0.5 }, res)?,
            make_body(n, &Shape::Ball { r: 2.0 }, res)?,
        ];
        for &alpha in &alphas {
            let closed = ball_class_sign(n, alpha)?;
            let v = classify_k_alpha(&unit, alpha, opts)?;
            values.push(v.min_value, closed);
            signs.push(flag(sign_of(v.member) != closed.signum()), 0.0);
            for b in &others {
                scale.push(
                    flag(classify_k_alpha(b, alpha, opts)?.member != v.member),
                    0.0,
                );
            }
        }
        Ok((values, signs, scale))
    })();
    let part = |f: fn(&(ErrorTally, ErrorTally, ErrorTally)) -> ErrorTally| {
        sweep.as_ref().map(f).map_err(Clone::clone)
    };
    record(
        reports,
        "ball_class_value",
        params(),
        Metric::Absolute,
        BALL_VALUE_TOL,
        part(|s| s.0),
    );
    record(
        reports,
        "ball_class_sign",
        params(),
        Metric::Absolute,
        0.0,
        part(|s| s.1),
    );
    let note = params().note(format!(
        "{} alphas, r in {{0.5, 2}} against r = 1",
        alphas.len()
    ));
    record(
        reports,
        "ball_class_scale_invariance",
        note,
        Metric::Absolute,
        0.0,
        part(|s| s.2),
    );
}

pub fn verify_starbody_suite(seed: u64, opts: &ClassifyOptions) -> Vec<IdentityReport> {
    let mut reports = Vec::new();
    let res = Resolution::default();
    let n3 = Dim::new(3).expect("valid dimension");
    let n5 = Dim::new(5).expect("valid dimension");
    ball_sweep(&mut reports, n3, BALL_SWEEP_N3, &res, opts);
    ball_sweep(&mut reports, n5, BALL_SWEEP_N5, &res, opts);

    let band = 12;
    let t = (|| {
        let mut t = ErrorTally::new();
        for r in [0.5, 1.0, 2.0] {
            let k = intersection_body(&make_body(n3, &Shape::Ball { r }, &res)?, band)?;
            for v in &k.grid()?.values {
                t.push(*v, PI * r * r);
            }
        }
        Ok(t)
    })();
    record(
        &mut reports,
        "intersection_body_ball",
        Params::default().n(3).band(band),
        Metric::Mixed,
        IB_BALL_TOL,
        t,
    );

    let t = (|| {
        let b = make_body(n3, &Shape::Ball { r: 1.0 }, &res)?;
        let r = i_intersection_pair_check(&b, &b, 2, band, PAIR_TOL)?;
        let mut t = ErrorTally::new();
        t.push(flag(r.pass), 0.0);
        Ok(t)
    })();
    record(
        &mut reports,
        "pair_check_rejects_non_pair",
        Params::default().n(3).i(2),
        Metric::Absolute,
        0.0,
        t,
    );

    let grid = S2Grid::new(res.n_theta, res.n_phi);
    for k in 0..3u64 {
        let s = seed.wrapping_add(k);
        let params = || Params::default().n(3).band(band).seed(s);
        let pair = (|| {
            let l = seeded_body(grid.as_ref().map_err(Clone::clone)?, s)?;
            let k2 = i_intersection_body(&l, 2, band)?;
            let half_ib = intersection_body(&l, band)?;
            let half_ib = StarBody::from_grid(half_ib.grid()?.scale(0.5), half_ib.meta.clone())?;
            Ok::<_, crate::error::Error>((l, k2, half_ib))
        })();
        let (l, k2, half_ib) = match pair {
            Ok(p) => p,
            Err(e) => {
                reports.push(IdentityReport::failed_to_evaluate(
                    "i_intersection_pair",
                    params().i(2),
                    PAIR_TOL,
                    &e.to_string(),
                ));
                continue;
            }
        };
        let checks: [(&str, &StarBody, &StarBody, usize); 4] = [
            ("i_intersection_pair", &k2, &l, 2),
            ("i_intersection_pair_symmetric", &l, &k2, 1),
            ("intersection_body_pair", &half_ib, &l, 1),
            ("intersection_body_pair_symmetric", &l, &half_ib, 2),
        ];
        for (name, a, b, i) in checks {
            match i_intersection_pair_check(a, b, i, band, PAIR_TOL) {
                Ok(mut r) => {
                    r.identity = name.to_string();
                    r.params.seed = Some(s);
                    reports.push(r);
                }
                Err(e) => reports.push(IdentityReport::failed_to_evaluate(
                    name,
                    params().i(i),
                    PAIR_TOL,
                    &e.to_string(),
                )),
            }
        }
        let t = (|| {
            let ib = intersection_body(&l, band)?;
            let v = classify_k_alpha(&ib, 1.0, opts)?;
            let mut t = ErrorTally::new();
            t.push(flag(v.member != Membership::Yes), 0.0);
            Ok(t)
        })();
        record(
            &mut reports,
            "intersection_body_class",
            params().alpha(1.0),
            Metric::Absolute,
            0.0,
            t,
        );
    }

    let t = (|| {
        let e = make_body(
            n3,
            &Shape::Ellipsoid {
                axes: vec![1.0, 1.0, 1.5],
            },
            &res,
        )?;
        let v = classify_k_alpha(&e, 1.0, opts)?;
        let mut t = ErrorTally::new();
        t.push(flag(v.member != Membership::Yes), 0.0);
        Ok(t)
    })();
    record(
        &mut reports,
        "ellipsoid_class",
        Params::default()
            .n(3)
            .alpha(1.0)
            .note("semi-axes (1, 1, 1.5)"),
        Metric::Absolute,
        0.0,
        t,
    );
    sort_reports(&mut reports);
    reports
}
