use proptest::prelude::*;

use coslab::multipliers::{a_mult, excluded, m_mult, q_mult, qpm_mult, Dim, Family, QpmSign};
use coslab::s2::grid::{GridFunction, S2Grid};
use coslab::s2::harmonics::{analyze, synthesize, HarmonicCoeffs};
use coslab::starbody::{
    classify_k_alpha, make_body, verdict, ClassifyOptions, Membership, Resolution, Shape, StarBody,
};
use coslab::testfns::{random_coeffs, random_zonal};
use coslab::zonal::{zonal_analyze, zonal_rule, ZonalFunction};

fn d(n: usize) -> Dim {
    Dim::new(n).unwrap()
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn dims() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 4, 5, 8])
}

fn even_degree(max: usize) -> impl Strategy<Value = usize> {
    (0..=max / 2).prop_map(|k| 2 * k)
}

proptest! {
    #[test]
    fn cosine_inversion(n in dims(), j in even_degree(200), alpha in -6.0f64..6.0) {
        let nf = n as f64;
        prop_assume!(!excluded(d(n), alpha, Family::Cosine) && !excluded(d(n), 2.0 - nf - alpha, Family::Cosine));
        let p = m_mult(d(n), j, alpha).unwrap() * m_mult(d(n), j, 2.0 - nf - alpha).unwrap();
        prop_assert!(rel(p, 1.0) <= 1e-10, "product {p}");
    }

    #[test]
    fn cosine_semigroup(n in dims(), j in even_degree(200), alpha in -6.0f64..6.0) {
        let order = alpha + n as f64 - 2.0;
        prop_assume!(!excluded(d(n), alpha, Family::Cosine) && !excluded(d(n), order, Family::Sine));
        let lhs = m_mult(d(n), j, alpha).unwrap() * m_mult(d(n), j, 0.0).unwrap();
        let rhs = q_mult(d(n), j, order).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn smoothing_factors_cosine(n in dims(), j in even_degree(100), alpha in -6.0f64..6.0, beta in -6.0f64..6.0) {
        prop_assume!(!excluded(d(n), alpha, Family::Cosine) && !excluded(d(n), beta, Family::Cosine));
        let b = m_mult(d(n), j, beta).unwrap();
        let lhs = m_mult(d(n), j, alpha).unwrap();
        let rhs = b * a_mult(d(n), j, alpha, beta).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn smoothing_splits_into_poisson_factors(n in dims(), j in even_degree(100), alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        prop_assume!(!excluded(d(n), alpha, Family::Cosine) && !excluded(d(n), beta, Family::Cosine));
        let (mu, nu) = (alpha - beta, 1.0 - beta);
        let a = a_mult(d(n), j, alpha, beta).unwrap();
        let plus = qpm_mult(d(n), j, mu, nu + 1.0, QpmSign::Plus);
        let minus = qpm_mult(d(n), j, mu, nu, QpmSign::Minus);
        prop_assume!(plus.is_ok() && minus.is_ok());
        prop_assert!(rel(a, plus.unwrap() * minus.unwrap()) <= 1e-10);
    }

    #[test]
    fn sign_alternates_inside_the_strip(n in dims(), j in even_degree(200), t in 0.01f64..0.99) {
        let nf = n as f64;
        let alpha = 1.0 - nf + t * nf;
        prop_assume!(!excluded(d(n), alpha, Family::Cosine));
        let m = m_mult(d(n), j, alpha).unwrap();
        let want = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(m == 0.0 || m.signum() == want);
    }

    #[test]
    fn odd_degrees_vanish(n in dims(), k in 0usize..100, alpha in -6.0f64..6.0) {
        prop_assume!(!excluded(d(n), alpha, Family::Cosine));
        prop_assert_eq!(m_mult(d(n), 2 * k + 1, alpha).unwrap(), 0.0);
    }

    #[test]
    fn excluded_iff_rejected(n in dims(), j in even_degree(60), k in -4i32..8, jitter in prop::sample::select(vec![0.0, 1e-9, 0.3])) {
        let alpha = k as f64 + jitter;
        prop_assert_eq!(excluded(d(n), alpha, Family::Cosine), m_mult(d(n), j, alpha).is_err());
        prop_assert_eq!(excluded(d(n), alpha, Family::Sine), q_mult(d(n), j, alpha).is_err());
    }

    #[test]
    fn harmonic_round_trip(band in 0usize..12, seed in any::<u64>()) {
        let c = random_coeffs(band, seed, false);
        let grid = S2Grid::for_band(band).unwrap();
        let back = analyze(&synthesize(&c, &grid).unwrap(), band).unwrap();
        prop_assert!(back.max_abs_diff(&c).unwrap() <= 1e-12);
    }

    #[test]
    fn zonal_round_trip(n in dims(), band in 0usize..24, seed in any::<u64>()) {
        let f = random_zonal(d(n), band, seed, false);
        let rule = zonal_rule(d(n), band + 1).unwrap();
        let samples: Vec<f64> = rule.nodes.iter().map(|&t| f.eval(t)).collect();
        let back = zonal_analyze(d(n), &rule, &samples, band).unwrap();
        for (a, b) in back.coeffs.iter().zip(&f.coeffs) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn json_round_trips(band in 0usize..6, seed in any::<u64>(), n in dims()) {
        let c = random_coeffs(band, seed, false);
        let back: HarmonicCoeffs = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c.clone());

        let g = synthesize(&c, &S2Grid::for_band(band).unwrap()).unwrap();
        let back: GridFunction = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);

        let z = random_zonal(d(n), band, seed, true);
        let back: ZonalFunction = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn margin_is_monotone(value in -1.0f64..1.0, m1 in 0.0f64..0.5, extra in 0.0f64..0.5) {
        let (a, b) = (verdict(value, m1), verdict(value, m1 + extra));
        let flipped = matches!((a, b), (Membership::Yes, Membership::No) | (Membership::No, Membership::Yes));
        prop_assert!(!flipped);
        prop_assert!(b == a || b == Membership::Inconclusive);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ball_verdict_ignores_scale(r in 0.1f64..10.0, alpha in -3.0f64..2.9) {
        let n = d(3);
        prop_assume!(!excluded(n, alpha, Family::StarClass));
        let res = Resolution { n_theta: 12, n_phi: 24, zonal_band: 8 };
        let opts = ClassifyOptions { band: 8, ..ClassifyOptions::default() };
        let unit = make_body(n, &Shape::Ball { r: 1.0 }, &res).unwrap();
        let scaled = make_body(n, &Shape::Ball { r }, &res).unwrap();
        let a = classify_k_alpha(&unit, alpha, &opts).unwrap();
        let b = classify_k_alpha(&scaled, alpha, &opts).unwrap();
        prop_assert_eq!(a.min_value.signum(), b.min_value.signum());
        prop_assert!(rel(b.min_value, r.powf(alpha) * a.min_value) <= 1e-10);
    }

    #[test]
    fn body_json_round_trip(r in 0.7f64..1.5, n in prop::sample::select(vec![3usize, 4, 5])) {
        let res = Resolution { n_theta: 8, n_phi: 16, zonal_band: 6 };
        let body = make_body(d(n), &Shape::Ellipsoid { axes: [vec![r; n - 1], vec![1.0]].concat() }, &res).unwrap();
        let back: StarBody = serde_json::from_str(&serde_json::to_string(&body).unwrap()).unwrap();
        prop_assert_eq!(back, body);
    }
}
