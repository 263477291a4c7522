//! Worked examples checked against values that do not come from the library:
//! closed forms, reference values computed in extended precision, and small
//! independent routines defined below.

use std::f64::consts::PI;

use coslab::error::Error;
use coslab::multipliers::{
    a_mult, constant, excluded, funk_mult, m_mult, poisson_mult, q_mult, qpm_mult, sigma, Constant,
    Dim, Family, Operator, QpmSign,
};
use coslab::quadrature::gauss_jacobi_rule;
use coslab::s2::direct::{cosine_direct, funk_direct};
use coslab::s2::grassmann::{dual_radon, radon_r1, GrassmannFunctionS2, GrassmannKind};
use coslab::s2::grid::{GridFunction, S2Grid};
use coslab::s2::harmonics::{analyze, synthesize, HarmonicCoeffs};
use coslab::s2::spectral::{apply_spectral, dim3};
use coslab::starbody::{
    ball_class_sign, classify_k_alpha, embeds_in_lp, i_intersection_pair_check, intersection_body,
    istar_chain_check, make_body, BodyMeta, BodyRepr, ClassifyOptions, Membership, Resolution,
    Shape, StarBody,
};
use coslab::zonal::{zonal_analyze_fn, zonal_apply, zonal_cosine_direct};

fn d(n: usize) -> Dim {
    Dim::new(n).unwrap()
}

fn close(got: f64, want: f64, tol: f64) {
    let scale = want.abs().max(1.0);
    assert!(
        (got - want).abs() <= tol * scale,
        "got {got:.17e}, want {want:.17e}"
    );
}

/// Legendre polynomial by the three-term recurrence.
fn legendre(j: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if j == 0 {
        return p0;
    }
    for k in 1..j {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Area of the central section of a star body by the plane `u^⊥`:
/// `½∫ρ(ψ)² dψ` over the great circle, by the periodic trapezoid rule.
fn section_area(u: [f64; 3], rho: impl Fn([f64; 3]) -> f64) -> f64 {
    let seed = if u[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let dot = seed[0] * u[0] + seed[1] * u[1] + seed[2] * u[2];
    let mut e1 = [
        seed[0] - dot * u[0],
        seed[1] - dot * u[1],
        seed[2] - dot * u[2],
    ];
    let norm = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|v| *v /= norm);
    let e2 = [
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    let m = 4096;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|k| {
            let (s, c) = (k as f64 * h).sin_cos();
            let r = rho([
                c * e1[0] + s * e2[0],
                c * e1[1] + s * e2[1],
                c * e1[2] + s * e2[2],
            ]);
            0.5 * r * r * h
        })
        .sum()
}

#[test]
fn sphere_areas() {
    close(sigma(2), 2.0 * PI, 1e-15);
    close(sigma(3), 4.0 * PI, 1e-15);
    close(sigma(4), 2.0 * PI * PI, 1e-15);
}

#[test]
fn lattice_membership() {
    assert!(excluded(d(3), 1.0, Family::Cosine));
    assert!(!excluded(d(3), 0.5, Family::Cosine));
    assert!(excluded(d(5), -2.0, Family::StarClass));
    assert!(matches!(
        m_mult(d(3), 0, 1.0),
        Err(Error::ExcludedParameter { .. })
    ));
}

#[test]
fn cosine_multiplier_values() {
    close(m_mult(d(3), 0, 0.5).unwrap(), 4.0, 1e-14);
    assert_eq!(m_mult(d(3), 1, 0.5).unwrap(), 0.0);
    close(m_mult(d(3), 2, 0.0).unwrap(), -PI.sqrt() / 2.0, 1e-14);
    // reference values from 30-digit arithmetic
    close(
        m_mult(d(5), 200, -1.3).unwrap(),
        0.397_512_369_041_789_3,
        1e-12,
    );
    close(
        m_mult(d(8), 100, 2.7).unwrap() / 1.753_575_518_189_755e-10,
        1.0,
        1e-11,
    );
}

#[test]
fn sine_multiplier_values() {
    close(q_mult(d(3), 0, 1.0).unwrap(), PI, 1e-14);
    close(q_mult(d(3), 2, 1.0).unwrap(), PI / 4.0, 1e-14);
    for n in [2, 3, 5, 8] {
        for j in (0..=40).step_by(2) {
            assert_eq!(q_mult(d(n), j, 0.0).unwrap(), 1.0);
        }
    }
}

#[test]
fn poisson_integral_factors() {
    close(
        qpm_mult(d(3), 0, 1.0, 2.0, QpmSign::Plus).unwrap(),
        2.0 / PI.sqrt(),
        1e-14,
    );
    close(
        qpm_mult(d(3), 0, 1.0, 2.0, QpmSign::Minus).unwrap(),
        PI.sqrt(),
        1e-14,
    );
}

#[test]
fn smoothing_multiplier_values() {
    assert_eq!(a_mult(d(4), 6, 0.7, 0.7).unwrap(), 1.0);
    close(a_mult(d(3), 0, 0.5, -0.5).unwrap(), 4.0, 1e-14);
    close(
        a_mult(d(3), 4, 1.2, 0.3).unwrap(),
        0.496_164_524_938_452_9,
        1e-13,
    );
}

#[test]
fn funk_multiplier_is_legendre_at_zero() {
    for j in 0..=60 {
        close(funk_mult(d(3), j).unwrap(), legendre(j, 0.0), 1e-13);
    }
    close(funk_mult(d(3), 2).unwrap(), -0.5, 1e-15);
    close(funk_mult(d(3), 4).unwrap(), 0.375, 1e-15);
}

#[test]
fn poisson_multiplier_values() {
    assert_eq!(poisson_mult(0, 0.5).unwrap(), 1.0);
    assert_eq!(poisson_mult(3, 0.5).unwrap(), 0.125);
    assert_eq!(poisson_mult(2, 0.0).unwrap(), 0.0);
}

#[test]
fn named_constants() {
    close(
        constant(Constant::FunkLimit, d(3), 2, 0.0).unwrap(),
        PI.sqrt(),
        1e-15,
    );
    close(
        constant(Constant::Lambda1, d(3), 2, 0.0).unwrap(),
        1.0 / (4.0 * PI * PI.sqrt()),
        1e-15,
    );
    close(
        constant(Constant::OrthogonalTilde, d(3), 2, 0.0).unwrap(),
        1.0 / PI.sqrt(),
        1e-15,
    );
}

#[test]
fn jacobi_moments() {
    let r3 = gauss_jacobi_rule(3, 2).unwrap();
    close(r3.integrate(|t| t * t), 1.0 / 3.0, 1e-15);
    let r5 = gauss_jacobi_rule(5, 6).unwrap();
    close(r5.integrate(|t| t * t), 0.2, 1e-15);
    // ∫t⁴(1-t²) / ∫(1-t²) = 3/35
    close(r5.integrate(|t| t.powi(4)), 3.0 / 35.0, 1e-15);
}

#[test]
fn zonal_operator_examples() {
    let one = zonal_analyze_fn(d(3), |_| 1.0, 8).unwrap();
    let m = zonal_apply(&one, &Operator::Cosine { alpha: 0.5 }).unwrap();
    close(m.eval(0.3), 4.0, 1e-14);

    let sq = zonal_analyze_fn(d(3), |t| t * t, 8).unwrap();
    let funk = zonal_apply(&sq, &Operator::Funk).unwrap();
    for t in [-1.0, -0.4, 0.0, 0.6, 1.0] {
        close(funk.eval(t), (1.0 - t * t) / 2.0, 1e-14);
    }

    let f = zonal_analyze_fn(d(4), |t| t.powi(3) + t * t + 0.5, 8).unwrap();
    let even = zonal_apply(&f, &Operator::Sine { alpha: 0.0 }).unwrap();
    for t in [-0.9, -0.1, 0.5] {
        close(even.eval(t), t * t + 0.5, 1e-14);
    }
}

#[test]
fn zonal_direct_cosine_examples() {
    for t0 in [-0.7, 0.0, 0.4, 1.0] {
        close(
            zonal_cosine_direct(d(3), |_| 1.0, 2.0, t0, 8).unwrap(),
            -2.0 * PI.sqrt(),
            1e-12,
        );
        close(
            zonal_cosine_direct(d(3), |_| 1.0, 0.5, t0, 8).unwrap(),
            4.0,
            1e-10,
        );
        assert!(zonal_cosine_direct(d(3), |t| t, 1.5, t0, 8).unwrap().abs() < 1e-12);
    }
    assert!(matches!(
        zonal_cosine_direct(d(3), |_| 1.0, 0.2, 0.0, 8),
        Err(Error::QuadratureWindow { .. })
    ));
}

#[test]
fn spectral_examples_on_s2() {
    let m = apply_spectral(
        &HarmonicCoeffs::delta(6, 0, 0),
        &Operator::Cosine { alpha: 0.5 },
    )
    .unwrap();
    close(m.get(0, 0), 4.0, 1e-14);
    let f = apply_spectral(&HarmonicCoeffs::delta(6, 2, 0), &Operator::Funk).unwrap();
    close(f.get(2, 0), legendre(2, 0.0), 1e-14);
    let p = apply_spectral(
        &HarmonicCoeffs::delta(6, 3, -2),
        &Operator::Poisson { t: 0.6 },
    )
    .unwrap();
    close(p.get(3, -2), 0.6f64.powi(3), 1e-15);
    assert_eq!(dim3().get(), 3);
}

#[test]
fn harmonic_basis_examples() {
    let grid = S2Grid::new(16, 32).unwrap();
    let c = analyze(&GridFunction::constant(&grid, 1.0), 8).unwrap();
    close(c.get(0, 0), 1.0, 1e-14);
    assert!(c.as_slice()[1..].iter().all(|v| v.abs() < 1e-14));

    let z = analyze(&GridFunction::from_fn(&grid, |x| x[2]), 8).unwrap();
    let nonzero: Vec<usize> = (0..z.as_slice().len())
        .filter(|&k| z.as_slice()[k].abs() > 1e-13)
        .collect();
    assert_eq!(nonzero.len(), 1);
    assert!(z.get(1, 0).abs() > 0.5);

    let p2 = synthesize(&HarmonicCoeffs::delta(8, 2, 0), &grid).unwrap();
    let ratio: Vec<f64> = grid
        .points()
        .iter()
        .zip(&p2.values)
        .map(|(x, v)| v / legendre(2, x[2]))
        .collect();
    assert!(ratio.iter().all(|r| (r - ratio[0]).abs() < 1e-12));
    close(ratio[0], 5f64.sqrt(), 1e-13);
}

#[test]
fn direct_operator_examples() {
    let grid = S2Grid::new(24, 48).unwrap();
    let one = GridFunction::constant(&grid, 1.0);
    let c2 = cosine_direct(&one, 2.0, 12).unwrap();
    assert!(c2
        .values
        .iter()
        .all(|v| (v + 2.0 * PI.sqrt()).abs() < 1e-10));
    let c05 = cosine_direct(&one, 0.5, 12).unwrap();
    assert!(c05.values.iter().all(|v| (v - 4.0).abs() < 1e-8));

    let e = [0.36, 0.48, 0.8];
    let dot = |x: [f64; 3]| x[0] * e[0] + x[1] * e[1] + x[2] * e[2];
    let sq = GridFunction::from_fn(&grid, |x| dot(x).powi(2));
    let want = GridFunction::from_fn(&grid, |x| (1.0 - dot(x).powi(2)) / 2.0);
    assert!(funk_direct(&sq, 12).unwrap().max_diff(&want).unwrap() < 1e-12);
    let odd = GridFunction::from_fn(&grid, |x| x[0] * x[1] * x[2] + x[1]);
    assert!(funk_direct(&odd, 12).unwrap().max_abs() < 1e-12);
}

#[test]
fn radon_examples() {
    let band = 8;
    let even = analyze(
        &GridFunction::from_fn(&S2Grid::for_band(band).unwrap(), |x| 1.0 + x[0] * x[2]),
        band,
    )
    .unwrap();
    let odd = analyze(
        &GridFunction::from_fn(&S2Grid::for_band(band).unwrap(), |x| x[1]),
        band,
    )
    .unwrap();
    let u = [0.6, 0.0, 0.8];
    close(radon_r1(&even, u).unwrap(), 1.0 + 0.48, 1e-13);
    assert!(radon_r1(&odd, u).unwrap().abs() < 1e-13);

    let grid = S2Grid::new(20, 40).unwrap();
    let ones = GrassmannFunctionS2::new(GrassmannKind::Planes, GridFunction::constant(&grid, 1.0))
        .unwrap();
    assert!(dual_radon(&ones, 8)
        .unwrap()
        .values
        .iter()
        .all(|v| (v - 1.0).abs() < 1e-12));

    let g = GridFunction::from_fn(&grid, |x| 0.3 + x[0] * x[0]);
    let lines = GrassmannFunctionS2::new(GrassmannKind::Lines, g.clone()).unwrap();
    assert!(dual_radon(&lines, 8).unwrap().max_diff(&g).unwrap() < 1e-12);

    let p2 = GridFunction::from_fn(&grid, |x| legendre(2, x[2]));
    let planes = GrassmannFunctionS2::new(GrassmannKind::Planes, p2.clone()).unwrap();
    assert!(
        dual_radon(&planes, 8)
            .unwrap()
            .max_diff(&p2.scale(-0.5))
            .unwrap()
            < 1e-12
    );
}

#[test]
fn intersection_body_of_ellipsoid_matches_section_areas() {
    let axes = vec![1.0, 2.0, 3.0];
    let shape = Shape::Ellipsoid { axes: axes.clone() };
    let l = make_body(d(3), &shape, &Resolution::default()).unwrap();
    let grid = l.grid().unwrap().grid.clone();
    let k = intersection_body(&l, grid.max_band()).unwrap();
    let rho = |x: [f64; 3]| shape.radial(&x);
    let mut worst: f64 = 0.0;
    for (x, v) in grid.points().into_iter().zip(&k.grid().unwrap().values) {
        worst = worst.max((v - section_area(x, rho)).abs() / section_area(x, rho));
    }
    assert!(worst < 1e-6, "relative error {worst:e}");
    close(section_area([1.0, 0.0, 0.0], rho), 6.0 * PI, 1e-12);
}

#[test]
fn intersection_body_of_spheroid_at_axis() {
    let (a, c) = (1.0, 1.5);
    let profile = |t: f64| ((1.0 - t * t) / (a * a) + t * t / (c * c)).powf(-0.5);
    let z = zonal_analyze_fn(d(3), profile, 40).unwrap();
    let meta = BodyMeta {
        shape: "ellipsoid".into(),
        params: serde_json::json!({ "axes": [a, a, c] }),
    };
    let l = StarBody::new(d(3), BodyRepr::Zonal(z), meta).unwrap();
    let k = intersection_body(&l, 40).unwrap();
    let BodyRepr::Zonal(kz) = &k.repr else {
        panic!("zonal input gives a zonal body")
    };
    close(kz.eval(1.0), PI * a * a, 1e-10);
}

#[test]
fn unit_ball_class_values() {
    let opts = ClassifyOptions::default();
    let ball = make_body(d(3), &Shape::Ball { r: 1.0 }, &Resolution::default()).unwrap();
    let yes = classify_k_alpha(&ball, 1.0, &opts).unwrap();
    assert_eq!(yes.member, Membership::Yes);
    close(yes.min_value, 1.0 / PI.sqrt(), 1e-12);
    let no = classify_k_alpha(&ball, -1.0, &opts).unwrap();
    assert_eq!(no.member, Membership::No);
    close(no.min_value, -1.0 / (2.0 * PI.sqrt()), 1e-12);

    close(ball_class_sign(d(3), 1.0).unwrap(), 1.0 / PI.sqrt(), 1e-14);
    close(
        ball_class_sign(d(3), -1.0).unwrap(),
        -0.5 / PI.sqrt(),
        1e-14,
    );
    assert!(ball_class_sign(d(5), 5.5).unwrap() < 0.0);

    assert_eq!(
        embeds_in_lp(&ball, 1.0, &opts).unwrap().member,
        Membership::No
    );
    assert_eq!(
        embeds_in_lp(&ball, 0.5, &opts).unwrap().member,
        Membership::No
    );
    assert!(matches!(
        classify_k_alpha(&ball, 0.0, &opts),
        Err(Error::ExcludedParameter { .. })
    ));
}

#[test]
fn spheroid_is_an_intersection_body() {
    let body = make_body(
        d(3),
        &Shape::Ellipsoid {
            axes: vec![1.0, 1.0, 1.5],
        },
        &Resolution::default(),
    )
    .unwrap();
    let v = classify_k_alpha(&body, 1.0, &ClassifyOptions::default()).unwrap();
    assert_eq!(v.member, Membership::Yes);
}

#[test]
fn shape_examples() {
    let res = Resolution::default();
    let all = |b: &StarBody, want: f64| {
        b.grid()
            .unwrap()
            .values
            .iter()
            .all(|v| (v - want).abs() < 1e-15)
    };
    assert!(all(
        &make_body(d(3), &Shape::Ball { r: 2.0 }, &res).unwrap(),
        2.0
    ));
    assert!(all(
        &make_body(d(3), &Shape::Ellipsoid { axes: vec![1.0; 3] }, &res).unwrap(),
        1.0
    ));
    assert!(all(
        &make_body(d(3), &Shape::LpBall { p: 2.0 }, &res).unwrap(),
        1.0
    ));
    assert!(matches!(
        make_body(d(3), &Shape::Ball { r: -1.0 }, &res),
        Err(Error::BadShapeParams(_))
    ));
}

#[test]
fn pair_check_rejects_ball_with_itself() {
    let ball = make_body(d(3), &Shape::Ball { r: 1.0 }, &Resolution::default()).unwrap();
    let r = i_intersection_pair_check(&ball, &ball, 2, 16, 1e-6).unwrap();
    assert!(!r.pass);
}

#[test]
fn star_chain_examples() {
    let grid = S2Grid::new(24, 48).unwrap();
    let one = istar_chain_check(&GridFunction::constant(&grid, 1.0), 12, 1e-12).unwrap();
    assert!(one.pass, "{one:?}");
    let p2 = istar_chain_check(
        &GridFunction::from_fn(&grid, |x| 1.0 + 0.3 * legendre(2, x[2])),
        12,
        1e-8,
    )
    .unwrap();
    assert!(p2.pass, "{p2:?}");
    let odd = GridFunction::from_fn(&grid, |x| 1.0 + 0.3 * x[2]);
    assert!(matches!(
        istar_chain_check(&odd, 12, 1e-8),
        Err(Error::OddInput { .. })
    ));
}
