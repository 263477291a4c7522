//! Fourier–Laplace multipliers of the intertwining-operator families and
//! the normalization constants that go with them.
//!
//! Degrees `j` index spherical harmonics on `S^{n-1}`. All gamma ratios are
//! evaluated through [`crate::special::gamma_ratio`].

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{JacobiRule, JacobiWeight};
use crate::report::{ErrorTally, IdentityReport, Metric, Params};
use crate::special::{gamma_ratio, is_gamma_pole, POLE_EPS};

/// Ambient dimension `n` of `ℝⁿ`; the sphere is `S^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dim(usize);

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        Ok(Dim(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Dim::new(n)
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.0
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Area `σ_{n-1} = 2π^{n/2}/Γ(n/2)` of the unit sphere `S^{n-1} ⊂ ℝⁿ`, for `n ≥ 1`.
pub fn sigma(n: usize) -> f64 {
    assert!(n >= 1, "sigma is defined for n >= 1");
    let half = n as f64 / 2.0;
    // Γ(n/2) never hits a pole for n ≥ 1
    2.0 * PI.powf(half) / crate::special::gamma(half).expect("Γ(n/2) is finite")
}

/// Operator families whose parameter lattices are excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Generalized cosine transform `M^α`.
    Cosine,
    /// Generalized sine transform `Q^α`.
    Sine,
    /// Radon family `R_i^α`.
    Radon { i: usize },
    /// Star-body classes `𝒦_{α,n}`.
    StarClass,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cosine => write!(f, "M"),
            Family::Sine => write!(f, "Q"),
            Family::Radon { i } => write!(f, "R_{i}"),
            Family::StarClass => write!(f, "K_class"),
        }
    }
}

fn near_lattice_up(alpha: f64, start: f64) -> bool {
    // {start, start+2, start+4, ...}
    if alpha < start - POLE_EPS {
        return false;
    }
    let k = ((alpha - start) / 2.0).round();
    (alpha - (start + 2.0 * k)).abs() < POLE_EPS
}

fn near_lattice_down(alpha: f64, start: f64) -> bool {
    // {start, start-2, start-4, ...}
    near_lattice_up(-alpha, -start)
}

/// Human-readable description of the excluded lattice.
pub fn lattice_description(n: Dim, family: Family) -> String {
    let n = n.get();
    match family {
        Family::Cosine => "{1, 3, 5, ...}".to_string(),
        Family::Sine => format!("{{{}, {}, {}, ...}}", n - 1, n + 1, n + 3),
        Family::Radon { i } => {
            let s = n as i64 - i as i64;
            format!("{{{}, {}, {}, ...}}", s, s + 2, s + 4)
        }
        Family::StarClass => format!("{{0, -2, -4, ...}} ∪ {{{}, {}, ...}}", n, n + 2),
    }
}

/// True iff `alpha` lies within `POLE_EPS` of the family's excluded lattice.
///
/// The sine family is excluded on `{n-1, n+1, ...}`, where the numerator
/// `Γ((j+n-1-α)/2)` of its multiplier has poles at `j = 0`.
pub fn excluded(n: Dim, alpha: f64, family: Family) -> bool {
    let nf = n.as_f64();
    if !alpha.is_finite() {
        return true;
    }
    match family {
        Family::Cosine => near_lattice_up(alpha, 1.0),
        Family::Sine => near_lattice_up(alpha, nf - 1.0),
        Family::Radon { i } => near_lattice_up(alpha, nf - i as f64),
        Family::StarClass => near_lattice_down(alpha, 0.0) || near_lattice_up(alpha, nf),
    }
}

fn ensure_admissible(n: Dim, alpha: f64, family: Family) -> Result<()> {
    if excluded(n, alpha, family) {
        return Err(Error::ExcludedParameter {
            family: family.to_string(),
            n: n.get(),
            alpha,
            lattice: lattice_description(n, family),
        });
    }
    Ok(())
}

fn sign_even(j: usize) -> f64 {
    if (j / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Multiplier `m_{j,α}` of `M^α`:
/// `(-1)^{j/2} Γ((j+1-α)/2) / Γ((j+n-1+α)/2)` for even `j`, zero for odd `j`.
pub fn m_mult(n: Dim, j: usize, alpha: f64) -> Result<f64> {
    ensure_admissible(n, alpha, Family::Cosine)?;
    if j % 2 == 1 {
        return Ok(0.0);
    }
    let jf = j as f64;
    let num = (jf + 1.0 - alpha) / 2.0;
    if is_gamma_pole(num) {
        return Err(Error::NumeratorPole { j, alpha });
    }
    let r = gamma_ratio(&[num], &[(jf + n.as_f64() - 1.0 + alpha) / 2.0])?;
    Ok(sign_even(j) * r)
}

/// Multiplier `q̂_α(j)` of the sine transform `Q^α` (zero for odd `j`).
pub fn q_mult(n: Dim, j: usize, alpha: f64) -> Result<f64> {
    ensure_admissible(n, alpha, Family::Sine)?;
    if j % 2 == 1 {
        return Ok(0.0);
    }
    let jf = j as f64;
    let nf = n.as_f64();
    gamma_ratio(
        &[(jf + nf - 1.0 - alpha) / 2.0, (jf + 1.0) / 2.0],
        &[(jf + alpha + 1.0) / 2.0, (jf + nf - 1.0) / 2.0],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QpmSign {
    Plus,
    Minus,
}

/// Multipliers of the Poisson-integral operators `Q_±^{μ,ν}`:
/// plus `Γ((j+n-ν+1)/2)/Γ((j+n-ν+1+μ)/2)`, minus `Γ((j+ν-μ)/2)/Γ((j+ν)/2)`.
pub fn qpm_mult(n: Dim, j: usize, mu: f64, nu: f64, sign: QpmSign) -> Result<f64> {
    let jf = j as f64;
    let nf = n.as_f64();
    match sign {
        QpmSign::Plus => gamma_ratio(
            &[(jf + nf - nu + 1.0) / 2.0],
            &[(jf + nf - nu + 1.0 + mu) / 2.0],
        ),
        QpmSign::Minus => gamma_ratio(&[(jf + nu - mu) / 2.0], &[(jf + nu) / 2.0]),
    }
}

/// Multiplier `a_{α,β}(j)` of the smoothing operator with `M^α = M^β A_{α,β}`.
pub fn a_mult(n: Dim, j: usize, alpha: f64, beta: f64) -> Result<f64> {
    ensure_admissible(n, alpha, Family::Cosine)?;
    ensure_admissible(n, beta, Family::Cosine)?;
    let jf = j as f64;
    let nf = n.as_f64();
    gamma_ratio(
        &[(jf + 1.0 - alpha) / 2.0, (jf + nf - 1.0 + beta) / 2.0],
        &[(jf + nf - 1.0 + alpha) / 2.0, (jf + 1.0 - beta) / 2.0],
    )
}

/// Multiplier of the Minkowski–Funk transform, `m_{j,0} / c_{n-1}`.
pub fn funk_mult(n: Dim, j: usize) -> Result<f64> {
    Ok(m_mult(n, j, 0.0)? / constant(Constant::FunkLimit, n, n.get() - 1, 0.0)?)
}

/// Poisson-integral multiplier `t^j`.
pub fn poisson_mult(j: usize, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "Poisson parameter must lie in [0, 1), got {t}"
        )));
    }
    Ok(t.powi(j as i32))
}

/// Closed-form constants attached to the operator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constant {
    /// `γ_n(α)`, normalization of `M^α`.
    CosineNorm,
    /// `γ_{n,i}(α)`, normalization of `R_i^α` and its dual.
    RadonNorm,
    /// `c_i = σ_{i-1}/(2π^{(i-1)/2})`, with `R_i^0 = c_i R_i`.
    RadonLimit,
    /// `c_{n-1} = σ_{n-2}/(2π^{(n-2)/2})`, with `M^0 = c_{n-1} M`.
    FunkLimit,
    /// `λ₁ = Γ((n-1)/2)/(σ_{n-1} Γ((n-i)/2))` as printed for `R̊^α R_i`.
    Lambda1,
    /// `λ₂ = Γ((n-1)/2)/Γ((n-i)/2)` for `R_i^* R_i^α`.
    Lambda2,
    /// `c = 2π^{(i-1)/2}Γ((n-1)/2)/(σ_{i-1}Γ((n-i)/2))` in `R_i^* R_i = c Q^{i-1}`.
    DualComposite,
    /// `2π^{(i-1)/2}/σ_{i-1}` linking `R_i M^α` with `R^{α+i-1}_{n-i,⊥}`.
    RadonCosineLink,
    /// `c̃ = σ_{n-i-1} π^{i-n/2}/σ_{i-1}` in `R_i M^{1-i} = c̃ R_{n-i,⊥}`
    /// and in the dual identity `M^{1-i} R_i^* φ = c̃ R^*_{n-i} φ^⊥`.
    OrthogonalTilde,
    /// `σ_{n-2}/(n-1)`, intersection body of a star body.
    IntersectionBody,
    /// `π^{i-n/2}(n-i)/i`, relating an `i`-intersection pair.
    IntersectionPair,
    /// `σ_{n-2}/(2π^{n/2-1})`, first form of the right inverse of `R_i^*`.
    RightInverse1,
    /// `π^{(1-i)/2}σ_{n-2}/σ_{n-i-1}`, second form.
    RightInverse2,
    /// `π^{1-i}σ_{n-2}σ_{i-1}/(2σ_{n-i-1})`, third form.
    RightInverse3,
}

/// Evaluates a named constant. `i` and `alpha` are ignored where unused.
pub fn constant(name: Constant, n: Dim, i: usize, alpha: f64) -> Result<f64> {
    let nf = n.as_f64();
    let needs_i = !matches!(
        name,
        Constant::CosineNorm | Constant::FunkLimit | Constant::IntersectionBody
    );
    if needs_i && !(1..n.get()).contains(&i) {
        return Err(Error::UnknownConstant(format!(
            "{name:?} needs 1 <= i <= n-1 (n = {n}, i = {i})"
        )));
    }
    let fi = i as f64;
    let s = |k: usize| sigma(k);
    let half_pi = |e: f64| PI.powf(e);
    let v = match name {
        Constant::CosineNorm => {
            s(n.get()) * gamma_ratio(&[(1.0 - alpha) / 2.0], &[alpha / 2.0])?
                / (2.0 * half_pi((nf - 1.0) / 2.0))
        }
        Constant::RadonNorm => {
            s(n.get()) * gamma_ratio(&[(nf - alpha - fi) / 2.0], &[alpha / 2.0])?
                / (2.0 * half_pi((nf - 1.0) / 2.0))
        }
        Constant::RadonLimit => s(i) / (2.0 * half_pi((fi - 1.0) / 2.0)),
        Constant::FunkLimit => s(n.get() - 1) / (2.0 * half_pi((nf - 2.0) / 2.0)),
        Constant::Lambda1 => gamma_ratio(&[(nf - 1.0) / 2.0], &[(nf - fi) / 2.0])? / s(n.get()),
        Constant::Lambda2 => gamma_ratio(&[(nf - 1.0) / 2.0], &[(nf - fi) / 2.0])?,
        Constant::DualComposite => {
            2.0 * half_pi((fi - 1.0) / 2.0) * gamma_ratio(&[(nf - 1.0) / 2.0], &[(nf - fi) / 2.0])?
                / s(i)
        }
        Constant::RadonCosineLink => 2.0 * half_pi((fi - 1.0) / 2.0) / s(i),
        Constant::OrthogonalTilde => s(n.get() - i) * half_pi(fi - nf / 2.0) / s(i),
        Constant::IntersectionBody => s(n.get() - 1) / (nf - 1.0),
        Constant::IntersectionPair => half_pi(fi - nf / 2.0) * (nf - fi) / fi,
        Constant::RightInverse1 => s(n.get() - 1) / (2.0 * half_pi(nf / 2.0 - 1.0)),
        Constant::RightInverse2 => half_pi((1.0 - fi) / 2.0) * s(n.get() - 1) / s(n.get() - i),
        Constant::RightInverse3 => {
            half_pi(1.0 - fi) * s(n.get() - 1) * s(i) / (2.0 * s(n.get() - i))
        }
    };
    Ok(v)
}

/// A diagonal operator on spherical harmonics, identified by its family and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Operator {
    Cosine { alpha: f64 },
    Sine { alpha: f64 },
    QPlus { mu: f64, nu: f64 },
    QMinus { mu: f64, nu: f64 },
    Smoothing { alpha: f64, beta: f64 },
    Funk,
    Poisson { t: f64 },
}

impl Operator {
    pub fn multiplier(&self, n: Dim, j: usize) -> Result<f64> {
        match *self {
            Operator::Cosine { alpha } => m_mult(n, j, alpha),
            Operator::Sine { alpha } => q_mult(n, j, alpha),
            Operator::QPlus { mu, nu } => qpm_mult(n, j, mu, nu, QpmSign::Plus),
            Operator::QMinus { mu, nu } => qpm_mult(n, j, mu, nu, QpmSign::Minus),
            Operator::Smoothing { alpha, beta } => a_mult(n, j, alpha, beta),
            Operator::Funk => funk_mult(n, j),
            Operator::Poisson { t } => poisson_mult(j, t),
        }
    }

    /// Multipliers for degrees `0..=band`.
    pub fn multipliers(&self, n: Dim, band: usize) -> Result<Vec<f64>> {
        (0..=band).map(|j| self.multiplier(n, j)).collect()
    }

    /// True when every odd-degree multiplier vanishes.
    pub fn even_only(&self) -> bool {
        matches!(
            self,
            Operator::Cosine { .. } | Operator::Sine { .. } | Operator::Funk
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Operator::Cosine { .. } => "cosine",
            Operator::Sine { .. } => "sine",
            Operator::QPlus { .. } => "q_plus",
            Operator::QMinus { .. } => "q_minus",
            Operator::Smoothing { .. } => "smoothing",
            Operator::Funk => "funk",
            Operator::Poisson { .. } => "poisson",
        }
    }
}

/// Multiplier of `R_i^* R_i` on degree `j`, by direct integration: the
/// average of the normalized zonal harmonic `G_j(θ·v)` over `v` uniform on a
/// random `(i-1)`-sphere through `θ`. Independent of the closed forms above.
fn radon_composite_by_quadrature(n: Dim, i: usize, j: usize, rule: Option<&JacobiRule>) -> f64 {
    let g = (n.as_f64() - 3.0) / 2.0;
    let w = JacobiWeight::symmetric(g).expect("n >= 2");
    let zonal = |t: f64| {
        let mut buf = Vec::with_capacity(j + 1);
        w.eval_all(j, t, &mut buf);
        buf[j]
    };
    let at_one = zonal(1.0);
    match (i, rule) {
        (1, _) => 0.5 * (zonal(1.0) + zonal(-1.0)) / at_one,
        (_, Some(r)) => r.integrate(zonal) / at_one,
        _ => unreachable!("a rule is supplied for i >= 2"),
    }
}

/// Runs the multiplier identity checks at dimension `n` over even `j ≤ j_max`
/// and the given `α` grid. Inadmissible points are skipped and counted.
pub fn check_identities(n: Dim, j_max: usize, alpha_grid: &[f64], tol: f64) -> Vec<IdentityReport> {
    let nf = n.as_f64();
    let evens: Vec<usize> = (0..=j_max).step_by(2).collect();
    let base = Params::default().n(n.get()).j_max(j_max);
    let mut reports = Vec::new();

    let mut inversion = ErrorTally::new();
    let mut semigroup = ErrorTally::new();
    for &alpha in alpha_grid {
        let dual = 2.0 - nf - alpha;
        if excluded(n, alpha, Family::Cosine) || excluded(n, dual, Family::Cosine) {
            inversion.skip();
        } else {
            for &j in &evens {
                match (m_mult(n, j, alpha), m_mult(n, j, dual)) {
                    (Ok(a), Ok(b)) => inversion.push(a * b, 1.0),
                    _ => inversion.skip(),
                }
            }
        }
        if excluded(n, alpha, Family::Cosine) || excluded(n, alpha + nf - 2.0, Family::Sine) {
            semigroup.skip();
        } else {
            for &j in &evens {
                match (
                    m_mult(n, j, alpha),
                    m_mult(n, j, 0.0),
                    q_mult(n, j, alpha + nf - 2.0),
                ) {
                    (Ok(a), Ok(b), Ok(q)) => semigroup.push(a * b, q),
                    _ => semigroup.skip(),
                }
            }
        }
    }
    reports.push(inversion.report("cosine_inversion", base.clone(), Metric::Mixed, tol));
    reports.push(semigroup.report("cosine_semigroup", base.clone(), Metric::Mixed, tol));

    let mut fact_m = ErrorTally::new();
    let mut fact_q = ErrorTally::new();
    let mut fact_q_shift = ErrorTally::new();
    for &alpha in alpha_grid {
        for &beta in alpha_grid {
            if excluded(n, alpha, Family::Cosine) || excluded(n, beta, Family::Cosine) {
                fact_m.skip();
                continue;
            }
            let mu = alpha - beta;
            let nu = 1.0 - beta;
            for &j in &evens {
                let Ok(a) = a_mult(n, j, alpha, beta) else {
                    fact_m.skip();
                    continue;
                };
                match (m_mult(n, j, alpha), m_mult(n, j, beta)) {
                    (Ok(ma), Ok(mb)) => fact_m.push(mb * a, ma),
                    _ => fact_m.skip(),
                }
                match (
                    qpm_mult(n, j, mu, nu, QpmSign::Plus),
                    qpm_mult(n, j, mu, nu, QpmSign::Minus),
                    qpm_mult(n, j, mu, nu + 1.0, QpmSign::Plus),
                ) {
                    (Ok(p), Ok(m), Ok(p_shift)) => {
                        fact_q.push(p * m, a);
                        fact_q_shift.push(p_shift * m, a);
                    }
                    _ => {
                        fact_q.skip();
                        fact_q_shift.skip();
                    }
                }
            }
        }
    }
    reports.push(fact_m.report("smoothing_factorization", base.clone(), Metric::Mixed, tol));
    reports.push(
        fact_q.report(
            "smoothing_poisson_factorization",
            base.clone()
                .note("mu = alpha - beta, nu = 1 - beta for both factors"),
            Metric::Mixed,
            tol,
        ),
    );
    reports.push(
        fact_q_shift.report(
            "smoothing_poisson_factorization_shifted",
            base.clone()
                .note("plus factor with nu = 2 - beta, minus factor with nu = 1 - beta"),
            Metric::Mixed,
            tol,
        ),
    );

    let mut sine_zero = ErrorTally::new();
    for &j in &evens {
        match q_mult(n, j, 0.0) {
            Ok(q) => sine_zero.push(q, 1.0),
            Err(_) => sine_zero.skip(),
        }
    }
    reports.push(sine_zero.report("sine_order_zero", base.clone(), Metric::Absolute, tol));

    for i in 1..n.get() {
        let rule = if i >= 2 {
            let g = (i as f64 - 3.0) / 2.0;
            Some(JacobiRule::new(g, g, j_max / 2 + 2).expect("valid exponent"))
        } else {
            None
        };
        let mut comp = ErrorTally::new();
        let c = constant(Constant::DualComposite, n, i, 0.0);
        for &j in &evens {
            let q = q_mult(n, j, i as f64 - 1.0);
            match (&c, q) {
                (Ok(c), Ok(q)) => {
                    comp.push(radon_composite_by_quadrature(n, i, j, rule.as_ref()), c * q)
                }
                _ => comp.skip(),
            }
        }
        reports.push(comp.report(
            "radon_dual_composite",
            base.clone().i(i),
            Metric::Mixed,
            tol,
        ));
    }

    // Asymptotic normalization, far enough out that the O(1/j) correction is small for every n.
    let mut asym = ErrorTally::new();
    for alpha in ASYMPTOTIC_ALPHAS {
        match m_mult(n, ASYMPTOTIC_DEGREE, alpha) {
            Ok(m) => {
                let jh = ASYMPTOTIC_DEGREE as f64 / 2.0;
                asym.push(m.abs() * jh.powf(alpha + nf / 2.0 - 1.0), 1.0)
            }
            Err(_) => asym.skip(),
        }
    }
    reports.push(
        asym.report(
            "cosine_asymptotics",
            Params::default()
                .n(n.get())
                .note(format!("j = {ASYMPTOTIC_DEGREE}")),
            Metric::Absolute,
            ASYMPTOTIC_TOL,
        ),
    );
    reports
}

/// Degree and orders used by the asymptotic check.
pub const ASYMPTOTIC_DEGREE: usize = 2000;
pub const ASYMPTOTIC_ALPHAS: [f64; 4] = [-1.0, 0.0, 0.5, 2.0];

/// Allowed deviation of `|m_{j,α}|(j/2)^{α+n/2-1}` from one at the top degree.
pub const ASYMPTOTIC_TOL: f64 = 0.02;
