//! Zonal functions on `S^{n-1}`: profiles `f(θ·e)` expanded in Gegenbauer
//! polynomials that are orthonormal for the probability measure `θ·e`
//! induces on `[-1, 1]`, i.e. the weight `(1-t²)^{(n-3)/2}` normalized.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipliers::{constant, Constant, Dim, Operator};
use crate::quadrature::{gauss_jacobi_rule, JacobiRule, JacobiWeight};
use crate::special::beta;

/// Lower and upper end of the validated direct-quadrature window for `α`.
pub const DIRECT_WINDOW: (f64, f64) = (0.5, 3.0);

pub const ZONAL_BASIS: &str = "orthonormal-gegenbauer-prob";

/// Gegenbauer coefficients `a_0, …, a_J` of a zonal function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ZonalRepr", into = "ZonalRepr")]
pub struct ZonalFunction {
    pub n: Dim,
    pub coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ZonalRepr {
    n: Dim,
    basis: String,
    coeffs: Vec<f64>,
}

impl TryFrom<ZonalRepr> for ZonalFunction {
    type Error = Error;
    fn try_from(r: ZonalRepr) -> Result<Self> {
        if r.basis != ZONAL_BASIS {
            return Err(Error::RepresentationMismatch(format!(
                "unsupported zonal basis {:?}, expected {ZONAL_BASIS:?}",
                r.basis
            )));
        }
        Ok(ZonalFunction {
            n: r.n,
            coeffs: r.coeffs,
        })
    }
}

impl From<ZonalFunction> for ZonalRepr {
    fn from(f: ZonalFunction) -> Self {
        ZonalRepr {
            n: f.n,
            basis: ZONAL_BASIS.to_string(),
            coeffs: f.coeffs,
        }
    }
}

fn basis_weight(n: Dim) -> JacobiWeight {
    JacobiWeight::symmetric((n.as_f64() - 3.0) / 2.0).expect("n >= 2 gives an exponent above -1")
}

impl ZonalFunction {
    pub fn new(n: Dim, coeffs: Vec<f64>) -> Self {
        ZonalFunction { n, coeffs }
    }

    /// Highest stored degree.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value of the profile at `t = θ·e`.
    pub fn eval(&self, t: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let mut buf = Vec::with_capacity(self.coeffs.len());
        basis_weight(self.n).eval_all(self.degree(), t, &mut buf);
        self.coeffs.iter().zip(&buf).map(|(c, z)| c * z).sum()
    }

    pub fn eval_many(&self, ts: &[f64]) -> Vec<f64> {
        ts.iter().map(|&t| self.eval(t)).collect()
    }

    /// Squared norm of the odd-degree part relative to the whole.
    pub fn odd_fraction(&self) -> f64 {
        let total: f64 = self.coeffs.iter().map(|c| c * c).sum();
        if total == 0.0 {
            return 0.0;
        }
        let odd: f64 = self.coeffs.iter().skip(1).step_by(2).map(|c| c * c).sum();
        odd / total
    }
}

/// Value of the orthonormal basis element `Z_j` at `t`.
pub fn zonal_basis(n: Dim, j: usize, t: f64) -> f64 {
    let mut buf = Vec::with_capacity(j + 1);
    basis_weight(n).eval_all(j, t, &mut buf);
    buf[j]
}

/// Gauss rule for the probability measure of `θ·e` on `S^{n-1}`.
pub fn zonal_rule(n: Dim, n_nodes: usize) -> Result<JacobiRule> {
    gauss_jacobi_rule(n.get(), n_nodes)
}

/// Coefficients `a_j = Σ_k w_k f(t_k) Z_j(t_k)` for `j ≤ band`, from samples at the rule nodes.
pub fn zonal_analyze(
    n: Dim,
    rule: &JacobiRule,
    samples: &[f64],
    band: usize,
) -> Result<ZonalFunction> {
    if samples.len() != rule.len() {
        return Err(Error::DimensionMismatch {
            expected: rule.len(),
            got: samples.len(),
        });
    }
    if rule.len() < band + 1 {
        return Err(Error::InsufficientRule {
            nodes: rule.len(),
            degree: 2 * band,
        });
    }
    let w = basis_weight(n);
    let mut coeffs = vec![0.0; band + 1];
    let mut buf = Vec::with_capacity(band + 1);
    for ((&t, &wk), &f) in rule.nodes.iter().zip(&rule.weights).zip(samples) {
        w.eval_all(band, t, &mut buf);
        for (c, z) in coeffs.iter_mut().zip(&buf) {
            *c += wk * f * z;
        }
    }
    Ok(ZonalFunction { n, coeffs })
}

/// Samples `profile` on a rule exact to degree `2·band` and analyzes it.
pub fn zonal_analyze_fn(
    n: Dim,
    profile: impl Fn(f64) -> f64,
    band: usize,
) -> Result<ZonalFunction> {
    let rule = zonal_rule(n, band + 1)?;
    let samples: Vec<f64> = rule.nodes.iter().map(|&t| profile(t)).collect();
    zonal_analyze(n, &rule, &samples, band)
}

/// Applies a diagonal operator coefficient-wise.
pub fn zonal_apply(f: &ZonalFunction, op: &Operator) -> Result<ZonalFunction> {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, &a)| Ok(op.multiplier(f.n, j)? * a))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZonalFunction { n: f.n, coeffs })
}

pub fn check_window(alpha: f64) -> Result<()> {
    let (lo, hi) = DIRECT_WINDOW;
    if !(lo..=hi).contains(&alpha) {
        return Err(Error::QuadratureWindow { alpha, lo, hi });
    }
    Ok(())
}

/// Rule for `∫_{-1}^{1} |s|^{α-1} g(s) (1-s²)^{(n-3)/2} ds` normalized by the
/// mass of `(1-s²)^{(n-3)/2}`. Folding `s ↦ |s|` and substituting `x = s²`
/// leaves a smooth integrand against `x^{α/2-1}(1-x)^{(n-3)/2}`.
#[derive(Debug, Clone)]
pub struct FoldedRule {
    /// Nodes `s_k = √x_k ∈ (0, 1)`; each is used together with `-s_k`.
    pub nodes: Vec<f64>,
    /// Weights including the normalization; apply to `g(s_k) + g(-s_k)`.
    pub weights: Vec<f64>,
}

impl FoldedRule {
    pub fn new(n: Dim, alpha: f64, n_nodes: usize) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "folded rule needs alpha > 0, got {alpha}"
            )));
        }
        let g = (n.as_f64() - 3.0) / 2.0;
        let rule = JacobiRule::new(g, alpha / 2.0 - 1.0, n_nodes)?;
        let scale = beta(alpha / 2.0, g + 1.0)? / (2.0 * beta(0.5, g + 1.0)?);
        let nodes = rule
            .nodes
            .iter()
            .map(|&y| ((1.0 + y) / 2.0).sqrt())
            .collect();
        let weights = rule.weights.iter().map(|&w| w * scale).collect();
        Ok(FoldedRule { nodes, weights })
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * (g(s) + g(-s)))
            .sum()
    }
}

/// Average over `ω ∈ S^{n-2}` of `h(ω·e')` for a fixed unit `e'`, exact for
/// polynomials of degree `≤ degree`.
fn sphere_section_average(n: Dim, degree: usize, h: impl Fn(f64) -> f64) -> Result<f64> {
    match n.get() {
        2 => Ok(0.5 * (h(1.0) + h(-1.0))),
        3 => {
            let m = 4 * degree + 8;
            Ok((0..m)
                .map(|k| h((2.0 * PI * k as f64 / m as f64).cos()))
                .sum::<f64>()
                / m as f64)
        }
        nn => {
            let rule = gauss_jacobi_rule(nn - 1, degree / 2 + 2)?;
            Ok(rule.integrate(h))
        }
    }
}

/// Direct evaluation of `(M^α f)(u)` for the zonal function `f(θ·e)`, at `u`
/// with `u·e = t0`, by tensor quadrature in coordinates adapted to `u`.
/// `band` bounds the polynomial degree of the profile and sizes the rules.
pub fn zonal_cosine_direct(
    n: Dim,
    profile: impl Fn(f64) -> f64,
    alpha: f64,
    t0: f64,
    band: usize,
) -> Result<f64> {
    check_window(alpha)?;
    if !(-1.0..=1.0).contains(&t0) {
        return Err(Error::InvalidArgument(format!(
            "t0 must lie in [-1, 1], got {t0}"
        )));
    }
    let rule = FoldedRule::new(n, alpha, band + 4)?;
    let gamma = constant(Constant::CosineNorm, n, 1, alpha)?;
    let r0 = (1.0 - t0 * t0).max(0.0).sqrt();
    let mut acc = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = (1.0 - s * s).max(0.0).sqrt();
        for s in [s, -s] {
            acc += w * sphere_section_average(n, band, |c| profile(s * t0 + r * r0 * c))?;
        }
    }
    Ok(gamma * acc)
}
