//! Operators evaluated by direct quadrature of their integral kernels.
//!
//! For an output node `u` every integral is written in coordinates adapted
//! to `u`: `θ = s u + √(1-s²)(cos ψ e₁ + sin ψ e₂)`, with a one-dimensional
//! rule in `s = θ·u` carrying the kernel and a periodic trapezoid in `ψ`.
//! The integrand is evaluated from the harmonic coefficients of `f`, so the
//! only error is that of the two rules. All nodes of one ring share the same
//! rule up to a rotation about the polar axis, which reduces the cost to a
//! handful of Fourier sums per ring.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multipliers::{constant, Constant};
use crate::quadrature::{gauss_legendre, JacobiRule};
use crate::s2::grid::{GridFunction, S2Grid};
use crate::s2::harmonics::{analyze, HarmonicCoeffs};
use crate::s2::spectral::dim3;
use crate::special::beta;
use crate::zonal::{check_window, FoldedRule};

/// Rule in `s = θ·u` with weights that already include the kernel and the
/// normalization, plus the number of azimuthal trapezoid points.
#[derive(Debug, Clone)]
pub struct AxisRule {
    pub s: Vec<f64>,
    pub w: Vec<f64>,
    pub n_psi: usize,
}

impl AxisRule {
    fn from_folded(rule: &FoldedRule, scale: f64, n_psi: usize) -> Self {
        let mut s = Vec::with_capacity(2 * rule.nodes.len());
        let mut w = Vec::with_capacity(2 * rule.nodes.len());
        for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
            s.extend([x, -x]);
            w.extend([scale * wx, scale * wx]);
        }
        AxisRule { s, w, n_psi }
    }
}

fn psi_points(band: usize) -> usize {
    4 * band + 8
}

/// `Σ_q W_q f(θ_q(u))` at every node `u` of `grid`.
pub fn ring_integrate(c: &HarmonicCoeffs, grid: &S2Grid, rule: &AxisRule) -> Result<GridFunction> {
    let band = c.band();
    let n_phi = grid.n_phi();
    let rings: Vec<Vec<f64>> = (0..grid.n_theta())
        .into_par_iter()
        .map(|i| {
            let z = grid.z(i);
            let st = (1.0 - z * z).sqrt();
            let u = [st, 0.0, z];
            let e1 = [z, 0.0, -st];
            let mut ca = vec![0.0; band + 1];
            let mut sa = vec![0.0; band + 1];
            let mut cb = vec![0.0; band + 1];
            let mut sb = vec![0.0; band + 1];
            let (mut leg, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
            for (&s, &ws) in rule.s.iter().zip(&rule.w) {
                let r = (1.0 - s * s).max(0.0).sqrt();
                let wq = ws / rule.n_psi as f64;
                for k in 0..rule.n_psi {
                    let (sp, cp) = (2.0 * PI * k as f64 / rule.n_psi as f64).sin_cos();
                    let x = s * u[0] + r * cp * e1[0];
                    let y = r * sp;
                    let zq = (s * u[2] + r * cp * e1[2]).clamp(-1.0, 1.0);
                    c.ring_fourier(zq, &mut leg, &mut a, &mut b);
                    let phi = y.atan2(x);
                    for m in 0..=band {
                        let (sm, cm) = (m as f64 * phi).sin_cos();
                        ca[m] += wq * a[m] * cm;
                        sa[m] += wq * a[m] * sm;
                        cb[m] += wq * b[m] * cm;
                        sb[m] += wq * b[m] * sm;
                    }
                }
            }
            (0..n_phi)
                .map(|p| {
                    let phi = grid.phi(p);
                    (0..=band)
                        .map(|m| {
                            let (sm, cm) = (m as f64 * phi).sin_cos();
                            cm * (ca[m] + sb[m]) + sm * (cb[m] - sa[m])
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    GridFunction::new(grid.clone(), rings.concat())
}

/// `γ₃(α) ∫ f(θ)|θ·u|^{α-1} dθ` for any `α > 0`, without the window check.
/// Accuracy outside the validated window is not guaranteed.
pub fn cosine_direct_coeffs(c: &HarmonicCoeffs, grid: &S2Grid, alpha: f64) -> Result<GridFunction> {
    let band = c.band();
    let folded = FoldedRule::new(dim3(), alpha, band + 4)?;
    let gamma = constant(Constant::CosineNorm, dim3(), 1, alpha)?;
    ring_integrate(
        c,
        grid,
        &AxisRule::from_folded(&folded, gamma, psi_points(band)),
    )
}

/// Generalized cosine transform `M^α f` by quadrature, `0.5 ≤ α ≤ 3`.
pub fn cosine_direct(f: &GridFunction, alpha: f64, band: usize) -> Result<GridFunction> {
    check_window(alpha)?;
    cosine_direct_coeffs(&analyze(f, band)?, &f.grid, alpha)
}

/// Average over the great circle orthogonal to each node.
pub fn funk_direct_coeffs(c: &HarmonicCoeffs, grid: &S2Grid) -> Result<GridFunction> {
    let rule = AxisRule {
        s: vec![0.0],
        w: vec![1.0],
        n_psi: psi_points(c.band()),
    };
    ring_integrate(c, grid, &rule)
}

/// Minkowski–Funk transform `Mf`.
pub fn funk_direct(f: &GridFunction, band: usize) -> Result<GridFunction> {
    funk_direct_coeffs(&analyze(f, band)?, &f.grid)
}

/// `γ_{3,1}(α) ∫ (1-(θ·u)²)^{(α-2)/2} f(θ) dθ`, i.e. `R_1^α` keyed by line direction.
pub fn lines_alpha_coeffs(c: &HarmonicCoeffs, grid: &S2Grid, alpha: f64) -> Result<GridFunction> {
    let band = c.band();
    let a = (alpha - 2.0) / 2.0;
    let rule = JacobiRule::new(a, a, band / 2 + 4)?;
    let gamma = constant(Constant::RadonNorm, dim3(), 1, alpha)?;
    let scale = gamma * beta(0.5, alpha / 2.0)? / 2.0;
    let axis = AxisRule {
        s: rule.nodes.clone(),
        w: rule.weights.iter().map(|w| w * scale).collect(),
        n_psi: psi_points(band),
    };
    ring_integrate(c, grid, &axis)
}

/// Poisson integral `∫ f(θ) (1-t²)/(1-2tθ·u+t²)^{3/2} dθ`, `0 ≤ t < 1`,
/// with `n_s` Gauss–Legendre nodes in `s`.
pub fn poisson_direct_coeffs(
    c: &HarmonicCoeffs,
    grid: &S2Grid,
    t: f64,
    n_s: usize,
) -> Result<GridFunction> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "Poisson parameter must lie in [0, 1), got {t}"
        )));
    }
    let rule = gauss_legendre(n_s)?;
    let kernel = |s: f64| (1.0 - t * t) / (1.0 - 2.0 * t * s + t * t).powf(1.5);
    let axis = AxisRule {
        s: rule.nodes.clone(),
        w: rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&s, &w)| w * kernel(s))
            .collect(),
        n_psi: psi_points(c.band()),
    };
    ring_integrate(c, grid, &axis)
}

/// Number of `s`-nodes used by [`poisson_direct`] by default.
pub fn poisson_nodes(band: usize, t: f64) -> usize {
    (4 * band + 32).max((60.0 / (1.0 - t)).ceil() as usize)
}

pub fn poisson_direct(f: &GridFunction, t: f64, band: usize) -> Result<GridFunction> {
    poisson_direct_coeffs(&analyze(f, band)?, &f.grid, t, poisson_nodes(band, t))
}
