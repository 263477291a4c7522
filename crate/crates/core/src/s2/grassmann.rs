//! Functions on the Grassmannians `G_{3,1}` (lines) and `G_{3,2}` (planes),
//! stored as even functions on S²: a line by its direction, a plane by its
//! unit normal. The map `ξ ↦ ξ^⊥` only swaps the kind.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipliers::Operator;
use crate::s2::direct::{cosine_direct, funk_direct, lines_alpha_coeffs};
use crate::s2::grid::{GridFunction, S2Grid};
use crate::s2::harmonics::{
    analyze, basis_values, harmonic_count, harmonic_index, synthesize, HarmonicCoeffs,
};
use crate::s2::spectral::apply_spectral;

/// Evenness tolerance relative to `max(1, max|φ|)`.
pub const EVEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrassmannKind {
    Lines,
    Planes,
}

impl GrassmannKind {
    pub fn perp(self) -> Self {
        match self {
            GrassmannKind::Lines => GrassmannKind::Planes,
            GrassmannKind::Planes => GrassmannKind::Lines,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            GrassmannKind::Lines => 1,
            GrassmannKind::Planes => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrassmann")]
pub struct GrassmannFunctionS2 {
    pub kind: GrassmannKind,
    #[serde(flatten)]
    pub repr: GridFunction,
}

#[derive(Deserialize)]
struct RawGrassmann {
    kind: GrassmannKind,
    #[serde(flatten)]
    repr: GridFunction,
}

impl TryFrom<RawGrassmann> for GrassmannFunctionS2 {
    type Error = Error;
    fn try_from(r: RawGrassmann) -> Result<Self> {
        GrassmannFunctionS2::new(r.kind, r.repr)
    }
}

impl GrassmannFunctionS2 {
    /// Rejects representations that are not even.
    pub fn new(kind: GrassmannKind, repr: GridFunction) -> Result<Self> {
        let mismatch = repr.odd_deviation();
        if mismatch > EVEN_TOL * repr.max_abs().max(1.0) {
            return Err(Error::OddInput { mismatch });
        }
        Ok(GrassmannFunctionS2 { kind, repr })
    }

    /// `φ^⊥(η) = φ(η^⊥)`.
    pub fn perp(&self) -> Self {
        GrassmannFunctionS2 {
            kind: self.kind.perp(),
            repr: self.repr.clone(),
        }
    }

    /// `∫ φ` for the invariant probability measure.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.kind != other.kind {
            return Err(Error::RepresentationMismatch(
                "Grassmann kinds differ".into(),
            ));
        }
        self.repr.inner(&other.repr)
    }
}

/// `R_1 f` at the line through the unit vector `line`: `(f(u) + f(-u))/2`.
pub fn radon_r1(f: &HarmonicCoeffs, line: [f64; 3]) -> Result<f64> {
    let norm = (line[0] * line[0] + line[1] * line[1] + line[2] * line[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "line direction must be a unit vector, |u| = {norm}"
        )));
    }
    let minus = [-line[0], -line[1], -line[2]];
    Ok(0.5 * (f.eval(line) + f.eval(minus)))
}

/// `R_1 f` on every grid direction.
pub fn radon_r1_grid(f: &GridFunction) -> GrassmannFunctionS2 {
    GrassmannFunctionS2 {
        kind: GrassmannKind::Lines,
        repr: f.even_part(),
    }
}

/// `R_2 f` keyed by plane normals, i.e. the Funk transform.
pub fn radon_r2_grid(f: &GridFunction, band: usize) -> Result<GrassmannFunctionS2> {
    Ok(GrassmannFunctionS2 {
        kind: GrassmannKind::Planes,
        repr: funk_direct(f, band)?.even_part(),
    })
}

fn rotate_to(theta: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    // r_θ = R_z(φ) R_y(ϑ) maps e₃ to θ
    let ct = theta[2].clamp(-1.0, 1.0);
    let st = (1.0 - ct * ct).sqrt();
    let phi = theta[1].atan2(theta[0]);
    let (sp, cp) = phi.sin_cos();
    let x = ct * v[0] + st * v[2];
    let z = -st * v[0] + ct * v[2];
    [cp * x - sp * v[1], sp * x + cp * v[1], z]
}

/// Dual Radon transform. Planes: average of `φ` over the planes through `θ`,
/// i.e. over normals on the great circle `θ^⊥`. Lines: `φ` at the line through `θ`.
pub fn dual_radon(phi: &GrassmannFunctionS2, band: usize) -> Result<GridFunction> {
    match phi.kind {
        GrassmannKind::Lines => Ok(phi.repr.clone()),
        GrassmannKind::Planes => {
            let c = analyze(&phi.repr, band)?;
            let grid = &phi.repr.grid;
            let rings: Vec<Vec<f64>> = (0..grid.n_theta())
                .into_par_iter()
                .map(|ring| plane_averages_on_ring(&c, grid, ring))
                .collect();
            GridFunction::new(grid.clone(), rings.concat())
        }
    }
}

/// Dual Radon values along one ring. The circle averages of every basis
/// function are taken pointwise at the ring's first node; the other nodes
/// follow by rotating the coefficients about the polar axis.
fn plane_averages_on_ring(c: &HarmonicCoeffs, grid: &S2Grid, ring: usize) -> Vec<f64> {
    let band = c.band();
    let m_nodes = 4 * band + 8;
    let theta = grid.point(ring, 0);
    let mut avg = vec![0.0; harmonic_count(band)];
    let mut basis = Vec::new();
    for k in 0..m_nodes {
        let (s, co) = (2.0 * PI * k as f64 / m_nodes as f64).sin_cos();
        basis_values(band, rotate_to(theta, [co, s, 0.0]), &mut basis);
        avg.iter_mut().zip(&basis).for_each(|(a, y)| *a += y);
    }
    avg.iter_mut().for_each(|a| *a /= m_nodes as f64);
    let mut u = vec![0.0; band + 1];
    let mut v = vec![0.0; band + 1];
    for j in 0..=band {
        u[0] += c.get(j, 0) * avg[harmonic_index(j, 0)];
        for m in 1..=j {
            let (cc, cs) = (c.get(j, m as i64), c.get(j, -(m as i64)));
            let (sc, ss) = (
                avg[harmonic_index(j, m as i64)],
                avg[harmonic_index(j, -(m as i64))],
            );
            u[m] += sc * cc + ss * cs;
            v[m] += sc * cs - ss * cc;
        }
    }
    (0..grid.n_phi())
        .map(|p| {
            let phi = grid.phi(p);
            (1..=band).fold(u[0], |acc, m| {
                let (s, co) = (m as f64 * phi).sin_cos();
                acc + u[m] * co + v[m] * s
            })
        })
        .collect()
}

/// `R_i^α f` by quadrature: `i = 2` is `M^α f` keyed by normals, `i = 1` uses
/// the weight `(1-(θ·u)²)^{(α-2)/2}`. `α` must lie in the direct window.
pub fn ri_alpha_direct(
    f: &GridFunction,
    i: usize,
    alpha: f64,
    band: usize,
) -> Result<GrassmannFunctionS2> {
    crate::zonal::check_window(alpha)?;
    let repr = match i {
        1 => lines_alpha_coeffs(&analyze(f, band)?, &f.grid, alpha)?,
        2 => cosine_direct(f, alpha, band)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "on S² the Radon index must be 1 or 2, got {i}"
            )))
        }
    };
    Ok(GrassmannFunctionS2 {
        kind: GrassmannKind::from_index(i)?,
        repr: repr.even_part(),
    })
}

impl GrassmannKind {
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(GrassmannKind::Lines),
            2 => Ok(GrassmannKind::Planes),
            _ => Err(Error::InvalidArgument(format!(
                "on S² the Radon index must be 1 or 2, got {i}"
            ))),
        }
    }
}

/// Dual family `R̊_2^α φ` on planes, which for `n = 3` is `M^α` of the normal representation.
pub fn dual_planes_alpha_spectral(
    phi: &GrassmannFunctionS2,
    alpha: f64,
    band: usize,
) -> Result<GridFunction> {
    if phi.kind != GrassmannKind::Planes {
        return Err(Error::RepresentationMismatch(
            "expected a function on planes".into(),
        ));
    }
    let c = apply_spectral(&analyze(&phi.repr, band)?, &Operator::Cosine { alpha })?;
    synthesize(&c, &phi.repr.grid)
}
