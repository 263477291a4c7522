//! Gauss-colatitude × equiangular-longitude grids on S² and sampled functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Product grid: Gauss–Legendre nodes in `z = cos θ` (ascending) times
/// `n_phi` equally spaced longitudes `φ_p = 2πp/n_phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct S2Grid {
    n_theta: usize,
    n_phi: usize,
    z: Vec<f64>,
    /// Weight of one node on ring `i`; all weights sum to one.
    node_weight: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridShape {
    n_theta: usize,
    n_phi: usize,
}

impl Serialize for S2Grid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridShape {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for S2Grid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let shape = GridShape::deserialize(d)?;
        S2Grid::new(shape.n_theta, shape.n_phi).map_err(serde::de::Error::custom)
    }
}

impl S2Grid {
    /// Requires `n_theta ≥ 1` and an even `n_phi ≥ 2·n_theta`, so that the
    /// antipode of every node is again a node.
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        let bad = |reason: &str| Error::BadGrid {
            n_theta,
            n_phi,
            reason: reason.to_string(),
        };
        if n_theta == 0 {
            return Err(bad("n_theta must be positive"));
        }
        if n_phi < 2 * n_theta {
            return Err(bad("n_phi must be at least 2 * n_theta"));
        }
        if n_phi % 2 == 1 {
            return Err(bad("n_phi must be even"));
        }
        let rule = gauss_legendre(n_theta)?;
        let node_weight = rule.weights.iter().map(|w| w / n_phi as f64).collect();
        Ok(S2Grid {
            n_theta,
            n_phi,
            z: rule.nodes,
            node_weight,
        })
    }

    /// Smallest admissible grid resolving band limit `band`.
    pub fn for_band(band: usize) -> Result<Self> {
        let n_theta = band + 1;
        S2Grid::new(n_theta, (2 * n_theta).max(2 * band + 2))
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn z(&self, ring: usize) -> f64 {
        self.z[ring]
    }

    pub fn zs(&self) -> &[f64] {
        &self.z
    }

    pub fn phi(&self, p: usize) -> f64 {
        2.0 * PI * p as f64 / self.n_phi as f64
    }

    pub fn weight(&self, ring: usize) -> f64 {
        self.node_weight[ring]
    }

    pub fn index(&self, ring: usize, p: usize) -> usize {
        ring * self.n_phi + p
    }

    pub fn point(&self, ring: usize, p: usize) -> [f64; 3] {
        let z = self.z[ring];
        let s = (1.0 - z * z).sqrt();
        let phi = self.phi(p);
        [s * phi.cos(), s * phi.sin(), z]
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.n_theta)
            .flat_map(|i| (0..self.n_phi).map(move |p| (i, p)))
            .map(|(i, p)| self.point(i, p))
            .collect()
    }

    /// Flat index of the antipodal node.
    pub fn antipode(&self, idx: usize) -> usize {
        let (i, p) = (idx / self.n_phi, idx % self.n_phi);
        self.index(self.n_theta - 1 - i, (p + self.n_phi / 2) % self.n_phi)
    }

    /// Highest band limit the grid analyzes exactly.
    pub fn max_band(&self) -> usize {
        (self.n_theta - 1).min((self.n_phi - 1) / 2)
    }

    pub fn check_band(&self, band: usize) -> Result<()> {
        if band > self.max_band() {
            return Err(Error::GridTooCoarse {
                n_theta: self.n_theta,
                n_phi: self.n_phi,
                band,
            });
        }
        Ok(())
    }
}

/// Values on an [`S2Grid`], ring-major (`values[ring * n_phi + p]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridFunction")]
pub struct GridFunction {
    pub grid: S2Grid,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Deserialize)]
struct RawGridFunction {
    grid: S2Grid,
    values: Vec<f64>,
    #[serde(default)]
    meta: Option<serde_json::Value>,
}

impl TryFrom<RawGridFunction> for GridFunction {
    type Error = Error;
    fn try_from(r: RawGridFunction) -> Result<Self> {
        let mut f = GridFunction::new(r.grid, r.values)?;
        f.meta = r.meta;
        Ok(f)
    }
}

impl GridFunction {
    pub fn new(grid: S2Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite grid value at index {k}"
            )));
        }
        Ok(GridFunction {
            grid,
            values,
            meta: None,
        })
    }

    pub fn from_fn(grid: &S2Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        GridFunction {
            grid: grid.clone(),
            values,
            meta: None,
        }
    }

    pub fn constant(grid: &S2Grid, c: f64) -> Self {
        GridFunction {
            grid: grid.clone(),
            values: vec![c; grid.len()],
            meta: None,
        }
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    /// `∫ f dθ` for the probability measure.
    pub fn integral(&self) -> f64 {
        self.weighted_sum(|_, v| v)
    }

    /// `∫ f g dθ`.
    pub fn inner(&self, other: &GridFunction) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self.weighted_sum(|k, v| v * other.values[k]))
    }

    fn weighted_sum(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        let n_phi = self.grid.n_phi();
        (0..self.grid.n_theta())
            .map(|i| {
                let ring: f64 = (0..n_phi)
                    .map(|p| f(i * n_phi + p, self.values[i * n_phi + p]))
                    .sum();
                ring * self.grid.weight(i)
            })
            .sum()
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::RepresentationMismatch(format!(
                "grids differ: {}x{} vs {}x{}",
                self.grid.n_theta(),
                self.grid.n_phi(),
                other.grid.n_theta(),
                other.grid.n_phi()
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            meta: None,
        }
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        self.map(|v| c * v)
    }

    /// `(f(u) + f(-u)) / 2` at every node.
    pub fn even_part(&self) -> GridFunction {
        let values = (0..self.values.len())
            .map(|k| 0.5 * (self.values[k] + self.values[self.grid.antipode(k)]))
            .collect();
        GridFunction {
            grid: self.grid.clone(),
            values,
            meta: None,
        }
    }

    /// `max |f(u) - f(-u)|`.
    pub fn odd_deviation(&self) -> f64 {
        (0..self.values.len())
            .map(|k| (self.values[k] - self.values[self.grid.antipode(k)]).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_diff(&self, other: &GridFunction) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}
