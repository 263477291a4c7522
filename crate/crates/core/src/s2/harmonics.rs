//! Real spherical harmonics on S², orthonormal for the probability measure:
//! `Y_{j,0} = P̄_j^0(z)`, `Y_{j,k} = √2 P̄_j^k(z) cos kφ`, `Y_{j,-k} = √2 P̄_j^k(z) sin kφ`,
//! where `½∫_{-1}^{1} P̄_j^k(z)² dz = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::s2::grid::{GridFunction, S2Grid};

pub const HARMONIC_ORDERING: &str = "j-major,k-ascending";

/// Flat position of `(j, k)`, `-j ≤ k ≤ j`.
pub fn harmonic_index(j: usize, k: i64) -> usize {
    j * j + (k + j as i64) as usize
}

pub fn harmonic_count(band: usize) -> usize {
    (band + 1) * (band + 1)
}

fn tri(j: usize, k: usize) -> usize {
    j * (j + 1) / 2 + k
}

/// Normalized associated Legendre values `P̄_j^k(z)` for `0 ≤ k ≤ j ≤ band`,
/// stored at `j(j+1)/2 + k`.
pub fn legendre_table(band: usize, z: f64, out: &mut Vec<f64>) {
    out.clear();
    out.resize((band + 1) * (band + 2) / 2, 0.0);
    let s = (1.0 - z * z).max(0.0).sqrt();
    out[0] = 1.0;
    for k in 1..=band {
        let kf = k as f64;
        out[tri(k, k)] = ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s * out[tri(k - 1, k - 1)];
    }
    for k in 0..band {
        let kf = k as f64;
        out[tri(k + 1, k)] = (2.0 * kf + 3.0).sqrt() * z * out[tri(k, k)];
        for j in k + 2..=band {
            let (jf, jm) = (j as f64, (j - 1) as f64);
            let a = ((4.0 * jf * jf - 1.0) / (jf * jf - kf * kf)).sqrt();
            let b = ((jm * jm - kf * kf) / (4.0 * jm * jm - 1.0)).sqrt();
            out[tri(j, k)] = a * (z * out[tri(j - 1, k)] - b * out[tri(j - 2, k)]);
        }
    }
}

/// Every basis function `Y_{j,k}(x)`, `j ≤ band`, in coefficient order.
pub fn basis_values(band: usize, x: [f64; 3], out: &mut Vec<f64>) {
    let mut leg = Vec::new();
    legendre_table(band, x[2].clamp(-1.0, 1.0), &mut leg);
    out.clear();
    out.resize(harmonic_count(band), 0.0);
    let phi = x[1].atan2(x[0]);
    let r2 = std::f64::consts::SQRT_2;
    for j in 0..=band {
        out[harmonic_index(j, 0)] = leg[tri(j, 0)];
        for m in 1..=j {
            let (s, c) = (m as f64 * phi).sin_cos();
            out[harmonic_index(j, m as i64)] = r2 * leg[tri(j, m)] * c;
            out[harmonic_index(j, -(m as i64))] = r2 * leg[tri(j, m)] * s;
        }
    }
}

/// Coefficients `c_{j,k}` for `j ≤ band`, ordered by `j` then ascending `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoeffs", into = "RawCoeffs")]
pub struct HarmonicCoeffs {
    band: usize,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawCoeffs {
    #[serde(rename = "L")]
    band: usize,
    ordering: String,
    coeffs: Vec<f64>,
}

impl TryFrom<RawCoeffs> for HarmonicCoeffs {
    type Error = Error;
    fn try_from(r: RawCoeffs) -> Result<Self> {
        if r.ordering != HARMONIC_ORDERING {
            return Err(Error::RepresentationMismatch(format!(
                "unsupported coefficient ordering {:?}",
                r.ordering
            )));
        }
        HarmonicCoeffs::from_vec(r.band, r.coeffs)
    }
}

impl From<HarmonicCoeffs> for RawCoeffs {
    fn from(c: HarmonicCoeffs) -> Self {
        RawCoeffs {
            band: c.band,
            ordering: HARMONIC_ORDERING.to_string(),
            coeffs: c.coeffs,
        }
    }
}

impl HarmonicCoeffs {
    pub fn zeros(band: usize) -> Self {
        HarmonicCoeffs {
            band,
            coeffs: vec![0.0; harmonic_count(band)],
        }
    }

    pub fn from_vec(band: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != harmonic_count(band) {
            return Err(Error::DimensionMismatch {
                expected: harmonic_count(band),
                got: coeffs.len(),
            });
        }
        Ok(HarmonicCoeffs { band, coeffs })
    }

    /// Single basis element `Y_{j,k}`.
    pub fn delta(band: usize, j: usize, k: i64) -> Self {
        let mut c = Self::zeros(band);
        c.coeffs[harmonic_index(j, k)] = 1.0;
        c
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, j: usize, k: i64) -> f64 {
        self.coeffs[harmonic_index(j, k)]
    }

    pub fn set(&mut self, j: usize, k: i64, v: f64) {
        self.coeffs[harmonic_index(j, k)] = v;
    }

    /// Multiplies every degree-`j` block by `mult[j]`.
    pub fn scale_degrees(&self, mult: &[f64]) -> Self {
        let mut out = self.clone();
        for (j, m) in mult.iter().enumerate().take(self.band + 1) {
            for v in &mut out.coeffs[j * j..(j + 1) * (j + 1)] {
                *v *= m;
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_band(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(HarmonicCoeffs {
            band: self.band,
            coeffs,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_band(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    fn check_band(&self, other: &Self) -> Result<()> {
        if self.band != other.band {
            return Err(Error::RepresentationMismatch(format!(
                "band limits differ: {} vs {}",
                self.band, other.band
            )));
        }
        Ok(())
    }

    /// `Σ c²`, equal to `∫ f²` by orthonormality.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Energy carried by odd degrees.
    pub fn odd_energy(&self) -> f64 {
        self.energy_where(|j| j % 2 == 1)
    }

    /// Energy carried by degrees `j ≥ from`.
    pub fn tail_energy(&self, from: usize) -> f64 {
        self.energy_where(|j| j >= from)
    }

    fn energy_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        (0..=self.band)
            .filter(|&j| keep(j))
            .map(|j| {
                self.coeffs[j * j..(j + 1) * (j + 1)]
                    .iter()
                    .map(|c| c * c)
                    .sum::<f64>()
            })
            .sum()
    }

    /// Drops odd degrees.
    pub fn even_part(&self) -> Self {
        let mult: Vec<f64> = (0..=self.band)
            .map(|j| if j % 2 == 0 { 1.0 } else { 0.0 })
            .collect();
        self.scale_degrees(&mult)
    }

    /// Keeps degrees `≤ band`, zero-padding if `band` exceeds the stored limit.
    pub fn with_band(&self, band: usize) -> Self {
        let mut out = Self::zeros(band);
        let n = harmonic_count(band.min(self.band));
        out.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        out
    }

    /// Longitudinal Fourier coefficients on the circle of height `z`:
    /// `f(z, φ) = a_0 + Σ_{m≥1} (a_m cos mφ + b_m sin mφ)`.
    pub fn ring_fourier(
        &self,
        z: f64,
        legendre: &mut Vec<f64>,
        a: &mut Vec<f64>,
        b: &mut Vec<f64>,
    ) {
        let band = self.band;
        legendre_table(band, z, legendre);
        a.clear();
        a.resize(band + 1, 0.0);
        b.clear();
        b.resize(band + 1, 0.0);
        let r2 = std::f64::consts::SQRT_2;
        for j in 0..=band {
            a[0] += self.coeffs[harmonic_index(j, 0)] * legendre[tri(j, 0)];
            for m in 1..=j {
                let p = r2 * legendre[tri(j, m)];
                a[m] += self.coeffs[harmonic_index(j, m as i64)] * p;
                b[m] += self.coeffs[harmonic_index(j, -(m as i64))] * p;
            }
        }
    }

    /// Pointwise value at a unit vector.
    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let mut leg = Vec::new();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        self.ring_fourier(x[2].clamp(-1.0, 1.0), &mut leg, &mut a, &mut b);
        let phi = x[1].atan2(x[0]);
        let mut v = a[0];
        for m in 1..=self.band {
            let (s, c) = (m as f64 * phi).sin_cos();
            v += a[m] * c + b[m] * s;
        }
        v
    }
}

/// Per-ring `Σ_p f cos(mφ_p)` and `Σ_p f sin(mφ_p)`, `m ≤ band`.
fn ring_dft(values: &[f64], band: usize, grid: &S2Grid) -> (Vec<f64>, Vec<f64>) {
    let mut c = vec![0.0; band + 1];
    let mut s = vec![0.0; band + 1];
    for (p, &v) in values.iter().enumerate() {
        let phi = grid.phi(p);
        for m in 0..=band {
            let (sm, cm) = (m as f64 * phi).sin_cos();
            c[m] += v * cm;
            s[m] += v * sm;
        }
    }
    (c, s)
}

/// Coefficients by Gauss–Legendre × trapezoid quadrature; exact for `f` of degree `≤ band`.
pub fn analyze(f: &GridFunction, band: usize) -> Result<HarmonicCoeffs> {
    let grid = &f.grid;
    grid.check_band(band)?;
    let n_phi = grid.n_phi();
    let mut out = HarmonicCoeffs::zeros(band);
    let mut leg = Vec::new();
    let r2 = std::f64::consts::SQRT_2;
    for i in 0..grid.n_theta() {
        let (c, s) = ring_dft(&f.values[i * n_phi..(i + 1) * n_phi], band, grid);
        legendre_table(band, grid.z(i), &mut leg);
        let w = grid.weight(i);
        for j in 0..=band {
            out.coeffs[harmonic_index(j, 0)] += w * leg[tri(j, 0)] * c[0];
            for m in 1..=j {
                let p = w * r2 * leg[tri(j, m)];
                out.coeffs[harmonic_index(j, m as i64)] += p * c[m];
                out.coeffs[harmonic_index(j, -(m as i64))] += p * s[m];
            }
        }
    }
    Ok(out)
}

/// Values of the expansion at every node of `grid`.
pub fn synthesize(c: &HarmonicCoeffs, grid: &S2Grid) -> Result<GridFunction> {
    grid.check_band(c.band)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut leg = Vec::new();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for i in 0..grid.n_theta() {
        c.ring_fourier(grid.z(i), &mut leg, &mut a, &mut b);
        for p in 0..grid.n_phi() {
            let phi = grid.phi(p);
            let mut v = a[0];
            for m in 1..=c.band {
                let (s, co) = (m as f64 * phi).sin_cos();
                v += a[m] * co + b[m] * s;
            }
            values.push(v);
        }
    }
    GridFunction::new(grid.clone(), values)
}
