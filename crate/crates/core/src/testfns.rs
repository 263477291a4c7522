//! Seeded random band-limited test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::multipliers::Dim;
use crate::s2::harmonics::HarmonicCoeffs;
use crate::zonal::ZonalFunction;

/// `c_{j,k} ~ U(-1, 1)·(1+j)^{-2}`; odd degrees are zeroed when `even` is set.
pub fn random_coeffs(band: usize, seed: u64, even: bool) -> HarmonicCoeffs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = HarmonicCoeffs::zeros(band);
    for j in 0..=band {
        let decay = 1.0 / ((1 + j) * (1 + j)) as f64;
        for k in -(j as i64)..=(j as i64) {
            let v: f64 = rng.gen_range(-1.0..1.0) * decay;
            if !(even && j % 2 == 1) {
                c.set(j, k, v);
            }
        }
    }
    c
}

/// Zonal analogue of [`random_coeffs`].
pub fn random_zonal(n: Dim, band: usize, seed: u64, even: bool) -> ZonalFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=band)
        .map(|j| {
            let v: f64 = rng.gen_range(-1.0..1.0) / ((1 + j) * (1 + j)) as f64;
            if even && j % 2 == 1 {
                0.0
            } else {
                v
            }
        })
        .collect();
    ZonalFunction::new(n, coeffs)
}

/// Even coefficients of `1 + amplitude·g`, with the non-constant part of `g`
/// drawn as in [`random_coeffs`]. Positive whenever `amplitude` is small.
pub fn random_body_coeffs(band: usize, seed: u64, amplitude: f64) -> HarmonicCoeffs {
    let mut c = random_coeffs(band, seed, true).scale(amplitude);
    c.set(0, 0, 1.0);
    c
}
