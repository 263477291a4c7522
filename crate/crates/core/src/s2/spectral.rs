//! Diagonal operators applied to spherical-harmonic coefficients on S².

use crate::error::Result;
use crate::multipliers::{Dim, Operator};
use crate::s2::grid::GridFunction;
use crate::s2::harmonics::{analyze, synthesize, HarmonicCoeffs};

pub fn dim3() -> Dim {
    Dim::new(3).expect("3 is a valid dimension")
}

/// `c'_{j,k} = m(j)·c_{j,k}` with the operator's multipliers at `n = 3`.
pub fn apply_spectral(c: &HarmonicCoeffs, op: &Operator) -> Result<HarmonicCoeffs> {
    let mult = op.multipliers(dim3(), c.band())?;
    Ok(c.scale_degrees(&mult))
}

/// Analyze at `band`, apply, and synthesize on the input grid.
pub fn apply_spectral_grid(f: &GridFunction, op: &Operator, band: usize) -> Result<GridFunction> {
    let c = analyze(f, band)?;
    synthesize(&apply_spectral(&c, op)?, &f.grid)
}

/// Divides by the multipliers instead, leaving degrees with a zero multiplier at zero.
pub fn invert_spectral(c: &HarmonicCoeffs, op: &Operator) -> Result<HarmonicCoeffs> {
    let mult: Vec<f64> = op
        .multipliers(dim3(), c.band())?
        .into_iter()
        .map(|m| if m == 0.0 { 0.0 } else { 1.0 / m })
        .collect();
    Ok(c.scale_degrees(&mult))
}
