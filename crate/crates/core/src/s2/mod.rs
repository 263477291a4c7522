//! Harmonic analysis and Radon-type operators on S² (`n = 3`).

pub mod direct;
pub mod grassmann;
pub mod grid;
pub mod harmonics;
pub mod spectral;
pub mod suite;

pub use direct::{cosine_direct, funk_direct, poisson_direct};
pub use grassmann::{dual_radon, radon_r1, ri_alpha_direct, GrassmannFunctionS2, GrassmannKind};
pub use grid::{GridFunction, S2Grid};
pub use harmonics::{analyze, synthesize, HarmonicCoeffs};
pub use spectral::apply_spectral;
