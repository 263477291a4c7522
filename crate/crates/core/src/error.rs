use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alpha = {alpha} is excluded for family {family} at n = {n} (lattice {lattice})")]
    ExcludedParameter {
        family: String,
        n: usize,
        alpha: f64,
        lattice: String,
    },
    #[error("numerator gamma pole at degree {j} for alpha = {alpha}")]
    NumeratorPole { j: usize, alpha: f64 },
    #[error("gamma function pole at argument {arg}")]
    GammaPole { arg: f64 },
    #[error("alpha = {alpha} outside the direct-quadrature window [{lo}, {hi}]")]
    QuadratureWindow { alpha: f64, lo: f64, hi: f64 },
    #[error("rule with {nodes} nodes cannot resolve degree {degree}")]
    InsufficientRule { nodes: usize, degree: usize },
    #[error("grid {n_theta}x{n_phi} cannot resolve band limit {band}")]
    GridTooCoarse {
        n_theta: usize,
        n_phi: usize,
        band: usize,
    },
    #[error("invalid grid {n_theta}x{n_phi}: {reason}")]
    BadGrid {
        n_theta: usize,
        n_phi: usize,
        reason: String,
    },
    #[error("input is not even (max antipodal mismatch {mismatch:e})")]
    OddInput { mismatch: f64 },
    #[error("body has odd-energy fraction {fraction:e} (limit {limit:e})")]
    OddBody { fraction: f64, limit: f64 },
    #[error("radial function is not strictly positive (min {min:e})")]
    NonPositiveBody { min: f64 },
    #[error("operator produced a negative radial function (min {min:e})")]
    NegativeOutput { min: f64 },
    #[error("bad shape parameters: {0}")]
    BadShapeParams(String),
    #[error("unknown or inapplicable constant: {0}")]
    UnknownConstant(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
