//! Spherical intertwining operators: cosine, sine and Radon-type transforms
//! on the sphere, computed through three engines (closed-form multipliers,
//! zonal Gegenbauer expansions and full spherical harmonics on S²), plus
//! tools for radial functions of origin-symmetric star bodies.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod multipliers;
pub mod quadrature;
pub mod report;
pub mod s2;
pub mod special;
pub mod starbody;
pub mod suites;
pub mod testfns;
pub mod zonal;

pub use error::{Error, Result};
