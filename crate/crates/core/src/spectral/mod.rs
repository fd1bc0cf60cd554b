//! Functions of the spectral parameter: exact polynomials and rational
//! functions, the working scalar type, and matrices thereof.

pub mod matrix;
pub mod poly;
pub mod ratfn;
pub mod scalar;

pub use matrix::{max_abs, SeriesExpansion, SpectralMatrix};
pub use poly::{gauss, Coeff, GaussRational, Poly};
pub use ratfn::{RatFn, POLE_TOL};
pub use scalar::SpectralScalar;

/// Dilation parameter `a` ranging over the reals extended by infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(a) => Some(*a),
            ExtendedReal::Infinity => None,
        }
    }
}
