//! Algebraic toolkit for the N-component nonlinear Schrodinger model with a
//! point defect at the origin.
//!
//! The crate is organised around the objects that drive such a model:
//!
//! * [`spectral`] - rational functions of the spectral parameter `k`, scalar
//!   and matrix valued, with reflection `k -> -k`, real-axis conjugation and
//!   Laurent expansion at infinity;
//! * [`smatrix`] - the bulk two-body S-matrix, its doubled `(2N)^2 x (2N)^2`
//!   form, and residual checkers for unitarity and the Yang-Baxter equation;
//! * [`defect_rep`] - reflection/transmission matrix families `R±(k), T±(k)`,
//!   both the concrete NLS defect family and the fully classified one, with
//!   all the constraint checkers;
//! * [`rt_engine`] - a normal-ordering rewrite engine for creation-operator
//!   words, producing factorized scattering amplitudes and hierarchy
//!   Hamiltonian actions on few-particle states;
//! * [`boundary`] - boundary conditions at the defect: functional equations,
//!   closed-form case solutions, differential-operator rendering and numeric
//!   verification on free solutions;
//! * [`breaking`] - spontaneous symmetry breaking: the dressing matrix
//!   `lambda(k)`, the dressed S-matrix, vacuum expectation values and the
//!   broken/unbroken classification of generator coefficients.

pub mod boundary;
pub mod breaking;
pub mod defect_rep;
pub mod error;
pub mod presets;
pub mod report;
pub mod rt_engine;
pub mod sampling;
pub mod smatrix;
pub mod spectral;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
