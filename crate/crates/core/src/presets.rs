//! Named parameter sets used by the tests and the command-line tool.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::boundary::BoundaryCase;
use crate::breaking::BreakingParams;
use crate::defect_rep::{ClassifiedParams, DefectRep, NLSDefectParams};
use crate::spectral::{ExtendedReal, SpectralMatrix, SpectralScalar};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Names of all built-in presets.
pub fn list() -> Vec<&'static str> {
    vec![
        "pure-transmission",
        "resonant",
        "trig-scalar",
        "rotated-diag",
        "bc-omega-1",
        "bc-omega-k",
        "bc-direction-omega-1",
        "bc-direction-omega-k",
    ]
}

/// Defect that transmits everything: identity jump, no reflection.
pub fn pure_transmission() -> NLSDefectParams {
    NLSDefectParams { a: 1.0, b: 0.0, c: 0.0, d: 1.0, alpha: Complex64::ONE }
}

/// Off-diagonal jump matrix; fully transparent at `k = +-1`, with
/// `R+ = (k^2 - 1)/(k^2 + 1)`.
pub fn resonant() -> NLSDefectParams {
    NLSDefectParams { a: 0.0, b: 1.0, c: -1.0, d: 0.0, alpha: Complex64::ONE }
}

/// Scalar representation with `R+- = cos(theta0/k) I` and
/// `T+- = sin(theta0/k) I`, carrying its expansion to `order_max`.
pub fn trig_scalar(n: usize, theta0: f64, order_max: usize) -> DefectRep {
    let mut fact = 1.0;
    let mut cos_series = vec![Complex64::ZERO; order_max + 1];
    let mut sin_series = vec![Complex64::ZERO; order_max + 1];
    cos_series[0] = Complex64::ONE;
    for m in 1..=order_max {
        fact *= m as f64;
        let sgn = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = c(sgn * theta0.powi(m as i32) / fact, 0.0);
        if m % 2 == 0 {
            cos_series[m] = coeff;
        } else {
            sin_series[m] = coeff;
        }
    }
    let cosf = SpectralScalar::opaque(
        move |k: Complex64| (c(theta0, 0.0) / k).cos(),
        Some(cos_series),
    );
    let sinf = SpectralScalar::opaque(
        move |k: Complex64| (c(theta0, 0.0) / k).sin(),
        Some(sin_series),
    );
    DefectRep {
        n,
        r_plus: SpectralMatrix::scalar(n, cosf.clone()),
        r_minus: SpectralMatrix::scalar(n, cosf),
        t_plus: SpectralMatrix::scalar(n, sinf.clone()),
        t_minus: SpectralMatrix::scalar(n, sinf),
    }
}

/// Two-component family `R+- = +-cos(theta0) M L(+-k) M^dag`,
/// `T+- = sin(theta0) M L(+-k) M^dag` with `M` the rotation by `mu` and `L`
/// the sign-diagonal matrix part of scale `a`; its dressing data comes along.
pub fn rotated_diag(theta0: f64, mu: f64, a: f64) -> (ClassifiedParams, BreakingParams) {
    let (s, co) = mu.sin_cos();
    let m = DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(s, 0.0), c(-s, 0.0), c(co, 0.0)]);
    let e_diag = vec![1.0, -1.0];
    let zero = SpectralScalar::zero();
    let cp = ClassifiedParams {
        n: 2,
        m: m.clone(),
        e_diag: e_diag.clone(),
        a: ExtendedReal::Finite(a),
        eps_plus: 1.0,
        eps_minus: -1.0,
        big_a: zero.clone(),
        big_b: zero.clone(),
        big_c: zero,
        omega: SpectralScalar::constant(c((theta0 / 2.0).tan(), 0.0)),
    };
    let bp = BreakingParams { n: 2, a: ExtendedReal::Finite(a), e_diag, m };
    (cp, bp)
}

fn reduced_boundary(
    e_diag: Vec<f64>,
    a: ExtendedReal,
    eps_minus: f64,
    omega: SpectralScalar,
) -> ClassifiedParams {
    let n = e_diag.len();
    ClassifiedParams {
        n,
        m: DMatrix::identity(n, n),
        e_diag,
        a,
        eps_plus: 1.0,
        eps_minus,
        big_a: SpectralScalar::zero(),
        big_b: SpectralScalar::zero(),
        big_c: SpectralScalar::zero(),
        omega,
    }
}

/// Scalar boundary case with constant half-angle function.
pub fn bc_omega_1() -> (ClassifiedParams, BoundaryCase) {
    (
        reduced_boundary(
            vec![1.0, 1.0],
            ExtendedReal::Finite(0.0),
            -1.0,
            SpectralScalar::one(),
        ),
        BoundaryCase::Scalar,
    )
}

/// Scalar boundary case with linear half-angle function.
pub fn bc_omega_k() -> (ClassifiedParams, BoundaryCase) {
    (
        reduced_boundary(
            vec![1.0, 1.0],
            ExtendedReal::Finite(0.0),
            1.0,
            SpectralScalar::var(),
        ),
        BoundaryCase::Scalar,
    )
}

/// Sign-diagonal boundary case with constant half-angle function.
pub fn bc_direction_omega_1() -> (ClassifiedParams, BoundaryCase) {
    (
        reduced_boundary(
            vec![1.0, -1.0],
            ExtendedReal::Infinity,
            -1.0,
            SpectralScalar::one(),
        ),
        BoundaryCase::Direction,
    )
}

/// Sign-diagonal boundary case with linear half-angle function.
pub fn bc_direction_omega_k() -> (ClassifiedParams, BoundaryCase) {
    (
        reduced_boundary(
            vec![1.0, -1.0],
            ExtendedReal::Infinity,
            1.0,
            SpectralScalar::var(),
        ),
        BoundaryCase::Direction,
    )
}
