//! Symmetry content of a defect representation: the square-root dressing
//! `lambda(k)` that trivializes the matrix structure of the vacuum values,
//! the dressed doubled S-matrix, vacuum expectations of the dressed
//! generators, and the Laurent-coefficient bookkeeping of which generator
//! coefficients acquire nonvanishing vacuum expectation values.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::defect_rep::DefectRep;
use crate::smatrix::DoubledSMatrix;
use crate::spectral::{max_abs, ExtendedReal, SpectralMatrix, SpectralScalar};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Data of the dressing: the unitary change of basis `M`, the sign diagonal
/// `E`, and the scale `a` of the matrix part `(I + i a k E)/(1 + i a k)`.
/// `E` is kept diagonal so the square root acts entrywise.
#[derive(Clone)]
pub struct BreakingParams {
    pub n: usize,
    pub a: ExtendedReal,
    pub e_diag: Vec<f64>,
    pub m: DMatrix<Complex64>,
}

impl BreakingParams {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.m.nrows() != n || self.m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "M is {}x{}, expected {n}x{n}",
                self.m.nrows(),
                self.m.ncols()
            )));
        }
        let uni = max_abs(&(self.m.adjoint() * &self.m - DMatrix::identity(n, n)));
        if uni > 1e-9 {
            return Err(Error::Parameter(format!("M not unitary: residual {uni:e}")));
        }
        if self.e_diag.len() != n || self.e_diag.iter().any(|e| e.abs() != 1.0) {
            return Err(Error::Parameter("E must be a +-1 diagonal of length n".into()));
        }
        Ok(())
    }

    fn has_negative_direction(&self) -> bool {
        self.e_diag.iter().any(|&e| e < 0.0)
    }

    /// The infinite-scale limit of the matrix part is `E` itself, whose
    /// square root on the `-1` directions has no preferred branch.
    fn check_sqrt_exists(&self) -> Result<()> {
        if self.a == ExtendedReal::Infinity && self.has_negative_direction() {
            return Err(Error::InfinityCase);
        }
        Ok(())
    }
}

/// `(1 - i a k)/sqrt(1 + (a k)^2)` on the principal branch; the entrywise
/// square root of `(1 - i a k)/(1 + i a k)` for real `k`.
fn sqrt_factor(a: f64, k: Complex64) -> Complex64 {
    let ak = c(a, 0.0) * k;
    (Complex64::ONE - I * ak) / (Complex64::ONE + ak * ak).sqrt()
}

fn lambda_entry(p: &BreakingParams, j: usize, k: Complex64) -> Complex64 {
    match p.a {
        ExtendedReal::Infinity => Complex64::ONE,
        ExtendedReal::Finite(a) => {
            if p.e_diag[j] > 0.0 {
                Complex64::ONE
            } else {
                sqrt_factor(a, k)
            }
        }
    }
}

/// Numeric dressing matrix at a single point (diagonal in the `E` basis).
pub fn lambda_at(p: &BreakingParams, k: Complex64) -> Result<DMatrix<Complex64>> {
    p.validate()?;
    p.check_sqrt_exists()?;
    Ok(DMatrix::from_fn(p.n, p.n, |i, j| {
        if i == j {
            lambda_entry(p, j, k)
        } else {
            Complex64::ZERO
        }
    }))
}

/// The dressing `lambda(k)` as a matrix function: diagonal in the `E`
/// basis, with entry 1 on the `+1` directions and
/// `(1 - i a k)/sqrt(1 + (a k)^2)` on the `-1` ones. Squaring it yields the
/// matrix part `(I + i a k E)/(1 + i a k)` and `lambda(k) lambda(-k) = I`.
pub fn build_lambda(p: &BreakingParams) -> Result<SpectralMatrix> {
    p.validate()?;
    p.check_sqrt_exists()?;
    let out = SpectralMatrix::from_fn(p.n, |i, j| {
        if i != j {
            return SpectralScalar::zero();
        }
        match p.a {
            ExtendedReal::Infinity => SpectralScalar::one(),
            ExtendedReal::Finite(a) => {
                if p.e_diag[j] > 0.0 {
                    SpectralScalar::one()
                } else {
                    SpectralScalar::opaque(move |k| sqrt_factor(a, k), None)
                }
            }
        }
    });
    Ok(out)
}

/// The rational matrix part `(I + i a k E)/(1 + i a k)` in the `E` basis
/// (the square of the dressing); `diag(E)` at infinite scale.
pub fn matrix_part(p: &BreakingParams) -> Result<SpectralMatrix> {
    p.validate()?;
    Ok(SpectralMatrix::from_fn(p.n, |i, j| {
        if i != j {
            return SpectralScalar::zero();
        }
        let e = p.e_diag[j];
        match p.a {
            ExtendedReal::Infinity => SpectralScalar::constant(c(e, 0.0)),
            ExtendedReal::Finite(a) => {
                if e > 0.0 {
                    SpectralScalar::one()
                } else {
                    SpectralScalar::rational(
                        vec![c(1.0, 0.0), c(0.0, -a)],
                        vec![c(1.0, 0.0), c(0.0, a)],
                    )
                }
            }
        }
    }))
}

/// Largest residual of `lambda(k)^2 - (I + i a k E)/(1 + i a k)` and
/// `lambda(k) lambda(-k) - I` over the sampled momenta.
pub fn check_lambda_identities(p: &BreakingParams, ks: &[f64]) -> Result<f64> {
    let part = matrix_part(p)?;
    let id = DMatrix::<Complex64>::identity(p.n, p.n);
    let mut worst: f64 = 0.0;
    for &k in ks {
        let kk = c(k, 0.0);
        let l = lambda_at(p, kk)?;
        let lm = lambda_at(p, -kk)?;
        worst = worst.max(max_abs(&(&l * &l - part.eval(kk)?)));
        worst = worst.max(max_abs(&(&l * &lm - &id)));
    }
    Ok(worst)
}

/// Conjugate each factor of the doubled S-matrix by the dressing; block
/// `(xi1, xi2)` becomes `lambda(-p) (x) lambda(-q) s lambda(p) (x)
/// lambda(q)` with the sign-resolved momenta `p, q`.
pub fn build_tilde_s(s: &DoubledSMatrix, p: &BreakingParams) -> Result<DoubledSMatrix> {
    p.validate()?;
    p.check_sqrt_exists()?;
    if s.n() != p.n {
        return Err(Error::DimensionMismatch(format!(
            "S-matrix factor dimension {} vs dressing dimension {}",
            s.n(),
            p.n
        )));
    }
    let pc = p.clone();
    Ok(s.clone().with_dressing(move |k| {
        DMatrix::from_fn(pc.n, pc.n, |i, j| {
            if i == j {
                lambda_entry(&pc, j, c(k, 0.0))
            } else {
                Complex64::ZERO
            }
        })
    }))
}

/// Scalar vacuum values of the dressed generators: `lambda(-+k) M^dag X(k)
/// M lambda(-+k)` for each of the four families, each a multiple of the
/// identity when the representation carries the matrix structure encoded in
/// the dressing data.
#[derive(Clone)]
pub struct TildeVevs {
    pub rho_plus: SpectralScalar,
    pub rho_minus: SpectralScalar,
    pub tau_plus: SpectralScalar,
    pub tau_minus: SpectralScalar,
}

impl TildeVevs {
    /// The representation whose matrices are the scalar dressed values
    /// times the identity.
    pub fn rep(&self, n: usize) -> DefectRep {
        DefectRep {
            n,
            r_plus: SpectralMatrix::scalar(n, self.rho_plus.clone()),
            r_minus: SpectralMatrix::scalar(n, self.rho_minus.clone()),
            t_plus: SpectralMatrix::scalar(n, self.tau_plus.clone()),
            t_minus: SpectralMatrix::scalar(n, self.tau_minus.clone()),
        }
    }
}

fn dressed_value(
    mat: &SpectralMatrix,
    p: &BreakingParams,
    sign: f64,
    k: Complex64,
) -> Result<DMatrix<Complex64>> {
    let x = mat.eval(k)?;
    let l = lambda_at(p, -sign * k)?;
    Ok(&l * p.m.adjoint() * x * &p.m * &l)
}

fn dressed_scalar(mat: &SpectralMatrix, p: &BreakingParams, sign: f64) -> SpectralScalar {
    let mat = mat.clone();
    let p = p.clone();
    SpectralScalar::opaque(
        move |k| match dressed_value(&mat, &p, sign, k) {
            Ok(d) => d[(0, 0)],
            Err(_) => c(f64::NAN, f64::NAN),
        },
        None,
    )
}

/// Compute the dressed vacuum values of a representation and verify on the
/// sampled momenta that each is scalar.
pub fn tilde_vevs(rep: &DefectRep, p: &BreakingParams, ks: &[f64]) -> Result<TildeVevs> {
    p.validate()?;
    p.check_sqrt_exists()?;
    if rep.n != p.n {
        return Err(Error::DimensionMismatch(format!(
            "representation dimension {} vs dressing dimension {}",
            rep.n, p.n
        )));
    }
    let id = DMatrix::<Complex64>::identity(p.n, p.n);
    let families = [
        (&rep.r_plus, 1.0),
        (&rep.r_minus, -1.0),
        (&rep.t_plus, 1.0),
        (&rep.t_minus, -1.0),
    ];
    for (mat, sign) in families {
        for &k in ks {
            let d = match dressed_value(mat, p, sign, c(k, 0.0)) {
                Ok(d) => d,
                Err(Error::Pole { .. }) => continue,
                Err(e) => return Err(e),
            };
            let residual = max_abs(&(&d - &id * d[(0, 0)]));
            if residual > 1e-12 * (1.0 + max_abs(&d)) {
                return Err(Error::NotScalar(residual));
            }
        }
    }
    Ok(TildeVevs {
        rho_plus: dressed_scalar(&rep.r_plus, p, 1.0),
        rho_minus: dressed_scalar(&rep.r_minus, p, -1.0),
        tau_plus: dressed_scalar(&rep.t_plus, p, 1.0),
        tau_minus: dressed_scalar(&rep.t_minus, p, -1.0),
    })
}

/// Largest residual of undoing the dressing: `M lambda(+-k) (scalar value)
/// lambda(+-k) M^dag` against the original matrices, over the samples.
pub fn check_reconstruction(
    rep: &DefectRep,
    p: &BreakingParams,
    v: &TildeVevs,
    ks: &[f64],
) -> Result<f64> {
    let families = [
        (&rep.r_plus, &v.rho_plus, 1.0),
        (&rep.r_minus, &v.rho_minus, -1.0),
        (&rep.t_plus, &v.tau_plus, 1.0),
        (&rep.t_minus, &v.tau_minus, -1.0),
    ];
    let mut worst: f64 = 0.0;
    for &k in ks {
        let kk = c(k, 0.0);
        for (mat, scalar, sign) in families {
            // lambda(-+k)^-1 = lambda(+-k).
            let l = lambda_at(p, sign * kk)?;
            let rebuilt = &p.m * &l * l.clone() * p.m.adjoint() * scalar.eval(kk)?;
            let orig = match mat.eval(kk) {
                Ok(m) => m,
                Err(Error::Pole { .. }) => continue,
                Err(e) => return Err(e),
            };
            worst = worst.max(max_abs(&(rebuilt - &orig)) / (1.0 + max_abs(&orig)));
        }
    }
    Ok(worst)
}

/// The dressed-basis interpolation matrix of the two-component rotated
/// example: `[[cos^2 mu + b sin^2 mu, (b - 1) cos mu sin mu], [(b - 1)
/// cos mu sin mu, sin^2 mu + b cos^2 mu]]` with `b = (1 - i a k)/(1 + i a k)`.
pub fn gamma_matrix(mu: f64, a: f64, k: Complex64) -> Result<DMatrix<Complex64>> {
    let den = Complex64::ONE + I * c(a, 0.0) * k;
    if den.norm() < 1e-12 {
        return Err(Error::Pole { k, denom_abs: den.norm() });
    }
    let beta = (Complex64::ONE - I * c(a, 0.0) * k) / den;
    let (s, co) = mu.sin_cos();
    let (s, co) = (c(s, 0.0), c(co, 0.0));
    let off = (beta - 1.0) * co * s;
    Ok(DMatrix::from_row_slice(
        2,
        2,
        &[co * co + beta * s * s, off, off, s * s + beta * co * co],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Reflection,
    Transmission,
}

/// One Laurent coefficient of one entry of one generator family, with its
/// broken/unbroken verdict.
#[derive(Debug, Clone)]
pub struct GeneratorRecord {
    pub kind: GenKind,
    /// Half-line copy: +1 or -1.
    pub sign: i8,
    /// Power of `k^-1`, starting at 1.
    pub order: usize,
    pub row: usize,
    pub col: usize,
    pub coeff: Complex64,
    pub broken: bool,
}

/// Expand the four vacuum-value matrices in `k^-1` to `n_max` and flag each
/// coefficient entry of order >= 1 whose magnitude exceeds the tolerance;
/// those generators acquire a vacuum expectation and are broken.
pub fn expand_and_classify(
    rep: &DefectRep,
    n_max: usize,
    tol: f64,
) -> Result<Vec<GeneratorRecord>> {
    let families = [
        (GenKind::Reflection, 1i8, &rep.r_plus),
        (GenKind::Reflection, -1i8, &rep.r_minus),
        (GenKind::Transmission, 1i8, &rep.t_plus),
        (GenKind::Transmission, -1i8, &rep.t_minus),
    ];
    let mut out = Vec::new();
    for (kind, sign, mat) in families {
        let series = mat.laurent(n_max)?;
        for order in 1..=n_max {
            for row in 0..rep.n {
                for col in 0..rep.n {
                    let coeff = series.coeffs[order][(row, col)];
                    out.push(GeneratorRecord {
                        kind,
                        sign,
                        order,
                        row,
                        col,
                        coeff,
                        broken: coeff.norm() > tol,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Which structural combinations stay unbroken across a record set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationSummary {
    pub broken: usize,
    pub total: usize,
    /// No off-diagonal entry of any family is broken.
    pub off_diagonal_unbroken: bool,
    pub broken_orders_reflection: Vec<usize>,
    pub broken_orders_transmission: Vec<usize>,
}

pub fn summarize(records: &[GeneratorRecord]) -> ClassificationSummary {
    let broken = records.iter().filter(|r| r.broken).count();
    let off_diagonal_unbroken =
        records.iter().all(|r| !r.broken || r.row == r.col);
    let orders = |kind: GenKind| {
        let mut v: Vec<usize> = records
            .iter()
            .filter(|r| r.kind == kind && r.broken)
            .map(|r| r.order)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    ClassificationSummary {
        broken,
        total: records.len(),
        off_diagonal_unbroken,
        broken_orders_reflection: orders(GenKind::Reflection),
        broken_orders_transmission: orders(GenKind::Transmission),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defect_rep::{build_classified, build_nls_defect, ClassifiedParams};
    use crate::presets;
    use crate::sampling::Sampler;

    fn rotation(mu: f64) -> DMatrix<Complex64> {
        let (s, co) = mu.sin_cos();
        DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(s, 0.0), c(-s, 0.0), c(co, 0.0)])
    }

    fn odd_fn(s: &mut Sampler) -> SpectralScalar {
        let p = s.real();
        let q = s.real().abs() + 0.5;
        SpectralScalar::rational(
            vec![Complex64::ZERO, c(p, 0.0)],
            vec![c(1.0, 0.0), Complex64::ZERO, c(q, 0.0)],
        )
    }

    fn even_fn(s: &mut Sampler) -> SpectralScalar {
        SpectralScalar::rational(
            vec![c(s.real(), 0.0), Complex64::ZERO, c(s.real(), 0.0)],
            vec![c(1.0, 0.0), Complex64::ZERO, c(1.0, 0.0)],
        )
    }

    fn random_params(s: &mut Sampler, n: usize) -> (ClassifiedParams, BreakingParams) {
        let eps_plus = s.sign();
        let eps_minus = s.sign();
        let omega = if eps_plus * eps_minus < 0.0 { even_fn(s) } else { odd_fn(s) };
        let mut e_diag = s.sign_diag(n);
        e_diag[0] = -1.0;
        let m = s.unitary(n);
        let a = ExtendedReal::Finite(s.real_avoiding(&[0.0]));
        let cp = ClassifiedParams {
            n,
            m: m.clone(),
            e_diag: e_diag.clone(),
            a,
            eps_plus,
            eps_minus,
            big_a: odd_fn(s),
            big_b: even_fn(s),
            big_c: odd_fn(s),
            omega,
        };
        let bp = BreakingParams { n, a, e_diag, m };
        (cp, bp)
    }

    /// Taylor coefficients in `1/k` extracted by discrete Fourier sums on a
    /// circle in the `1/k` plane; independent of the series arithmetic.
    fn series_oracle<F: Fn(Complex64) -> Complex64>(
        f: F,
        n_max: usize,
        radius: f64,
    ) -> Vec<Complex64> {
        let steps = 128;
        (0..=n_max)
            .map(|n| {
                let mut acc = Complex64::ZERO;
                for j in 0..steps {
                    let th = std::f64::consts::TAU * j as f64 / steps as f64;
                    let u = Complex64::from_polar(radius, th);
                    acc += f(u.inv()) * Complex64::from_polar(1.0, -(n as f64) * th);
                }
                acc / c(steps as f64 * radius.powi(n as i32), 0.0)
            })
            .collect()
    }

    #[test]
    fn dressing_identities_hold() {
        let mut s = Sampler::new(11);
        for &a in &[0.5, 1.0, 2.0] {
            for n in [2usize, 3] {
                let mut e_diag = s.sign_diag(n);
                e_diag[0] = -1.0;
                let p = BreakingParams {
                    n,
                    a: ExtendedReal::Finite(a),
                    e_diag,
                    m: s.unitary(n),
                };
                let ks: Vec<f64> = (0..50).map(|_| s.momentum()).collect();
                let r = check_lambda_identities(&p, &ks).unwrap();
                assert!(r < 1e-12, "a={a} n={n}: residual {r:e}");
            }
        }
    }

    #[test]
    fn dressing_pinned_values() {
        let p = BreakingParams {
            n: 2,
            a: ExtendedReal::Finite(1.0),
            e_diag: vec![1.0, -1.0],
            m: DMatrix::identity(2, 2),
        };
        let l0 = lambda_at(&p, Complex64::ZERO).unwrap();
        assert!(max_abs(&(&l0 - DMatrix::<Complex64>::identity(2, 2))) < 1e-15);

        // Square of the nontrivial entry at k = 1 is (1 - i)/(1 + i) = -i.
        let l1 = lambda_at(&p, Complex64::ONE).unwrap();
        let sq = l1[(1, 1)] * l1[(1, 1)];
        assert!((sq - c(0.0, -1.0)).norm() < 1e-14, "got {sq}");

        let trivial = BreakingParams { e_diag: vec![1.0, 1.0], ..p };
        for k in [-3.0, 0.7, 12.0] {
            let l = lambda_at(&trivial, c(k, 0.0)).unwrap();
            assert!(max_abs(&(&l - DMatrix::<Complex64>::identity(2, 2))) < 1e-15);
        }
    }

    #[test]
    fn infinite_scale_needs_trivial_directions() {
        let p = BreakingParams {
            n: 2,
            a: ExtendedReal::Infinity,
            e_diag: vec![1.0, -1.0],
            m: DMatrix::identity(2, 2),
        };
        assert!(matches!(build_lambda(&p), Err(Error::InfinityCase)));
        let s = DoubledSMatrix::new(2, 1.0);
        assert!(matches!(build_tilde_s(&s, &p), Err(Error::InfinityCase)));

        let trivial = BreakingParams { e_diag: vec![1.0, 1.0], ..p };
        let l = lambda_at(&trivial, c(2.0, 0.0)).unwrap();
        assert!(max_abs(&(&l - DMatrix::<Complex64>::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn dressed_s_matrix_passes_structure_checks() {
        let mut s = Sampler::new(23);
        let p = BreakingParams {
            n: 2,
            a: ExtendedReal::Finite(1.0),
            e_diag: vec![1.0, -1.0],
            m: DMatrix::identity(2, 2),
        };
        let plain = DoubledSMatrix::new(2, 1.0);
        let dressed = build_tilde_s(&plain, &p).unwrap();
        for _ in 0..10 {
            let ks = s.generic_momenta(3);
            let u = dressed.check_unitarity(ks[0], ks[1]).unwrap();
            let y = dressed.check_yang_baxter(ks[0], ks[1], ks[2]).unwrap();
            assert!(u < 1e-12, "unitarity residual {u:e}");
            assert!(y < 1e-12, "Yang-Baxter residual {y:e}");
        }

        // Trivial directions leave the S-matrix untouched.
        let trivial = BreakingParams { e_diag: vec![1.0, 1.0], ..p };
        let same = build_tilde_s(&plain, &trivial).unwrap();
        let diff = max_abs(&(same.full(1.3, -0.4).unwrap() - plain.full(1.3, -0.4).unwrap()));
        assert!(diff < 1e-14, "trivial dressing changed S by {diff:e}");

        // The dressed matrix depends on both momenta, not just the difference.
        let d = max_abs(&(dressed.full(2.0, 1.0).unwrap() - dressed.full(3.0, 2.0).unwrap()));
        assert!(d > 1e-3, "equal-difference pairs should differ, got {d:e}");
    }

    #[test]
    fn dressed_vevs_are_scalar_and_reconstruct() {
        let mut s = Sampler::new(37);
        for draw in 0..6 {
            let n = 2 + draw % 2;
            let (cp, bp) = random_params(&mut s, n);
            let rep = build_classified(&cp).unwrap();
            let ks = s.generic_momenta(12);
            let v = tilde_vevs(&rep, &bp, &ks).unwrap();
            let r = check_reconstruction(&rep, &bp, &v, &ks).unwrap();
            assert!(r < 1e-10, "draw {draw}: reconstruction residual {r:e}");
        }
    }

    #[test]
    fn mismatched_basis_is_detected() {
        let mut s = Sampler::new(41);
        let (cp, bp) = presets::rotated_diag(0.6, 0.7, 2.0);
        let rep = build_classified(&cp).unwrap();
        let wrong = BreakingParams { m: rotation(0.2), ..bp };
        let ks = s.generic_momenta(12);
        assert!(matches!(tilde_vevs(&rep, &wrong, &ks), Err(Error::NotScalar(_))));
    }

    #[test]
    fn interpolation_matrix_examples() {
        // mu = 0: diag(1, beta).
        let g = gamma_matrix(0.0, 1.0, c(2.0, 0.0)).unwrap();
        let beta = (Complex64::ONE - I * 2.0) / (Complex64::ONE + I * 2.0);
        assert!((g[(0, 0)] - 1.0).norm() < 1e-14);
        assert!((g[(1, 1)] - beta).norm() < 1e-14);
        assert!(g[(0, 1)].norm() < 1e-14 && g[(1, 0)].norm() < 1e-14);

        // k = 0: identity.
        let g = gamma_matrix(0.8, 1.5, Complex64::ZERO).unwrap();
        assert!(max_abs(&(&g - DMatrix::<Complex64>::identity(2, 2))) < 1e-14);

        // a = 1, mu = pi/4, k = 1: beta = -i.
        let g = gamma_matrix(std::f64::consts::FRAC_PI_4, 1.0, Complex64::ONE).unwrap();
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5, -0.5), c(-0.5, -0.5), c(-0.5, -0.5), c(0.5, -0.5)],
        );
        assert!(max_abs(&(&g - &expected)) < 1e-14, "got {g}");

        assert!(matches!(
            gamma_matrix(0.3, 2.0, c(0.0, 0.5)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn trig_scalar_coefficients() {
        for &theta0 in &[0.3, 1.0] {
            let rep = presets::trig_scalar(2, theta0, 12);
            let records = expand_and_classify(&rep, 6, 1e-10).unwrap();
            let mut fact = 1.0;
            let mut expected = vec![1.0_f64];
            for m in 1..=6usize {
                fact *= m as f64;
                let sgn = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
                expected.push(sgn * theta0.powi(m as i32) / fact);
            }
            for r in &records {
                let want = match (r.kind, r.order % 2, r.row == r.col) {
                    (GenKind::Reflection, 0, true) => c(expected[r.order], 0.0),
                    (GenKind::Transmission, 1, true) => c(expected[r.order], 0.0),
                    _ => Complex64::ZERO,
                };
                assert!(
                    (r.coeff - want).norm() < 1e-10,
                    "{:?} sign {} order {} ({},{}): got {}, want {}",
                    r.kind,
                    r.sign,
                    r.order,
                    r.row,
                    r.col,
                    r.coeff,
                    want
                );
                assert_eq!(r.broken, want.norm() > 1e-10);
            }
            let summary = summarize(&records);
            assert!(summary.off_diagonal_unbroken);
            assert_eq!(summary.broken_orders_reflection, vec![2, 4, 6]);
            assert_eq!(summary.broken_orders_transmission, vec![1, 3, 5]);

            // Independent check of the declared expansion: Fourier-extracted
            // coefficients of the evaluator itself.
            let cos_series = rep.r_plus.get(0, 0).laurent(6).unwrap();
            let entry = rep.r_plus.get(0, 0).clone();
            let oracle = series_oracle(move |k| entry.eval(k).unwrap(), 6, 0.3);
            for m in 0..=6 {
                assert!(
                    (cos_series[m] - oracle[m]).norm() < 1e-10,
                    "order {m}: declared {} vs oracle {}",
                    cos_series[m],
                    oracle[m]
                );
            }
        }
    }

    #[test]
    fn rotated_example_closed_forms() {
        let (theta0, mu, a) = (0.6, 0.7, 2.0);
        let (cp, _) = presets::rotated_diag(theta0, mu, a);
        let rep = build_classified(&cp).unwrap();
        let (sm, cm) = mu.sin_cos();
        let entry_factor = [
            [-2.0 * sm * sm, -2.0 * sm * cm],
            [-2.0 * sm * cm, -2.0 * cm * cm],
        ];
        let families = [
            (&rep.r_plus, theta0.cos(), 1.0),
            (&rep.r_minus, -theta0.cos(), -1.0),
            (&rep.t_plus, theta0.sin(), 1.0),
            (&rep.t_minus, theta0.sin(), -1.0),
        ];
        for (mat, prefactor, sign) in families {
            let series = mat.laurent(6).unwrap();
            for order in 1..=6usize {
                let step = (I * sign / a).powu(order as u32);
                for row in 0..2 {
                    for col in 0..2 {
                        let want = c(prefactor, 0.0) * entry_factor[row][col] * step;
                        let got = series.coeffs[order][(row, col)];
                        assert!(
                            (got - want).norm() < 1e-10,
                            "sign {sign} order {order} ({row},{col}): got {got}, want {want}"
                        );
                    }
                }
            }
        }

        // Cross-check the reflection expansion against Fourier-extracted
        // coefficients of the closed-form interpolation matrix.
        let series = rep.r_plus.laurent(6).unwrap();
        for row in 0..2 {
            for col in 0..2 {
                let oracle = series_oracle(
                    move |k| gamma_matrix(mu, a, k).unwrap()[(row, col)] * theta0.cos(),
                    6,
                    0.25,
                );
                for order in 1..=6usize {
                    assert!(
                        (series.coeffs[order][(row, col)] - oracle[order]).norm() < 1e-10,
                        "order {order} ({row},{col})"
                    );
                }
            }
        }
    }

    #[test]
    fn rotated_example_dressed_values_are_constant() {
        let (theta0, mu, a) = (0.6, 0.7, 2.0);
        let (cp, bp) = presets::rotated_diag(theta0, mu, a);
        let rep = build_classified(&cp).unwrap();
        let mut s = Sampler::new(53);
        let ks = s.generic_momenta(10);
        let v = tilde_vevs(&rep, &bp, &ks).unwrap();
        for &k in &ks {
            let kk = c(k, 0.0);
            assert!((v.rho_plus.eval(kk).unwrap() - theta0.cos()).norm() < 1e-12);
            assert!((v.rho_minus.eval(kk).unwrap() + theta0.cos()).norm() < 1e-12);
            assert!((v.tau_plus.eval(kk).unwrap() - theta0.sin()).norm() < 1e-12);
            assert!((v.tau_minus.eval(kk).unwrap() - theta0.sin()).norm() < 1e-12);
        }

        // In the dressed basis nothing is broken: constants only.
        let constant = DefectRep {
            n: 2,
            r_plus: SpectralMatrix::scalar(2, SpectralScalar::constant(c(theta0.cos(), 0.0))),
            r_minus: SpectralMatrix::scalar(2, SpectralScalar::constant(c(-theta0.cos(), 0.0))),
            t_plus: SpectralMatrix::scalar(2, SpectralScalar::constant(c(theta0.sin(), 0.0))),
            t_minus: SpectralMatrix::scalar(2, SpectralScalar::constant(c(theta0.sin(), 0.0))),
        };
        let records = expand_and_classify(&constant, 6, 1e-10).unwrap();
        assert!(records.iter().all(|r| !r.broken));

        // Right-angle value: reflection vanishes, transmission is 1.
        let (cp, bp) = presets::rotated_diag(std::f64::consts::FRAC_PI_2, mu, a);
        let rep = build_classified(&cp).unwrap();
        let v = tilde_vevs(&rep, &bp, &ks).unwrap();
        let kk = c(ks[0], 0.0);
        assert!(v.rho_plus.eval(kk).unwrap().norm() < 1e-12);
        assert!(v.rho_minus.eval(kk).unwrap().norm() < 1e-12);
        assert!((v.tau_plus.eval(kk).unwrap() - 1.0).norm() < 1e-12);
        assert!((v.tau_minus.eval(kk).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn constant_representation_nothing_broken() {
        let rep = build_nls_defect(&presets::pure_transmission(), 2).unwrap();
        let records = expand_and_classify(&rep, 6, 1e-10).unwrap();
        assert!(records.iter().all(|r| !r.broken));
        assert_eq!(summarize(&records).broken, 0);
    }

    #[test]
    fn dressed_generators_satisfy_exchange_relations() {
        let mut s = Sampler::new(61);
        let (theta0, mu, a) = (0.6, 0.7, 2.0);
        let (cp, bp) = presets::rotated_diag(theta0, mu, a);
        let rep = build_classified(&cp).unwrap();
        let ks = s.generic_momenta(10);
        let v = tilde_vevs(&rep, &bp, &ks).unwrap();
        let plain = DoubledSMatrix::new(2, 1.0);
        let dressed = build_tilde_s(&plain, &bp).unwrap();
        let pairs: Vec<(f64, f64)> =
            (0..8).map(|_| (s.momentum(), s.momentum())).collect();
        let r = v.rep(2).check_rt_equations_with(&dressed, &pairs).unwrap();
        assert!(r < 1e-10, "dressed exchange residual {r:e}");
    }

    #[test]
    fn reflection_only_remnant_satisfies_reflection_identity() {
        // With no transmission the dressed reflection alone closes the
        // exchange relations against the dressed S-matrix.
        let mut s = Sampler::new(67);
        let (cp, bp) = presets::rotated_diag(0.0, 0.7, 2.0);
        let rep = build_classified(&cp).unwrap();
        let ks = s.generic_momenta(10);
        let v = tilde_vevs(&rep, &bp, &ks).unwrap();
        for &k in &ks {
            assert!(v.tau_plus.eval(c(k, 0.0)).unwrap().norm() < 1e-13);
        }
        let dressed = build_tilde_s(&DoubledSMatrix::new(2, 1.0), &bp).unwrap();
        let pairs: Vec<(f64, f64)> =
            (0..8).map(|_| (s.momentum(), s.momentum())).collect();
        let r = v.rep(2).check_rt_equations_with(&dressed, &pairs).unwrap();
        assert!(r < 1e-10, "reflection-only residual {r:e}");
    }
}
