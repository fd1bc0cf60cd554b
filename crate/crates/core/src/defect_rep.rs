//! Reflection and transmission matrix families describing the defect, and
//! the checks they must pass to define a Fock representation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sampling::Sampler;
use crate::smatrix::DoubledSMatrix;
use crate::spectral::{
    max_abs, ExtendedReal, Poly, RatFn, SpectralMatrix, SpectralScalar,
};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Parameters of the concrete defect family: a real 2x2 matrix
/// `[[a, b], [c, d]]` of unit determinant plus a unit-modulus coupling
/// phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NLSDefectParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub alpha: Complex64,
}

impl NLSDefectParams {
    pub fn validate(&self) -> Result<()> {
        let det = self.a * self.d - self.b * self.c;
        if (det - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("ad - bc = {det}, expected 1")));
        }
        let m = self.alpha.norm();
        if (m - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("|alpha| = {m}, expected 1")));
        }
        Ok(())
    }

    /// Scattering-theory condition: the transmission denominators must have
    /// no zero in the upper half plane.
    pub fn check_no_bound_states(&self) -> Result<()> {
        let s = self.a + self.d;
        if self.b != 0.0 {
            let gap = s - self.b.signum() * ((self.a - self.d).powi(2) + 4.0).sqrt();
            if gap > 0.0 {
                return Err(Error::BoundState(format!(
                    "a + d - sign(b) sqrt((a-d)^2 + 4) = {gap} > 0"
                )));
            }
        } else {
            if s == 0.0 {
                return Err(Error::Degenerate);
            }
            if self.c / s < 0.0 {
                return Err(Error::BoundState(format!("c/(a+d) = {} < 0", self.c / s)));
            }
        }
        Ok(())
    }
}

/// A defect representation: the four `n x n` matrix functions `R+-, T+-`.
#[derive(Debug, Clone)]
pub struct DefectRep {
    pub n: usize,
    pub r_plus: SpectralMatrix,
    pub r_minus: SpectralMatrix,
    pub t_plus: SpectralMatrix,
    pub t_minus: SpectralMatrix,
}

impl DefectRep {
    /// Doubled reflection matrix on `C^{2n}`: `diag(R+, R-)`.
    pub fn doubled_r(&self) -> SpectralMatrix {
        let n = self.n;
        SpectralMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.r_plus.get(i, j).clone(),
            (false, false) => self.r_minus.get(i - n, j - n).clone(),
            _ => SpectralScalar::zero(),
        })
    }

    /// Doubled transmission matrix: `T+` in the upper right block, `T-` in
    /// the lower left.
    pub fn doubled_t(&self) -> SpectralMatrix {
        let n = self.n;
        SpectralMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, false) => self.t_plus.get(i, j - n).clone(),
            (false, true) => self.t_minus.get(i - n, j).clone(),
            _ => SpectralScalar::zero(),
        })
    }

    /// Largest residual over sampled real momenta of the four structural
    /// identities: `R(k)^dag = R(-k)`, `T(k)^dag = T(k)`,
    /// `T T + R(k) R(-k) = I`, `T R + R T(-k) = 0` (all on the doubled
    /// space).
    pub fn check_constraints(&self, ks: &[f64]) -> Result<f64> {
        let r = self.doubled_r();
        let t = self.doubled_t();
        let id = DMatrix::<Complex64>::identity(2 * self.n, 2 * self.n);
        let mut worst: f64 = 0.0;
        for &k in ks {
            let rk = r.eval(c(k, 0.0))?;
            let rmk = r.eval(c(-k, 0.0))?;
            let tk = t.eval(c(k, 0.0))?;
            let tmk = t.eval(c(-k, 0.0))?;
            worst = worst.max(max_abs(&(rk.adjoint() - &rmk)));
            worst = worst.max(max_abs(&(tk.adjoint() - &tk)));
            worst = worst.max(max_abs(&(&tk * &tk + &rk * &rmk - &id)));
            worst = worst.max(max_abs(&(&tk * &rk + &rk * &tmk)));
        }
        Ok(worst)
    }

    /// Largest residual of the defect-algebra exchange relations against the
    /// doubled S-matrix with coupling `g`, over sampled momentum pairs.
    pub fn check_rt_equations(&self, g: f64, pairs: &[(f64, f64)]) -> Result<f64> {
        self.check_rt_equations_with(&DoubledSMatrix::new(self.n, g), pairs)
    }

    /// Same residuals against a caller-supplied doubled S-matrix (for
    /// dressed variants of the exchange structure).
    pub fn check_rt_equations_with(&self, s: &DoubledSMatrix, pairs: &[(f64, f64)]) -> Result<f64> {
        let d = 2 * self.n;
        let id = DMatrix::<Complex64>::identity(d, d);
        let r = self.doubled_r();
        let t = self.doubled_t();
        let mut worst: f64 = 0.0;
        for &(k1, k2) in pairs {
            let t1 = t.eval(c(k1, 0.0))?.kronecker(&id);
            let t2 = id.kronecker(&t.eval(c(k2, 0.0))?);
            let r1 = r.eval(c(k1, 0.0))?.kronecker(&id);
            let r2 = id.kronecker(&r.eval(c(k2, 0.0))?);

            let s12 = s.full(k1, k2)?;
            let s12_m2 = s.full(k1, -k2)?;
            let s21 = s.full_swapped(k2, k1)?;
            let s21_m2 = s.full_swapped(-k2, k1)?;
            let s21_m1 = s.full_swapped(k2, -k1)?;
            let s21_mm = s.full_swapped(-k2, -k1)?;

            // t-t exchange.
            let lhs = &s12 * &t1 * &s21 * &t2;
            let rhs = &t2 * &s12 * &t1 * &s21;
            worst = worst.max(max_abs(&(lhs - rhs)));

            // t-r exchange.
            let lhs = &s12 * &t1 * &s21 * &r2;
            let rhs = &r2 * &s12_m2 * &t1 * &s21_m2;
            worst = worst.max(max_abs(&(lhs - rhs)));

            // r-r exchange.
            let lhs = &s12 * &r1 * &s21_m1 * &r2;
            let rhs = &r2 * &s12_m2 * &r1 * &s21_mm;
            worst = worst.max(max_abs(&(lhs - rhs)));
        }
        Ok(worst)
    }
}

/// Build the concrete defect family: scalar rational multiples of the
/// identity determined by `(a, b, c, d, alpha)`.
pub fn build_nls_defect(p: &NLSDefectParams, n: usize) -> Result<DefectRep> {
    p.validate()?;
    p.check_no_bound_states()?;
    let (a, b, cc, d) = (p.a, p.b, p.c, p.d);
    let num_r = Poly::new(vec![c(cc, 0.0), I * (a - d), c(b, 0.0)]);
    let den_p = Poly::new(vec![c(-cc, 0.0), I * (a + d), c(b, 0.0)]);
    let den_m = Poly::new(vec![c(-cc, 0.0), -I * (a + d), c(b, 0.0)]);
    let scalar = |num: Poly<Complex64>, den: Poly<Complex64>| {
        SpectralMatrix::scalar(n, SpectralScalar::Rational(RatFn::new(num, den)))
    };
    Ok(DefectRep {
        n,
        r_plus: scalar(num_r.clone(), den_p.clone()),
        r_minus: scalar(num_r, den_m.clone()),
        t_plus: scalar(
            Poly::new(vec![Complex64::ZERO, 2.0 * I * p.alpha]),
            den_p,
        ),
        t_minus: scalar(
            Poly::new(vec![Complex64::ZERO, -2.0 * I * p.alpha.conj()]),
            den_m,
        ),
    })
}

/// Parameters of the general (classified) defect family.
///
/// The matrix parts are `M diag_j((1 +- i a k e_j)/(1 +- i a k)) M^dag`
/// with `e_j = +-1`, degenerating to `M diag(e) M^dag` at `a = infinity`.
/// The scalar prefactors are built from real rational functions `A, C`
/// (odd), `B` (even), the signs `eps+-`, and the half-angle function
/// `omega` with parity `omega(-k) = -eps+ eps- omega(k)`.
#[derive(Clone)]
pub struct ClassifiedParams {
    pub n: usize,
    pub m: DMatrix<Complex64>,
    pub e_diag: Vec<f64>,
    pub a: ExtendedReal,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub big_a: SpectralScalar,
    pub big_b: SpectralScalar,
    pub big_c: SpectralScalar,
    pub omega: SpectralScalar,
}

/// Cayley phase `(F - s i)/(F + s i)` of a real function `F`; unit modulus
/// on the real axis.
fn cayley(f: &SpectralScalar, s: f64) -> SpectralScalar {
    let shift = SpectralScalar::constant(c(0.0, s));
    f.sub(&shift).div(&f.add(&shift))
}

fn check_parity(name: &str, f: &SpectralScalar, even: bool, sampler: &mut Sampler) -> Result<()> {
    for _ in 0..8 {
        let k = sampler.momentum();
        let (a, b) = match (f.eval(c(k, 0.0)), f.eval(c(-k, 0.0))) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        let residual = if even { (a - b).norm() } else { (a + b).norm() };
        if residual > 1e-9 * (1.0 + a.norm()) {
            return Err(Error::Parity { name: name.into(), residual, k });
        }
        if a.im.abs() > 1e-9 * (1.0 + a.norm()) {
            return Err(Error::Parity { name: format!("{name} (real-valuedness)"), residual: a.im.abs(), k });
        }
    }
    Ok(())
}

/// Build the classified family from its parameters, verifying unitarity of
/// `M` and the declared parities first.
pub fn build_classified(p: &ClassifiedParams) -> Result<DefectRep> {
    let n = p.n;
    if p.m.nrows() != n || p.m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "M is {}x{}, expected {n}x{n}",
            p.m.nrows(),
            p.m.ncols()
        )));
    }
    let uni = max_abs(&(p.m.adjoint() * &p.m - DMatrix::identity(n, n)));
    if uni > 1e-9 {
        return Err(Error::Parameter(format!("M not unitary: residual {uni:e}")));
    }
    if p.e_diag.len() != n || p.e_diag.iter().any(|e| e.abs() != 1.0) {
        return Err(Error::Parameter("E must be a +-1 diagonal of length n".into()));
    }
    if p.eps_plus.abs() != 1.0 || p.eps_minus.abs() != 1.0 {
        return Err(Error::Parameter("eps+- must be +-1".into()));
    }
    let mut sampler = Sampler::new(0x9e3779b97f4a7c15);
    check_parity("A", &p.big_a, false, &mut sampler)?;
    check_parity("B", &p.big_b, true, &mut sampler)?;
    check_parity("C", &p.big_c, false, &mut sampler)?;
    check_parity("omega", &p.omega, p.eps_plus * p.eps_minus < 0.0, &mut sampler)?;

    let one = SpectralScalar::one();
    let w2 = p.omega.mul(&p.omega);
    let den = one.add(&w2);
    let cos_theta = one.sub(&w2).div(&den);
    let sin_theta = p.omega.scale(c(2.0, 0.0)).div(&den);

    let phase_a = cayley(&p.big_a, 1.0);
    let rho = |sign: f64, eps: f64| {
        phase_a
            .mul(&cayley(&p.big_c, sign))
            .mul(&cos_theta)
            .scale(c(eps, 0.0))
    };
    let tau = |sign: f64| cayley(&p.big_b, sign).mul(&cayley(&p.big_c, sign)).mul(&sin_theta);
    // rho_+/tau_+ carry the lower-sign Cayley factors (C - i)/(C + i).
    let rho_p = rho(1.0, p.eps_plus);
    let rho_m = rho(-1.0, p.eps_minus);
    let tau_p = tau(1.0);
    let tau_m = tau(-1.0);

    // Matrix part W(+-k); entries with e_j = +1 are trivial.
    let w = |sign: f64| -> SpectralMatrix {
        let diag: Vec<SpectralScalar> = p
            .e_diag
            .iter()
            .map(|&e| match p.a {
                ExtendedReal::Infinity => SpectralScalar::constant(c(e, 0.0)),
                ExtendedReal::Finite(a) => {
                    if e > 0.0 {
                        SpectralScalar::one()
                    } else {
                        SpectralScalar::rational(
                            vec![c(1.0, 0.0), c(0.0, -sign * a)],
                            vec![c(1.0, 0.0), c(0.0, sign * a)],
                        )
                    }
                }
            })
            .collect();
        SpectralMatrix::from_fn(n, |i, j| {
            let mut acc = SpectralScalar::zero();
            for (l, dl) in diag.iter().enumerate() {
                let coeff = p.m[(i, l)] * p.m[(j, l)].conj();
                if coeff.norm() > 0.0 {
                    acc = acc.add(&dl.scale(coeff));
                }
            }
            acc
        })
    };
    let w_p = w(1.0);
    let w_m = w(-1.0);

    Ok(DefectRep {
        n,
        r_plus: w_p.scale(&rho_p),
        r_minus: w_m.scale(&rho_m),
        t_plus: w_p.scale(&tau_p),
        t_minus: w_m.scale(&tau_m),
    })
}

/// Dilatation of a representation: scalar multipliers on reflection and
/// transmission that preserve the exchange relations.
#[derive(Clone)]
pub struct DilatationParams {
    pub mu_plus: SpectralScalar,
    pub mu_minus: SpectralScalar,
    pub nu0: SpectralScalar,
}

impl DilatationParams {
    /// Verify `mu(k) mu(-k) = 1` for both signs and
    /// `nu0(-k) = mu+(-k) mu-(k) nu0(k)` on sampled momenta.
    pub fn check(&self, sampler: &mut Sampler) -> Result<()> {
        for _ in 0..12 {
            let k = sampler.momentum();
            let kk = c(k, 0.0);
            let vals = (
                self.mu_plus.eval(kk),
                self.mu_plus.eval(-kk),
                self.mu_minus.eval(kk),
                self.mu_minus.eval(-kk),
                self.nu0.eval(kk),
                self.nu0.eval(-kk),
            );
            let (mp, mp_r, mm, mm_r, n0, n0_r) = match vals {
                (Ok(a), Ok(b), Ok(cv), Ok(d), Ok(e), Ok(f)) => (a, b, cv, d, e, f),
                _ => continue,
            };
            let r1 = (mp * mp_r - Complex64::ONE).norm();
            let r2 = (mm * mm_r - Complex64::ONE).norm();
            let r3 = (n0_r - mp_r * mm * n0).norm();
            if r1 > 1e-9 || r2 > 1e-9 || r3 > 1e-9 * (1.0 + n0.norm()) {
                return Err(Error::Automorphism(format!(
                    "residuals at k = {k}: {r1:e}, {r2:e}, {r3:e}"
                )));
            }
        }
        Ok(())
    }

    /// Composition of two dilatations (pointwise products).
    pub fn compose(&self, other: &Self) -> Self {
        DilatationParams {
            mu_plus: self.mu_plus.mul(&other.mu_plus),
            mu_minus: self.mu_minus.mul(&other.mu_minus),
            nu0: self.nu0.mul(&other.nu0),
        }
    }
}

/// Apply a (checked) dilatation: `r+- -> mu+- r+-`, `t+ -> nu0 t+`,
/// `t- -> nu0^-1 t-`.
pub fn apply_dilatation(rep: &DefectRep, d: &DilatationParams) -> Result<DefectRep> {
    let mut sampler = Sampler::new(0x2545f4914f6cdd1d);
    d.check(&mut sampler)?;
    let inv_nu0 = SpectralScalar::one().div(&d.nu0);
    Ok(DefectRep {
        n: rep.n,
        r_plus: rep.r_plus.scale(&d.mu_plus),
        r_minus: rep.r_minus.scale(&d.mu_minus),
        t_plus: rep.t_plus.scale(&d.nu0),
        t_minus: rep.t_minus.scale(&inv_nu0),
    })
}

/// Draw a valid parameter set for the concrete family (unit determinant,
/// no bound state).
pub fn sample_nls_params(sampler: &mut Sampler) -> NLSDefectParams {
    loop {
        let a = sampler.real_avoiding(&[0.0]);
        let b = sampler.real();
        let cc = sampler.real();
        let d = (1.0 + b * cc) / a;
        let p = NLSDefectParams { a, b, c: cc, d, alpha: sampler.unit_complex() };
        if p.validate().is_ok() && p.check_no_bound_states().is_ok() {
            return p;
        }
    }
}

/// Draw a valid parameter set for the classified family.
pub fn sample_classified_params(sampler: &mut Sampler, n: usize) -> ClassifiedParams {
    let eps_plus = sampler.sign();
    let eps_minus = sampler.sign();
    // Odd real rational with poles off the real axis.
    let odd = |s: &mut Sampler| {
        let p = s.real();
        let q = s.real().abs() + 0.1;
        SpectralScalar::rational(vec![c(0.0, 0.0), c(p, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0), c(q, 0.0)])
    };
    let big_a = odd(sampler);
    let big_c = odd(sampler);
    let b0 = sampler.real();
    let b2 = sampler.real();
    let big_b = SpectralScalar::rational(
        vec![c(b0, 0.0), c(0.0, 0.0), c(b2, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    );
    let omega = if eps_plus * eps_minus > 0.0 {
        odd(sampler)
    } else {
        let w0 = sampler.real();
        let w2 = sampler.real();
        SpectralScalar::rational(
            vec![c(w0, 0.0), c(0.0, 0.0), c(w2, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
    };
    let a = if sampler.sign() > 0.0 {
        ExtendedReal::Finite(sampler.real())
    } else {
        ExtendedReal::Infinity
    };
    ClassifiedParams {
        n,
        m: sampler.unitary(n),
        e_diag: sampler.sign_diag(n),
        a,
        eps_plus,
        eps_minus,
        big_a,
        big_b,
        big_c,
        omega,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_state_screening() {
        // a = d = 1, b = 1, c = 0 sits exactly on the allowed border.
        let ok = NLSDefectParams { a: 1.0, b: 1.0, c: 0.0, d: 1.0, alpha: Complex64::ONE };
        assert!(ok.check_no_bound_states().is_ok());
        // a = 2, d = 1, b = 1, c = 1 has a transmission pole upstairs.
        let bad = NLSDefectParams { a: 2.0, b: 1.0, c: 1.0, d: 1.0, alpha: Complex64::ONE };
        assert!(matches!(bad.check_no_bound_states(), Err(Error::BoundState(_))));
        // b = 0, a + d = 0 is degenerate.
        let deg = NLSDefectParams { a: 1.0, b: 0.0, c: 0.5, d: -1.0, alpha: Complex64::ONE };
        assert!(matches!(deg.check_no_bound_states(), Err(Error::Degenerate)));
    }

    #[test]
    fn determinant_enforced() {
        let p = NLSDefectParams { a: 1.0, b: 0.0, c: 0.0, d: 2.0, alpha: Complex64::ONE };
        assert!(matches!(p.validate(), Err(Error::Parameter(_))));
    }

    #[test]
    fn nls_family_frozen_values() {
        // a = d = 1, b = 1, c = 0: R+(k) = k/(k + 2i), T+(k) = 2i/(k + 2i).
        let p = NLSDefectParams { a: 1.0, b: 1.0, c: 0.0, d: 1.0, alpha: Complex64::ONE };
        let rep = build_nls_defect(&p, 1).unwrap();
        let k = c(1.0, 0.0);
        let r = rep.r_plus.eval(k).unwrap()[(0, 0)];
        let t = rep.t_plus.eval(k).unwrap()[(0, 0)];
        assert!((r - c(0.2, -0.4)).norm() < 1e-14);
        assert!((t - c(0.8, 0.4)).norm() < 1e-14);
    }

    #[test]
    fn nls_family_satisfies_constraints() {
        let mut s = Sampler::new(21);
        for _ in 0..6 {
            let p = sample_nls_params(&mut s);
            for n in 1..=2 {
                let rep = build_nls_defect(&p, n).unwrap();
                let ks = s.generic_momenta(5);
                assert!(rep.check_constraints(&ks).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn classified_family_satisfies_constraints() {
        let mut s = Sampler::new(22);
        for _ in 0..6 {
            for n in 1..=2 {
                let p = sample_classified_params(&mut s, n);
                let rep = build_classified(&p).unwrap();
                let ks = s.generic_momenta(5);
                assert!(rep.check_constraints(&ks).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn exchange_relations_hold() {
        let mut s = Sampler::new(23);
        let pairs: Vec<(f64, f64)> = (0..4)
            .map(|_| {
                let m = s.generic_momenta(2);
                (m[0], m[1])
            })
            .collect();
        for n in 1..=2 {
            let p = sample_nls_params(&mut s);
            let rep = build_nls_defect(&p, n).unwrap();
            assert!(rep.check_rt_equations(1.0, &pairs).unwrap() < 1e-12);
            let q = sample_classified_params(&mut s, n);
            let rep = build_classified(&q).unwrap();
            assert!(rep.check_rt_equations(-0.7, &pairs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn wrong_transmission_sign_breaks_constraints() {
        let p = NLSDefectParams { a: 1.0, b: 1.0, c: 0.0, d: 1.0, alpha: Complex64::ONE };
        let mut rep = build_nls_defect(&p, 1).unwrap();
        rep.t_minus = rep.t_minus.neg();
        let r = rep.check_constraints(&[0.9, 1.7]).unwrap();
        assert!(r > 1e-3, "sign flip should be detected, residual {r:e}");
    }

    #[test]
    fn dilatation_preserves_exchange_relations() {
        let mut s = Sampler::new(24);
        let p = sample_nls_params(&mut s);
        let rep = build_nls_defect(&p, 2).unwrap();
        // mu(k) = (k - i)/(k + i) satisfies mu(k) mu(-k) = 1; with
        // mu+ = mu- = mu, a constant nu0 is admissible.
        let mu = SpectralScalar::rational(
            vec![c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0)],
        );
        let d = DilatationParams {
            mu_plus: mu.clone(),
            mu_minus: mu,
            nu0: SpectralScalar::constant(c(0.6, 0.8)),
        };
        let dressed = apply_dilatation(&rep, &d).unwrap();
        let pairs: Vec<(f64, f64)> = (0..3)
            .map(|_| {
                let m = s.generic_momenta(2);
                (m[0], m[1])
            })
            .collect();
        assert!(dressed.check_rt_equations(1.0, &pairs).unwrap() < 1e-12);
    }

    #[test]
    fn dilatations_compose() {
        let mu = SpectralScalar::rational(
            vec![c(0.0, -2.0), c(1.0, 0.0)],
            vec![c(0.0, 2.0), c(1.0, 0.0)],
        );
        let d1 = DilatationParams {
            mu_plus: mu.clone(),
            mu_minus: SpectralScalar::one(),
            nu0: SpectralScalar::one(),
        };
        let d2 = DilatationParams {
            mu_plus: SpectralScalar::one(),
            mu_minus: mu.clone(),
            nu0: SpectralScalar::constant(c(0.0, 1.0)),
        };
        let mut s = Sampler::new(25);
        d1.compose(&d2).check(&mut s).unwrap();
    }
}
