//! Dense univariate polynomials over a complex coefficient field.
//!
//! Two backends share this code: `Complex64` for sampled-k residual work and
//! exact Gaussian rationals for coefficient-level identities.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Coefficient field interface shared by the float and exact backends.
pub trait Coeff:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Magnitude as a double, used for pole tolerances and residuals.
    fn magnitude(&self) -> f64;
    /// Whether the backend supports exact division (enables gcd reduction).
    fn exact() -> bool;
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::ZERO
    }
    fn one() -> Self {
        Complex64::ONE
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn exact() -> bool {
        false
    }
}

/// Exact complex number with rational real and imaginary parts.
pub type GaussRational = num_complex::Complex<BigRational>;

/// Convenience constructor for an exact Gaussian rational from integer parts.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRational {
    GaussRational::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

impl Coeff for GaussRational {
    fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        GaussRational::new(BigRational::from(BigInt::from(1)), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }
    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::NAN);
        let im = self.im.to_f64().unwrap_or(f64::NAN);
        re.hypot(im)
    }
    fn exact() -> bool {
        true
    }
}

/// Polynomial with ascending coefficients; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map(Coeff::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * k^n`.
    pub fn monomial(c: C, n: usize) -> Self {
        let mut v = vec![C::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }

    /// The variable `k` itself.
    pub fn var() -> Self {
        Poly::monomial(C::one(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, k: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * k.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Substitute `k -> -k`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { -a.clone() } else { a.clone() })
                .collect(),
        )
    }

    /// Conjugate every coefficient (the parameter is left untouched).
    pub fn conj_coeffs(&self) -> Self {
        Poly::new(self.coeffs.iter().map(Coeff::conj).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        Poly::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }

    /// Euclidean division `self = q * other + r` with `deg r < deg other`.
    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let d = other.degree().unwrap();
        let lead = other.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let pos = rem.len() - 1;
            let factor = rem[pos].clone() / lead.clone();
            let shift = pos - d;
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].clone() - factor.clone() * b.clone();
            }
            quot[shift] = factor;
            while rem.last().map(Coeff::is_zero).unwrap_or(false) {
                rem.pop();
            }
            if rem.len() <= d {
                break;
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd; meaningful for the exact backend, collapses to a unit on
    /// inexact data (where remainders never vanish identically).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading().cloned() {
            a = a.scale(&(C::one() / lead));
        }
        a
    }
}
