//! Rational functions of the spectral parameter.

use super::poly::{Coeff, Poly};

/// Scale-aware pole tolerance: `|den(k)| < POLE_TOL * (1 + |k|^deg)`.
pub const POLE_TOL: f64 = 1e-10;

/// Reduced rational function `num / den` with a monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFn<C: Coeff> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Coeff> RatFn<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Self {
        assert!(!den.is_zero(), "denominator is the zero polynomial");
        let mut f = RatFn { num, den };
        f.reduce();
        f
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: C) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFn::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }

    pub fn var() -> Self {
        RatFn::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        if C::exact() {
            let g = self.num.gcd(&self.den);
            if g.degree().unwrap_or(0) > 0 {
                self.num = self.num.divrem(&g).0;
                self.den = self.den.divrem(&g).0;
            }
        }
        // Canonical form: monic denominator. The leading coefficient is set
        // to one exactly; `lead * (1/lead)` drifts on the float backend.
        let lead = self.den.leading().unwrap().clone();
        let inv = C::one() / lead;
        self.num = self.num.scale(&inv);
        let mut d: Vec<C> = self.den.coeffs().iter().map(|c| c.clone() * inv.clone()).collect();
        *d.last_mut().unwrap() = C::one();
        self.den = Poly::new(d);
    }

    /// Evaluate, rejecting points too close to a pole.
    pub fn eval(&self, k: &C) -> Result<C, f64> {
        let d = self.den.eval(k);
        let scale = 1.0 + k.magnitude().powi(self.den.degree().unwrap_or(0) as i32);
        if d.magnitude() < POLE_TOL * scale {
            return Err(d.magnitude());
        }
        Ok(self.num.eval(k) / d)
    }

    pub fn reflect(&self) -> Self {
        RatFn::new(self.num.reflect(), self.den.reflect())
    }

    pub fn conj_coeffs(&self) -> Self {
        RatFn::new(self.num.conj_coeffs(), self.den.conj_coeffs())
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFn::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational function");
        RatFn::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &C) -> Self {
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Whether the function stays bounded as `k -> infinity`.
    pub fn bounded_at_infinity(&self) -> bool {
        self.num.degree().unwrap_or(0) <= self.den.degree().unwrap_or(0) || self.num.is_zero()
    }

    /// Coefficients `c_0 .. c_order_max` of the expansion
    /// `f(k) = sum_n c_n k^-n` as `k -> infinity`. Exact for exact backends.
    pub fn laurent(&self, order_max: usize) -> Result<Vec<C>, (usize, usize)> {
        if self.num.is_zero() {
            return Ok(vec![C::zero(); order_max + 1]);
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        if dn > dd {
            return Err((dn, dd));
        }
        // In u = 1/k: f = u^(dd-dn) * A(u)/B(u) with A, B the coefficient
        // lists reversed and B(0) != 0; series division to the needed order.
        let shift = dd - dn;
        let a: Vec<C> = (0..=dn).map(|j| self.num.coeff(dn - j)).collect();
        let b: Vec<C> = (0..=dd).map(|j| self.den.coeff(dd - j)).collect();
        let b0 = b[0].clone();
        let mut series = vec![C::zero(); order_max + 1];
        for n in 0..=order_max {
            if n < shift {
                continue;
            }
            let m = n - shift; // coefficient of u^m in A/B
            let mut acc = if m < a.len() { a[m].clone() } else { C::zero() };
            for j in 1..=m.min(b.len() - 1) {
                let s_prev = series[(m - j) + shift].clone();
                acc = acc - b[j].clone() * s_prev;
            }
            series[n] = acc / b0.clone();
        }
        Ok(series)
    }
}
