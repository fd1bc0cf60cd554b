//! The working scalar type: rational functions with `Complex64` coefficients,
//! or opaque numeric evaluators for the few non-rational inputs.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::poly::Poly;
use super::ratfn::RatFn;
use crate::{Error, Result};

type EvalFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Non-rational scalar carried as a numeric evaluator with an optional
/// declared large-`k` expansion (coefficients of `k^-n`). No algebraic
/// simplification is attempted on these.
#[derive(Clone)]
pub struct OpaqueScalar {
    f: EvalFn,
    series: Option<Arc<Vec<Complex64>>>,
}

/// Scalar function of the spectral parameter.
#[derive(Clone)]
pub enum SpectralScalar {
    Rational(RatFn<Complex64>),
    Opaque(OpaqueScalar),
}

impl fmt::Debug for SpectralScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralScalar::Rational(r) => write!(f, "Rational({})", render_ratfn(r)),
            SpectralScalar::Opaque(o) => write!(
                f,
                "Opaque(series_order={:?})",
                o.series.as_ref().map(|s| s.len().saturating_sub(1))
            ),
        }
    }
}

impl PartialEq for SpectralScalar {
    /// Coefficient-level equality; opaque evaluators compare by identity.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SpectralScalar::Rational(a), SpectralScalar::Rational(b)) => a == b,
            (SpectralScalar::Opaque(a), SpectralScalar::Opaque(b)) => Arc::ptr_eq(&a.f, &b.f),
            _ => false,
        }
    }
}

impl SpectralScalar {
    pub fn zero() -> Self {
        SpectralScalar::Rational(RatFn::zero())
    }

    pub fn one() -> Self {
        SpectralScalar::Rational(RatFn::one())
    }

    pub fn constant(c: Complex64) -> Self {
        SpectralScalar::Rational(RatFn::constant(c))
    }

    /// The spectral parameter `k` itself.
    pub fn var() -> Self {
        SpectralScalar::Rational(RatFn::var())
    }

    pub fn from_poly(p: Poly<Complex64>) -> Self {
        SpectralScalar::Rational(RatFn::from_poly(p))
    }

    /// Rational function from ascending numerator/denominator coefficients.
    pub fn rational(num: Vec<Complex64>, den: Vec<Complex64>) -> Self {
        SpectralScalar::Rational(RatFn::new(Poly::new(num), Poly::new(den)))
    }

    pub fn opaque<F>(f: F, series: Option<Vec<Complex64>>) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        SpectralScalar::Opaque(OpaqueScalar { f: Arc::new(f), series: series.map(Arc::new) })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, SpectralScalar::Rational(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SpectralScalar::Rational(r) if r.is_zero())
    }

    pub fn as_ratfn(&self) -> Option<&RatFn<Complex64>> {
        match self {
            SpectralScalar::Rational(r) => Some(r),
            SpectralScalar::Opaque(_) => None,
        }
    }

    /// Polynomial view, available when the denominator is constant.
    pub fn as_poly(&self) -> Result<Poly<Complex64>> {
        match self {
            SpectralScalar::Rational(r) if r.den().degree() == Some(0) => {
                let d = r.den().coeff(0);
                Ok(r.num().scale(&(Complex64::ONE / d)))
            }
            _ => Err(Error::NotPolynomial),
        }
    }

    pub fn eval(&self, k: Complex64) -> Result<Complex64> {
        match self {
            SpectralScalar::Rational(r) => {
                r.eval(&k).map_err(|denom_abs| Error::Pole { k, denom_abs })
            }
            SpectralScalar::Opaque(o) => Ok((o.f)(k)),
        }
    }

    /// `g(k) = f(-k)`; involutive.
    pub fn reflect(&self) -> Self {
        match self {
            SpectralScalar::Rational(r) => SpectralScalar::Rational(r.reflect()),
            SpectralScalar::Opaque(o) => {
                let f = o.f.clone();
                let series = o.series.as_ref().map(|s| {
                    Arc::new(
                        s.iter()
                            .enumerate()
                            .map(|(n, c)| if n % 2 == 1 { -c } else { *c })
                            .collect::<Vec<_>>(),
                    )
                });
                SpectralScalar::Opaque(OpaqueScalar { f: Arc::new(move |k| f(-k)), series })
            }
        }
    }

    /// `g` with `g(k) = conj(f(k))` for real `k`, implemented by conjugating
    /// coefficients (the parameter stays untouched on the physical axis).
    pub fn conj_real_axis(&self) -> Self {
        match self {
            SpectralScalar::Rational(r) => SpectralScalar::Rational(r.conj_coeffs()),
            SpectralScalar::Opaque(o) => {
                let f = o.f.clone();
                let series = o
                    .series
                    .as_ref()
                    .map(|s| Arc::new(s.iter().map(|c| c.conj()).collect::<Vec<_>>()));
                SpectralScalar::Opaque(OpaqueScalar {
                    f: Arc::new(move |k| f(k.conj()).conj()),
                    series,
                })
            }
        }
    }

    /// Laurent coefficients `c_0 .. c_order_max` of `f(k) = sum c_n k^-n`.
    pub fn laurent(&self, order_max: usize) -> Result<Vec<Complex64>> {
        match self {
            SpectralScalar::Rational(r) => r
                .laurent(order_max)
                .map_err(|(num_deg, den_deg)| Error::DivergesAtInfinity { num_deg, den_deg }),
            SpectralScalar::Opaque(o) => match &o.series {
                Some(s) if s.len() > order_max => Ok(s[..=order_max].to_vec()),
                Some(s) => Err(Error::Parameter(format!(
                    "opaque evaluator declares its expansion only to order {}, requested {}",
                    s.len().saturating_sub(1),
                    order_max
                ))),
                None => Err(Error::DivergesAtInfinity { num_deg: 0, den_deg: 0 }),
            },
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            SpectralScalar::Rational(r) => SpectralScalar::Rational(r.neg()),
            SpectralScalar::Opaque(o) => {
                let f = o.f.clone();
                let series = o
                    .series
                    .as_ref()
                    .map(|s| Arc::new(s.iter().map(|c| -c).collect::<Vec<_>>()));
                SpectralScalar::Opaque(OpaqueScalar { f: Arc::new(move |k| -f(k)), series })
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (SpectralScalar::Rational(a), SpectralScalar::Rational(b)) => {
                SpectralScalar::Rational(a.add(b))
            }
            _ => opaque_binop(self, other, |x, y| x + y, combine_series_add),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (SpectralScalar::Rational(a), SpectralScalar::Rational(b)) => {
                SpectralScalar::Rational(a.mul(b))
            }
            _ => opaque_binop(self, other, |x, y| x * y, combine_series_mul),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        match (self, other) {
            (SpectralScalar::Rational(a), SpectralScalar::Rational(b)) => {
                SpectralScalar::Rational(a.div(b))
            }
            _ => opaque_binop(self, other, |x, y| x / y, combine_series_div),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.mul(&SpectralScalar::constant(c))
    }
}

fn series_of(s: &SpectralScalar, order: usize) -> Option<Vec<Complex64>> {
    s.laurent(order).ok()
}

fn declared_order(s: &SpectralScalar) -> Option<usize> {
    match s {
        SpectralScalar::Rational(r) if r.bounded_at_infinity() => Some(usize::MAX),
        SpectralScalar::Rational(_) => None,
        SpectralScalar::Opaque(o) => o.series.as_ref().map(|v| v.len().saturating_sub(1)),
    }
}

fn joint_order(a: &SpectralScalar, b: &SpectralScalar) -> Option<usize> {
    match (declared_order(a), declared_order(b)) {
        (Some(x), Some(y)) => Some(x.min(y).min(64)),
        _ => None,
    }
}

fn combine_series_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    (0..a.len().min(b.len())).map(|i| a[i] + b[i]).collect()
}

fn combine_series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().min(b.len());
    let mut out = vec![Complex64::ZERO; n];
    for (i, x) in a.iter().take(n).enumerate() {
        for (j, y) in b.iter().take(n - i).enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn combine_series_div(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    // Series division, valid when b has a nonzero limit at infinity.
    let n = a.len().min(b.len());
    let mut out = vec![Complex64::ZERO; n];
    if n == 0 || b[0].norm() == 0.0 {
        return vec![];
    }
    for i in 0..n {
        let mut acc = a[i];
        for j in 1..=i {
            acc -= b[j] * out[i - j];
        }
        out[i] = acc / b[0];
    }
    out
}

fn opaque_binop(
    a: &SpectralScalar,
    b: &SpectralScalar,
    op: fn(Complex64, Complex64) -> Complex64,
    series_op: fn(&[Complex64], &[Complex64]) -> Vec<Complex64>,
) -> SpectralScalar {
    let order = joint_order(a, b);
    let series = order.and_then(|n| {
        let sa = series_of(a, n)?;
        let sb = series_of(b, n)?;
        let combined = series_op(&sa, &sb);
        if combined.is_empty() {
            None
        } else {
            Some(combined)
        }
    });
    let fa = a.clone();
    let fb = b.clone();
    SpectralScalar::opaque(
        move |k| {
            let x = fa.eval(k).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            let y = fb.eval(k).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            op(x, y)
        },
        series,
    )
}

fn render_coeff(c: Complex64) -> String {
    format!("{}{}{}i", c.re, if c.im < 0.0 { "-" } else { "+" }, c.im.abs())
}

fn render_poly(p: &Poly<Complex64>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(n, c)| match n {
            0 => render_coeff(*c),
            1 => format!("({})*k", render_coeff(*c)),
            _ => format!("({})*k^{}", render_coeff(*c), n),
        })
        .collect();
    terms.join(" + ")
}

fn render_ratfn(r: &RatFn<Complex64>) -> String {
    format!("({}) / ({})", render_poly(r.num()), render_poly(r.den()))
}

impl fmt::Display for SpectralScalar {
    /// Text form "poly/poly" with decimal "re+im i" coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralScalar::Rational(r) => write!(f, "{}", render_ratfn(r)),
            SpectralScalar::Opaque(_) => write!(f, "<numeric evaluator>"),
        }
    }
}
