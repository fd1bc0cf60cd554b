//! Square matrices whose entries are scalar functions of the spectral
//! parameter.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::scalar::SpectralScalar;
use crate::{Error, Result};

/// `n x n` matrix of spectral scalars, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    n: usize,
    entries: Vec<SpectralScalar>,
}

/// Matrix-valued expansion at infinity: `M(k) = sum_n coeffs[n] k^-n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub coeffs: Vec<DMatrix<Complex64>>,
}

/// Largest entry magnitude; the residual norm used throughout.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl SpectralMatrix {
    pub fn new(n: usize, entries: Vec<SpectralScalar>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        SpectralMatrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        SpectralMatrix { n, entries: vec![SpectralScalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SpectralMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, SpectralScalar::one());
        }
        m
    }

    pub fn from_fn<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> SpectralScalar,
    {
        let entries = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        SpectralMatrix { n, entries }
    }

    /// Constant matrix lifted to a (trivial) function of `k`.
    pub fn from_const(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "constant lift needs a square matrix");
        SpectralMatrix::from_fn(m.nrows(), |i, j| SpectralScalar::constant(m[(i, j)]))
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, s: SpectralScalar) -> Self {
        SpectralMatrix::from_fn(n, |i, j| if i == j { s.clone() } else { SpectralScalar::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &SpectralScalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SpectralScalar) {
        self.entries[i * self.n + j] = v;
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(&SpectralScalar) -> SpectralScalar,
    {
        SpectralMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(SpectralMatrix { n: self.n, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Ok(SpectralMatrix { n: self.n, entries })
    }

    pub fn neg(&self) -> Self {
        self.map(SpectralScalar::neg)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        Ok(SpectralMatrix::from_fn(n, |i, j| {
            let mut acc = SpectralScalar::zero();
            for l in 0..n {
                acc = acc.add(&self.get(i, l).mul(other.get(l, j)));
            }
            acc
        }))
    }

    pub fn scale(&self, s: &SpectralScalar) -> Self {
        self.map(|e| e.mul(s))
    }

    pub fn scale_const(&self, c: Complex64) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn transpose(&self) -> Self {
        SpectralMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Adjoint on the real axis: transpose plus entrywise coefficient
    /// conjugation.
    pub fn dagger_real_axis(&self) -> Self {
        SpectralMatrix::from_fn(self.n, |i, j| self.get(j, i).conj_real_axis())
    }

    /// Substitute `k -> -k` entrywise.
    pub fn reflect(&self) -> Self {
        self.map(SpectralScalar::reflect)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        SpectralMatrix::from_fn(n * m, |i, j| {
            self.get(i / m, j / m).mul(other.get(i % m, j % m))
        })
    }

    pub fn eval(&self, k: Complex64) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self.get(i, j).eval(k)?;
            }
        }
        Ok(out)
    }

    /// Entrywise expansion at infinity up to `k^-order_max`.
    pub fn laurent(&self, order_max: usize) -> Result<SeriesExpansion> {
        let mut coeffs =
            vec![DMatrix::<Complex64>::zeros(self.n, self.n); order_max + 1];
        for i in 0..self.n {
            for j in 0..self.n {
                let s = self.get(i, j).laurent(order_max)?;
                for (n, c) in s.iter().enumerate() {
                    coeffs[n][(i, j)] = *c;
                }
            }
        }
        Ok(SeriesExpansion { coeffs })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{0} vs {}x{1}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

impl SeriesExpansion {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest deviation from another expansion over the shared orders.
    pub fn distance(&self, other: &SeriesExpansion) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }
}
