//! The bulk two-body S-matrix of the N-component model and its doubled form
//! on half-line momenta.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::spectral::{max_abs, Poly, SpectralMatrix, SpectralScalar};
use crate::Result;

/// Flip operator on `C^d (x) C^d`, exchanging the two factors.
pub fn flip(d: usize) -> DMatrix<Complex64> {
    let mut p = DMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            p[(a * d + b, b * d + a)] = Complex64::ONE;
        }
    }
    p
}

/// Bulk block `s(k) = (k I - i g P) / (k + i g)` acting on `C^n (x) C^n`,
/// as a matrix of rational functions of the relative momentum.
pub fn build_s_block(n: usize, g: f64) -> SpectralMatrix {
    if g == 0.0 {
        // Free theory; the k/k form would otherwise fake a pole at zero.
        return SpectralMatrix::identity(n * n);
    }
    let den = Poly::new(vec![Complex64::new(0.0, g), Complex64::ONE]);
    SpectralMatrix::from_fn(n * n, |row, col| {
        let (a, b) = (row / n, row % n);
        let (c, d) = (col / n, col % n);
        let mut num = Poly::zero();
        if a == c && b == d {
            num = num.add(&Poly::var());
        }
        if a == d && b == c {
            num = num.sub(&Poly::constant(Complex64::new(0.0, g)));
        }
        if num.is_zero() {
            SpectralScalar::zero()
        } else {
            SpectralScalar::Rational(crate::spectral::RatFn::new(num, den.clone()))
        }
    })
}

/// Which relative momentum each sign block of the doubled S-matrix sees.
///
/// `arg[xi1][xi2] = (c1, c2)` meaning the block carries `s(c1 k1 + c2 k2)`,
/// with `xi = 0` the positive and `xi = 1` the negative half-line copy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRule {
    pub arg: [[(f64, f64); 2]; 2],
}

impl Default for BlockRule {
    fn default() -> Self {
        // Block (xi1, xi2) sees xi1 k1 - xi2 k2.
        BlockRule { arg: [[(1.0, -1.0), (1.0, 1.0)], [(-1.0, -1.0), (-1.0, 1.0)]] }
    }
}

impl BlockRule {
    /// Deliberately wrong layout (off-diagonal blocks swapped); used to show
    /// the residual checks are not vacuous.
    pub fn swapped_off_diagonal() -> Self {
        let mut r = BlockRule::default();
        r.arg.swap(0, 1);
        r
    }
}

type Dressing = Arc<dyn Fn(f64) -> DMatrix<Complex64> + Send + Sync>;

/// Doubled S-matrix on `C^{2n} (x) C^{2n}`: block diagonal over the sign
/// copies, each block a bulk S-matrix of the appropriate relative momentum,
/// optionally conjugated by a momentum-dependent dressing of each factor.
#[derive(Clone)]
pub struct DoubledSMatrix {
    n: usize,
    block: SpectralMatrix,
    block_rule: BlockRule,
    dressing: Option<Dressing>,
}

impl DoubledSMatrix {
    pub fn new(n: usize, g: f64) -> Self {
        DoubledSMatrix {
            n,
            block: build_s_block(n, g),
            block_rule: BlockRule::default(),
            dressing: None,
        }
    }

    pub fn with_block_rule(mut self, rule: BlockRule) -> Self {
        self.block_rule = rule;
        self
    }

    /// Dress each tensor factor: block `(xi1, xi2)` becomes
    /// `(d(-p) (x) d(-q)) s (d(p) (x) d(q))` with `p = xi1 k1, q = xi2 k2`.
    pub fn with_dressing<F>(mut self, d: F) -> Self
    where
        F: Fn(f64) -> DMatrix<Complex64> + Send + Sync + 'static,
    {
        self.dressing = Some(Arc::new(d));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of one doubled factor, `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn full(&self, k1: f64, k2: f64) -> Result<DMatrix<Complex64>> {
        let n = self.n;
        let d = 2 * n;
        let mut out = DMatrix::zeros(d * d, d * d);
        for xi1 in 0..2 {
            for xi2 in 0..2 {
                let (c1, c2) = self.block_rule.arg[xi1][xi2];
                let arg = c1 * k1 + c2 * k2;
                let mut block = self.block.eval(Complex64::new(arg, 0.0))?;
                if let Some(dress) = &self.dressing {
                    let p = if xi1 == 0 { k1 } else { -k1 };
                    let q = if xi2 == 0 { k2 } else { -k2 };
                    let pre = dress(-p).kronecker(&dress(-q));
                    let post = dress(p).kronecker(&dress(q));
                    block = pre * block * post;
                }
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            for e in 0..n {
                                let row = (xi1 * n + a) * d + (xi2 * n + b);
                                let col = (xi1 * n + c) * d + (xi2 * n + e);
                                out[(row, col)] = block[(a * n + b, c * n + e)];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Space-swapped matrix `S21(u,v) = P S12(u,v) P`.
    pub fn full_swapped(&self, u: f64, v: f64) -> Result<DMatrix<Complex64>> {
        let p = flip(self.dim());
        Ok(&p * self.full(u, v)? * &p)
    }

    /// Max-entry residual of `S12(k1,k2) S21(k2,k1) - I`, with `S21` the
    /// flip-conjugated matrix.
    pub fn check_unitarity(&self, k1: f64, k2: f64) -> Result<f64> {
        let d = self.dim();
        let p = flip(d);
        let s12 = self.full(k1, k2)?;
        let s21 = &p * self.full(k2, k1)? * &p;
        let id = DMatrix::identity(d * d, d * d);
        Ok(max_abs(&(s12 * s21 - id)))
    }

    /// Max-entry residual of the Yang-Baxter equation on three doubled
    /// factors.
    pub fn check_yang_baxter(&self, k1: f64, k2: f64, k3: f64) -> Result<f64> {
        let d = self.dim();
        let id = DMatrix::<Complex64>::identity(d, d);
        let p23 = id.kronecker(&flip(d));
        let emb12 = |s: &DMatrix<Complex64>| s.kronecker(&id);
        let emb23 = |s: &DMatrix<Complex64>| id.kronecker(s);
        let s12 = emb12(&self.full(k1, k2)?);
        let s23 = emb23(&self.full(k2, k3)?);
        let s13 = &p23 * emb12(&self.full(k1, k3)?) * &p23;
        let lhs = &s12 * &s13 * &s23;
        let rhs = &s23 * &s13 * &s12;
        Ok(max_abs(&(lhs - rhs)))
    }
}
