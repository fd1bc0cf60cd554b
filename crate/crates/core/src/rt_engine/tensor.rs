//! Small dense tensors over the doubled one-particle space.
//!
//! Every axis has the same dimension (2N). Ranks stay in single digits, so
//! plain index loops are fine.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<Complex64>,
}

fn total(dim: usize, rank: usize) -> usize {
    dim.pow(rank as u32)
}

impl Tensor {
    pub fn scalar(dim: usize, v: Complex64) -> Self {
        Tensor { dim, rank: 0, data: vec![v] }
    }

    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor { dim, rank, data: vec![Complex64::ZERO; total(dim, rank)] }
    }

    pub fn from_fn<F>(dim: usize, rank: usize, mut f: F) -> Self
    where
        F: FnMut(&[usize]) -> Complex64,
    {
        let mut t = Tensor::zeros(dim, rank);
        let mut idx = vec![0usize; rank];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn stride(&self, axis: usize) -> usize {
        // Row major: axis 0 is slowest.
        total(self.dim, self.rank - 1 - axis)
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for axis in (0..self.rank).rev() {
            idx[axis] = flat % self.dim;
            flat /= self.dim;
        }
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        debug_assert_eq!(idx.len(), self.rank);
        let mut flat = 0;
        for &i in idx {
            flat = flat * self.dim + i;
        }
        self.data[flat]
    }

    /// Multiply a matrix onto one axis: `out[.. i ..] = sum_j m[i,j] in[.. j ..]`.
    pub fn apply_one(&self, axis: usize, m: &DMatrix<Complex64>) -> Tensor {
        let d = self.dim;
        debug_assert_eq!(m.nrows(), d);
        let s = self.stride(axis);
        let mut out = Tensor::zeros(d, self.rank);
        for flat in 0..self.data.len() {
            let j = (flat / s) % d;
            let base = flat - j * s;
            let v = self.data[flat];
            if v == Complex64::ZERO {
                continue;
            }
            for i in 0..d {
                out.data[base + i * s] += m[(i, j)] * v;
            }
        }
        out
    }

    /// Multiply a `d^2 x d^2` matrix onto an ordered pair of axes; the row
    /// and column of `m` are composite indices `(i1, i2)` with `i1` on
    /// `ax1`.
    pub fn apply_two(&self, ax1: usize, ax2: usize, m: &DMatrix<Complex64>) -> Tensor {
        let d = self.dim;
        debug_assert!(ax1 != ax2);
        debug_assert_eq!(m.nrows(), d * d);
        let s1 = self.stride(ax1);
        let s2 = self.stride(ax2);
        let mut out = Tensor::zeros(d, self.rank);
        for flat in 0..self.data.len() {
            let v = self.data[flat];
            if v == Complex64::ZERO {
                continue;
            }
            let j1 = (flat / s1) % d;
            let j2 = (flat / s2) % d;
            let base = flat - j1 * s1 - j2 * s2;
            let col = j1 * d + j2;
            for i1 in 0..d {
                for i2 in 0..d {
                    let c = m[(i1 * d + i2, col)];
                    if c != Complex64::ZERO {
                        out.data[base + i1 * s1 + i2 * s2] += c * v;
                    }
                }
            }
        }
        out
    }

    /// Remove the axis at `from` and reinsert it at position `to` of the
    /// result.
    pub fn move_axis(&self, from: usize, to: usize) -> Tensor {
        if from == to {
            return self.clone();
        }
        let mut perm: Vec<usize> = (0..self.rank).collect();
        let ax = perm.remove(from);
        perm.insert(to, ax);
        // perm[new_axis] = old_axis
        let mut out = Tensor::zeros(self.dim, self.rank);
        let mut old_idx = vec![0usize; self.rank];
        let mut new_idx = vec![0usize; self.rank];
        for flat in 0..self.data.len() {
            self.unflatten(flat, &mut old_idx);
            for (na, &oa) in perm.iter().enumerate() {
                new_idx[na] = old_idx[oa];
            }
            let mut nf = 0;
            for &i in &new_idx {
                nf = nf * self.dim + i;
            }
            out.data[nf] = self.data[flat];
        }
        out
    }

    /// Prepend two axes tied by a Kronecker delta:
    /// `out[a, b, ..] = delta_ab in[..]`.
    pub fn insert_delta_pair_front(&self) -> Tensor {
        let d = self.dim;
        let mut out = Tensor::zeros(d, self.rank + 2);
        let block = self.data.len();
        for a in 0..d {
            let base = (a * d + a) * block;
            out.data[base..base + block].copy_from_slice(&self.data);
        }
        out
    }

    /// Trace over a pair of axes: `out[..] = sum_c in[.. c .. c ..]`.
    pub fn contract_pair(&self, ax1: usize, ax2: usize) -> Tensor {
        debug_assert!(ax1 != ax2);
        let (lo, hi) = if ax1 < ax2 { (ax1, ax2) } else { (ax2, ax1) };
        let d = self.dim;
        let mut out = Tensor::zeros(d, self.rank - 2);
        let mut old_idx = vec![0usize; self.rank];
        for flat in 0..self.data.len() {
            self.unflatten(flat, &mut old_idx);
            if old_idx[lo] != old_idx[hi] {
                continue;
            }
            let mut nf = 0;
            for (axis, &i) in old_idx.iter().enumerate() {
                if axis == lo || axis == hi {
                    continue;
                }
                nf = nf * d + i;
            }
            out.data[nf] += self.data[flat];
        }
        out
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        debug_assert_eq!((self.dim, self.rank), (other.dim, other.rank));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Tensor { dim: self.dim, rank: self.rank, data }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        debug_assert_eq!((self.dim, self.rank), (other.dim, other.rank));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Tensor { dim: self.dim, rank: self.rank, data }
    }

    pub fn scale(&self, c: Complex64) -> Tensor {
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// View a rank-2 tensor as a matrix (axis 0 rows, axis 1 columns).
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        assert_eq!(self.rank, 2);
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_one_is_matrix_action() {
        let d = 2;
        let t = Tensor::from_fn(d, 2, |idx| c((idx[0] * d + idx[1]) as f64, 0.0));
        let m = DMatrix::from_row_slice(d, d, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        // Act on axis 1 (columns): result = T * m^T entrywise.
        let r = t.apply_one(1, &m);
        for i in 0..d {
            for j in 0..d {
                let expect = (0..d).map(|k| m[(j, k)] * t.get(&[i, k])).sum::<Complex64>();
                assert_eq!(r.get(&[i, j]), expect);
            }
        }
    }

    #[test]
    fn apply_two_matches_kron_on_rank_two() {
        let d = 2;
        let t = Tensor::from_fn(d, 2, |idx| c(1.0 + idx[0] as f64, idx[1] as f64));
        let m = DMatrix::from_fn(d * d, d * d, |i, j| c((i * 7 % 5) as f64, (j % 3) as f64));
        let r = t.apply_two(0, 1, &m);
        for i1 in 0..d {
            for i2 in 0..d {
                let mut expect = Complex64::ZERO;
                for j1 in 0..d {
                    for j2 in 0..d {
                        expect += m[(i1 * d + i2, j1 * d + j2)] * t.get(&[j1, j2]);
                    }
                }
                assert_eq!(r.get(&[i1, i2]), expect);
            }
        }
    }

    #[test]
    fn apply_two_respects_axis_order() {
        let d = 2;
        let t = Tensor::from_fn(d, 2, |idx| c((3 * idx[0] + idx[1]) as f64, 0.0));
        let m = DMatrix::from_fn(d * d, d * d, |i, j| c((2 * i + j) as f64, 0.0));
        let swapped = t.apply_two(1, 0, &m);
        for i0 in 0..d {
            for i1 in 0..d {
                // With (ax1, ax2) = (1, 0) the matrix row index pair is
                // (axis1, axis0).
                let mut expect = Complex64::ZERO;
                for j0 in 0..d {
                    for j1 in 0..d {
                        expect += m[(i1 * d + i0, j1 * d + j0)] * t.get(&[j0, j1]);
                    }
                }
                assert_eq!(swapped.get(&[i0, i1]), expect);
            }
        }
    }

    #[test]
    fn move_axis_permutes() {
        let d = 3;
        let t = Tensor::from_fn(d, 3, |idx| c((idx[0] * 100 + idx[1] * 10 + idx[2]) as f64, 0.0));
        let r = t.move_axis(2, 0);
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    assert_eq!(r.get(&[e, a, b]), t.get(&[a, b, e]));
                }
            }
        }
        assert_eq!(t.move_axis(1, 1), t);
    }

    #[test]
    fn delta_pair_then_contract_is_dimension_factor() {
        let d = 3;
        let t = Tensor::from_fn(d, 1, |idx| c(idx[0] as f64, 1.0));
        let w = t.insert_delta_pair_front();
        assert_eq!(w.get(&[1, 1, 2]), t.get(&[2]));
        assert_eq!(w.get(&[1, 0, 2]), Complex64::ZERO);
        let back = w.contract_pair(0, 1);
        assert_eq!(back, t.scale(c(d as f64, 0.0)));
    }
}
