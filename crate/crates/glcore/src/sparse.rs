//! Minimal compressed-sparse-row matrices over real or complex scalars.

use alloc::vec;
use alloc::vec::Vec;

use crate::rng::SplitMix64;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Csr<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    /// Build from (row, col, value) triplets; duplicate entries are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, trips: &[(usize, usize, T)]) -> Self {
        let mut sorted: Vec<(usize, usize, T)> = trips.to_vec();
        sorted.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut rows: Vec<usize> = Vec::with_capacity(sorted.len());
        let mut cols: Vec<usize> = Vec::with_capacity(sorted.len());
        let mut vals: Vec<T> = Vec::with_capacity(sorted.len());
        for &(r, c, v) in &sorted {
            debug_assert!(r < nrows && c < ncols);
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        let mut row_ptr = vec![0usize; nrows + 1];
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Csr { nrows, ncols, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn matvec_into(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for r in 0..self.nrows {
            let mut acc = T::ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[r] = acc;
        }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::ZERO; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    /// y = A^T x (no conjugation).
    pub fn apply_transpose(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.nrows);
        let mut y = vec![T::ZERO; self.ncols];
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.cols[k]] += self.vals[k] * x[r];
            }
        }
        y
    }

    pub fn diag(&self) -> Vec<T> {
        let n = core::cmp::min(self.nrows, self.ncols);
        let mut d = vec![T::ZERO; n];
        for r in 0..n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.cols[k] == r {
                    d[r] += self.vals[k];
                }
            }
        }
        d
    }

    pub fn to_dense(&self) -> Vec<T> {
        let mut m = vec![T::ZERO; self.nrows * self.ncols];
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[r * self.ncols + self.cols[k]] += self.vals[k];
            }
        }
        m
    }

    pub fn scaled(&self, factor: f64) -> Csr<T> {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v = v.scale(factor);
        }
        out
    }

    /// C = self + other (same shape).
    pub fn add(&self, other: &Csr<T>) -> Csr<T> {
        debug_assert_eq!(self.nrows, other.nrows);
        debug_assert_eq!(self.ncols, other.ncols);
        let mut trips = Vec::with_capacity(self.nnz() + other.nnz());
        for m in [self, other] {
            for r in 0..m.nrows {
                for k in m.row_ptr[r]..m.row_ptr[r + 1] {
                    trips.push((r, m.cols[k], m.vals[k]));
                }
            }
        }
        Csr::from_triplets(self.nrows, self.ncols, &trips)
    }
}

/// Sparse linear map on grid-indexed values with a symmetry tag.
#[derive(Debug, Clone)]
pub struct DiscreteOperator<T> {
    pub mat: Csr<T>,
    pub symmetric: bool,
}

impl<T: Scalar> DiscreteOperator<T> {
    pub fn new(mat: Csr<T>, symmetric: bool) -> Self {
        DiscreteOperator { mat, symmetric }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        self.mat.apply(x)
    }

    /// Check <Au, v> = conj(<Av, u>) on `samples` pseudo-random pairs.
    /// The inner product conjugates the left argument.
    pub fn verify_symmetry(&self, samples: usize, tol: f64, seed: u64) -> bool {
        if self.mat.nrows != self.mat.ncols {
            return false;
        }
        let n = self.mat.nrows;
        let mut rng = SplitMix64::new(seed);
        let mut scale = 0.0f64;
        for v in &self.mat.vals {
            scale = libm::fmax(scale, v.abs());
        }
        if scale == 0.0 {
            scale = 1.0;
        }
        for _ in 0..samples {
            let u: Vec<T> = (0..n).map(|_| T::from_re(rng.next_sym())).collect();
            let v: Vec<T> = (0..n).map(|_| T::from_re(rng.next_sym())).collect();
            let au = self.mat.apply(&u);
            let av = self.mat.apply(&v);
            let mut lhs = T::ZERO;
            let mut rhs = T::ZERO;
            for i in 0..n {
                lhs += au[i].conj() * v[i];
                rhs += av[i].conj() * u[i];
            }
            let diff = lhs - rhs.conj();
            if diff.abs() > tol * scale * n as f64 {
                return false;
            }
        }
        true
    }
}
