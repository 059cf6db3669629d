//! Dense and Krylov linear algebra used by the solvers: preconditioned
//! conjugate gradients (Hermitian and complex-symmetric variants), dense
//! LU with partial pivoting, a cyclic Jacobi eigensolver and a Lanczos
//! extremal-eigenvalue estimate.

use alloc::vec;
use alloc::vec::Vec;

use crate::rng::SplitMix64;
use crate::scalar::Scalar;
use crate::{Error, Result};

pub fn dot_conj<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut s = T::ZERO;
    for (x, y) in a.iter().zip(b) {
        s += x.conj() * *y;
    }
    s
}

pub fn dot_unconj<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut s = T::ZERO;
    for (x, y) in a.iter().zip(b) {
        s += *x * *y;
    }
    s
}

pub fn norm2<T: Scalar>(a: &[T]) -> f64 {
    libm::sqrt(a.iter().map(|x| x.abs2()).sum())
}

pub fn axpy<T: Scalar>(y: &mut [T], alpha: T, x: &[T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

/// Remove the component along a fixed (normalized) vector. Used to pin the
/// constant null space of pure-Neumann solves.
fn deflate<T: Scalar>(v: &mut [T], null: &[T]) {
    let c = dot_conj(null, v);
    for (vi, ni) in v.iter_mut().zip(null) {
        *vi -= c * *ni;
    }
}

pub struct KrylovOutcome<T> {
    pub x: Vec<T>,
    pub residual: f64,
    pub iterations: usize,
}

/// Preconditioned CG for Hermitian positive (semi-)definite systems.
/// `diag` is a Jacobi preconditioner (entries > 0); `null` an optional
/// normalized null vector to deflate. Tolerance is relative to ||b||.
pub fn cg<T: Scalar>(
    apply: &mut dyn FnMut(&[T], &mut [T]),
    b: &[T],
    x0: Option<&[T]>,
    diag: Option<&[f64]>,
    null: Option<&[T]>,
    tol: f64,
    max_iters: usize,
) -> Result<KrylovOutcome<T>> {
    krylov_sym(apply, b, x0, diag, null, tol, max_iters, true)
}

/// Conjugate-orthogonal CG for complex-symmetric (non-Hermitian) systems;
/// reduces to plain CG on real symmetric input.
pub fn cocg<T: Scalar>(
    apply: &mut dyn FnMut(&[T], &mut [T]),
    b: &[T],
    x0: Option<&[T]>,
    diag: Option<&[f64]>,
    tol: f64,
    max_iters: usize,
) -> Result<KrylovOutcome<T>> {
    krylov_sym(apply, b, x0, diag, None, tol, max_iters, false)
}

#[allow(clippy::too_many_arguments)]
fn krylov_sym<T: Scalar>(
    apply: &mut dyn FnMut(&[T], &mut [T]),
    b: &[T],
    x0: Option<&[T]>,
    diag: Option<&[f64]>,
    null: Option<&[T]>,
    tol: f64,
    max_iters: usize,
    hermitian: bool,
) -> Result<KrylovOutcome<T>> {
    let n = b.len();
    let pair = if hermitian { dot_conj::<T> } else { dot_unconj::<T> };
    let mut x = match x0 {
        Some(v) => v.to_vec(),
        None => vec![T::ZERO; n],
    };
    let mut ax = vec![T::ZERO; n];
    apply(&x, &mut ax);
    let mut r: Vec<T> = b.iter().zip(&ax).map(|(bi, ai)| *bi - *ai).collect();
    if let Some(nv) = null {
        deflate(&mut r, nv);
        deflate(&mut x, nv);
    }
    let bnorm = norm2(b).max(1e-300);
    let mut rnorm = norm2(&r);
    if rnorm <= tol * bnorm {
        return Ok(KrylovOutcome { x, residual: rnorm / bnorm, iterations: 0 });
    }
    let precond = |r: &[T], z: &mut Vec<T>| {
        z.clear();
        match diag {
            Some(dv) => z.extend(r.iter().zip(dv).map(|(ri, di)| ri.scale(1.0 / di))),
            None => z.extend_from_slice(r),
        }
    };
    let mut z: Vec<T> = Vec::with_capacity(n);
    precond(&r, &mut z);
    if let Some(nv) = null {
        deflate(&mut z, nv);
    }
    let mut p = z.clone();
    let mut rz = pair(&r, &z);
    let mut ap = vec![T::ZERO; n];
    for it in 1..=max_iters {
        apply(&p, &mut ap);
        let pap = pair(&p, &ap);
        if pap.abs() == 0.0 {
            return Err(Error::SolverStall { residual: rnorm / bnorm });
        }
        let alpha = rz / pap;
        axpy(&mut x, alpha, &p);
        axpy(&mut r, -alpha, &ap);
        if let Some(nv) = null {
            deflate(&mut r, nv);
        }
        rnorm = norm2(&r);
        if rnorm <= tol * bnorm {
            return Ok(KrylovOutcome { x, residual: rnorm / bnorm, iterations: it });
        }
        precond(&r, &mut z);
        if let Some(nv) = null {
            deflate(&mut z, nv);
        }
        let rz_new = pair(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolverStall { residual: rnorm / bnorm })
}

/// Dense LU factorization with partial pivoting (row-major storage).
pub struct DenseLu<T> {
    n: usize,
    lu: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Scalar> DenseLu<T> {
    pub fn factor(n: usize, a: &[T]) -> Result<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut lu = a.to_vec();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pmax = k;
            let mut vmax = lu[k * n + k].abs();
            for r in (k + 1)..n {
                let v = lu[r * n + k].abs();
                if v > vmax {
                    vmax = v;
                    pmax = r;
                }
            }
            if vmax == 0.0 {
                return Err(Error::SingularSystem);
            }
            if pmax != k {
                for c in 0..n {
                    lu.swap(k * n + c, pmax * n + c);
                }
                piv.swap(k, pmax);
            }
            let pivot = lu[k * n + k];
            for r in (k + 1)..n {
                let f = lu[r * n + k] / pivot;
                lu[r * n + k] = f;
                for c in (k + 1)..n {
                    let t = lu[k * n + c];
                    lu[r * n + c] -= f * t;
                }
            }
        }
        Ok(DenseLu { n, lu, piv })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.piv.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            let mut acc = x[r];
            for c in 0..r {
                acc -= self.lu[r * n + c] * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in (r + 1)..n {
                acc -= self.lu[r * n + c] * x[c];
            }
            x[r] = acc / self.lu[r * n + r];
        }
        x
    }
}

/// Eigenvalues of a dense symmetric real matrix by cyclic Jacobi rotations.
/// Returns the eigenvalues sorted ascending.
pub fn sym_eigenvalues(n: usize, a: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for r in 0..n {
            for c in (r + 1)..n {
                off += m[r * n + c] * m[r * n + c];
            }
        }
        if off <= 1e-26 * (n * n) as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if libm::fabs(apq) < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for i in 0..n {
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    m[i * n + p] = c * aip - s * aiq;
                    m[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = m[p * n + i];
                    let aqi = m[q * n + i];
                    m[p * n + i] = c * api - s * aqi;
                    m[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Smallest eigenvalue of a symmetric operator by Lanczos with full
/// reorthogonalization.
pub fn lanczos_min_eig(
    apply: &mut dyn FnMut(&[f64], &mut [f64]),
    n: usize,
    iters: usize,
    seed: u64,
) -> f64 {
    let m = iters.min(n);
    let mut rng = SplitMix64::new(seed);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_sym()).collect();
    let nv = norm2(&v);
    for x in &mut v {
        *x /= nv;
    }
    q.push(v);
    let mut alphas = Vec::with_capacity(m);
    let mut betas = Vec::with_capacity(m);
    let mut w = vec![0.0; n];
    for j in 0..m {
        apply(&q[j], &mut w);
        let alpha = dot_unconj(&q[j], &w);
        alphas.push(alpha);
        for (wi, qi) in w.iter_mut().zip(&q[j]) {
            *wi -= alpha * qi;
        }
        if j > 0 {
            let b = betas[j - 1];
            for (wi, qi) in w.iter_mut().zip(&q[j - 1]) {
                *wi -= b * qi;
            }
        }
        // full reorthogonalization
        for qv in &q {
            let c = dot_unconj(qv, &w);
            for (wi, qi) in w.iter_mut().zip(qv) {
                *wi -= c * qi;
            }
        }
        let beta = norm2(&w);
        if beta < 1e-14 || j + 1 == m {
            break;
        }
        betas.push(beta);
        q.push(w.iter().map(|x| x / beta).collect());
    }
    // eigenvalues of the tridiagonal Ritz matrix via dense Jacobi
    let k = alphas.len();
    let mut t = vec![0.0; k * k];
    for i in 0..k {
        t[i * k + i] = alphas[i];
        if i + 1 < k {
            t[i * k + i + 1] = betas[i];
            t[(i + 1) * k + i] = betas[i];
        }
    }
    sym_eigenvalues(k, &t)[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = [4.0, 1.0, 0.0, 1.0, 3.0, -1.0, 0.0, -1.0, 2.0];
        let lu = DenseLu::factor(3, &a).unwrap();
        let x = lu.solve(&[1.0, 2.0, 3.0]);
        // residual check
        for r in 0..3 {
            let mut acc = 0.0;
            for c in 0..3 {
                acc += a[r * 3 + c] * x[c];
            }
            assert!((acc - (r as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_eigenvalues_of_dirichlet_stencil() {
        // [2,-1,0;-1,2,-1;0,-1,2] has eigenvalues 2 - sqrt2, 2, 2 + sqrt2
        let a = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        let ev = sym_eigenvalues(3, &a);
        let s = libm::sqrt(2.0);
        assert!((ev[0] - (2.0 - s)).abs() < 1e-12);
        assert!((ev[1] - 2.0).abs() < 1e-12);
        assert!((ev[2] - (2.0 + s)).abs() < 1e-12);
    }

    #[test]
    fn cg_solves_spd() {
        let a = [4.0, 1.0, 1.0, 3.0];
        let mut apply = |x: &[f64], y: &mut [f64]| {
            y[0] = a[0] * x[0] + a[1] * x[1];
            y[1] = a[2] * x[0] + a[3] * x[1];
        };
        let out = cg(&mut apply, &[1.0, 2.0], None, None, None, 1e-14, 50).unwrap();
        assert!((a[0] * out.x[0] + a[1] * out.x[1] - 1.0).abs() < 1e-10);
    }
}
