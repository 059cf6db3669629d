//! Grid-indexed field values for the order parameter, the vector
//! potential, scalar-model variables and multipliers, together with
//! discrete norms and the model parameter set.
//!
//! Fields are value-semantics snapshots: solver stages clone rather than
//! mutate anything another stage may still hold.

use alloc::vec;
use alloc::vec::Vec;

use crate::grid::BoxGrid;
use crate::scalar::{Complex64, Scalar};
use crate::{Error, Result};

/// Complex order-parameter field on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexScalarField {
    pub data: Vec<Complex64>,
}

/// One real value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct RealScalarField {
    pub data: Vec<f64>,
}

/// Three real components per node, component-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVectorField {
    pub comps: [Vec<f64>; 3],
}

impl ComplexScalarField {
    pub fn zeros(n: usize) -> Self {
        ComplexScalarField { data: vec![Complex64::ZERO; n] }
    }

    pub fn constant(n: usize, value: Complex64) -> Self {
        ComplexScalarField { data: vec![value; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite_s()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| libm::fmax(m, (*a - *b).abs()))
    }

    /// Pointwise |phi|^2.
    pub fn abs2(&self) -> RealScalarField {
        RealScalarField { data: self.data.iter().map(|v| v.abs2()).collect() }
    }
}

impl RealScalarField {
    pub fn zeros(n: usize) -> Self {
        RealScalarField { data: vec![0.0; n] }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        RealScalarField { data: vec![value; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }
}

impl RealVectorField {
    pub fn zeros(n: usize) -> Self {
        RealVectorField { comps: [vec![0.0; n], vec![0.0; n], vec![0.0; n]] }
    }

    pub fn len(&self) -> usize {
        self.comps[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps[0].is_empty()
    }

    pub fn comp(&self, axis: usize) -> &[f64] {
        &self.comps[axis]
    }

    pub fn comp_mut(&mut self, axis: usize) -> &mut Vec<f64> {
        &mut self.comps[axis]
    }

    pub fn check_finite(&self) -> Result<()> {
        for c in &self.comps {
            if !c.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        let mut m = 0.0;
        for k in 0..3 {
            for (a, b) in self.comps[k].iter().zip(&other.comps[k]) {
                m = libm::fmax(m, libm::fabs(a - b));
            }
        }
        m
    }

    /// Pointwise |A|^2.
    pub fn abs2(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for k in 0..3 {
            for (o, v) in out.iter_mut().zip(&self.comps[k]) {
                *o += v * v;
            }
        }
        out
    }

    /// Flatten to component-major [A_x..., A_y..., A_z...].
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(3 * self.len());
        for k in 0..3 {
            out.extend_from_slice(&self.comps[k]);
        }
        out
    }

    pub fn from_flat(v: &[f64]) -> Self {
        let n = v.len() / 3;
        RealVectorField {
            comps: [v[0..n].to_vec(), v[n..2 * n].to_vec(), v[2 * n..3 * n].to_vec()],
        }
    }
}

/// Discrete quadrature norms with nodal cell weight d^dim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l2: f64,
    pub l4: f64,
    pub sup: f64,
}

fn norms_from_abs2(abs2: impl Iterator<Item = f64>, w: f64) -> Norms {
    let mut s2 = 0.0;
    let mut s4 = 0.0;
    let mut sup: f64 = 0.0;
    for a2 in abs2 {
        s2 += a2;
        s4 += a2 * a2;
        sup = libm::fmax(sup, libm::sqrt(a2));
    }
    Norms { l2: libm::sqrt(w * s2), l4: libm::pow(w * s4, 0.25), sup }
}

pub fn field_norms_complex(f: &ComplexScalarField, grid: &BoxGrid) -> Norms {
    norms_from_abs2(f.data.iter().map(|v| v.abs2()), grid.cell_weight())
}

pub fn field_norms_real(f: &RealScalarField, grid: &BoxGrid) -> Norms {
    norms_from_abs2(f.data.iter().map(|v| v * v), grid.cell_weight())
}

pub fn field_norms_vector(f: &RealVectorField, grid: &BoxGrid) -> Norms {
    let n = f.len();
    norms_from_abs2(
        (0..n).map(|i| {
            f.comps[0][i] * f.comps[0][i] + f.comps[1][i] * f.comps[1][i] + f.comps[2][i] * f.comps[2][i]
        }),
        grid.cell_weight(),
    )
}

/// Copy the values of an Omega_1 field on the shared nodes of a nested
/// Omega grid.
pub fn restrict_vector(
    field: &RealVectorField,
    outer: &BoxGrid,
    inner: &BoxGrid,
) -> Result<RealVectorField> {
    if field.len() != outer.len() {
        return Err(Error::ShapeMismatch { expected: outer.len(), got: field.len() });
    }
    let map = outer.nesting_map(inner)?;
    let mut out = RealVectorField::zeros(inner.len());
    for k in 0..3 {
        for (i, &j) in map.iter().enumerate() {
            out.comps[k][i] = field.comps[k][j];
        }
    }
    Ok(out)
}

pub fn restrict_real(
    field: &RealScalarField,
    outer: &BoxGrid,
    inner: &BoxGrid,
) -> Result<RealScalarField> {
    if field.len() != outer.len() {
        return Err(Error::ShapeMismatch { expected: outer.len(), got: field.len() });
    }
    let map = outer.nesting_map(inner)?;
    Ok(RealScalarField { data: map.iter().map(|&j| field.data[j]).collect() })
}

/// Zero-extend an Omega field to a containing Omega_1 grid.
pub fn extend_by_zero_vector(
    field: &RealVectorField,
    inner: &BoxGrid,
    outer: &BoxGrid,
) -> Result<RealVectorField> {
    if field.len() != inner.len() {
        return Err(Error::ShapeMismatch { expected: inner.len(), got: field.len() });
    }
    let map = outer.nesting_map(inner)?;
    let mut out = RealVectorField::zeros(outer.len());
    for k in 0..3 {
        for (i, &j) in map.iter().enumerate() {
            out.comps[k][j] = field.comps[k][i];
        }
    }
    Ok(out)
}

pub fn extend_by_zero_real(
    field: &RealScalarField,
    inner: &BoxGrid,
    outer: &BoxGrid,
) -> Result<RealScalarField> {
    if field.len() != inner.len() {
        return Err(Error::ShapeMismatch { expected: inner.len(), got: field.len() });
    }
    let map = outer.nesting_map(inner)?;
    let mut out = RealScalarField::zeros(outer.len());
    for (i, &j) in map.iter().enumerate() {
        out.data[j] = field.data[i];
    }
    Ok(out)
}

/// Model constants and solver controls.
///
/// `gamma`, `alpha`, `beta`, `rho`, `k0` are the free-energy constants.
/// `k` is the D.C. shift used by the line solver and the conjugates;
/// `k2` the amplitude bound entering the admissibility conditions
/// `1/alpha > 8 k2^2 / k` and `1/alpha > 32 k2^2 / k^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct GLParams {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub k0: f64,
    pub k: f64,
    pub k2: f64,
    /// Joint sup-norm change for outer-iteration termination.
    pub tol_outer: f64,
    pub max_outer: usize,
    /// Relative tolerance of inner Krylov solves.
    pub tol_linear: f64,
    /// Damping factor for the order-parameter update (1.0 = plain fixed point).
    pub damping: f64,
}

impl GLParams {
    /// Paper example constants: gamma = alpha = beta = K0 = 1, rho = 1.
    pub fn unit() -> Self {
        GLParams {
            gamma: 1.0,
            alpha: 1.0,
            beta: 1.0,
            rho: 1.0,
            k0: 1.0,
            k: 4.0,
            k2: 1.5,
            tol_outer: 1e-7,
            max_outer: 200,
            tol_linear: 1e-10,
            damping: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.gamma, "gamma"),
            (self.alpha, "alpha"),
            (self.beta, "beta"),
            (self.k0, "k0"),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                let _ = name;
                return Err(Error::InvalidParam("model constants must be positive"));
            }
        }
        if self.rho < 0.0 || !self.rho.is_finite() {
            return Err(Error::InvalidParam("rho must be nonnegative"));
        }
        if self.k < 0.0 || self.k2 <= 0.0 {
            return Err(Error::InvalidParam("k must be >= 0 and k2 > 0"));
        }
        if !(self.tol_outer > 0.0) || self.max_outer == 0 || !(self.tol_linear > 0.0) {
            return Err(Error::InvalidParam("solver tolerances must be positive"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParam("damping must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Both admissibility bounds on the D.C. shift.
    pub fn k_bounds_hold(&self) -> bool {
        let b1 = 1.0 / self.alpha > 8.0 * self.k2 * self.k2 / self.k;
        let b2 = 1.0 / self.alpha > 32.0 * self.k2 * self.k2 / (self.k * self.k * self.k);
        self.k > 0.0 && b1 && b2
    }

    /// Smallest power of two satisfying both admissibility bounds for the
    /// given amplitude bound `k2`.
    pub fn select_k(alpha: f64, k2: f64) -> f64 {
        let mut k = 1.0f64;
        for _ in 0..64 {
            let b1 = 1.0 / alpha > 8.0 * k2 * k2 / k;
            let b2 = 1.0 / alpha > 32.0 * k2 * k2 / (k * k * k);
            if b1 && b2 {
                return k;
            }
            k *= 2.0;
        }
        k
    }
}
