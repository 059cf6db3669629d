//! Free-energy functionals and their discrete first variations.
//!
//! Everything is defined through one fixed discretization: forward edge
//! differences for the quadratic forms, central differences for the curl,
//! nodal rectangle-rule quadrature. The residual operations return the
//! exact gradients of the discrete energies under the weighted pairing
//! `<u, v> = d^dim * sum Re(conj(u_i) v_i)`, so finite differences of the
//! energy match the residuals to rounding.
//!
//! The strong-form order-parameter equation printed in the numerical
//! section of the source model uses the normalization `alpha |phi|^2 phi -
//! beta phi`; the variational derivative of the energy is
//! `2 alpha (|phi|^2 - beta) phi`. Residuals here are the variational
//! form; the other is recovered by rescaling alpha and beta.

use alloc::vec::Vec;

use crate::field::{restrict_vector, ComplexScalarField, GLParams, RealScalarField, RealVectorField};
use crate::grid::{build_covariant_square, build_curl, build_laplacian_real_dirichlet, interior_nodes, BoxGrid, Domain};
use crate::scalar::{Complex64, Scalar};
use crate::sparse::{Csr, DiscreteOperator};
use crate::{Error, Result};

/// Kinetic term (gamma/2) sum_edges |(phi_up - phi_lo)/d - i rho A_k(lo) phi_lo|^2 * d^dim.
fn kinetic_energy(phi: &ComplexScalarField, a_omega: &RealVectorField, grid: &BoxGrid, params: &GLParams) -> f64 {
    let d = grid.spacing();
    let w = grid.cell_weight();
    let mut acc = 0.0;
    for lo in 0..grid.len() {
        let c = grid.coords(lo);
        for axis in 0..grid.dim() {
            if c[axis] + 1 >= grid.nodes_along(axis) {
                continue;
            }
            let mut cu = c;
            cu[axis] += 1;
            let up = grid.index(cu);
            let diff = (phi.data[up] - phi.data[lo]).scale(1.0 / d);
            let v = diff - Complex64::new(0.0, params.rho * a_omega.comp(axis)[lo]) * phi.data[lo];
            acc += v.abs2();
        }
    }
    0.5 * params.gamma * w * acc
}

fn well_energy(phi: &ComplexScalarField, grid: &BoxGrid, params: &GLParams) -> f64 {
    let w = grid.cell_weight();
    let mut acc = 0.0;
    for v in &phi.data {
        let t = v.abs2() - params.beta;
        acc += t * t;
    }
    0.5 * params.alpha * w * acc
}

fn magnetic_energy(a: &RealVectorField, b0: &RealVectorField, grid1: &BoxGrid, params: &GLParams) -> f64 {
    let curl = build_curl(grid1);
    let ca = curl.apply(&a.flat());
    let b = b0.flat();
    let w = grid1.cell_weight();
    let mut acc = 0.0;
    for (x, y) in ca.iter().zip(&b) {
        let t = x - y;
        acc += t * t;
    }
    params.k0 * w * acc
}

/// Full Ginzburg-Landau free energy
/// J = (gamma/2) |(grad - i rho A) phi|^2_Omega + (alpha/2) |(|phi|^2 - beta)|^2_Omega
///   + K0 ||curl A - B0||^2_Omega1.
/// The three terms are each nonnegative; `K0 = 1/(8 pi)` recovers the
/// classical normalization of the magnetic term.
pub fn gl_energy(
    phi: &ComplexScalarField,
    a: &RealVectorField,
    b0: &RealVectorField,
    dom: &Domain,
    params: &GLParams,
) -> Result<f64> {
    phi.check_finite()?;
    a.check_finite()?;
    b0.check_finite()?;
    let terms = gl_energy_terms(phi, a, b0, dom, params)?;
    Ok(terms[0] + terms[1] + terms[2])
}

/// The three energy terms [kinetic, double-well, magnetic].
pub fn gl_energy_terms(
    phi: &ComplexScalarField,
    a: &RealVectorField,
    b0: &RealVectorField,
    dom: &Domain,
    params: &GLParams,
) -> Result<[f64; 3]> {
    if phi.len() != dom.omega.len() {
        return Err(Error::ShapeMismatch { expected: dom.omega.len(), got: phi.len() });
    }
    if a.len() != dom.omega1.len() {
        return Err(Error::ShapeMismatch { expected: dom.omega1.len(), got: a.len() });
    }
    let a_omega = restrict_vector(a, &dom.omega1, &dom.omega)?;
    Ok([
        kinetic_energy(phi, &a_omega, &dom.omega, params),
        well_energy(phi, &dom.omega, params),
        magnetic_energy(a, b0, &dom.omega1, params),
    ])
}

/// Gradient of the discrete energy in phi:
/// gamma |grad - i rho A|^2 phi + 2 alpha (|phi|^2 - beta) phi,
/// with the covariant Neumann boundary rows built into the operator.
pub fn gl_residual_phi(
    phi: &ComplexScalarField,
    a: &RealVectorField,
    dom: &Domain,
    params: &GLParams,
) -> Result<ComplexScalarField> {
    let a_omega = restrict_vector(a, &dom.omega1, &dom.omega)?;
    gl_residual_phi_in_omega(phi, &a_omega, &dom.omega, params)
}

/// Same as [`gl_residual_phi`] with the vector potential already
/// restricted to the Omega grid.
pub fn gl_residual_phi_in_omega(
    phi: &ComplexScalarField,
    a_omega: &RealVectorField,
    omega: &BoxGrid,
    params: &GLParams,
) -> Result<ComplexScalarField> {
    let cov = build_covariant_square(omega, a_omega, params.rho)?;
    let mut out = cov.apply(&phi.data);
    for (r, p) in out.iter_mut().zip(&phi.data) {
        *r = r.scale(params.gamma)
            + p.scale(2.0 * params.alpha * (p.abs2() - params.beta));
    }
    Ok(ComplexScalarField { data: out })
}

/// Supercurrent J = -2 Re[i rho gamma conj(phi) grad phi] - rho^2 gamma |phi|^2 A,
/// with the central-difference gradient, supported on Omega and extended
/// by zero to Omega_1.
pub fn compute_supercurrent(
    phi: &ComplexScalarField,
    a: &RealVectorField,
    dom: &Domain,
    params: &GLParams,
) -> Result<RealVectorField> {
    let omega = &dom.omega;
    if phi.len() != omega.len() {
        return Err(Error::ShapeMismatch { expected: omega.len(), got: phi.len() });
    }
    let a_omega = restrict_vector(a, &dom.omega1, omega)?;
    let n = omega.len();
    let mut j_omega = RealVectorField::zeros(n);
    for axis in 0..omega.dim() {
        let dm = omega.derivative_matrix(axis);
        for row in 0..n {
            let mut grad = Complex64::ZERO;
            for k in dm.row_ptr[row]..dm.row_ptr[row + 1] {
                grad += phi.data[dm.cols[k]].scale(dm.vals[k]);
            }
            let z = phi.data[row].conj() * grad;
            j_omega.comps[axis][row] = 2.0 * params.rho * params.gamma * z.im
                - params.rho * params.rho * params.gamma * phi.data[row].abs2() * a_omega.comp(axis)[row];
        }
    }
    let mut out = RealVectorField::zeros(dom.omega1.len());
    for k in 0..3 {
        for (i, &j) in dom.omega_to_omega1().iter().enumerate() {
            out.comps[k][j] = j_omega.comps[k][i];
        }
    }
    Ok(out)
}

/// Gradient of the discrete energy in A: the magnetic part
/// 2 K0 C^T (C A - B0) on Omega_1 plus the kinetic part supported on
/// Omega (minus the discrete supercurrent of the edge form).
pub fn gl_residual_a(
    phi: &ComplexScalarField,
    a: &RealVectorField,
    b0: &RealVectorField,
    dom: &Domain,
    params: &GLParams,
) -> Result<RealVectorField> {
    let grid1 = &dom.omega1;
    if a.len() != grid1.len() || b0.len() != grid1.len() {
        return Err(Error::ShapeMismatch { expected: grid1.len(), got: a.len() });
    }
    let curl = build_curl(grid1);
    let mut cab: Vec<f64> = curl.apply(&a.flat());
    for (x, y) in cab.iter_mut().zip(&b0.flat()) {
        *x -= y;
    }
    let grad_flat = curl.mat.apply_transpose(&cab);
    let mut out = RealVectorField::from_flat(&grad_flat);
    for k in 0..3 {
        for v in &mut out.comps[k][..] {
            *v *= 2.0 * params.k0;
        }
    }

    // kinetic part: d/dA_k(lo) of (gamma/2)|v_edge|^2 = -gamma rho Im[conj(phi_lo) v_edge]
    let omega = &dom.omega;
    let a_omega = restrict_vector(a, grid1, omega)?;
    let d = omega.spacing();
    for lo in 0..omega.len() {
        let c = omega.coords(lo);
        for axis in 0..omega.dim() {
            if c[axis] + 1 >= omega.nodes_along(axis) {
                continue;
            }
            let mut cu = c;
            cu[axis] += 1;
            let up = omega.index(cu);
            let diff = (phi.data[up] - phi.data[lo]).scale(1.0 / d);
            let v = diff - Complex64::new(0.0, params.rho * a_omega.comp(axis)[lo]) * phi.data[lo];
            let g = -params.gamma * params.rho * (phi.data[lo].conj() * v).im;
            out.comps[axis][dom.omega_to_omega1()[lo]] += g;
        }
    }
    Ok(out)
}

/// Scalar-model energy J(u) = (gamma/2) int |grad u|^2 + (alpha/2) int (u^2 - beta)^2 - <u, f>,
/// Dirichlet-zero boundary: boundary entries of `u` are ignored and read
/// as zero; integrals run over interior nodes.
pub fn scalar_energy(u: &RealScalarField, f: &RealScalarField, grid: &BoxGrid, params: &GLParams) -> Result<f64> {
    if u.len() != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), got: u.len() });
    }
    u.check_finite()?;
    let w = grid.cell_weight();
    let d = grid.spacing();
    let value = |idx: usize| if grid.is_interior(idx) { u.data[idx] } else { 0.0 };
    let mut dirichlet = 0.0;
    for lo in 0..grid.len() {
        let c = grid.coords(lo);
        for axis in 0..grid.dim() {
            if c[axis] + 1 >= grid.nodes_along(axis) {
                continue;
            }
            let mut cu = c;
            cu[axis] += 1;
            let up = grid.index(cu);
            let t = (value(up) - value(lo)) / d;
            dirichlet += t * t;
        }
    }
    let mut well = 0.0;
    let mut load = 0.0;
    for idx in interior_nodes(grid) {
        let t = u.data[idx] * u.data[idx] - params.beta;
        well += t * t;
        load += u.data[idx] * f.data[idx];
    }
    Ok(0.5 * params.gamma * w * dirichlet + 0.5 * params.alpha * w * well - w * load)
}

/// Gradient of the scalar energy on interior nodes:
/// gamma L u + 2 alpha (u^2 - beta) u - f, zero on the boundary rows.
pub fn scalar_residual(u: &RealScalarField, f: &RealScalarField, grid: &BoxGrid, params: &GLParams) -> Result<RealScalarField> {
    if u.len() != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), got: u.len() });
    }
    let interior = interior_nodes(grid);
    let l = build_laplacian_real_dirichlet(grid);
    let u_int: Vec<f64> = interior.iter().map(|&i| u.data[i]).collect();
    let lu = l.apply(&u_int);
    let mut out = RealScalarField::zeros(grid.len());
    for (row, &idx) in interior.iter().enumerate() {
        let ui = u.data[idx];
        out.data[idx] = params.gamma * lu[row]
            + 2.0 * params.alpha * (ui * ui - params.beta) * ui
            - f.data[idx];
    }
    Ok(out)
}

/// Second variation of the scalar energy as an operator on interior
/// nodes: gamma L + diag(6 alpha u^2 - 2 alpha beta). Symmetric.
pub fn scalar_second_variation(u: &RealScalarField, grid: &BoxGrid, params: &GLParams) -> Result<DiscreteOperator<f64>> {
    if u.len() != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), got: u.len() });
    }
    let interior = interior_nodes(grid);
    let l = build_laplacian_real_dirichlet(grid);
    let mut trips = Vec::with_capacity(l.nnz() + interior.len());
    for r in 0..l.nrows {
        for k in l.row_ptr[r]..l.row_ptr[r + 1] {
            trips.push((r, l.cols[k], params.gamma * l.vals[k]));
        }
    }
    for (row, &idx) in interior.iter().enumerate() {
        let ui = u.data[idx];
        trips.push((row, row, 6.0 * params.alpha * ui * ui - 2.0 * params.alpha * params.beta));
    }
    Ok(DiscreteOperator::new(Csr::from_triplets(l.nrows, l.nrows, &trips), true))
}

/// Discrete volume |Omega|_d used by closed-form energy identities:
/// interior node count times the cell weight for Dirichlet grids.
pub fn dirichlet_volume(grid: &BoxGrid) -> f64 {
    interior_nodes(grid).len() as f64 * grid.cell_weight()
}

/// Nodal volume of a Neumann grid (all nodes).
pub fn nodal_volume(grid: &BoxGrid) -> f64 {
    grid.len() as f64 * grid.cell_weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_norms_complex;

    fn unit_domain(n_omega: usize) -> Domain {
        let omega = BoxGrid::cube(-0.5, 0.5, n_omega).unwrap();
        let omega1 = BoxGrid::cube(-1.5, 1.5, 3 * n_omega).unwrap();
        Domain::new(omega, omega1).unwrap()
    }

    #[test]
    fn ground_state_has_zero_energy() {
        let dom = unit_domain(4);
        let params = GLParams::unit();
        let phi = ComplexScalarField::constant(
            dom.omega.len(),
            Complex64::new(libm::sqrt(params.beta), 0.0),
        );
        let a = RealVectorField::zeros(dom.omega1.len());
        let b0 = RealVectorField::zeros(dom.omega1.len());
        let j = gl_energy(&phi, &a, &b0, &dom, &params).unwrap();
        assert!(j.abs() < 1e-14);
        let r = gl_residual_phi(&phi, &a, &dom, &params).unwrap();
        assert!(field_norms_complex(&r, &dom.omega).sup < 1e-13);
    }

    #[test]
    fn normal_state_energy_is_well_volume() {
        let dom = unit_domain(4);
        let params = GLParams::unit();
        let phi = ComplexScalarField::zeros(dom.omega.len());
        let a = RealVectorField::zeros(dom.omega1.len());
        let b0 = RealVectorField::zeros(dom.omega1.len());
        let j = gl_energy(&phi, &a, &b0, &dom, &params).unwrap();
        let expect = 0.5 * params.alpha * params.beta * params.beta
            * nodal_volume(&dom.omega);
        assert!((j - expect).abs() < 1e-13);
        // residual has a phi factor in every term
        let r = gl_residual_phi(&phi, &a, &dom, &params).unwrap();
        assert!(field_norms_complex(&r, &dom.omega).sup == 0.0);
    }

    #[test]
    fn scalar_constant_violates_dirichlet_band_only() {
        let g = BoxGrid::line_1d(0.0, 1.0, 8).unwrap();
        let params = GLParams::unit();
        let u = RealScalarField::constant(g.len(), libm::sqrt(params.beta));
        let f = RealScalarField::zeros(g.len());
        let r = scalar_residual(&u, &f, &g, &params).unwrap();
        let d2 = g.spacing() * g.spacing();
        for idx in 0..g.len() {
            let expected = if !g.is_interior(idx) {
                0.0
            } else if g.cells_to_boundary(idx) == 1 {
                params.gamma * libm::sqrt(params.beta) / d2
            } else {
                0.0
            };
            assert!((r.data[idx] - expected).abs() < 1e-10, "node {}", idx);
        }
    }
}
