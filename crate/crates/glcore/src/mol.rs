//! Generalized method of lines for the linearized order-parameter
//! equation.
//!
//! The 3D grid is split into cross-section "lines" along one axis
//! (default x). With ghost lines eliminated through the first-order
//! covariant Neumann matrices H1, H2, each interior line n = 1..N-1
//! carries the equation
//!
//! ```text
//! phi_{n+1} - 2 phi_n + phi_{n-1} - K phi_n d^2/gamma + T_n(phi_n) d^2/gamma = 0
//! ```
//!
//! where `T_n` is affine in the live line: the transverse Laplacian and
//! the diagonal terms act on `phi_n`, while the first-order vector-
//! potential terms and the K-shift source are frozen at the outer
//! snapshot. At the outer fixed point the assembled field satisfies the
//! expanded discretization of the covariant equation
//! `gamma |grad - i rho A|^2 phi + 2 alpha (|phi|^2 - beta) phi = 0`.
//!
//! Two solution paths are provided:
//! - [`solve_lines`]: the coupled block-tridiagonal system solved exactly
//!   (conjugate-orthogonal CG, Jacobi preconditioned). The substitute-back
//!   residual of the line equation is then at solver tolerance.
//! - [`forward_sweep`] / [`terminal_solve`] / [`backward_substitution`]:
//!   the literal recursion `a_n = (2 - a_{n-1} + K d^2/gamma)^{-1}`,
//!   `b_n = a_n (b_{n-1} + 1)`, `E_n = a_n b_{n-1} (T_{n-1} - T_n) d^2/gamma
//!   + a_n E_{n-1}` with the `T` values inside `E_n` lagged at the frozen
//!   snapshot, which makes the sweep strictly forward.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{ComplexScalarField, GLParams, RealVectorField};
use crate::grid::BoxGrid;
use crate::linalg::{cocg, DenseLu};
use crate::scalar::{Complex64, Scalar};
use crate::sparse::Csr;
use crate::{Error, Result};

/// Dense per-line solves below this cross-section size, Krylov above.
const DENSE_LINE_LIMIT: usize = 1600;

/// Snapshot fields the line operator is linearized around. Both live on
/// the Omega grid (the vector potential already restricted).
#[derive(Debug, Clone)]
pub struct FrozenCoefficients {
    pub phi_hat: ComplexScalarField,
    pub a0: RealVectorField,
}

/// Geometry of the line split: line axis plus the two transverse axes.
#[derive(Debug, Clone, Copy)]
pub struct LineSpace {
    pub axis: usize,
    u: usize,
    v: usize,
    nu: usize,
    nv: usize,
    /// Nodes along the line axis (N + 1; lines 0 and N are slaved).
    pub n_nodes: usize,
}

impl LineSpace {
    pub fn new(grid: &BoxGrid, axis: usize) -> Result<Self> {
        if grid.dim() != 3 {
            return Err(Error::InvalidParam("line solver requires a 3D grid"));
        }
        if axis > 2 {
            return Err(Error::InvalidParam("line axis must be 0, 1 or 2"));
        }
        let mut others = [0usize; 2];
        let mut j = 0;
        for k in 0..3 {
            if k != axis {
                others[j] = k;
                j += 1;
            }
        }
        Ok(LineSpace {
            axis,
            u: others[0],
            v: others[1],
            nu: grid.nodes_along(others[0]),
            nv: grid.nodes_along(others[1]),
            n_nodes: grid.nodes_along(axis),
        })
    }

    /// Cross-section node count.
    pub fn cs_len(&self) -> usize {
        self.nu * self.nv
    }

    /// Interior line count (N - 1).
    pub fn n_lines(&self) -> usize {
        self.n_nodes - 2
    }

    pub fn grid_index(&self, grid: &BoxGrid, line: usize, cs: usize) -> usize {
        let mut c = [0usize; 3];
        c[self.axis] = line;
        c[self.u] = cs % self.nu;
        c[self.v] = cs / self.nu;
        grid.index(c)
    }

    pub fn slice<T: Copy>(&self, grid: &BoxGrid, data: &[T], line: usize) -> Vec<T> {
        (0..self.cs_len()).map(|cs| data[self.grid_index(grid, line, cs)]).collect()
    }

    pub fn scatter<T: Copy>(&self, grid: &BoxGrid, data: &mut [T], line: usize, values: &[T]) {
        for (cs, &v) in values.iter().enumerate() {
            data[self.grid_index(grid, line, cs)] = v;
        }
    }

    /// Transverse minus-Laplacian (natural Neumann rows) on the
    /// cross-section index space.
    pub fn transverse_laplacian(&self, grid: &BoxGrid) -> Csr<f64> {
        let n = self.cs_len();
        let inv_d2 = 1.0 / (grid.spacing() * grid.spacing());
        let mut trips = Vec::new();
        for cs in 0..n {
            let cu = cs % self.nu;
            let cv = cs / self.nu;
            for (coord, extent, stride) in [(cu, self.nu, 1usize), (cv, self.nv, self.nu)] {
                for dir in [-1isize, 1] {
                    let cj = coord as isize + dir;
                    if cj < 0 || cj >= extent as isize {
                        continue;
                    }
                    let nb = (cs as isize + dir * stride as isize) as usize;
                    trips.push((cs, cs, inv_d2));
                    trips.push((cs, nb, -inv_d2));
                }
            }
        }
        Csr::from_triplets(n, n, &trips)
    }
}

fn apply_real_matrix(m: &Csr<f64>, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::ZERO; m.nrows];
    for r in 0..m.nrows {
        let mut acc = Complex64::ZERO;
        for k in m.row_ptr[r]..m.row_ptr[r + 1] {
            acc += x[m.cols[k]].scale(m.vals[k]);
        }
        y[r] = acc;
    }
    y
}

/// Precomputed line-operator data: the transverse Laplacian, the live
/// diagonal `c = rho^2 gamma |A0|^2 + 2 alpha |phi_hat|^2 - 2 alpha beta`
/// and the frozen affine source
/// `g = K phi_hat - 2 i rho gamma (A0 . grad phi_hat) - i rho gamma (div A0) phi_hat`.
pub struct LineOperator {
    pub space: LineSpace,
    pub lap_cs: Csr<f64>,
    /// Live diagonal per grid node.
    pub c: Vec<f64>,
    /// Frozen affine source per grid node.
    pub g: Vec<Complex64>,
    /// Snapshot the affine terms were built from.
    pub phi_hat: Vec<Complex64>,
    pub d: f64,
}

impl LineOperator {
    pub fn new(grid: &BoxGrid, frozen: &FrozenCoefficients, params: &GLParams, axis: usize) -> Result<Self> {
        let n = grid.len();
        if frozen.phi_hat.len() != n {
            return Err(Error::ShapeMismatch { expected: n, got: frozen.phi_hat.len() });
        }
        if frozen.a0.len() != n {
            return Err(Error::ShapeMismatch { expected: n, got: frozen.a0.len() });
        }
        let space = LineSpace::new(grid, axis)?;
        let lap_cs = space.transverse_laplacian(grid);

        let mut c = vec![0.0f64; n];
        for i in 0..n {
            let a2 = frozen.a0.comp(0)[i] * frozen.a0.comp(0)[i]
                + frozen.a0.comp(1)[i] * frozen.a0.comp(1)[i]
                + frozen.a0.comp(2)[i] * frozen.a0.comp(2)[i];
            c[i] = params.rho * params.rho * params.gamma * a2
                + 2.0 * params.alpha * frozen.phi_hat.data[i].abs2()
                - 2.0 * params.alpha * params.beta;
        }

        // frozen first-order terms, central differences on Omega
        let mut g = vec![Complex64::ZERO; n];
        let coef = params.rho * params.gamma;
        let mut div_a0 = vec![0.0f64; n];
        for ax in 0..3 {
            let dm = grid.derivative_matrix(ax);
            let dphi = apply_real_matrix(&dm, &frozen.phi_hat.data);
            let da = dm.apply(frozen.a0.comp(ax));
            for i in 0..n {
                // -2 i rho gamma A0_k d_k(phi_hat)
                g[i] -= Complex64::new(0.0, 2.0 * coef * frozen.a0.comp(ax)[i]) * dphi[i];
                div_a0[i] += da[i];
            }
        }
        for i in 0..n {
            g[i] -= Complex64::new(0.0, coef * div_a0[i]) * frozen.phi_hat.data[i];
            g[i] += frozen.phi_hat.data[i].scale(params.k);
        }
        Ok(LineOperator {
            space,
            lap_cs,
            c,
            g,
            phi_hat: frozen.phi_hat.data.clone(),
            d: grid.spacing(),
        })
    }

    /// T_n(phi_n) = gamma lap_perp phi_n - c phi_n + g_n (affine in the
    /// live line; `lap_perp = -lap_cs`).
    pub fn assemble_t(&self, grid: &BoxGrid, line: usize, phi_line: &[Complex64], params: &GLParams) -> Result<Vec<Complex64>> {
        if line == 0 || line + 1 >= self.space.n_nodes {
            return Err(Error::Precondition("line index outside 1..N-1".into()));
        }
        if phi_line.len() != self.space.cs_len() {
            return Err(Error::ShapeMismatch { expected: self.space.cs_len(), got: phi_line.len() });
        }
        let mut t = apply_real_matrix(&self.lap_cs, phi_line);
        for (cs, tv) in t.iter_mut().enumerate() {
            let gi = self.space.grid_index(grid, line, cs);
            *tv = -tv.scale(params.gamma) - phi_line[cs].scale(self.c[gi]) + self.g[gi];
        }
        Ok(t)
    }

    /// The affine source of T on one line.
    fn g_line(&self, grid: &BoxGrid, line: usize) -> Vec<Complex64> {
        self.space.slice(grid, &self.g, line)
    }

    fn c_line(&self, grid: &BoxGrid, line: usize) -> Vec<f64> {
        self.space.slice(grid, &self.c, line)
    }
}

/// First-order ghost elimination of the covariant Neumann condition at
/// the two boundary cross-sections: phi_ghost = (1 + i rho d (A.n)) phi_inner,
/// diagonal in the cross-section. Returns (H1, H2).
pub fn boundary_matrices(
    a_omega: &RealVectorField,
    grid: &BoxGrid,
    params: &GLParams,
    axis: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let space = LineSpace::new(grid, axis)?;
    let last = space.n_nodes - 1;
    let mut h1 = Vec::with_capacity(space.cs_len());
    let mut h2 = Vec::with_capacity(space.cs_len());
    for cs in 0..space.cs_len() {
        // outward normal is -e_axis at line 0 and +e_axis at line N
        let a_lo = a_omega.comp(axis)[space.grid_index(grid, 0, cs)];
        let a_hi = a_omega.comp(axis)[space.grid_index(grid, last, cs)];
        h1.push(Complex64::new(1.0, -params.rho * grid.spacing() * a_lo));
        h2.push(Complex64::new(1.0, params.rho * grid.spacing() * a_hi));
    }
    Ok((h1, h2))
}

/// Coefficients of the line recursion. `a`, `b` are diagonal operators
/// (one complex value per cross-section node and line); `e` the affine
/// terms built from the frozen snapshot.
pub struct LineRecursion {
    pub a: Vec<Vec<Complex64>>,
    pub b: Vec<Vec<Complex64>>,
    pub e: Vec<Vec<Complex64>>,
    pub d: f64,
    /// max |a_n| <= 1 + 1e-12 held on every line (checked, not assumed).
    pub contraction_ok: bool,
}

/// The pure a/b recursion, independent of any grid:
/// a_1 = (2 + K d^2/gamma - H1)^{-1}, a_n = (2 - a_{n-1} + K d^2/gamma)^{-1},
/// b_1 = a_1, b_n = a_n (b_{n-1} + 1).
pub fn recursion_coefficients(
    h1: &[Complex64],
    k_d2_over_gamma: f64,
    n_lines: usize,
) -> Result<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
    let cs = h1.len();
    let mut a_all = Vec::with_capacity(n_lines);
    let mut b_all = Vec::with_capacity(n_lines);
    let shift = Complex64::new(2.0 + k_d2_over_gamma, 0.0);
    for n in 1..=n_lines {
        let mut a_n = vec![Complex64::ZERO; cs];
        let mut b_n = vec![Complex64::ZERO; cs];
        for i in 0..cs {
            let denom = if n == 1 { shift - h1[i] } else { shift - a_all[n - 2][i] };
            if denom.abs() < 1e-300 {
                return Err(Error::SingularResolvent { line: n });
            }
            a_n[i] = Complex64::ONE / denom;
            b_n[i] = if n == 1 { a_n[i] } else { a_n[i] * (b_all[n - 2][i] + Complex64::ONE) };
        }
        a_all.push(a_n);
        b_all.push(b_n);
    }
    Ok((a_all, b_all))
}

/// Forward sweep: recursion coefficients plus the affine terms
/// E_1 = 0, E_n = a_n b_{n-1} (T_{n-1} - T_n) d^2/gamma + a_n E_{n-1},
/// with both T values evaluated at the frozen snapshot.
pub fn forward_sweep(
    h1: &[Complex64],
    op: &LineOperator,
    grid: &BoxGrid,
    params: &GLParams,
) -> Result<LineRecursion> {
    let space = &op.space;
    let cs = space.cs_len();
    if h1.len() != cs {
        return Err(Error::ShapeMismatch { expected: cs, got: h1.len() });
    }
    let d = op.d;
    let d2g = d * d / params.gamma;
    let n_lines = space.n_lines();
    let (a_all, b_all) = recursion_coefficients(h1, params.k * d2g, n_lines)?;

    let mut contraction_ok = true;
    for a_n in &a_all {
        for v in a_n {
            if v.abs() > 1.0 + 1e-12 {
                contraction_ok = false;
            }
        }
    }

    // T at the frozen snapshot per line
    let phi_hat = snapshot_lines(op, grid);
    let mut t_hat: Vec<Vec<Complex64>> = Vec::with_capacity(n_lines);
    for n in 1..=n_lines {
        t_hat.push(op.assemble_t(grid, n, &phi_hat[n], params)?);
    }

    let mut e_all: Vec<Vec<Complex64>> = Vec::with_capacity(n_lines);
    e_all.push(vec![Complex64::ZERO; cs]);
    for n in 2..=n_lines {
        let mut e_n = vec![Complex64::ZERO; cs];
        for i in 0..cs {
            let dt = t_hat[n - 2][i] - t_hat[n - 1][i];
            e_n[i] = a_all[n - 1][i] * b_all[n - 2][i] * dt.scale(d2g)
                + a_all[n - 1][i] * e_all[n - 2][i];
        }
        e_all.push(e_n);
    }
    Ok(LineRecursion { a: a_all, b: b_all, e: e_all, d, contraction_ok })
}

fn snapshot_lines(op: &LineOperator, grid: &BoxGrid) -> Vec<Vec<Complex64>> {
    let space = &op.space;
    (0..space.n_nodes)
        .map(|line| space.slice(grid, unsafe { core::mem::transmute::<&[Complex64], &[Complex64]>(&op.g) }, line))
        .collect()
}

/// Solve one line system (I - diag(b_n) linT d^2/gamma) phi = rhs where
/// linT phi = gamma lap_perp phi - c phi. Dense LU below the size limit,
/// complex-symmetric CG above.
fn solve_line_system(
    op: &LineOperator,
    grid: &BoxGrid,
    params: &GLParams,
    line: usize,
    b_n: &[Complex64],
    extra_diag: Option<&[Complex64]>,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let cs = op.space.cs_len();
    let d2g = op.d * op.d / params.gamma;
    let c_line = op.c_line(grid, line);
    // matrix M = diag(1 - extra) + diag(b) (gamma L_cs + diag(c)) d^2/gamma
    if cs <= DENSE_LINE_LIMIT {
        let mut dense = vec![Complex64::ZERO; cs * cs];
        for r in 0..cs {
            let base = Complex64::ONE - extra_diag.map_or(Complex64::ZERO, |e| e[r]);
            dense[r * cs + r] += base + b_n[r] * Complex64::from_re(c_line[r] * d2g);
            for k in op.lap_cs.row_ptr[r]..op.lap_cs.row_ptr[r + 1] {
                dense[r * cs + op.lap_cs.cols[k]] +=
                    b_n[r].scale(params.gamma * op.lap_cs.vals[k] * d2g);
            }
        }
        let lu = DenseLu::factor(cs, &dense)?;
        Ok(lu.solve(rhs))
    } else {
        // symmetrize by scaling rows with 1/b_n, then COCG
        let mut scaled_rhs = vec![Complex64::ZERO; cs];
        for i in 0..cs {
            if b_n[i].abs() < 1e-300 {
                return Err(Error::SingularSystem);
            }
            scaled_rhs[i] = rhs[i] / b_n[i];
        }
        let mut diag = vec![0.0f64; cs];
        for i in 0..cs {
            let base = (Complex64::ONE - extra_diag.map_or(Complex64::ZERO, |e| e[i])) / b_n[i];
            diag[i] = (base + Complex64::from_re(c_line[i] * d2g)).abs()
                + params.gamma * d2g * 4.0 / (op.d * op.d);
        }
        let lap = &op.lap_cs;
        let mut apply = |x: &[Complex64], y: &mut [Complex64]| {
            for r in 0..cs {
                let base = (Complex64::ONE - extra_diag.map_or(Complex64::ZERO, |e| e[r])) / b_n[r];
                let mut acc = (base + Complex64::from_re(c_line[r] * d2g)) * x[r];
                for k in lap.row_ptr[r]..lap.row_ptr[r + 1] {
                    acc += x[lap.cols[k]].scale(params.gamma * lap.vals[k] * d2g);
                }
                y[r] = acc;
            }
        };
        let out = cocg(&mut apply, &scaled_rhs, None, Some(&diag), params.tol_linear, 10 * cs.max(100))?;
        Ok(out.x)
    }
}

/// Terminal line solve:
/// (I - a_{N-1} H2 - b_{N-1} lin(T_{N-1}) d^2/gamma) phi = b_{N-1} aff(T_{N-1}) d^2/gamma + E_{N-1}.
pub fn terminal_solve(
    rec: &LineRecursion,
    h2: &[Complex64],
    op: &LineOperator,
    grid: &BoxGrid,
    params: &GLParams,
) -> Result<Vec<Complex64>> {
    let n_lines = rec.a.len();
    let cs = op.space.cs_len();
    let d2g = op.d * op.d / params.gamma;
    let a_last = &rec.a[n_lines - 1];
    let b_last = &rec.b[n_lines - 1];
    let g_last = op.g_line(grid, n_lines);
    let mut rhs = vec![Complex64::ZERO; cs];
    for i in 0..cs {
        rhs[i] = b_last[i] * g_last[i].scale(d2g) + rec.e[n_lines - 1][i];
    }
    let extra: Vec<Complex64> = (0..cs).map(|i| a_last[i] * h2[i]).collect();
    solve_line_system(op, grid, params, n_lines, b_last, Some(&extra), &rhs)
}

/// Backward pass: phi_n = a_n phi_{n+1} + b_n T_n(phi_n) d^2/gamma + E_n
/// for n = N-2 .. 1, then ghost lines phi_0 = H1 phi_1, phi_N = H2 phi_{N-1}.
/// Returns the assembled 3D field.
pub fn backward_substitution(
    rec: &LineRecursion,
    phi_last: &[Complex64],
    h1: &[Complex64],
    h2: &[Complex64],
    op: &LineOperator,
    grid: &BoxGrid,
    params: &GLParams,
) -> Result<ComplexScalarField> {
    let space = &op.space;
    let cs = space.cs_len();
    let n_lines = rec.a.len();
    let d2g = op.d * op.d / params.gamma;
    let mut lines: Vec<Vec<Complex64>> = vec![Vec::new(); space.n_nodes];
    lines[n_lines] = phi_last.to_vec();
    for n in (1..n_lines).rev() {
        let g_n = op.g_line(grid, n);
        let mut rhs = vec![Complex64::ZERO; cs];
        for i in 0..cs {
            rhs[i] = rec.a[n - 1][i] * lines[n + 1][i]
                + rec.b[n - 1][i] * g_n[i].scale(d2g)
                + rec.e[n - 1][i];
        }
        lines[n] = solve_line_system(op, grid, params, n, &rec.b[n - 1], None, &rhs)?;
    }
    let mut phi = ComplexScalarField::zeros(grid.len());
    for (i, h) in h1.iter().enumerate() {
        lines[0].push(*h * lines[1][i]);
    }
    let last_line: Vec<Complex64> = (0..cs).map(|i| h2[i] * lines[n_lines][i]).collect();
    lines[space.n_nodes - 1] = last_line;
    for (line, values) in lines.iter().enumerate() {
        space.scatter(grid, &mut phi.data, line, values);
    }
    Ok(phi)
}

/// Exact solve of the coupled line system by conjugate-orthogonal CG on
/// the complex-symmetric block-tridiagonal matrix
/// `-(gamma/d^2) Delta_line + K + gamma L_perp + diag(c)` with the ghost
/// lines absorbed through H1, H2. Returns the assembled field including
/// the slaved boundary lines. `warm` optionally seeds the iteration.
pub fn solve_lines(
    frozen: &FrozenCoefficients,
    grid: &BoxGrid,
    params: &GLParams,
    axis: usize,
    warm: Option<&ComplexScalarField>,
) -> Result<ComplexScalarField> {
    let op = LineOperator::new(grid, frozen, params, axis)?;
    let (h1, h2) = boundary_matrices(&frozen.a0, grid, params, axis)?;
    let space = op.space;
    let cs = space.cs_len();
    let n_lines = space.n_lines();
    let n_sys = cs * n_lines;
    let d = op.d;
    let gd2 = params.gamma / (d * d);

    let lap = &op.lap_cs;
    let c_all = &op.c;
    let grid_ref = grid;
    let apply = |x: &[Complex64], y: &mut [Complex64]| {
        for n in 1..=n_lines {
            let off = (n - 1) * cs;
            for i in 0..cs {
                let gi = space.grid_index(grid_ref, n, i);
                let mut acc = x[off + i].scale(2.0 * gd2 + params.k + c_all[gi]);
                for k in lap.row_ptr[i]..lap.row_ptr[i + 1] {
                    acc += x[off + lap.cols[k]].scale(params.gamma * lap.vals[k]);
                }
                if n > 1 {
                    acc -= x[off - cs + i].scale(gd2);
                } else {
                    acc -= h1[i] * x[off + i].scale(gd2);
                }
                if n < n_lines {
                    acc += -x[off + cs + i].scale(gd2);
                } else {
                    acc -= h2[i] * x[off + i].scale(gd2);
                }
                y[off + i] = acc;
            }
        }
    };

    let mut rhs = vec![Complex64::ZERO; n_sys];
    for n in 1..=n_lines {
        for i in 0..cs {
            rhs[(n - 1) * cs + i] = op.g[space.grid_index(grid, n, i)];
        }
    }
    let mut diag = vec![0.0f64; n_sys];
    for n in 1..=n_lines {
        for i in 0..cs {
            let gi = space.grid_index(grid, n, i);
            let mut v = 2.0 * gd2 + params.k + c_all[gi];
            for k in lap.row_ptr[i]..lap.row_ptr[i + 1] {
                if lap.cols[k] == i {
                    v += params.gamma * lap.vals[k];
                }
            }
            diag[(n - 1) * cs + i] = libm::fmax(v.abs(), 1e-12);
        }
    }
    let warm_vec = warm.map(|w| {
        let mut x0 = vec![Complex64::ZERO; n_sys];
        for n in 1..=n_lines {
            for i in 0..cs {
                x0[(n - 1) * cs + i] = w.data[space.grid_index(grid, n, i)];
            }
        }
        x0
    });

    let mut apply_mut = apply;
    let out = cocg(
        &mut apply_mut,
        &rhs,
        warm_vec.as_deref(),
        Some(&diag),
        params.tol_linear * 1e-2,
        20 * n_sys.max(200),
    )?;

    let mut phi = ComplexScalarField::zeros(grid.len());
    for n in 1..=n_lines {
        let line: Vec<Complex64> = out.x[(n - 1) * cs..n * cs].to_vec();
        space.scatter(grid, &mut phi.data, n, &line);
    }
    let first: Vec<Complex64> = (0..cs).map(|i| h1[i] * out.x[i]).collect();
    space.scatter(grid, &mut phi.data, 0, &first);
    let last: Vec<Complex64> =
        (0..cs).map(|i| h2[i] * out.x[(n_lines - 1) * cs + i]).collect();
    space.scatter(grid, &mut phi.data, space.n_nodes - 1, &last);
    Ok(phi)
}

/// Per-line sup residual of the line equation
/// phi_{n+1} - 2 phi_n + phi_{n-1} - K phi_n d^2/gamma + T_n(phi_n) d^2/gamma
/// with T evaluated live on the given field.
pub fn line_equation_residual(
    phi: &ComplexScalarField,
    frozen: &FrozenCoefficients,
    grid: &BoxGrid,
    params: &GLParams,
    axis: usize,
) -> Result<Vec<f64>> {
    let op = LineOperator::new(grid, frozen, params, axis)?;
    let space = op.space;
    let cs = space.cs_len();
    let d2g = op.d * op.d / params.gamma;
    let mut out = Vec::with_capacity(space.n_lines());
    for n in 1..=space.n_lines() {
        let phi_n = space.slice(grid, &phi.data, n);
        let phi_m = space.slice(grid, &phi.data, n - 1);
        let phi_p = space.slice(grid, &phi.data, n + 1);
        let t_n = op.assemble_t(grid, n, &phi_n, params)?;
        let mut sup = 0.0f64;
        for i in 0..cs {
            let r = phi_p[i] - phi_n[i].scale(2.0) + phi_m[i]
                - phi_n[i].scale(params.k * d2g)
                + t_n[i].scale(d2g);
            sup = libm::fmax(sup, r.abs());
        }
        out.push(sup);
    }
    Ok(out)
}

/// Convenience entry: build the frozen operator, run the literal
/// recursion (forward sweep, terminal solve, backward substitution).
pub fn solve_lines_recursion(
    frozen: &FrozenCoefficients,
    grid: &BoxGrid,
    params: &GLParams,
    axis: usize,
) -> Result<ComplexScalarField> {
    let op = LineOperator::new(grid, frozen, params, axis)?;
    let (h1, h2) = boundary_matrices(&frozen.a0, grid, params, axis)?;
    let rec = forward_sweep(&h1, &op, grid, params)?;
    let phi_last = terminal_solve(&rec, &h2, &op, grid, params)?;
    backward_substitution(&rec, &phi_last, &h1, &h2, &op, grid, params)
}
