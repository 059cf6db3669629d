//! Uniform box grids for the sample Omega and the hold-all Omega_1, plus
//! the discrete differential operators (gradient, divergence, curl,
//! Laplacian, covariant square) used throughout the solvers.
//!
//! Layout is collocated: every field value lives on a grid node. Nodes are
//! indexed x-fastest. One node spacing `d` is shared by all axes of a grid.
//! First derivatives are central in the interior and one-sided on the
//! boundary; the Laplacians are assembled from the quadratic form of
//! forward edge differences, so Neumann conditions are natural and
//! Dirichlet rows are eliminated.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::RealVectorField;
use crate::scalar::{Complex64, Scalar};
use crate::sparse::{Csr, DiscreteOperator};
use crate::{Error, Result};

const SPACING_TOL: f64 = 1e-12;

/// Region membership of a node of the outer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    /// Strictly inside the sample Omega.
    InteriorOmega,
    /// On the boundary of Omega (interface nodes belong to Omega).
    BoundaryOmega,
    /// In the shell Omega_1 minus closure(Omega).
    ShellOmega1,
    /// On the boundary of Omega_1.
    BoundaryOmega1,
}

impl RegionTag {
    pub fn in_omega(self) -> bool {
        matches!(self, RegionTag::InteriorOmega | RegionTag::BoundaryOmega)
    }
}

/// Uniform box lattice. `n[k]` counts intervals along axis `k`; a grid of
/// dimension `dim` has `n[k] + 1` nodes along each active axis.
#[derive(Debug, Clone)]
pub struct BoxGrid {
    dim: usize,
    n: [usize; 3],
    nodes: [usize; 3],
    lower: [f64; 3],
    d: f64,
    tags: Vec<RegionTag>,
}

impl BoxGrid {
    pub fn new(dim: usize, lower: [f64; 3], upper: [f64; 3], n: [usize; 3]) -> Result<Self> {
        assert!((1..=3).contains(&dim), "grid dimension must be 1, 2 or 3");
        let mut d = 0.0;
        let mut nodes = [1usize; 3];
        for k in 0..dim {
            if n[k] < 3 {
                return Err(Error::GridTooSmall { n: n[k] });
            }
            let dk = (upper[k] - lower[k]) / n[k] as f64;
            if dk <= 0.0 {
                return Err(Error::InvalidParam("grid extent must be positive"));
            }
            if k == 0 {
                d = dk;
            } else if libm::fabs(dk - d) > SPACING_TOL * libm::fmax(1.0, d) {
                return Err(Error::NonUniformSpacing);
            }
            nodes[k] = n[k] + 1;
        }
        let total: usize = nodes.iter().product();
        let mut grid = BoxGrid { dim, n, nodes, lower, d, tags: Vec::new() };
        let mut tags = vec![RegionTag::InteriorOmega; total];
        for idx in 0..total {
            if grid.on_outer_boundary(idx) {
                tags[idx] = RegionTag::BoundaryOmega;
            }
        }
        grid.tags = tags;
        Ok(grid)
    }

    pub fn line_1d(lower: f64, upper: f64, n: usize) -> Result<Self> {
        Self::new(1, [lower, 0.0, 0.0], [upper, 0.0, 0.0], [n, 0, 0])
    }

    pub fn square_2d(lower: [f64; 2], upper: [f64; 2], n: usize) -> Result<Self> {
        Self::new(2, [lower[0], lower[1], 0.0], [upper[0], upper[1], 0.0], [n, n, 0])
    }

    pub fn cube(lower: f64, upper: f64, n: usize) -> Result<Self> {
        Self::new(3, [lower; 3], [upper; 3], [n; 3])
    }

    /// Re-tag this grid as a hold-all Omega_1 containing `omega`.
    /// `omega` must be strictly inside with nodes on common lattice points.
    pub fn with_inner(mut self, omega: &BoxGrid) -> Result<Self> {
        if omega.dim != self.dim {
            return Err(Error::NotNested);
        }
        if libm::fabs(omega.d - self.d) > SPACING_TOL {
            return Err(Error::NotNested);
        }
        let mut off = [0usize; 3];
        for k in 0..self.dim {
            let shift = (omega.lower[k] - self.lower[k]) / self.d;
            let r = libm::round(shift);
            if libm::fabs(shift - r) > 1e-9 || r < 1.0 {
                return Err(Error::NotNested);
            }
            off[k] = r as usize;
            if off[k] + omega.n[k] + 1 >= self.nodes[k] {
                return Err(Error::NotNested);
            }
        }
        for idx in 0..self.len() {
            let c = self.coords(idx);
            let mut inside = true;
            let mut on_face = false;
            for k in 0..self.dim {
                if c[k] < off[k] || c[k] > off[k] + omega.n[k] {
                    inside = false;
                    break;
                }
                if c[k] == off[k] || c[k] == off[k] + omega.n[k] {
                    on_face = true;
                }
            }
            self.tags[idx] = if inside {
                if on_face { RegionTag::BoundaryOmega } else { RegionTag::InteriorOmega }
            } else if self.on_outer_boundary(idx) {
                RegionTag::BoundaryOmega1
            } else {
                RegionTag::ShellOmega1
            };
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.d
    }

    pub fn intervals(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn nodes_along(&self, axis: usize) -> usize {
        self.nodes[axis]
    }

    pub fn lower(&self) -> [f64; 3] {
        self.lower
    }

    /// Total node count.
    pub fn len(&self) -> usize {
        self.nodes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Nodal quadrature weight (rectangle rule): d^dim.
    pub fn cell_weight(&self) -> f64 {
        let mut w = 1.0;
        for _ in 0..self.dim {
            w *= self.d;
        }
        w
    }

    pub fn tag(&self, idx: usize) -> RegionTag {
        self.tags[idx]
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        (c[2] * self.nodes[1] + c[1]) * self.nodes[0] + c[0]
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.nodes[0];
        let j = (idx / self.nodes[0]) % self.nodes[1];
        let k = idx / (self.nodes[0] * self.nodes[1]);
        [i, j, k]
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let mut p = [0.0; 3];
        for k in 0..3 {
            p[k] = self.lower[k] + c[k] as f64 * self.d;
        }
        p
    }

    fn on_outer_boundary(&self, idx: usize) -> bool {
        let c = self.coords(idx);
        (0..self.dim).any(|k| c[k] == 0 || c[k] == self.nodes[k] - 1)
    }

    pub fn is_outer_boundary(&self, idx: usize) -> bool {
        self.on_outer_boundary(idx)
    }

    /// Interior node (not on the outer boundary of this grid).
    pub fn is_interior(&self, idx: usize) -> bool {
        !self.on_outer_boundary(idx)
    }

    /// Minimum node distance (in cells) to the outer boundary.
    pub fn cells_to_boundary(&self, idx: usize) -> usize {
        let c = self.coords(idx);
        let mut m = usize::MAX;
        for k in 0..self.dim {
            m = m.min(c[k]).min(self.nodes[k] - 1 - c[k]);
        }
        m
    }

    /// Map from node indices of a nested `inner` grid to indices of `self`.
    pub fn nesting_map(&self, inner: &BoxGrid) -> Result<Vec<usize>> {
        if inner.dim != self.dim || libm::fabs(inner.d - self.d) > SPACING_TOL {
            return Err(Error::NotNested);
        }
        let mut off = [0usize; 3];
        for k in 0..self.dim {
            let shift = (inner.lower[k] - self.lower[k]) / self.d;
            let r = libm::round(shift);
            if libm::fabs(shift - r) > 1e-9 || r < 0.0 {
                return Err(Error::NotNested);
            }
            off[k] = r as usize;
            if off[k] + inner.n[k] >= self.nodes[k] {
                return Err(Error::NotNested);
            }
        }
        let mut map = Vec::with_capacity(inner.len());
        for idx in 0..inner.len() {
            let c = inner.coords(idx);
            map.push(self.index([c[0] + off[0], c[1] + off[1], c[2] + off[2]]));
        }
        Ok(map)
    }

    /// Per-axis first-derivative matrix: central differences in the
    /// interior, one-sided on the two boundary layers of that axis.
    pub fn derivative_matrix(&self, axis: usize) -> Csr<f64> {
        let n = self.len();
        let d = self.d;
        let mut trips = Vec::with_capacity(3 * n);
        if axis >= self.dim {
            return Csr::from_triplets(n, n, &trips);
        }
        let last = self.nodes[axis] - 1;
        for idx in 0..n {
            let c = self.coords(idx);
            let mut cm = c;
            let mut cp = c;
            if c[axis] == 0 {
                cp[axis] = 1;
                trips.push((idx, self.index(cp), 1.0 / d));
                trips.push((idx, idx, -1.0 / d));
            } else if c[axis] == last {
                cm[axis] = last - 1;
                trips.push((idx, idx, 1.0 / d));
                trips.push((idx, self.index(cm), -1.0 / d));
            } else {
                cp[axis] += 1;
                cm[axis] -= 1;
                trips.push((idx, self.index(cp), 0.5 / d));
                trips.push((idx, self.index(cm), -0.5 / d));
            }
        }
        Csr::from_triplets(n, n, &trips)
    }
}

/// The nested pair of grids the coupled model lives on: the sample Omega
/// strictly inside the hold-all Omega_1, sharing lattice nodes.
#[derive(Debug, Clone)]
pub struct Domain {
    pub omega: BoxGrid,
    pub omega1: BoxGrid,
    /// Omega node index -> Omega_1 node index.
    map: Vec<usize>,
}

impl Domain {
    pub fn new(omega: BoxGrid, omega1: BoxGrid) -> Result<Self> {
        let omega1 = omega1.with_inner(&omega)?;
        let map = omega1.nesting_map(&omega)?;
        Ok(Domain { omega, omega1, map })
    }

    pub fn omega_to_omega1(&self) -> &[usize] {
        &self.map
    }
}

/// Boundary treatment for assembled Laplacians.
pub enum BcSpec<'a> {
    /// Boundary unknowns eliminated; operator acts on interior nodes only.
    DirichletZero,
    /// Natural (zero-flux) boundary rows from the edge-difference form.
    Neumann,
    /// Covariant Neumann (grad - i rho A) . n = 0, realized as the plain
    /// Neumann form of the covariant edge differences.
    CovariantNeumann { a: &'a RealVectorField, rho: f64 },
}

/// Indices of interior (non-boundary) nodes, in grid order.
pub fn interior_nodes(grid: &BoxGrid) -> Vec<usize> {
    (0..grid.len()).filter(|&i| grid.is_interior(i)).collect()
}

/// Assemble minus-Laplacian. For `DirichletZero` the matrix acts on the
/// interior nodes (in `interior_nodes` order) and is symmetric positive
/// definite. For `Neumann` it acts on all nodes and is symmetric positive
/// semi-definite. Entries carry the usual 1/d^2 scaling.
pub fn build_laplacian(grid: &BoxGrid, bc: BcSpec<'_>) -> Result<DiscreteOperator<Complex64>> {
    for k in 0..grid.dim() {
        if grid.intervals(k) < 3 {
            return Err(Error::GridTooSmall { n: grid.intervals(k) });
        }
    }
    match bc {
        BcSpec::DirichletZero => {
            let real = build_laplacian_real_dirichlet(grid);
            Ok(lift_real(&real, true))
        }
        BcSpec::Neumann => {
            let real = build_laplacian_real_neumann(grid);
            Ok(lift_real(&real, true))
        }
        BcSpec::CovariantNeumann { a, rho } => build_covariant_square(grid, a, rho),
    }
}

/// Dirichlet minus-Laplacian on interior nodes: sum over lattice edges of
/// the squared forward difference, boundary values pinned to zero.
pub fn build_laplacian_real_dirichlet(grid: &BoxGrid) -> Csr<f64> {
    let interior = interior_nodes(grid);
    let mut renum = vec![usize::MAX; grid.len()];
    for (row, &idx) in interior.iter().enumerate() {
        renum[idx] = row;
    }
    let inv_d2 = 1.0 / (grid.spacing() * grid.spacing());
    let mut trips = Vec::new();
    for (row, &idx) in interior.iter().enumerate() {
        let c = grid.coords(idx);
        for axis in 0..grid.dim() {
            for dir in [-1isize, 1] {
                let mut cn = c;
                cn[axis] = (c[axis] as isize + dir) as usize;
                let nb = grid.index(cn);
                trips.push((row, row, inv_d2));
                if renum[nb] != usize::MAX {
                    trips.push((row, renum[nb], -inv_d2));
                }
            }
        }
    }
    Csr::from_triplets(interior.len(), interior.len(), &trips)
}

/// Neumann minus-Laplacian on all nodes (natural boundary rows).
pub fn build_laplacian_real_neumann(grid: &BoxGrid) -> Csr<f64> {
    let n = grid.len();
    let inv_d2 = 1.0 / (grid.spacing() * grid.spacing());
    let mut trips = Vec::new();
    for idx in 0..n {
        let c = grid.coords(idx);
        for axis in 0..grid.dim() {
            let last = grid.nodes_along(axis) - 1;
            for dir in [-1isize, 1] {
                let cj = c[axis] as isize + dir;
                if cj < 0 || cj > last as isize {
                    continue;
                }
                let mut cn = c;
                cn[axis] = cj as usize;
                trips.push((idx, idx, inv_d2));
                trips.push((idx, grid.index(cn), -inv_d2));
            }
        }
    }
    Csr::from_triplets(n, n, &trips)
}

fn lift_real(m: &Csr<f64>, symmetric: bool) -> DiscreteOperator<Complex64> {
    let vals: Vec<Complex64> = m.vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    DiscreteOperator::new(
        Csr { nrows: m.nrows, ncols: m.ncols, row_ptr: m.row_ptr.clone(), cols: m.cols.clone(), vals },
        symmetric,
    )
}

/// Hermitian covariant square |grad - i rho A|^2 assembled as
/// (G - i rho A)^H (G - i rho A) from forward edge differences, with the
/// vector potential sampled at the edge-owning node. Natural covariant
/// Neumann boundary rows; reduces to the Neumann minus-Laplacian at A = 0.
pub fn build_covariant_square(
    grid: &BoxGrid,
    a: &RealVectorField,
    rho: f64,
) -> Result<DiscreteOperator<Complex64>> {
    let n = grid.len();
    if a.len() != n {
        return Err(Error::ShapeMismatch { expected: n, got: a.len() });
    }
    let d = grid.spacing();
    let mut trips: Vec<(usize, usize, Complex64)> = Vec::new();
    // each forward edge (j -> j+e_k) contributes |(phi_up - phi_lo)/d - i rho A_k(lo) phi_lo|^2
    // expanded into the Hermitian form
    for lo in 0..n {
        let c = grid.coords(lo);
        for axis in 0..grid.dim() {
            if c[axis] + 1 >= grid.nodes_along(axis) {
                continue;
            }
            let mut cu = c;
            cu[axis] += 1;
            let up = grid.index(cu);
            // coefficients of phi_lo and phi_up inside the edge value
            let g_lo = Complex64::new(-1.0 / d, -rho * a.comp(axis)[lo]);
            let g_up = Complex64::new(1.0 / d, 0.0);
            trips.push((lo, lo, g_lo.conj() * g_lo));
            trips.push((lo, up, g_lo.conj() * g_up));
            trips.push((up, lo, g_up.conj() * g_lo));
            trips.push((up, up, g_up.conj() * g_up));
        }
    }
    Ok(DiscreteOperator::new(Csr::from_triplets(n, n, &trips), true))
}

/// Discrete gradient: 3n x n stack of per-axis derivative matrices
/// (component-major: rows [k*n..(k+1)*n] hold d/dx_k).
pub fn build_grad(grid: &BoxGrid) -> DiscreteOperator<f64> {
    let n = grid.len();
    let mut trips = Vec::new();
    for axis in 0..3 {
        let dm = grid.derivative_matrix(axis);
        for r in 0..dm.nrows {
            for k in dm.row_ptr[r]..dm.row_ptr[r + 1] {
                trips.push((axis * n + r, dm.cols[k], dm.vals[k]));
            }
        }
    }
    DiscreteOperator::new(Csr::from_triplets(3 * n, n, &trips), false)
}

/// Discrete divergence: n x 3n, same per-axis derivatives as `build_grad`.
pub fn build_div(grid: &BoxGrid) -> DiscreteOperator<f64> {
    let n = grid.len();
    let mut trips = Vec::new();
    for axis in 0..3 {
        let dm = grid.derivative_matrix(axis);
        for r in 0..dm.nrows {
            for k in dm.row_ptr[r]..dm.row_ptr[r + 1] {
                trips.push((r, axis * n + dm.cols[k], dm.vals[k]));
            }
        }
    }
    DiscreteOperator::new(Csr::from_triplets(n, 3 * n, &trips), false)
}

/// Discrete curl: 3n x 3n from the same per-axis derivatives, so that
/// div(curl F) = 0 and curl(grad psi) = 0 hold exactly (per-axis shift
/// operators commute).
pub fn build_curl(grid: &BoxGrid) -> DiscreteOperator<f64> {
    let n = grid.len();
    let d = [grid.derivative_matrix(0), grid.derivative_matrix(1), grid.derivative_matrix(2)];
    let mut trips = Vec::new();
    // (curl F)_i = d_j F_k - d_k F_j, (i,j,k) cyclic
    for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
        let dj = &d[j];
        for r in 0..n {
            for p in dj.row_ptr[r]..dj.row_ptr[r + 1] {
                trips.push((i * n + r, k * n + dj.cols[p], dj.vals[p]));
            }
        }
        let dk = &d[k];
        for r in 0..n {
            for p in dk.row_ptr[r]..dk.row_ptr[r + 1] {
                trips.push((i * n + r, j * n + dk.cols[p], -dk.vals[p]));
            }
        }
    }
    DiscreteOperator::new(Csr::from_triplets(3 * n, 3 * n, &trips), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_1d_matches_textbook_stencil() {
        let g = BoxGrid::line_1d(0.0, 4.0, 4).unwrap(); // d = 1, 3 interior nodes
        let l = build_laplacian_real_dirichlet(&g);
        let dense = l.to_dense();
        let expect = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        for (a, b) in dense.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn region_tags_partition_omega1() {
        let omega = BoxGrid::cube(-0.5, 0.5, 4).unwrap();
        let omega1 = BoxGrid::cube(-1.5, 1.5, 12).unwrap().with_inner(&omega).unwrap();
        let mut counts = [0usize; 4];
        for i in 0..omega1.len() {
            counts[match omega1.tag(i) {
                RegionTag::InteriorOmega => 0,
                RegionTag::BoundaryOmega => 1,
                RegionTag::ShellOmega1 => 2,
                RegionTag::BoundaryOmega1 => 3,
            }] += 1;
        }
        assert_eq!(counts[0], 3 * 3 * 3);
        assert_eq!(counts[1], 5 * 5 * 5 - 27);
        assert_eq!(counts[3], 13usize.pow(3) - 11usize.pow(3));
        assert_eq!(counts.iter().sum::<usize>(), omega1.len());
    }

    #[test]
    fn nesting_requires_lattice_alignment() {
        let omega = BoxGrid::cube(-0.45, 0.55, 4).unwrap();
        let omega1 = BoxGrid::cube(-1.5, 1.5, 12).unwrap();
        assert!(omega1.with_inner(&omega).is_err());
    }
}
