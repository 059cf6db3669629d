//! Core algorithms for the Ginzburg-Landau free-energy solver and its
//! duality certificates.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure
//! computation on grid-indexed fields. IO, configuration and the command
//! line front-end live in the companion `glduality` crate.
//!
//! Module map:
//! - [`grid`]: uniform box grids and discrete differential operators
//! - [`field`]: grid-indexed field values, norms and model parameters
//! - [`energy`]: free-energy functionals and their discrete gradients
//! - [`mol`]: generalized method of lines for the linearized order-parameter
//!   equation
//! - [`magnetostatics`]: vector-potential solve under the London gauge
//! - [`outer`]: the fixed-point iteration coupling the two solvers
//! - [`duality`]: dual functionals, multiplier candidates and gap
//!   certificates
//! - [`dc`]: difference-of-convex conjugates and the Toland-style identity

#![no_std]

extern crate alloc;

use alloc::string::String;
use core::fmt;

pub mod dc;
pub mod duality;
pub mod energy;
pub mod field;
pub mod grid;
pub mod linalg;
pub mod magnetostatics;
pub mod mol;
pub mod outer;
pub mod rng;
pub mod scalar;
pub mod sparse;

pub use field::{ComplexScalarField, GLParams, RealScalarField, RealVectorField};
pub use grid::{BoxGrid, RegionTag};

/// Errors surfaced by solvers and assembly routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid has fewer than 3 intervals along some axis.
    GridTooSmall { n: usize },
    /// Axis spacings of one region differ beyond tolerance.
    NonUniformSpacing,
    /// Inner grid nodes do not coincide with outer grid nodes, or the inner
    /// box is not strictly inside the outer one.
    NotNested,
    /// Field length does not match the grid it is used with.
    ShapeMismatch { expected: usize, got: usize },
    /// A NaN or infinity appeared in an input field.
    NonFinite,
    /// Line recursion resolvent `2 - a_{n-1} + K d^2/gamma` not invertible.
    SingularResolvent { line: usize },
    /// Dense factorization hit a zero pivot.
    SingularSystem,
    /// Krylov solver failed to reach tolerance.
    SolverStall { residual: f64 },
    /// Pointwise guard `K - 2 v0* > 0` violated.
    GuardViolated { node: usize, value: f64 },
    /// A documented precondition of the operation does not hold.
    Precondition(String),
    /// Invalid model or solver parameter.
    InvalidParam(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GridTooSmall { n } => write!(f, "grid too small: {} intervals (need >= 3)", n),
            Error::NonUniformSpacing => write!(f, "grid spacing differs across axes"),
            Error::NotNested => write!(f, "grids are not nested"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "field length {} does not match grid size {}", got, expected)
            }
            Error::NonFinite => write!(f, "non-finite value in input field"),
            Error::SingularResolvent { line } => {
                write!(f, "singular line-recursion resolvent at line {}", line)
            }
            Error::SingularSystem => write!(f, "singular linear system"),
            Error::SolverStall { residual } => {
                write!(f, "linear solver stalled at residual {:e}", residual)
            }
            Error::GuardViolated { node, value } => {
                write!(f, "multiplier guard K - 2 v0* > 0 violated at node {} (value {:e})", node, value)
            }
            Error::Precondition(msg) => write!(f, "precondition not met: {}", msg),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {}", msg),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
