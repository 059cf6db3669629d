//! Scalar abstraction so operators and solvers work over `f64` and
//! `Complex<f64>` with one implementation.

use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub use num_complex::Complex64;

pub trait Scalar:
    Copy
    + PartialEq
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
{
    const ZERO: Self;
    const ONE: Self;

    fn from_re(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    /// Squared modulus.
    fn abs2(self) -> f64;
    fn abs(self) -> f64;
    fn is_finite_s(self) -> bool;
    /// Multiply by a real factor.
    fn scale(self, x: f64) -> Self;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    fn from_re(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn is_finite_s(self) -> bool {
        self.is_finite()
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);

    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    fn abs(self) -> f64 {
        libm::sqrt(self.abs2())
    }
    fn is_finite_s(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn scale(self, x: f64) -> Self {
        Complex64::new(self.re * x, self.im * x)
    }
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
