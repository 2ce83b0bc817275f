//! Scalar backends: exact rationals and complex floats.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::group::Q;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn scalar_zero() -> Self;
    fn scalar_one() -> Self;
    fn from_q(q: Q) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test for rationals, `|x| ≤ tol` for floats.
    fn negligible(&self, tol: f64) -> bool;

    fn close(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).negligible(tol)
    }
}

impl Scalar for Q {
    fn scalar_zero() -> Self {
        Zero::zero()
    }

    fn scalar_one() -> Self {
        num_traits::One::one()
    }

    fn from_q(q: Q) -> Self {
        q
    }

    fn conj(&self) -> Self {
        *self
    }

    fn negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for Complex64 {
    fn scalar_zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn scalar_one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_q(q: Q) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
}
