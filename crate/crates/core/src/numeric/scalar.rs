use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar algebra shared by plain reals and the dual-number types.
///
/// Expression evaluation, linear solves and every tensor assembly in the
/// engine are written against this trait, so the same code path yields
/// values, first derivatives or second derivatives depending on the
/// scalar bound at the inputs.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Lifts a constant; derivative parts are zero.
    fn constant(v: f64) -> Self;

    /// Primal value.
    fn value(&self) -> f64;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powi(&self, k: i32) -> Self;

    /// True when the value and every derivative part are finite.
    fn is_finite(&self) -> bool;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn one() -> Self {
        Self::constant(1.0)
    }

    fn scale(&self, c: f64) -> Self {
        self.clone() * Self::constant(c)
    }
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }

    fn value(&self) -> f64 {
        *self
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }

    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn powi(&self, k: i32) -> Self {
        f64::powi(*self, k)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn scale(&self, c: f64) -> Self {
        self * c
    }
}
