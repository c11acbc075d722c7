//! Scalar abstractions.
//!
//! [`Scalar`] is the minimal field interface needed by the purely
//! combinatorial parts of the crate (hidden states, observable operator
//! models). It is implemented for `f32`, `f64` and exact rationals, so
//! worked examples can be reproduced without rounding.
//!
//! [`Real`] adds everything the dense complex linear algebra needs
//! (square roots, trigonometry, machine epsilon) and is implemented for
//! `f32` and `f64` only.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Ratio;
use std::ops::Neg;

use num_traits::{Float, FloatConst, Num, ToPrimitive};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

pub trait Scalar:
    Num + Neg<Output = Self> + PartialOrd + Copy + Debug + Display + Send + Sync + 'static
{
    /// Builds `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts a double, approximating when the type is exact.
    fn approx_from_f64(x: f64) -> Option<Self>;

    fn as_f64(self) -> f64;

    /// Converts a floating-point slack to this type, floored at `64·ε` for
    /// floats. Exact types use zero.
    fn tolerance(tol: f64) -> Self;

    fn magnitude(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn sum_iter<I: IntoIterator<Item = Self>>(it: I) -> Self {
        it.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $f / den as $f
            }
            fn approx_from_f64(x: f64) -> Option<Self> {
                Some(x as $f)
            }
            fn as_f64(self) -> f64 {
                self as f64
            }
            fn tolerance(tol: f64) -> Self {
                (tol as $f).max(<$f>::EPSILON * 64.0)
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn approx_from_f64(x: f64) -> Option<Self> {
        Ratio::approximate_float(x)
    }
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
    fn tolerance(_tol: f64) -> Self {
        Ratio::from_integer(0)
    }
}

/// Floating-point scalar for the Hermitian and superoperator algebra.
pub trait Real: Scalar + Float + FloatConst + Sum + Default {
    fn lit(x: f64) -> Self {
        Self::approx_from_f64(x).expect("float conversion is total")
    }
}

impl Real for f32 {}
impl Real for f64 {}
