use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Marker trait for the coefficient fields the containers are generic over.
///
/// Satisfied by `f64`, `BigRational`, `Complex<BigRational>` and the exact
/// tower [`crate::Scalar`]. Equality must be exact (canonical forms) for the
/// exact instantiations; `f64` only flows into the spectrum path where no
/// equality decisions are made.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Integer power with field inverse for negative exponents.
    fn powi(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let mut base = Self::one();
        let mut m = n.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base.clone();
            m >>= 1;
        }
        if n < 0 {
            -acc
        } else {
            acc
        }
    }
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}
