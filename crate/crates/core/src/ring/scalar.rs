use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::Rat;

/// Commutative ring with exact arithmetic.  Everything the exterior algebra,
/// matrix and Lie-algebra layers touch is generic over this, so one wedge and
/// one determinant routine serve rational, Q(sqrt 3) and polynomial scalars.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Embed a rational constant.
    fn from_rat(r: &Rat) -> Self;

    /// Embed a small integer.
    fn from_int(n: i64) -> Self {
        Self::from_rat(&super::rat::rat_int(n))
    }

    /// Exact quotient, `None` if `rhs` is zero or does not divide exactly.
    /// Fraction-free elimination relies on this being exact in the ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

/// Ordered field on top of [`Scalar`]: inverses plus an exact sign.
/// Implemented by the rationals and by Q(sqrt 3) with its real embedding.
pub trait ScalarField: Scalar {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Exact sign under the real embedding: -1, 0 or 1.
    fn signum(&self) -> i8;
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl ScalarField for Rat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn signum(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}
