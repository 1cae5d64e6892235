use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat_int, Rat};
use super::scalar::{Scalar, ScalarField};

/// Element of the quadratic extension Q(sqrt 3), stored as `a + b*sqrt(3)`.
/// Used only where a fixture demands irrational coefficients (the section-3
/// basis change); the rest of the crate stays over Q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quad {
    pub a: Rat,
    pub b: Rat,
}

impl Quad {
    pub fn new(a: Rat, b: Rat) -> Self {
        Quad { a, b }
    }

    pub fn from_parts(a: Rat, b: Rat) -> Self {
        Quad { a, b }
    }

    /// The element sqrt(3).
    pub fn sqrt3() -> Self {
        Quad { a: rat_int(0), b: rat_int(1) }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Field norm a^2 - 3 b^2; zero only for the zero element.
    fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(3) * &self.b * &self.b
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coeff = |r: &Rat| -> String {
            if r == &rat_int(1) {
                "s3".to_string()
            } else if r == &rat_int(-1) {
                "-s3".to_string()
            } else {
                format!("{}*s3", r)
            }
        };
        if self.a.is_zero() {
            write!(f, "{}", coeff(&self.b))
        } else if self.b.is_positive() {
            write!(f, "{}+{}", self.a, coeff(&self.b))
        } else {
            write!(f, "{}{}", self.a, coeff(&self.b))
        }
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        Quad { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        Quad { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad { a: -self.a, b: -self.b }
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        // (a + b s)(c + d s) = ac + 3bd + (ad + bc) s  with s^2 = 3
        let a = &self.a * &rhs.a + rat_int(3) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Quad { a, b }
    }
}

impl Zero for Quad {
    fn zero() -> Self {
        Quad { a: rat_int(0), b: rat_int(0) }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Quad {
    fn one() -> Self {
        Quad { a: rat_int(1), b: rat_int(0) }
    }
}

impl Scalar for Quad {
    fn from_rat(r: &Rat) -> Self {
        Quad { a: r.clone(), b: rat_int(0) }
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.clone() * i)
    }
}

impl ScalarField for Quad {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(a + b s) = (a - b s)/(a^2 - 3 b^2)
        let n = self.norm();
        debug_assert!(!n.is_zero(), "norm of nonzero element vanished");
        Some(Quad { a: &self.a / &n, b: -(&self.b / &n) })
    }

    fn signum(&self) -> i8 {
        // Sign of a + b*sqrt(3) under the embedding sqrt(3) > 0.
        if self.is_zero() {
            return 0;
        }
        let sa = if self.a.is_zero() { 0 } else if self.a.is_positive() { 1 } else { -1 };
        let sb = if self.b.is_zero() { 0 } else if self.b.is_positive() { 1 } else { -1 };
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare |a| with |b| sqrt(3) via squares.
        let a2 = &self.a * &self.a;
        let b2 = rat_int(3) * &self.b * &self.b;
        match a2.cmp(&b2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => unreachable!("sqrt(3) is irrational"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn q(a: (i64, i64), b: (i64, i64)) -> Quad {
        Quad::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn field_ops_round_trip() {
        let x = q((2, 3), (-1, 5));
        let y = x.inv().unwrap();
        assert_eq!(x * y, Quad::one());
    }

    #[test]
    fn sqrt3_squares_to_three() {
        let s = Quad::sqrt3();
        assert_eq!(s.clone() * s, Quad::from_rat(&rat(3, 1)));
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 2 - sqrt(3) > 0, 3 - 2 sqrt(3) < 0
        assert_eq!(q((2, 1), (-1, 1)).signum(), 1);
        assert_eq!(q((3, 1), (-2, 1)).signum(), -1);
        assert_eq!(q((-2, 1), (1, 1)).signum(), -1);
        assert_eq!(Quad::zero().signum(), 0);
    }
}
