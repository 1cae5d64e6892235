use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar.  `BigRational` keeps the invariants we need:
/// always reduced, denominator positive, canonical zero.
pub type Rat = BigRational;

/// Rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}
