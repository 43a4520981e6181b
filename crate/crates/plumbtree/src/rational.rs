//! Exact rational numbers and the projective extension used by
//! negative continued fractions.

use std::fmt;

use num::{BigInt, BigRational, Signed, Zero};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Build a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Build a rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Format a rational as `p/q`, or plain `p` when the denominator is 1.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational extended by a single unsigned infinity.
///
/// Infinity only ever arises while evaluating negative continued
/// fractions, where `1/0 = inf` and `a - 1/inf = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    pub fn from_int(n: i64) -> Self {
        ExtendedRational::Finite(rat(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::Infinity => None,
        }
    }

    /// The finite value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            ExtendedRational::Finite(r) if r.is_integer() => Some(r.numer().clone()),
            _ => None,
        }
    }

    /// One right-to-left continued-fraction step: `a - 1/self`.
    ///
    /// Total by the projective conventions: `a - 1/inf = a` and
    /// `a - 1/0 = inf`.
    pub fn ncf_step(&self, a: &Rational) -> ExtendedRational {
        match self {
            ExtendedRational::Infinity => ExtendedRational::Finite(a.clone()),
            ExtendedRational::Finite(x) if x.is_zero() => ExtendedRational::Infinity,
            ExtendedRational::Finite(x) => ExtendedRational::Finite(a - x.recip()),
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) => write!(f, "{}", fmt_rational(r)),
            ExtendedRational::Infinity => write!(f, "inf"),
        }
    }
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign_of(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Least common multiple of two positive integers.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let g = num::integer::gcd(a.clone(), b.clone());
    (a / &g) * b
}
