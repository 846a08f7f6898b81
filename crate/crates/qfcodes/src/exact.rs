//! Exact rational evaluation for the closed-form count and multiplicity
//! formulas. Exponents of `q` can be negative for small `m`; results are
//! asserted integral and nonnegative only at the point of use.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub(crate) type Rat = BigRational;

pub(crate) fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `q^exp` with a possibly negative exponent.
pub(crate) fn qpow(q: u32, exp: i64) -> Rat {
    let base = BigInt::from(q);
    if exp >= 0 {
        Rat::from_integer(base.pow(exp as u32))
    } else {
        Rat::new(BigInt::one(), base.pow((-exp) as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ExactError {
    NotAnInteger(String),
    Negative(String),
    Overflow(String),
}

impl std::fmt::Display for ExactError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExactError::NotAnInteger(v) => write!(f, "formula value {} is not an integer", v),
            ExactError::Negative(v) => write!(f, "formula value {} is negative", v),
            ExactError::Overflow(v) => write!(f, "formula value {} exceeds u128", v),
        }
    }
}

/// Convert an exact rational to a count, demanding integrality and
/// nonnegativity.
pub(crate) fn to_count(r: &Rat) -> Result<u128, ExactError> {
    if !r.is_integer() {
        return Err(ExactError::NotAnInteger(r.to_string()));
    }
    if r.is_negative() {
        return Err(ExactError::Negative(r.to_string()));
    }
    r.to_integer()
        .to_u128()
        .ok_or_else(|| ExactError::Overflow(r.to_string()))
}
