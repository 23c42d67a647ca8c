//! Exact rational arithmetic for actions, capacities, and pipeline
//! parameters.
//!
//! `Rational` is an arbitrary-precision fraction that is always stored
//! reduced with a positive denominator and is totally ordered by
//! cross-multiplication. Parsing accepts `p/q` or a plain integer and
//! rejects anything else (in particular decimal notation), which keeps every
//! threshold comparison exact.

use alloc::string::ToString;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{EchError, Result};

pub type Rational = num_rational::BigRational;

/// Rational from an integer pair; `den` must be nonzero.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parse `p/q` or a plain integer, with an error message that points at the
/// accepted syntax (floats are deliberately not accepted).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    Rational::from_str(trimmed).map_err(|_| {
        EchError::Parse(
            [
                "`",
                trimmed,
                "` is not an exact rational; write it as `p/q` or an integer",
            ]
            .concat(),
        )
    })
}

/// Floor of a nonnegative rational as an `i64`.
///
/// Panics if the value is negative or does not fit; callers only floor
/// desk-scale search bounds.
pub fn floor_to_i64(r: &Rational) -> i64 {
    assert!(!r.is_negative(), "floor_to_i64 on negative rational");
    let f = r.floor();
    let (num, den) = (f.numer(), f.denom());
    debug_assert!(den.is_one());
    num.to_string().parse().expect("bound exceeds i64 range")
}

/// `value` compared with zero.
pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

/// Zero.
pub fn zero() -> Rational {
    Rational::zero()
}
