//! Small exact-integer helpers shared by the decision paths.

use num_integer::Roots;

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0, "isqrt of negative value");
    n.sqrt()
}

/// Exact perfect-square test; returns the root when `n` is a square.
pub fn perfect_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}
