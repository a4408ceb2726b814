//! Exact integer combinatorics.
//!
//! Binomials and multinomials are kept as big integers; conversion to `f64`
//! only happens once, in [`sqrt_ratio`], on the exact rational.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for t in 0..k {
        // acc = C(n, t) here, so the division is exact
        acc = acc * (n - t) / (t + 1);
    }
    acc
}

/// Binomial on signed arguments; zero whenever `n < 0`.
pub(crate) fn binom(n: i64, k: i64) -> BigUint {
    if n < 0 {
        BigUint::zero()
    } else {
        binomial(n as u64, k)
    }
}

/// Multinomial `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p as u64;
        acc *= binomial(total, p as i64);
    }
    acc
}

/// `sqrt(num / den)` evaluated from the exact rational. Returns zero for a
/// zero numerator and `None` for a zero denominator.
pub fn sqrt_ratio(num: &BigUint, den: &BigUint) -> Option<f64> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(0.0);
    }
    let q = BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()));
    q.to_f64().map(f64::sqrt)
}
