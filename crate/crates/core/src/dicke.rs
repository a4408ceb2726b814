//! Closed-form Dicke states and their Schmidt coefficients.
//!
//! Three families are covered:
//!
//! - qubit Dicke states `|D^n_k>`, uniform over weight-`k` bit strings;
//! - spin-s Dicke states `|D^(s)_{n,k}>`, proportional to `(S^-)^k |0...0>`
//!   for `n` spin-s sites (local dimension `2s + 1`);
//! - qudit Dicke states `|D^n(k)>`, uniform over strings with digit
//!   histogram `k`.
//!
//! Spin is carried as the integer `two_s = 2s` throughout.

use num_bigint::BigUint;
use num_traits::One;

use crate::combinatorics::{binom, multinomial, sqrt_ratio};
use crate::error::{DickeError, Result};
use crate::state::{hilbert_dim, index_digits, DenseState, OccupationVector};
use crate::C64;

/// Label of one factor in a Schmidt decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectorLabel {
    /// Number of excitations `j` (qubit and spin families).
    Excitations(usize),
    /// Partial occupation vector (qudit family).
    Occupations(OccupationVector),
}

/// One term of a Schmidt decomposition across a cut.
///
/// `left` labels the factor on the `n - cut` high sites, `right` the factor on
/// sites `1..=cut`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtCoefficient {
    pub value: f64,
    pub left: SectorLabel,
    pub right: SectorLabel,
}

/// `c^{nk}_{ij} = sqrt(C(i,j) C(n-i,k-j) / C(n,k))`: Schmidt weight of
/// `|D^{n-i}_{k-j}> |D^i_j>`. Zero outside `max(0,k-n+i) <= j <= min(k,i)`.
pub fn hypergeom_coeff(n: usize, k: usize, i: usize, j: usize) -> Result<f64> {
    if k > n || i > n {
        return Err(DickeError::domain(format!(
            "hypergeometric coefficient needs k <= n and i <= n, got n={n} k={k} i={i}"
        )));
    }
    let (n, k, i, j) = (n as i64, k as i64, i as i64, j as i64);
    let num = binom(i, j) * binom(n - i, k - j);
    Ok(sqrt_ratio(&num, &binom(n, k)).expect("C(n,k) > 0 for k <= n"))
}

/// Spin-s analogue `sqrt(C(2si,j) C(2s(n-i),k-j) / C(2sn,k))`.
pub fn spin_hypergeom_coeff(n: usize, k: usize, two_s: usize, i: usize, j: usize) -> Result<f64> {
    check_spin(n, k, two_s)?;
    if i > n {
        return Err(DickeError::domain(format!("cut {i} exceeds n={n}")));
    }
    let (n, k, ts, i, j) = (n as i64, k as i64, two_s as i64, i as i64, j as i64);
    let num = binom(ts * i, j) * binom(ts * (n - i), k - j);
    Ok(sqrt_ratio(&num, &binom(ts * n, k)).expect("C(2sn,k) > 0 for k <= 2sn"))
}

/// Qudit Schmidt weight
/// `sqrt(multi(l, a) multi(n-l, k-a) / multi(n, k))` of
/// `|D^{n-l}(k - a)> |D^l(a)>`. Zero when `a` does not fit inside `k`.
///
/// `l = 0` is accepted (the weight is then 1 for `a = 0`), which the
/// coefficient-ratio form of the qudit site tensors needs.
pub fn qudit_schmidt_coeff(
    n: usize,
    kvec: &OccupationVector,
    l: usize,
    avec: &OccupationVector,
) -> Result<f64> {
    check_qudit(n, kvec)?;
    if l > n {
        return Err(DickeError::domain(format!("cut {l} exceeds n={n}")));
    }
    if avec.levels() != kvec.levels() {
        return Err(DickeError::DimensionMismatch {
            context: "occupation vector levels",
            expected: kvec.levels(),
            found: avec.levels(),
        });
    }
    if avec.total() != l {
        return Err(DickeError::domain(format!(
            "partial occupation {avec} sums to {}, expected l={l}",
            avec.total()
        )));
    }
    let Some(rest) = kvec.checked_sub(avec) else {
        return Ok(0.0);
    };
    let num = multinomial(avec.components()) * multinomial(rest.components());
    Ok(sqrt_ratio(&num, &multinomial(kvec.components())).expect("multinomial > 0"))
}

/// All non-zero Schmidt terms of `|D^n_k>` across the cut after site `i`.
pub fn qubit_schmidt_coefficients(n: usize, k: usize, i: usize) -> Result<Vec<SchmidtCoefficient>> {
    let lo = k.saturating_sub(n.saturating_sub(i));
    let hi = k.min(i);
    (lo..=hi)
        .map(|j| {
            Ok(SchmidtCoefficient {
                value: hypergeom_coeff(n, k, i, j)?,
                left: SectorLabel::Excitations(k - j),
                right: SectorLabel::Excitations(j),
            })
        })
        .collect()
}

/// All non-zero Schmidt terms of the spin-s Dicke state across cut `i`.
pub fn spin_schmidt_coefficients(
    n: usize,
    k: usize,
    two_s: usize,
    i: usize,
) -> Result<Vec<SchmidtCoefficient>> {
    check_spin(n, k, two_s)?;
    let lo = k.saturating_sub(two_s * n.saturating_sub(i));
    let hi = k.min(two_s * i);
    (lo..=hi)
        .map(|j| {
            Ok(SchmidtCoefficient {
                value: spin_hypergeom_coeff(n, k, two_s, i, j)?,
                left: SectorLabel::Excitations(k - j),
                right: SectorLabel::Excitations(j),
            })
        })
        .collect()
}

/// All Schmidt terms of `|D^n(k)>` across cut `l`, one per `a` in `A^l(k)`,
/// in lexicographic order of `a`.
pub fn qudit_schmidt_coefficients(
    n: usize,
    kvec: &OccupationVector,
    l: usize,
) -> Result<Vec<SchmidtCoefficient>> {
    check_qudit(n, kvec)?;
    bounded_compositions(kvec, l)
        .into_iter()
        .map(|a| {
            let value = qudit_schmidt_coeff(n, kvec, l, &a)?;
            let rest = kvec.checked_sub(&a).expect("a fits within k");
            Ok(SchmidtCoefficient {
                value,
                left: SectorLabel::Occupations(rest),
                right: SectorLabel::Occupations(a),
            })
        })
        .collect()
}

/// Lexicographically ordered `a` with `0 <= a_i <= k_i` and `sum a = l`.
pub(crate) fn bounded_compositions(kvec: &OccupationVector, l: usize) -> Vec<OccupationVector> {
    fn go(bounds: &[usize], remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<OccupationVector>) {
        let Some((&first, rest)) = bounds.split_first() else {
            if remaining == 0 {
                out.push(OccupationVector::new(prefix.clone()));
            }
            return;
        };
        let capacity: usize = rest.iter().sum();
        let lo = remaining.saturating_sub(capacity);
        for a in lo..=first.min(remaining) {
            prefix.push(a);
            go(rest, remaining - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(kvec.components(), l, &mut Vec::new(), &mut out);
    out
}

/// `|D^n_k>` as a dense vector. Any `0 <= k <= n` is accepted.
pub fn dicke_state(n: usize, k: usize) -> Result<DenseState> {
    if n == 0 {
        return Err(DickeError::domain("Dicke state needs n >= 1"));
    }
    if k > n {
        return Err(DickeError::domain(format!(
            "Dicke state needs k <= n, got n={n} k={k}"
        )));
    }
    let len = hilbert_dim(2, n)?;
    let amp = sqrt_ratio(&BigUint::one(), &binom(n as i64, k as i64)).expect("C(n,k) > 0");
    let amplitudes = (0..len)
        .map(|idx| {
            if idx.count_ones() as usize == k {
                C64::new(amp, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    DenseState::new(n, 2, amplitudes)
}

/// Spin-s Dicke state from the multivariate hypergeometric closed form:
/// amplitude `sqrt(prod_i C(2s, m_i) / C(2sn, k))` on every string with
/// digit sum `k`.
pub fn spin_dicke_state(n: usize, k: usize, two_s: usize) -> Result<DenseState> {
    check_spin(n, k, two_s)?;
    if n == 0 {
        return Err(DickeError::domain("spin Dicke state needs n >= 1"));
    }
    let d = two_s + 1;
    let len = hilbert_dim(d, n)?;
    let den = binom((two_s * n) as i64, k as i64);
    let amplitudes = (0..len)
        .map(|idx| {
            let digits = index_digits(idx, d, n);
            if digits.iter().sum::<usize>() != k {
                return C64::new(0.0, 0.0);
            }
            let num = digits
                .iter()
                .fold(BigUint::one(), |acc, &m| acc * binom(two_s as i64, m as i64));
            C64::new(sqrt_ratio(&num, &den).expect("C(2sn,k) > 0"), 0.0)
        })
        .collect();
    DenseState::new(n, d, amplitudes)
}

/// Independent construction of the spin-s Dicke state: apply the total
/// lowering operator `k` times to `|0...0>` and normalize.
///
/// Level `m` of a site is the `S^z = s - m` eigenstate, so
/// `S^- |m> = sqrt((m+1)(2s-m)) |m+1>`.
pub fn spin_lowering_oracle(n: usize, k: usize, two_s: usize) -> Result<DenseState> {
    if two_s == 0 {
        return Err(DickeError::domain("two_s must be >= 1"));
    }
    if n == 0 {
        return Err(DickeError::domain("spin Dicke state needs n >= 1"));
    }
    let d = two_s + 1;
    let len = hilbert_dim(d, n)?;
    let mut v = vec![0.0f64; len];
    v[0] = 1.0;
    for _ in 0..k {
        let mut next = vec![0.0f64; len];
        for (idx, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let mut stride = 1;
            let mut rest = idx;
            for _ in 0..n {
                let m = rest % d;
                rest /= d;
                if m < two_s {
                    next[idx + stride] += x * (((m + 1) * (two_s - m)) as f64).sqrt();
                }
                stride *= d;
            }
        }
        v = next;
    }
    let state = DenseState::new(n, d, v.into_iter().map(|x| C64::new(x, 0.0)).collect())?;
    state
        .normalized()
        .map_err(|_| DickeError::domain(format!("(S^-)^{k} annihilates |0...0> for n={n}, 2s={two_s}")))
}

/// `|D^n(k)>`: amplitude `1/sqrt(multi(n, k))` on every string whose digit
/// histogram equals `k`.
pub fn qudit_dicke_state(n: usize, kvec: &OccupationVector) -> Result<DenseState> {
    check_qudit(n, kvec)?;
    if n == 0 {
        return Err(DickeError::domain("qudit Dicke state needs n >= 1"));
    }
    let d = kvec.levels();
    let len = hilbert_dim(d, n)?;
    let amp = sqrt_ratio(&BigUint::one(), &multinomial(kvec.components())).expect("multinomial > 0");
    let amplitudes = (0..len)
        .map(|idx| {
            let digits = index_digits(idx, d, n);
            if OccupationVector::histogram(&digits, d) == *kvec {
                C64::new(amp, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    DenseState::new(n, d, amplitudes)
}

pub(crate) fn check_spin(n: usize, k: usize, two_s: usize) -> Result<()> {
    if two_s == 0 {
        return Err(DickeError::domain("two_s must be >= 1"));
    }
    if k > two_s * n {
        return Err(DickeError::domain(format!(
            "spin Dicke state needs k <= 2sn, got n={n} k={k} 2s={two_s}"
        )));
    }
    Ok(())
}

pub(crate) fn check_qudit(n: usize, kvec: &OccupationVector) -> Result<()> {
    if kvec.levels() < 2 {
        return Err(DickeError::domain("occupation vector needs at least 2 levels"));
    }
    if kvec.total() != n {
        return Err(DickeError::domain(format!(
            "occupation vector {kvec} sums to {}, expected n={n}",
            kvec.total()
        )));
    }
    Ok(())
}
