//! Dense state vectors and occupation vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};
use crate::C64;

/// Amplitudes of an `n`-site, `d`-level pure state in the computational basis.
///
/// The flat index of `|m_n ... m_1>` is `sum_i m_i d^(i-1)`: site 1 is the
/// least-significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    d: usize,
    amplitudes: Vec<C64>,
}

impl DenseState {
    pub fn new(n: usize, d: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if d < 2 {
            return Err(DickeError::domain(format!(
                "local dimension must be >= 2, got {d}"
            )));
        }
        let len = hilbert_dim(d, n)?;
        if amplitudes.len() != len {
            return Err(DickeError::DimensionMismatch {
                context: "dense state",
                expected: len,
                found: amplitudes.len(),
            });
        }
        Ok(Self { n, d, amplitudes })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        let len = hilbert_dim(d, n)?;
        Self::new(n, d, vec![C64::new(0.0, 0.0); len])
    }

    /// `|0...0>`.
    pub fn product_zero(n: usize, d: usize) -> Result<Self> {
        let mut s = Self::zeros(n, d)?;
        s.amplitudes[0] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Per-site digits `[m_1, ..., m_n]` of a flat index.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        index_digits(index, self.d, self.n)
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &m| acc * self.d + m)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Copy scaled to unit norm; the zero vector is a domain error.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(DickeError::domain("cannot normalize the zero vector"));
        }
        Ok(Self {
            n: self.n,
            d: self.d,
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest componentwise `|a - b|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// State with sites `a` and `b` (1-based) exchanged.
    pub fn swap_sites(&self, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > self.n || b > self.n {
            return Err(DickeError::domain(format!(
                "site out of range 1..={}: ({a}, {b})",
                self.n
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.len()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let mut digits = self.digits(idx);
            digits.swap(a - 1, b - 1);
            out[self.index_of(&digits)] = *amp;
        }
        Ok(Self {
            n: self.n,
            d: self.d,
            amplitudes: out,
        })
    }

    /// Tensor product `|high> (x) |low>`, with `low` on sites `1..=low.n`.
    pub fn kron(high: &Self, low: &Self) -> Result<Self> {
        if high.d != low.d {
            return Err(DickeError::DimensionMismatch {
                context: "tensor product local dimension",
                expected: high.d,
                found: low.d,
            });
        }
        let mut amplitudes = Vec::with_capacity(high.len() * low.len());
        for h in &high.amplitudes {
            amplitudes.extend(low.amplitudes.iter().map(|l| h * l));
        }
        Self::new(high.n + low.n, high.d, amplitudes)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(DickeError::DimensionMismatch {
                context: "local dimension",
                expected: self.d,
                found: other.d,
            });
        }
        if self.n != other.n {
            return Err(DickeError::DimensionMismatch {
                context: "site count",
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// `index,real,imag` rows for every basis index, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,real,imag\n");
        for (i, a) in self.amplitudes.iter().enumerate() {
            out.push_str(&format!("{i},{:?},{:?}\n", a.re, a.im));
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output. `n` is inferred from the row
    /// count; rows may come in any order but every index must appear once.
    pub fn from_csv(text: &str, d: usize) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "index,real,imag" => {}
            other => {
                return Err(DickeError::format(format!("bad CSV header: {other:?}")));
            }
        }
        let mut rows = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(DickeError::format(format!("expected 3 fields: {line:?}")));
            }
            let idx: usize = fields[0]
                .parse()
                .map_err(|e| DickeError::format(format!("index {:?}: {e}", fields[0])))?;
            let re: f64 = fields[1]
                .parse()
                .map_err(|e| DickeError::format(format!("real {:?}: {e}", fields[1])))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|e| DickeError::format(format!("imag {:?}: {e}", fields[2])))?;
            rows.push((idx, C64::new(re, im)));
        }
        let n = exact_log(rows.len(), d)
            .ok_or_else(|| DickeError::format(format!("{} rows is not a power of {d}", rows.len())))?;
        let mut amplitudes = vec![None; rows.len()];
        for (idx, amp) in rows {
            match amplitudes.get_mut(idx) {
                Some(slot @ None) => *slot = Some(amp),
                Some(Some(_)) => return Err(DickeError::format(format!("duplicate index {idx}"))),
                None => return Err(DickeError::format(format!("index {idx} out of range"))),
            }
        }
        let amplitudes = amplitudes.into_iter().map(|a| a.unwrap()).collect();
        Self::new(n, d, amplitudes)
    }

    pub fn to_json(&self) -> Result<String> {
        let repr = DenseStateRepr {
            n: self.n,
            d: self.d,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        };
        Ok(serde_json::to_string(&repr)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: DenseStateRepr = serde_json::from_str(text)?;
        Self::new(
            repr.n,
            repr.d,
            repr.amplitudes
                .into_iter()
                .map(|[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DenseStateRepr {
    n: usize,
    d: usize,
    amplitudes: Vec<[f64; 2]>,
}

/// `d^n`, rejecting sizes that overflow `usize`.
pub(crate) fn hilbert_dim(d: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or_else(|| DickeError::domain(format!("{d}^{n} basis states overflow")))
}

pub(crate) fn index_digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        digits.push(index % d);
        index /= d;
    }
    digits
}

fn exact_log(len: usize, d: usize) -> Option<usize> {
    if d < 2 || len == 0 {
        return None;
    }
    let (mut n, mut p) = (0, 1usize);
    while p < len {
        p = p.checked_mul(d)?;
        n += 1;
    }
    (p == len).then_some(n)
}

/// Occupation numbers `(k_0, ..., k_{d-1})`, one per level.
///
/// Used both for full qudit Dicke sectors (components sum to `n`) and for
/// partial sectors `a` with `0 <= a_i <= k_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OccupationVector(Vec<usize>);

impl OccupationVector {
    pub fn new(components: Vec<usize>) -> Self {
        Self(components)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// Unit vector with `(m_hat)_i = delta_{m,i}`.
    pub fn unit(d: usize, m: usize) -> Self {
        let mut v = vec![0; d];
        v[m] = 1;
        Self(v)
    }

    /// Digit histogram of a basis string.
    pub fn histogram(digits: &[usize], d: usize) -> Self {
        let mut v = vec![0; d];
        for &m in digits {
            v[m] += 1;
        }
        Self(v)
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    /// Number of levels `d`.
    pub fn levels(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Componentwise `self <= bound`.
    pub fn fits_within(&self, bound: &Self) -> bool {
        self.0.len() == bound.0.len() && self.0.iter().zip(&bound.0).all(|(a, k)| a <= k)
    }

    /// `self - other`, or `None` if any component would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// `self + m_hat`.
    pub fn plus_unit(&self, m: usize) -> Self {
        let mut v = self.0.clone();
        v[m] += 1;
        Self(v)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for OccupationVector {
    type Err = DickeError;

    /// Comma-separated occupations, e.g. `2,1,1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| DickeError::domain(format!("occupation {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.len() < 2 {
            return Err(DickeError::domain(format!(
                "occupation vector needs at least 2 levels, got {}",
                parts.len()
            )));
        }
        Ok(Self(parts))
    }
}
