//! Exact site tensors for Dicke-state MPS, contraction and canonicity checks.
//!
//! An open-boundary MPS stores, for every site `i = 1..=n`, `d` matrices
//! `A_i^m` of size `chi x chi`, plus boundary vectors `<L|` and `|R>`. The
//! amplitude of `|m_n ... m_1>` is `<L| A_n^{m_n} ... A_1^{m_1} |R>`.
//!
//! Qubit and spin chains have `chi = k + 1`, `<L| = <k|`, `|R> = |0>`, and each
//! `A_i^m` only has entries `(j + m, j)`. Qudit chains have
//! `chi = D^{floor(n/2)}(k)`, both boundaries `|0>`, and at most one non-zero
//! per column.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, multinomial, sqrt_ratio};
use crate::dicke::{bounded_compositions, check_qudit, check_spin};
use crate::error::{DickeError, Result};
use crate::state::{hilbert_dim, DenseState, OccupationVector};
use crate::C64;

/// Open-boundary matrix product state.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsChain {
    n: usize,
    d: usize,
    chi: usize,
    sites: Vec<Vec<DMatrix<C64>>>,
    left: DVector<C64>,
    right: DVector<C64>,
}

impl MpsChain {
    /// Validates shapes: `n` sites of `d` square `chi x chi` matrices and
    /// boundaries of length `chi`.
    pub fn new(sites: Vec<Vec<DMatrix<C64>>>, left: DVector<C64>, right: DVector<C64>) -> Result<Self> {
        let n = sites.len();
        if n == 0 {
            return Err(DickeError::domain("MPS needs at least one site"));
        }
        let d = sites[0].len();
        if d < 2 {
            return Err(DickeError::domain(format!(
                "local dimension must be >= 2, got {d}"
            )));
        }
        let chi = left.len();
        if chi == 0 {
            return Err(DickeError::domain("bond dimension must be >= 1"));
        }
        if right.len() != chi {
            return Err(DickeError::DimensionMismatch {
                context: "right boundary",
                expected: chi,
                found: right.len(),
            });
        }
        for site in &sites {
            if site.len() != d {
                return Err(DickeError::DimensionMismatch {
                    context: "matrices per site",
                    expected: d,
                    found: site.len(),
                });
            }
            for a in site {
                if a.nrows() != chi || a.ncols() != chi {
                    return Err(DickeError::DimensionMismatch {
                        context: "site matrix",
                        expected: chi,
                        found: if a.nrows() != chi { a.nrows() } else { a.ncols() },
                    });
                }
            }
        }
        Ok(Self {
            n,
            d,
            chi,
            sites,
            left,
            right,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    /// The `d` matrices `A_i^m` of site `i` (1-based).
    pub fn site(&self, i: usize) -> &[DMatrix<C64>] {
        &self.sites[i - 1]
    }

    pub fn left(&self) -> &DVector<C64> {
        &self.left
    }

    pub fn right(&self) -> &DVector<C64> {
        &self.right
    }

    pub fn to_json(&self) -> Result<String> {
        let pair = |z: &C64| [z.re, z.im];
        let repr = MpsRepr {
            n: self.n,
            d: self.d,
            chi: self.chi,
            left: self.left.iter().map(pair).collect(),
            right: self.right.iter().map(pair).collect(),
            sites: self
                .sites
                .iter()
                .map(|site| {
                    site.iter()
                        .map(|a| {
                            (0..a.nrows())
                                .map(|r| (0..a.ncols()).map(|c| pair(&a[(r, c)])).collect())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        };
        Ok(serde_json::to_string(&repr)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: MpsRepr = serde_json::from_str(text)?;
        let vector = |v: Vec<[f64; 2]>| {
            DVector::from_iterator(v.len(), v.into_iter().map(|[re, im]| C64::new(re, im)))
        };
        let chi = repr.chi;
        let mut sites = Vec::with_capacity(repr.sites.len());
        for site in repr.sites {
            let mut mats = Vec::with_capacity(site.len());
            for rows in site {
                if rows.len() != chi || rows.iter().any(|r| r.len() != chi) {
                    return Err(DickeError::format(format!("site matrix is not {chi}x{chi}")));
                }
                mats.push(DMatrix::from_fn(chi, chi, |r, c| {
                    let [re, im] = rows[r][c];
                    C64::new(re, im)
                }));
            }
            sites.push(mats);
        }
        let chain = Self::new(sites, vector(repr.left), vector(repr.right))?;
        if chain.n != repr.n || chain.d != repr.d || chain.chi != chi {
            return Err(DickeError::format("header fields disagree with tensor shapes"));
        }
        Ok(chain)
    }
}

#[derive(Serialize, Deserialize)]
struct MpsRepr {
    n: usize,
    d: usize,
    chi: usize,
    left: Vec<[f64; 2]>,
    right: Vec<[f64; 2]>,
    /// `sites[i][m]` is `A_{i+1}^m` as rows of `[re, im]` pairs.
    sites: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

/// Partial occupation vectors of a qudit Dicke state, grouped by the number
/// of sites `l` they cover and labelled `0, 1, ...` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorLabeling {
    kvec: OccupationVector,
    sectors: Vec<Vec<OccupationVector>>,
}

impl SectorLabeling {
    pub fn kvec(&self) -> &OccupationVector {
        &self.kvec
    }

    pub fn n(&self) -> usize {
        self.sectors.len() - 1
    }

    /// Members of `A^l(k)` in label order.
    pub fn sectors(&self, l: usize) -> &[OccupationVector] {
        &self.sectors[l]
    }

    /// `D^l(k) = |A^l(k)|`.
    pub fn cardinality(&self, l: usize) -> usize {
        self.sectors[l].len()
    }

    /// Label `j^l(a)`, or `None` if `a` is not in `A^l(k)`.
    pub fn label(&self, l: usize, a: &OccupationVector) -> Option<usize> {
        self.sectors.get(l)?.binary_search(a).ok()
    }

    /// Bond dimension `max_l D^l(k)`, attained at `l = floor(n/2)`.
    pub fn chi(&self) -> usize {
        self.sectors.iter().map(Vec::len).max().unwrap_or(1)
    }
}

/// Enumerates `A^l(k)` for `l = 0..=n`.
pub fn enumerate_sectors(n: usize, kvec: &OccupationVector) -> Result<SectorLabeling> {
    check_qudit(n, kvec)?;
    let sectors = (0..=n).map(|l| bounded_compositions(kvec, l)).collect();
    Ok(SectorLabeling {
        kvec: kvec.clone(),
        sectors,
    })
}

/// Qubit tensor element `gamma^{(i)}_{j,m} = sqrt(C(n-i, k-j-m) / C(n-i+1, k-j))`,
/// zero when `k - j > n - i + 1`.
pub fn gamma_qubit(n: usize, k: usize, i: usize, j: usize, m: usize) -> Result<f64> {
    if m > 1 {
        return Err(DickeError::domain(format!(
            "qubit level m must be 0 or 1, got {m}"
        )));
    }
    if j > k {
        return Err(DickeError::domain(format!("bond index j={j} exceeds k={k}")));
    }
    if i == 0 || i > n {
        return Err(DickeError::domain(format!("site i={i} outside 1..={n}")));
    }
    let (n, k, i, j, m) = (n as i64, k as i64, i as i64, j as i64, m as i64);
    if k - j > n - i + 1 {
        return Ok(0.0);
    }
    Ok(sqrt_ratio(&binom(n - i, k - j - m), &binom(n - i + 1, k - j)).expect("non-zero denominator"))
}

/// Spin-s tensor element
/// `sqrt(C(2s, m) C(2s(n-i), k-j-m) / C(2s(n-i+1), k-j))`, zero when the
/// denominator vanishes.
pub fn gamma_spin(n: usize, k: usize, two_s: usize, i: usize, j: usize, m: usize) -> Result<f64> {
    if two_s == 0 {
        return Err(DickeError::domain("two_s must be >= 1"));
    }
    if m > two_s {
        return Err(DickeError::domain(format!("level m={m} exceeds 2s={two_s}")));
    }
    if j > k {
        return Err(DickeError::domain(format!("bond index j={j} exceeds k={k}")));
    }
    if i == 0 || i > n {
        return Err(DickeError::domain(format!("site i={i} outside 1..={n}")));
    }
    let (n, k, ts, i, j, m) = (n as i64, k as i64, two_s as i64, i as i64, j as i64, m as i64);
    let den = binom(ts * (n - i + 1), k - j);
    let num = binom(ts, m) * binom(ts * (n - i), k - j - m);
    Ok(sqrt_ratio(&num, &den).unwrap_or(0.0))
}

/// Qudit tensor element for `a in A^{l-1}(k)` and level `m`:
/// `sqrt(multi(n-l, k-a-m_hat) / multi(n-l+1, k-a))`, which reduces to
/// `sqrt((k_m - a_m) / (n - l + 1))`. Zero when `a_m = k_m`.
pub fn gamma_qudit(
    n: usize,
    kvec: &OccupationVector,
    l: usize,
    avec: &OccupationVector,
    m: usize,
) -> Result<f64> {
    check_qudit(n, kvec)?;
    if l == 0 || l > n {
        return Err(DickeError::domain(format!("site l={l} outside 1..={n}")));
    }
    if m >= kvec.levels() {
        return Err(DickeError::domain(format!(
            "level m={m} outside 0..{}",
            kvec.levels()
        )));
    }
    if !avec.fits_within(kvec) || avec.total() != l - 1 {
        return Err(DickeError::domain(format!(
            "{avec} is not in A^{}({kvec})",
            l - 1
        )));
    }
    let rest = kvec.checked_sub(avec).expect("a fits within k");
    if rest.components()[m] == 0 {
        return Ok(0.0);
    }
    let next = kvec.checked_sub(&avec.plus_unit(m)).expect("a_m < k_m");
    let num = multinomial(next.components());
    let den = multinomial(rest.components());
    Ok(sqrt_ratio(&num, &den).expect("multinomial > 0"))
}

fn zero_matrix(chi: usize) -> DMatrix<C64> {
    DMatrix::from_element(chi, chi, C64::new(0.0, 0.0))
}

fn basis(chi: usize, j: usize) -> DVector<C64> {
    let mut v = DVector::from_element(chi, C64::new(0.0, 0.0));
    v[j] = C64::new(1.0, 0.0);
    v
}

fn check_qubit_range(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(DickeError::domain("MPS needs n >= 1"));
    }
    if k > n {
        return Err(DickeError::domain(format!("need k <= n, got n={n} k={k}")));
    }
    if 2 * k > n {
        return Err(DickeError::domain(format!(
            "k={k} > n/2 for n={n}: build the complement state with k'={} and exchange levels 0 and 1",
            n - k
        )));
    }
    Ok(())
}

fn check_site(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(DickeError::domain(format!("site i={i} outside 1..={n}")));
    }
    Ok(())
}

/// `A_i^0, A_i^1` for `|D^n_k>`: entry `(j + m, j)` is `gamma_qubit(n,k,i,j,m)`.
pub fn qubit_site_matrices(n: usize, k: usize, i: usize) -> Result<Vec<DMatrix<C64>>> {
    check_qubit_range(n, k)?;
    check_site(n, i)?;
    let chi = k + 1;
    (0..2)
        .map(|m| {
            let mut a = zero_matrix(chi);
            for j in 0..chi - m {
                a[(j + m, j)] = C64::new(gamma_qubit(n, k, i, j, m)?, 0.0);
            }
            Ok(a)
        })
        .collect()
}

/// Strictly left-canonical variant: for `i >= n-k+2`, `A_i^0` gains unit
/// diagonal entries `e_jj` for `j = 0..=k+i-n-2`.
pub fn qubit_site_matrices_strict(n: usize, k: usize, i: usize) -> Result<Vec<DMatrix<C64>>> {
    let mut mats = qubit_site_matrices(n, k, i)?;
    if i + k >= n + 2 {
        for j in 0..=(k + i - n - 2) {
            mats[0][(j, j)] += C64::new(1.0, 0.0);
        }
    }
    Ok(mats)
}

/// `A_i^m, m = 0..=2s` for the spin-s Dicke state, entry `(j + m, j)` equal to
/// `gamma_spin`. Requires `k <= sn`.
pub fn spin_site_matrices(n: usize, k: usize, two_s: usize, i: usize) -> Result<Vec<DMatrix<C64>>> {
    check_spin(n, k, two_s)?;
    if n == 0 {
        return Err(DickeError::domain("MPS needs n >= 1"));
    }
    if 2 * k > two_s * n {
        return Err(DickeError::domain(format!(
            "k={k} > sn for n={n}, 2s={two_s}: build the complement with k'={} and reflect levels m -> 2s-m",
            two_s * n - k
        )));
    }
    check_site(n, i)?;
    let chi = k + 1;
    (0..=two_s)
        .map(|m| {
            let mut a = zero_matrix(chi);
            for j in 0..chi.saturating_sub(m) {
                a[(j + m, j)] = C64::new(gamma_spin(n, k, two_s, i, j, m)?, 0.0);
            }
            Ok(a)
        })
        .collect()
}

/// Site-independent (non-canonical) tensors `A^m = c_m (S^-)^m` with
/// `c_m = sqrt(C(2s, m) / (2s)^m)` and `S^-` the spin-`k/2` lowering operator,
/// `<j+1|S^-|j> = sqrt((j+1)(k-j))`.
pub fn ti_site_matrices(k: usize, two_s: usize) -> Result<Vec<DMatrix<C64>>> {
    if k == 0 {
        return Err(DickeError::domain("translation-invariant tensors need k >= 1"));
    }
    if two_s == 0 {
        return Err(DickeError::domain("two_s must be >= 1"));
    }
    let chi = k + 1;
    let mut lowering = zero_matrix(chi);
    for j in 0..k {
        lowering[(j + 1, j)] = C64::new((((j + 1) * (k - j)) as f64).sqrt(), 0.0);
    }
    let mut power = DMatrix::<C64>::identity(chi, chi);
    let mut out = Vec::with_capacity(two_s + 1);
    for m in 0..=two_s {
        let c = (binom(two_s as i64, m as i64).to_f64().expect("small binomial")
            / (two_s as f64).powi(m as i32))
        .sqrt();
        out.push(power.map(|z| z * c));
        power = &lowering * power;
    }
    Ok(out)
}

/// Qudit tensors `A_l^m`: entry `(j^l(a + m_hat), j^{l-1}(a))` is
/// `gamma_qudit(n, k, l, a, m)`, zero-padded to `chi x chi`.
pub fn qudit_site_matrices(
    n: usize,
    kvec: &OccupationVector,
    l: usize,
    labeling: &SectorLabeling,
) -> Result<Vec<DMatrix<C64>>> {
    check_qudit(n, kvec)?;
    if labeling.kvec() != kvec || labeling.n() != n {
        return Err(DickeError::domain(format!(
            "labeling built for n={} k={} does not match n={n} k={kvec}",
            labeling.n(),
            labeling.kvec()
        )));
    }
    check_site(n, l)?;
    let chi = labeling.chi();
    let d = kvec.levels();
    (0..d)
        .map(|m| {
            let mut a = zero_matrix(chi);
            for (col, avec) in labeling.sectors(l - 1).iter().enumerate() {
                let next = avec.plus_unit(m);
                let Some(row) = labeling.label(l, &next) else {
                    continue;
                };
                a[(row, col)] = C64::new(gamma_qudit(n, kvec, l, avec, m)?, 0.0);
            }
            Ok(a)
        })
        .collect()
}

/// Canonical MPS of `|D^n_k>`, boundaries `<k|`, `|0>`.
pub fn qubit_chain(n: usize, k: usize) -> Result<MpsChain> {
    check_qubit_range(n, k)?;
    let sites = (1..=n)
        .map(|i| qubit_site_matrices(n, k, i))
        .collect::<Result<_>>()?;
    MpsChain::new(sites, basis(k + 1, k), basis(k + 1, 0))
}

/// As [`qubit_chain`] with the strictly canonical `A_i^0` correction.
pub fn qubit_chain_strict(n: usize, k: usize) -> Result<MpsChain> {
    check_qubit_range(n, k)?;
    let sites = (1..=n)
        .map(|i| qubit_site_matrices_strict(n, k, i))
        .collect::<Result<_>>()?;
    MpsChain::new(sites, basis(k + 1, k), basis(k + 1, 0))
}

pub fn spin_chain(n: usize, k: usize, two_s: usize) -> Result<MpsChain> {
    if n == 0 {
        return Err(DickeError::domain("MPS needs n >= 1"));
    }
    let sites = (1..=n)
        .map(|i| spin_site_matrices(n, k, two_s, i))
        .collect::<Result<_>>()?;
    MpsChain::new(sites, basis(k + 1, k), basis(k + 1, 0))
}

/// Translation-invariant chain; its contraction is proportional to the spin-s
/// Dicke state but not normalized.
pub fn ti_chain(n: usize, k: usize, two_s: usize) -> Result<MpsChain> {
    if n == 0 {
        return Err(DickeError::domain("MPS needs n >= 1"));
    }
    let site = ti_site_matrices(k, two_s)?;
    MpsChain::new(vec![site; n], basis(k + 1, k), basis(k + 1, 0))
}

/// Canonical MPS of `|D^n(k)>`, boundaries `<0|`, `|0>`.
pub fn qudit_chain(n: usize, kvec: &OccupationVector) -> Result<MpsChain> {
    if n == 0 {
        return Err(DickeError::domain("MPS needs n >= 1"));
    }
    let labeling = enumerate_sectors(n, kvec)?;
    let sites = (1..=n)
        .map(|l| qudit_site_matrices(n, kvec, l, &labeling))
        .collect::<Result<_>>()?;
    let chi = labeling.chi();
    MpsChain::new(sites, basis(chi, 0), basis(chi, 0))
}

/// Dense amplitudes `<L| A_n^{m_n} ... A_1^{m_1} |R>`.
///
/// Sweeps from site 1 upwards, keeping one bond vector per prefix
/// `(m_1, ..., m_i)`; the prefix index is the flat index of the low digits.
pub fn contract(chain: &MpsChain) -> Result<DenseState> {
    let (n, d) = (chain.n, chain.d);
    hilbert_dim(d, n)?;
    let mut prefixes = vec![chain.right.clone()];
    for site in &chain.sites {
        let mut next = Vec::with_capacity(prefixes.len() * d);
        for a in site {
            next.extend(prefixes.iter().map(|v| a * v));
        }
        prefixes = next;
    }
    let amplitudes = prefixes.iter().map(|v| chain.left.dot(v)).collect();
    DenseState::new(n, d, amplitudes)
}

/// `max |(sum_m A_i^m^dagger A_i^m - I)_{ab}|` at site `i` (1-based).
pub fn canonicity_residual(chain: &MpsChain, site: usize) -> Result<f64> {
    check_site(chain.n, site)?;
    let mut acc = -DMatrix::<C64>::identity(chain.chi, chain.chi);
    for a in chain.site(site) {
        acc += a.adjoint() * a;
    }
    Ok(acc.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Residual at every site, in site order.
pub fn canonicity_residuals(chain: &MpsChain) -> Vec<f64> {
    (1..=chain.n)
        .map(|i| canonicity_residual(chain, i).expect("site in range"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::{dicke_state, qudit_dicke_state, spin_dicke_state};
    use crate::AMPLITUDE_TOL;

    fn occ(v: &[usize]) -> OccupationVector {
        OccupationVector::new(v.to_vec())
    }

    #[test]
    fn gamma_qubit_values() {
        assert!((gamma_qubit(4, 2, 1, 0, 1).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        for n in 1..=8 {
            for k in 0..=n {
                for i in 1..=n {
                    assert_eq!(gamma_qubit(n, k, i, k, 1).unwrap(), 0.0);
                    for j in 0..=k {
                        let g0 = gamma_qubit(n, k, i, j, 0).unwrap();
                        let g1 = gamma_qubit(n, k, i, j, 1).unwrap();
                        if k - j <= n - i {
                            assert!((g0 * g0 + g1 * g1 - 1.0).abs() <= AMPLITUDE_TOL);
                        }
                    }
                }
            }
        }
        assert!(gamma_qubit(4, 2, 1, 0, 2).is_err());
        assert!(gamma_qubit(4, 2, 1, 3, 0).is_err());
        assert!(gamma_qubit(4, 2, 0, 0, 0).is_err());
    }

    #[test]
    fn gamma_spin_values() {
        let v = gamma_spin(2, 2, 2, 1, 0, 2).unwrap();
        assert!((v - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        for n in 1..=6 {
            for k in 0..=n {
                for i in 1..=n {
                    for j in 0..=k {
                        for m in 0..2 {
                            assert_eq!(
                                gamma_spin(n, k, 1, i, j, m).unwrap(),
                                gamma_qubit(n, k, i, j, m).unwrap()
                            );
                        }
                    }
                }
            }
        }
        assert!(gamma_spin(2, 2, 2, 1, 0, 3).is_err());
    }

    #[test]
    fn gamma_qudit_values() {
        let k = occ(&[1, 1, 1]);
        let v = gamma_qudit(3, &k, 1, &occ(&[0, 0, 0]), 0).unwrap();
        assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(gamma_qudit(3, &k, 2, &occ(&[1, 0, 0]), 0).unwrap(), 0.0);
        assert!(gamma_qudit(3, &k, 2, &occ(&[0, 0, 0]), 0).is_err());
        assert!(gamma_qudit(3, &k, 1, &occ(&[0, 0, 0]), 3).is_err());
    }

    #[test]
    fn first_site_qubit_matrices() {
        let a = qubit_site_matrices(4, 2, 1).unwrap();
        let h = 0.5f64.sqrt();
        assert!((a[0][(0, 0)].re - h).abs() < 1e-15);
        assert!((a[1][(1, 0)].re - h).abs() < 1e-15);
        assert!(qubit_site_matrices(4, 3, 1).is_err());
        assert!(qubit_site_matrices(4, 2, 5).is_err());
    }

    #[test]
    fn strict_correction_range() {
        let a = qubit_site_matrices(4, 2, 4).unwrap();
        let b = qubit_site_matrices_strict(4, 2, 4).unwrap();
        let diff = &b[0] - &a[0];
        let mut want = zero_matrix(3);
        want[(0, 0)] = C64::new(1.0, 0.0);
        assert_eq!(diff, want);
        assert_eq!(a[1], b[1]);
        for i in 1..=3 {
            assert_eq!(
                qubit_site_matrices(4, 2, i).unwrap(),
                qubit_site_matrices_strict(4, 2, i).unwrap()
            );
        }
    }

    #[test]
    fn small_contractions() {
        let c = contract(&qubit_chain(4, 2).unwrap()).unwrap();
        assert!(c.max_abs_diff(&dicke_state(4, 2).unwrap()).unwrap() <= AMPLITUDE_TOL);
        let s = contract(&spin_chain(4, 2, 2).unwrap()).unwrap();
        assert!(s.max_abs_diff(&spin_dicke_state(4, 2, 2).unwrap()).unwrap() <= AMPLITUDE_TOL);
        let q = contract(&qudit_chain(4, &occ(&[2, 1, 1])).unwrap()).unwrap();
        assert!(
            q.max_abs_diff(&qudit_dicke_state(4, &occ(&[2, 1, 1])).unwrap())
                .unwrap()
                <= AMPLITUDE_TOL
        );
    }

    #[test]
    fn identity_chain_contracts_to_product_state() {
        let one = DMatrix::<C64>::identity(2, 2);
        let zero = zero_matrix(2);
        let chain = MpsChain::new(vec![vec![one, zero]; 3], basis(2, 0), basis(2, 0)).unwrap();
        assert_eq!(contract(&chain).unwrap(), DenseState::product_zero(3, 2).unwrap());
    }

    #[test]
    fn malformed_chains_are_rejected() {
        let bad = vec![vec![zero_matrix(2), zero_matrix(3)]];
        assert!(MpsChain::new(bad, basis(2, 0), basis(2, 0)).is_err());
        let ok = vec![vec![zero_matrix(2), zero_matrix(2)]];
        assert!(MpsChain::new(ok, basis(2, 0), basis(3, 0)).is_err());
    }

    #[test]
    fn residuals() {
        let strict = qubit_chain_strict(4, 2).unwrap();
        assert!(canonicity_residuals(&strict).iter().all(|&r| r <= AMPLITUDE_TOL));
        let plain = qubit_chain(4, 2).unwrap();
        assert!((canonicity_residual(&plain, 4).unwrap() - 1.0).abs() <= AMPLITUDE_TOL);
        assert!(canonicity_residual(&plain, 5).is_err());
        let ti = ti_chain(4, 2, 1).unwrap();
        assert!(canonicity_residual(&ti, 1).unwrap() > 0.1);
    }

    #[test]
    fn ti_spin_half_w_state() {
        let a = ti_site_matrices(1, 1).unwrap();
        assert_eq!(a[0], DMatrix::<C64>::identity(2, 2));
        assert_eq!(a[1][(1, 0)], C64::new(1.0, 0.0));
        let w = contract(&ti_chain(3, 1, 1).unwrap()).unwrap();
        for idx in 0..8usize {
            let want = if idx.count_ones() == 1 { 1.0 } else { 0.0 };
            assert!((w.amplitudes()[idx].re - want).abs() <= AMPLITUDE_TOL);
        }
    }

    #[test]
    fn sector_labels() {
        let lab = enumerate_sectors(4, &occ(&[2, 1, 1])).unwrap();
        assert_eq!(lab.cardinality(0), 1);
        assert_eq!(lab.cardinality(4), 1);
        assert_eq!(lab.chi(), 4);
        assert_eq!(lab.label(2, &occ(&[1, 1, 0])), Some(2));
        assert_eq!(lab.label(2, &occ(&[0, 0, 2])), None);
        let flat = enumerate_sectors(5, &occ(&[5, 0, 0])).unwrap();
        assert!((0..=5).all(|l| flat.cardinality(l) == 1));
        assert!(enumerate_sectors(5, &occ(&[2, 2])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let chain = qudit_chain(4, &occ(&[2, 1, 1])).unwrap();
        let back = MpsChain::from_json(&chain.to_json().unwrap()).unwrap();
        assert_eq!(back, chain);
        assert!(MpsChain::from_json(r#"{"n":1,"d":2,"chi":2,"left":[],"right":[],"sites":[]}"#).is_err());
    }
}
