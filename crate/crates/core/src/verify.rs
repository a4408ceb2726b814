//! Invariant suites for a single Dicke instance.
//!
//! Each suite runs the invariants stated for the state, MPS, Schmidt and
//! circuit modules on one `(n, k)`, `(n, k, 2s)` or `(n, k)` qudit instance and
//! reports one [`Check`] per invariant.

use std::fmt;

use crate::circuit::{
    build_block, build_circuit, build_circuit_with, simulate, site_block_range, AncillaShift, Gate,
    HybridState,
};
use crate::dicke::{
    dicke_state, qubit_schmidt_coefficients, qudit_dicke_state, qudit_schmidt_coefficients, spin_dicke_state,
    spin_lowering_oracle, spin_schmidt_coefficients, SchmidtCoefficient,
};
use crate::error::Result;
use crate::mps::{
    canonicity_residuals, contract, enumerate_sectors, gamma_qubit, gamma_qudit, gamma_spin, qubit_chain,
    qubit_chain_strict, qudit_chain, spin_chain, ti_chain, MpsChain,
};
use crate::schmidt::{reconstruct_qubit, reconstruct_qudit, reconstruct_spin, schmidt_spectrum};
use crate::state::{DenseState, OccupationVector};
use crate::RANK_TOL;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn within(name: &str, value: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: value <= tol,
            detail: format!("{value:.3e} <= {tol:.0e}"),
        }
    }

    fn equal<T: PartialEq + fmt::Debug>(name: &str, got: T, want: T) -> Self {
        Self {
            name: name.to_string(),
            passed: got == want,
            detail: format!("{got:?} == {want:?}"),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn symmetry_deviation(state: &DenseState) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in 1..=state.n() {
        for b in a + 1..=state.n() {
            worst = worst.max(state.swap_sites(a, b)?.max_abs_diff(state)?);
        }
    }
    Ok(worst)
}

fn sum_rule_deviation(terms: &[SchmidtCoefficient]) -> f64 {
    (terms.iter().map(|c| c.value * c.value).sum::<f64>() - 1.0).abs()
}

/// Largest gap between the SVD spectrum and the sorted Schmidt coefficients
/// at `cut`. Values are compared as sorted multisets, padded with zeros.
fn spectrum_deviation(state: &DenseState, cut: usize, terms: &[SchmidtCoefficient]) -> Result<f64> {
    let spectrum = schmidt_spectrum(state, cut, RANK_TOL)?;
    let mut want: Vec<f64> = terms.iter().map(|c| c.value).collect();
    want.sort_by(|a, b| b.total_cmp(a));
    let len = spectrum.values.len().max(want.len());
    Ok(max_of((0..len).map(|i| {
        let got = spectrum.values.get(i).copied().unwrap_or(0.0);
        let exp = want.get(i).copied().unwrap_or(0.0);
        (got - exp).abs()
    })))
}

/// Largest entry off the `(j + m, j)` stripe.
fn stripe_violation(chain: &MpsChain) -> f64 {
    let mut worst = 0.0f64;
    for i in 1..=chain.n() {
        for (m, a) in chain.site(i).iter().enumerate() {
            for r in 0..a.nrows() {
                for c in 0..a.ncols() {
                    if r != c + m {
                        worst = worst.max(a[(r, c)].norm());
                    }
                }
            }
        }
    }
    worst
}

fn max_nonzeros_per_column(chain: &MpsChain) -> usize {
    let mut worst = 0;
    for i in 1..=chain.n() {
        for a in chain.site(i) {
            for c in 0..a.ncols() {
                worst = worst.max(a.column(c).iter().filter(|z| z.norm() > 0.0).count());
            }
        }
    }
    worst
}

/// Worst deviation of block `(i, l)` from its defining action on basis inputs
/// `|j>_anc |b>_i` (other qubits in `|0>`):
/// `|l>|0> -> g0 |l>|0> + g1 |l+1>|1>`, `|j>|0> -> |j>|0>` for `j != l`, and
/// `|j>|1> -> |j>|1>` for `l != j - 1`.
pub fn block_truth_table_deviation(n: usize, k: usize, i: usize, l: usize) -> Result<f64> {
    let gates = build_block(n, k, i, l)?;
    let bit = 1usize << (i - 1);
    let g0 = gamma_qubit(n, k, i, l, 0)?;
    let g1 = gamma_qubit(n, k, i, l, 1)?;
    let mut worst = 0.0f64;
    for j in 0..=k {
        for b in 0..2usize {
            if b == 1 && j == l + 1 {
                continue;
            }
            let input = HybridState::basis(n, k, j, b * bit)?;
            let out = run(&input, &gates)?;
            let expected = if b == 0 && j == l {
                let mut e = vec![(j, 0, g0)];
                e.push((l + 1, bit, g1));
                e
            } else {
                vec![(j, b * bit, 1.0)]
            };
            let mut want = HybridState::initial(n, k)?.amplitudes().to_vec();
            want[0] = 0.0.into();
            for (a, q, v) in expected {
                want[(a << n) + q] += v;
            }
            worst = worst.max(max_of(
                out.amplitudes().iter().zip(&want).map(|(x, y)| (x - y).norm()),
            ));
        }
    }
    Ok(worst)
}

/// Worst change when a later block `(i, l')`, `l' > l`, acts on the output of
/// block `(i, l)` applied to `|l>|0>_i`.
pub fn non_interference_deviation(n: usize, k: usize, i: usize) -> Result<f64> {
    let range: Vec<usize> = site_block_range(n, k, i).collect();
    let mut worst = 0.0f64;
    for &j in &range {
        let first = run(&HybridState::basis(n, k, j, 0)?, &build_block(n, k, i, j)?)?;
        for &l in range.iter().filter(|&&l| l > j) {
            let second = run(&first, &build_block(n, k, i, l)?)?;
            worst = worst.max(max_of(
                first
                    .amplitudes()
                    .iter()
                    .zip(second.amplitudes())
                    .map(|(x, y)| (x - y).norm()),
            ));
        }
    }
    Ok(worst)
}

fn run(state: &HybridState, gates: &[Gate]) -> Result<HybridState> {
    let mut s = state.clone();
    for g in gates {
        s.apply(g)?;
    }
    Ok(s)
}

fn state_checks(checks: &mut Vec<Check>, state: &DenseState, tol: f64) -> Result<()> {
    checks.push(Check::within("state.normalized", (state.norm() - 1.0).abs(), tol));
    checks.push(Check::within(
        "state.permutation_symmetry",
        symmetry_deviation(state)?,
        0.0,
    ));
    Ok(())
}

/// Qubit suite; requires `k <= n/2`. `tol` bounds amplitude-level checks.
pub fn verify_qubit(n: usize, k: usize, tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let state = dicke_state(n, k)?;
    let chain = qubit_chain(n, k)?;
    let strict = qubit_chain_strict(n, k)?;
    state_checks(&mut checks, &state, tol)?;

    let sums = (0..=n)
        .map(|i| Ok(sum_rule_deviation(&qubit_schmidt_coefficients(n, k, i)?)))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::within("schmidt.sum_rule", max_of(sums), tol));

    checks.push(Check::within(
        "mps.contraction",
        contract(&chain)?.max_abs_diff(&state)?,
        tol,
    ));
    checks.push(Check::within(
        "mps.strict_contraction",
        contract(&strict)?.max_abs_diff(&state)?,
        tol,
    ));
    checks.push(Check::within(
        "mps.strict_canonicity",
        max_of(canonicity_residuals(&strict)),
        tol,
    ));
    checks.push(Check::within(
        "mps.stripe_structure",
        stripe_violation(&chain),
        0.0,
    ));
    let mut gamma_dev = 0.0f64;
    for i in 1..=n {
        for j in 0..=k {
            if k - j <= n - i {
                let g0 = gamma_qubit(n, k, i, j, 0)?;
                let g1 = gamma_qubit(n, k, i, j, 1)?;
                gamma_dev = gamma_dev.max((g0 * g0 + g1 * g1 - 1.0).abs());
            }
        }
    }
    checks.push(Check::within("mps.gamma_sum_rule", gamma_dev, tol));

    if n >= 2 {
        let mut rec = 0.0f64;
        let mut spec = 0.0f64;
        for cut in 1..n {
            rec = rec.max(reconstruct_qubit(n, k, cut)?.max_abs_diff(&state)?);
            spec = spec.max(spectrum_deviation(
                &state,
                cut,
                &qubit_schmidt_coefficients(n, k, cut)?,
            )?);
        }
        checks.push(Check::within("schmidt.reconstruction", rec, tol));
        checks.push(Check::within(
            "schmidt.spectrum_matches_coefficients",
            spec,
            RANK_TOL,
        ));
        let rank = schmidt_spectrum(&state, n / 2, RANK_TOL)?.rank;
        checks.push(Check::equal("schmidt.mid_cut_rank_equals_chi", rank, chain.chi()));
    }

    let circuit = build_circuit(n, k)?;
    checks.push(Check::equal(
        "circuit.gate_count",
        circuit.gate_count(),
        3 * k * (n + 1 - k),
    ));
    let out = simulate(&circuit)?;
    checks.push(Check::within("circuit.norm_drift", (out.norm() - 1.0).abs(), tol));
    checks.push(Check::within(
        "circuit.fidelity",
        1.0 - out.fidelity(k, &state)?,
        tol,
    ));
    let swapped = simulate(&build_circuit_with(n, k, AncillaShift::TwoLevelSwap)?)?;
    checks.push(Check::within(
        "circuit.swap_variant",
        max_of(
            out.amplitudes()
                .iter()
                .zip(swapped.amplitudes())
                .map(|(x, y)| (x - y).norm()),
        ),
        tol,
    ));
    let mut angle_dev = 0.0f64;
    for (gate, &(i, l)) in circuit.gates.iter().zip(&circuit.blocks) {
        if let Gate::ControlledRotation { angle, .. } = *gate {
            let (s, c) = (angle / 2.0).sin_cos();
            angle_dev = angle_dev
                .max((c - gamma_qubit(n, k, i, l, 0)?).abs())
                .max((s - gamma_qubit(n, k, i, l, 1)?).abs());
        }
    }
    checks.push(Check::within("circuit.angle_consistency", angle_dev, 1e-14));
    let mut table = 0.0f64;
    let mut interference = 0.0f64;
    for i in 1..=n {
        for l in site_block_range(n, k, i) {
            table = table.max(block_truth_table_deviation(n, k, i, l)?);
        }
        interference = interference.max(non_interference_deviation(n, k, i)?);
    }
    checks.push(Check::within("circuit.block_truth_table", table, 1e-14));
    checks.push(Check::within("circuit.non_interference", interference, 1e-14));
    Ok(checks)
}

/// Spin-s suite; the MPS parts require `k <= sn`.
pub fn verify_spin(n: usize, k: usize, two_s: usize, tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let state = spin_dicke_state(n, k, two_s)?;
    let chain = spin_chain(n, k, two_s)?;
    state_checks(&mut checks, &state, tol)?;
    checks.push(Check::within(
        "state.lowering_oracle",
        spin_lowering_oracle(n, k, two_s)?.max_abs_diff(&state)?,
        tol,
    ));
    let sums = (0..=n)
        .map(|i| Ok(sum_rule_deviation(&spin_schmidt_coefficients(n, k, two_s, i)?)))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::within("schmidt.sum_rule", max_of(sums), tol));

    checks.push(Check::within(
        "mps.contraction",
        contract(&chain)?.max_abs_diff(&state)?,
        tol,
    ));
    checks.push(Check::equal("mps.bond_dimension", chain.chi(), k + 1));
    checks.push(Check::within(
        "mps.stripe_structure",
        stripe_violation(&chain),
        0.0,
    ));
    let mut gamma_dev = 0.0f64;
    for i in 1..=n {
        for j in 0..=k {
            if k - j <= two_s * (n - i) {
                let s: f64 = (0..=two_s)
                    .map(|m| gamma_spin(n, k, two_s, i, j, m).map(|g| g * g))
                    .sum::<Result<f64>>()?;
                gamma_dev = gamma_dev.max((s - 1.0).abs());
            }
        }
    }
    checks.push(Check::within("mps.gamma_sum_rule", gamma_dev, tol));
    if k >= 1 {
        let ti = contract(&ti_chain(n, k, two_s)?)?.normalized()?;
        checks.push(Check::within(
            "mps.ti_proportionality",
            ti.max_abs_diff(&state)?,
            tol,
        ));
    }

    if n >= 2 {
        let mut rec = 0.0f64;
        let mut spec = 0.0f64;
        for cut in 1..n {
            rec = rec.max(reconstruct_spin(n, k, two_s, cut)?.max_abs_diff(&state)?);
            let terms = spin_schmidt_coefficients(n, k, two_s, cut)?;
            spec = spec.max(spectrum_deviation(&state, cut, &terms)?);
        }
        checks.push(Check::within("schmidt.reconstruction", rec, tol));
        checks.push(Check::within(
            "schmidt.spectrum_matches_coefficients",
            spec,
            RANK_TOL,
        ));
        let rank = schmidt_spectrum(&state, n / 2, RANK_TOL)?.rank;
        checks.push(Check::equal("schmidt.mid_cut_rank_equals_chi", rank, chain.chi()));
    }
    Ok(checks)
}

pub fn verify_qudit(n: usize, kvec: &OccupationVector, tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let state = qudit_dicke_state(n, kvec)?;
    let labeling = enumerate_sectors(n, kvec)?;
    let chain = qudit_chain(n, kvec)?;
    state_checks(&mut checks, &state, tol)?;
    if kvec.levels() == 2 {
        let qubit = dicke_state(n, kvec.components()[1])?;
        checks.push(Check::within(
            "state.qubit_specialization",
            state.max_abs_diff(&qubit)?,
            0.0,
        ));
    }
    let sums = (0..=n)
        .map(|l| Ok(sum_rule_deviation(&qudit_schmidt_coefficients(n, kvec, l)?)))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::within("schmidt.sum_rule", max_of(sums), tol));

    checks.push(Check::equal(
        "mps.sector_chi",
        labeling.chi(),
        labeling.cardinality(n / 2),
    ));
    checks.push(Check::within(
        "mps.contraction",
        contract(&chain)?.max_abs_diff(&state)?,
        tol,
    ));
    checks.push(Check::equal(
        "mps.one_nonzero_per_column",
        max_nonzeros_per_column(&chain) <= 1,
        true,
    ));
    let mut gamma_dev = 0.0f64;
    for l in 1..=n {
        for a in labeling.sectors(l - 1) {
            let s: f64 = (0..kvec.levels())
                .map(|m| gamma_qudit(n, kvec, l, a, m).map(|g| g * g))
                .sum::<Result<f64>>()?;
            gamma_dev = gamma_dev.max((s - 1.0).abs());
        }
    }
    checks.push(Check::within("mps.gamma_sum_rule", gamma_dev, tol));

    if n >= 2 {
        let mut rec = 0.0f64;
        let mut spec = 0.0f64;
        let mut ranks_ok = true;
        for cut in 1..n {
            rec = rec.max(reconstruct_qudit(n, kvec, cut)?.max_abs_diff(&state)?);
            let terms = qudit_schmidt_coefficients(n, kvec, cut)?;
            spec = spec.max(spectrum_deviation(&state, cut, &terms)?);
            ranks_ok &= schmidt_spectrum(&state, cut, RANK_TOL)?.rank == labeling.cardinality(cut);
        }
        checks.push(Check::within("schmidt.reconstruction", rec, tol));
        checks.push(Check::within(
            "schmidt.spectrum_matches_coefficients",
            spec,
            RANK_TOL,
        ));
        checks.push(Check::equal("schmidt.rank_equals_sector_count", ranks_ok, true));
        let rank = schmidt_spectrum(&state, n / 2, RANK_TOL)?.rank;
        checks.push(Check::equal("schmidt.mid_cut_rank_equals_chi", rank, chain.chi()));
    }
    Ok(checks)
}
