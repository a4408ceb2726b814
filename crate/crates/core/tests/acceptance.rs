//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in `cargo test`
//! output; exits non-zero if any criterion fails. Reference values come from
//! brute-force oracles defined in this file, not from the library's own
//! closed forms.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dicke_mps::circuit::{
    apply_gate, build_block, build_circuit, rotation_angle, simulate, site_block_range, Gate, HybridState,
};
use dicke_mps::dicke::{dicke_state, qudit_dicke_state, spin_dicke_state, spin_lowering_oracle};
use dicke_mps::mps::{
    canonicity_residual, contract, enumerate_sectors, gamma_qubit, gamma_spin, qubit_chain,
    qubit_chain_strict, qudit_chain, spin_chain, ti_chain,
};
use dicke_mps::schmidt::{reconstruct_qubit, reconstruct_qudit, reconstruct_spin, schmidt_spectrum};
use dicke_mps::{DenseState, OccupationVector, C64};

const AMP_TOL: f64 = 1e-12;
const RANK_CUTOFF: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-14;

const QUDIT_BOND_DIMS: [([usize; 3], usize); 7] = [
    ([1, 1, 1], 3),
    ([1, 1, 2], 4),
    ([1, 1, 3], 4),
    ([1, 2, 2], 5),
    ([2, 2, 2], 7),
    ([1, 3, 3], 7),
    ([2, 3, 3], 10),
];

// ---------------------------------------------------------------- oracles

fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn multi(parts: &[usize]) -> u128 {
    let total: usize = parts.iter().sum();
    parts.iter().fold(factorial(total), |acc, &p| acc / factorial(p))
}

fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let m = idx % d;
            idx /= d;
            m
        })
        .collect()
}

fn oracle_state(n: usize, d: usize, amp: impl Fn(&[usize]) -> f64) -> Vec<f64> {
    (0..d.pow(n as u32)).map(|idx| amp(&digits(idx, d, n))).collect()
}

fn qubit_oracle(n: usize, k: usize) -> Vec<f64> {
    let a = 1.0 / (choose(n, k) as f64).sqrt();
    oracle_state(n, 2, |m| if m.iter().sum::<usize>() == k { a } else { 0.0 })
}

fn spin_oracle(n: usize, k: usize, two_s: usize) -> Vec<f64> {
    let den = choose(two_s * n, k) as f64;
    oracle_state(n, two_s + 1, |m| {
        if m.iter().sum::<usize>() != k {
            return 0.0;
        }
        let num: u128 = m.iter().map(|&x| choose(two_s, x)).product();
        (num as f64 / den).sqrt()
    })
}

fn qudit_oracle(n: usize, kvec: &[usize]) -> Vec<f64> {
    let d = kvec.len();
    let a = 1.0 / (multi(kvec) as f64).sqrt();
    oracle_state(n, d, |m| {
        let mut hist = vec![0; d];
        for &x in m {
            hist[x] += 1;
        }
        if hist == kvec {
            a
        } else {
            0.0
        }
    })
}

fn deviation(state: &DenseState, want: &[f64]) -> f64 {
    assert_eq!(state.len(), want.len(), "dimension mismatch against oracle");
    state
        .amplitudes()
        .iter()
        .zip(want)
        .map(|(z, w)| (z - C64::new(*w, 0.0)).norm())
        .fold(0.0, f64::max)
}

fn weight(n: usize, k: usize, i: usize, j: usize) -> f64 {
    if j > k {
        return 0.0;
    }
    ((choose(i, j) * choose(n - i, k - j)) as f64 / choose(n, k) as f64).sqrt()
}

/// Qubit tensor element in ratio form: the weight of `|D^{n-i}_{k-j-m}> |D^i_{j+m}>`
/// over that of `|D^{n-i+1}_{k-j}> |D^{i-1}_j>`, times the overlap
/// `sqrt(C(i-1,j) / C(i,j+m))` of `|D^i_{j+m}>` with `|D^{i-1}_j> |m>`.
fn gamma_ratio(n: usize, k: usize, i: usize, j: usize, m: usize) -> f64 {
    let below = weight(n, k, i - 1, j);
    if below == 0.0 || choose(i, j + m) == 0 {
        return 0.0;
    }
    weight(n, k, i, j + m) / below * (choose(i - 1, j) as f64 / choose(i, j + m) as f64).sqrt()
}

/// All `a` with `0 <= a_m <= k_m` summing to `l`.
fn compositions(kvec: &[usize], l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &bound in kvec {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=bound).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out.retain(|a| a.iter().sum::<usize>() == l);
    out
}

fn compare_spectrum(state: &DenseState, cut: usize, mut coeffs: Vec<f64>) -> f64 {
    let spec = schmidt_spectrum(state, cut, RANK_CUTOFF).unwrap();
    coeffs.retain(|&c| c > 0.0);
    coeffs.sort_by(|a, b| b.total_cmp(a));
    let mut worst = 0.0f64;
    for (idx, v) in spec.values.iter().enumerate() {
        let want = coeffs.get(idx).copied().unwrap_or(0.0);
        worst = worst.max((v - want).abs());
    }
    if coeffs.len() > spec.values.len() {
        worst = f64::INFINITY;
    }
    worst
}

fn spin_grid() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for two_s in 1..=4 {
        for n in 1..=5 {
            for k in 0..=two_s * n / 2 {
                out.push((n, k, two_s));
            }
        }
    }
    out
}

fn qubit_grid(max_n: usize) -> Vec<(usize, usize)> {
    (1..=max_n)
        .flat_map(|n| (1..=n / 2).map(move |k| (n, k)))
        .collect()
}

// ---------------------------------------------------------------- report

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

// ---------------------------------------------------------------- criteria

fn c1_qubit_exactness() -> Outcome {
    let mut worst = 0.0f64;
    let grid = qubit_grid(10);
    for &(n, k) in &grid {
        let psi = contract(&qubit_chain(n, k).unwrap()).unwrap();
        worst = worst.max(deviation(&psi, &qubit_oracle(n, k)));
        worst = worst.max(deviation(&dicke_state(n, k).unwrap(), &qubit_oracle(n, k)));
    }
    outcome(
        worst <= AMP_TOL,
        format!("{} instances, max deviation {worst:.2e}", grid.len()),
    )
}

fn c2_strict_canonicity() -> Outcome {
    let mut worst_strict = 0.0f64;
    let mut missing = Vec::new();
    for (n, k) in qubit_grid(10) {
        let strict = qubit_chain_strict(n, k).unwrap();
        for i in 1..=n {
            worst_strict = worst_strict.max(canonicity_residual(&strict, i).unwrap());
        }
        if k >= 2 {
            let plain = qubit_chain(n, k).unwrap();
            let tail = (n - k + 2..=n)
                .map(|i| canonicity_residual(&plain, i).unwrap())
                .fold(0.0, f64::max);
            if tail < 0.5 {
                missing.push((n, k, tail));
            }
        }
    }
    outcome(
        worst_strict <= AMP_TOL && missing.is_empty(),
        format!(
            "strict residual max {worst_strict:.2e}; uncorrected chains without a tail defect: {missing:?}"
        ),
    )
}

fn c3_spin_exactness() -> Outcome {
    let mut worst_closed = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut bad_chi = Vec::new();
    let grid = spin_grid();
    for &(n, k, two_s) in &grid {
        let chain = spin_chain(n, k, two_s).unwrap();
        if chain.chi() != k + 1 {
            bad_chi.push((n, k, two_s, chain.chi()));
        }
        let psi = contract(&chain).unwrap();
        let oracle = spin_oracle(n, k, two_s);
        worst_closed = worst_closed.max(deviation(&psi, &oracle));
        worst_closed = worst_closed.max(deviation(&spin_dicke_state(n, k, two_s).unwrap(), &oracle));
        let lowered = spin_lowering_oracle(n, k, two_s).unwrap();
        worst_oracle = worst_oracle.max(psi.max_abs_diff(&lowered).unwrap());
        for i in 1..=n {
            // in range: the remaining n-i+1 sites can hold k-j excitations
            for j in k.saturating_sub(two_s * (n - i + 1))..=k.min(two_s * (i - 1)) {
                let s: f64 = (0..=two_s)
                    .map(|m| gamma_spin(n, k, two_s, i, j, m).unwrap().powi(2))
                    .sum();
                worst_sum = worst_sum.max((s - 1.0).abs());
            }
        }
    }
    let passed =
        worst_closed <= AMP_TOL && worst_oracle <= AMP_TOL && worst_sum <= AMP_TOL && bad_chi.is_empty();
    outcome(
        passed,
        format!(
            "{} instances; closed form {worst_closed:.2e}, lowering oracle {worst_oracle:.2e}, gamma sum {worst_sum:.2e}, chi != k+1: {bad_chi:?}",
            grid.len()
        ),
    )
}

fn c4_ti_proportionality() -> Outcome {
    let mut worst = 0.0f64;
    let mut max_residual = 0.0f64;
    let mut count = 0;
    for (n, k, two_s) in spin_grid().into_iter().filter(|&(_, k, _)| k >= 1) {
        let chain = ti_chain(n, k, two_s).unwrap();
        let psi = contract(&chain).unwrap().normalized().unwrap();
        worst = worst.max(deviation(&psi, &spin_oracle(n, k, two_s)));
        max_residual = max_residual.max(canonicity_residual(&chain, 1).unwrap());
        count += 1;
    }
    outcome(
        worst <= AMP_TOL && max_residual > 0.1,
        format!("{count} instances, max deviation {worst:.2e}, max canonicity residual {max_residual:.3}"),
    )
}

fn c5_qudit_bond_dims() -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut passed = true;
    for (k, chi) in QUDIT_BOND_DIMS {
        let kvec = OccupationVector::new(k.to_vec());
        let n = kvec.total();
        let labeling = enumerate_sectors(n, &kvec).unwrap();
        let rank = schmidt_spectrum(&qudit_dicke_state(n, &kvec).unwrap(), n / 2, RANK_CUTOFF)
            .unwrap()
            .rank;
        passed &= labeling.chi() == chi && rank == chi;
        rows.push(format!("{kvec}:{}/{rank}", labeling.chi()));
    }
    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(10);
    outcome(passed, format!("chi/rank {} in {elapsed:.2?}", rows.join(" ")))
}

fn c6_qudit_exactness() -> Outcome {
    let mut worst = 0.0f64;
    for (k, _) in QUDIT_BOND_DIMS {
        let kvec = OccupationVector::new(k.to_vec());
        let n = kvec.total();
        let oracle = qudit_oracle(n, &k);
        worst = worst.max(deviation(
            &contract(&qudit_chain(n, &kvec).unwrap()).unwrap(),
            &oracle,
        ));
        worst = worst.max(deviation(&qudit_dicke_state(n, &kvec).unwrap(), &oracle));
    }
    outcome(
        worst <= AMP_TOL,
        format!("{} rows, max deviation {worst:.2e}", QUDIT_BOND_DIMS.len()),
    )
}

fn c7_schmidt() -> Outcome {
    let mut recon = 0.0f64;
    let mut spectra = 0.0f64;
    let mut cuts = 0;
    for (n, k) in qubit_grid(10) {
        let state = dicke_state(n, k).unwrap();
        for i in 1..n {
            recon = recon.max(deviation(
                &reconstruct_qubit(n, k, i).unwrap(),
                &qubit_oracle(n, k),
            ));
            let coeffs = (0..=k).map(|j| weight(n, k, i, j)).collect();
            spectra = spectra.max(compare_spectrum(&state, i, coeffs));
            cuts += 1;
        }
    }
    for (n, k, two_s) in spin_grid() {
        let state = spin_dicke_state(n, k, two_s).unwrap();
        let total = choose(two_s * n, k) as f64;
        for i in 1..n {
            recon = recon.max(deviation(
                &reconstruct_spin(n, k, two_s, i).unwrap(),
                &spin_oracle(n, k, two_s),
            ));
            let coeffs = (0..=k)
                .map(|j| ((choose(two_s * i, j) * choose(two_s * (n - i), k - j)) as f64 / total).sqrt())
                .collect();
            spectra = spectra.max(compare_spectrum(&state, i, coeffs));
            cuts += 1;
        }
    }
    for (k, _) in QUDIT_BOND_DIMS {
        let kvec = OccupationVector::new(k.to_vec());
        let n = kvec.total();
        let state = qudit_dicke_state(n, &kvec).unwrap();
        for l in 1..n {
            recon = recon.max(deviation(
                &reconstruct_qudit(n, &kvec, l).unwrap(),
                &qudit_oracle(n, &k),
            ));
            let coeffs = compositions(&k, l)
                .iter()
                .map(|a| {
                    let rest: Vec<usize> = k.iter().zip(a).map(|(x, y)| x - y).collect();
                    ((multi(a) * multi(&rest)) as f64 / multi(&k) as f64).sqrt()
                })
                .collect();
            spectra = spectra.max(compare_spectrum(&state, l, coeffs));
            cuts += 1;
        }
    }
    outcome(
        recon <= AMP_TOL && spectra <= RANK_CUTOFF,
        format!("{cuts} cuts; reconstruction {recon:.2e}, spectra {spectra:.2e}"),
    )
}

fn c8_circuit() -> Outcome {
    let mut worst_infidelity = 0.0f64;
    let mut worst_drift = 0.0f64;
    let mut bad_counts = Vec::new();
    let mut largest = Duration::ZERO;
    for (n, k) in qubit_grid(12) {
        let start = Instant::now();
        let circuit = build_circuit(n, k).unwrap();
        if circuit.gate_count() != 3 * k * (n + 1 - k) {
            bad_counts.push((n, k, circuit.gate_count()));
        }
        let out = simulate(&circuit).unwrap();
        let target = qubit_oracle(n, k);
        let overlap: C64 = target
            .iter()
            .enumerate()
            .map(|(q, &t)| out.amplitude(k, q) * t)
            .sum();
        worst_infidelity = worst_infidelity.max(1.0 - overlap.norm_sqr());
        let norm: f64 = out.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        worst_drift = worst_drift.max((norm - 1.0).abs());
        if (n, k) == (12, 6) {
            largest = start.elapsed();
        }
    }
    let passed = worst_infidelity <= AMP_TOL
        && worst_drift <= AMP_TOL
        && bad_counts.is_empty()
        && largest < Duration::from_secs(5);
    outcome(
        passed,
        format!(
            "1 - fidelity {worst_infidelity:.2e}, norm drift {worst_drift:.2e}, wrong gate counts {bad_counts:?}, (12,6) in {largest:.2?}"
        ),
    )
}

fn run_gates(state: &HybridState, gates: &[Gate]) -> HybridState {
    gates
        .iter()
        .fold(state.clone(), |s, g| apply_gate(&s, g).unwrap())
}

type Image = Vec<(usize, usize, f64)>;

/// Expected image of `|j>_anc |q>` under block `(i, l)` as `(ancilla, qubits, amplitude)`
/// terms, or `None` where the mapping is left unspecified (`|l+1>|1>_i`).
fn block_image(n: usize, k: usize, i: usize, l: usize, j: usize, q: usize) -> Option<Image> {
    let bit = 1usize << (i - 1);
    let b = q & bit != 0;
    match (b, j) {
        (false, j) if j == l => Some(vec![
            (l, q, gamma_ratio(n, k, i, l, 0)),
            (l + 1, q | bit, gamma_ratio(n, k, i, l, 1)),
        ]),
        (false, _) => Some(vec![(j, q, 1.0)]),
        (true, j) if j == l + 1 => None,
        (true, _) => Some(vec![(j, q, 1.0)]),
    }
}

fn c9_block_semantics() -> Outcome {
    let mut truth = 0.0f64;
    let mut interference = 0.0f64;
    let mut blocks = 0;
    for (n, k) in qubit_grid(6) {
        for i in 1..=n {
            let range: Vec<usize> = site_block_range(n, k, i).collect();
            for &l in &range {
                let gates = build_block(n, k, i, l).unwrap();
                blocks += 1;
                for j in 0..=k {
                    for q in 0..1usize << n {
                        let Some(image) = block_image(n, k, i, l, j, q) else {
                            continue;
                        };
                        let out = run_gates(&HybridState::basis(n, k, j, q).unwrap(), &gates);
                        let mut want = vec![C64::new(0.0, 0.0); (k + 1) << n];
                        for (a, p, v) in image {
                            want[(a << n) + p] += v;
                        }
                        for (x, y) in out.amplitudes().iter().zip(&want) {
                            truth = truth.max((x - y).norm());
                        }
                    }
                }
            }
            for &j in &range {
                for q in (0..1usize << n).filter(|q| q & (1 << (i - 1)) == 0) {
                    let first = run_gates(
                        &HybridState::basis(n, k, j, q).unwrap(),
                        &build_block(n, k, i, j).unwrap(),
                    );
                    for &l in range.iter().filter(|&&l| l > j) {
                        let second = run_gates(&first, &build_block(n, k, i, l).unwrap());
                        for (x, y) in first.amplitudes().iter().zip(second.amplitudes()) {
                            interference = interference.max((x - y).norm());
                        }
                    }
                }
            }
        }
    }
    outcome(
        truth <= AMP_TOL && interference <= AMP_TOL,
        format!("{blocks} blocks; truth table {truth:.2e}, non-interference {interference:.2e}"),
    )
}

fn c10_angles() -> Outcome {
    let mut worst = 0.0f64;
    let mut rotations = 0;
    for (n, k) in qubit_grid(12) {
        let circuit = build_circuit(n, k).unwrap();
        for (gate, &(i, l)) in circuit.gates.iter().zip(&circuit.blocks) {
            let Gate::ControlledRotation { angle, .. } = gate else {
                continue;
            };
            rotations += 1;
            let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
            let g0 = gamma_qubit(n, k, i, l, 0).unwrap();
            let g1 = gamma_qubit(n, k, i, l, 1).unwrap();
            worst = worst.max((c - g0).abs()).max((s - g1).abs());
            assert_eq!(*angle, rotation_angle(n, k, i, l).unwrap());
        }
    }
    outcome(
        worst <= ANGLE_TOL,
        format!("{rotations} rotations, max deviation {worst:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 qubit MPS exactness", c1_qubit_exactness),
        ("2 strict canonicity", c2_strict_canonicity),
        ("3 spin-s exactness and Vandermonde sum", c3_spin_exactness),
        ("4 translation-invariant proportionality", c4_ti_proportionality),
        ("5 qudit bond dimensions", c5_qudit_bond_dims),
        ("6 qudit MPS exactness", c6_qudit_exactness),
        ("7 Schmidt reconstruction and spectra", c7_schmidt),
        ("8 circuit preparation", c8_circuit),
        ("9 block semantics", c9_block_semantics),
        ("10 angle / MPS consistency", c10_angles),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{name}] {} ({:.2?})", result.detail, start.elapsed());
        failures += usize::from(!result.passed);
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
