//! Sequential preparation circuit for qubit Dicke states.
//!
//! The circuit acts on a `(k+1)`-level ancilla qudit and `n` system qubits.
//! Site `i` gets `U_i = I_y ... I_x` with `x = max(0, i-n+k-1)` and
//! `y = min(i-1, k-1)`; each block `I_l` is three gates:
//!
//! 1. ancilla `+1 mod (k+1)`, controlled on qubit `i` being `|0>`;
//! 2. `R(theta)` on qubit `i`, controlled on the ancilla being `l+1 mod (k+1)`,
//!    with `cos(theta/2) = gamma_{l,0}` and `sin(theta/2) = gamma_{l,1}`;
//! 3. ancilla `-1 mod (k+1)`, controlled on qubit `i` being `|0>`.
//!
//! Applying `U_n ... U_1` to `|0>_anc |0...0>` yields `|k>_anc |D^n_k>`.
//! The circuit has exactly `3k(n+1-k)` gates, all applied sequentially.

use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};
use crate::mps::gamma_qubit;
use crate::state::{hilbert_dim, DenseState};
use crate::C64;

/// How the ancilla is shifted around each controlled rotation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AncillaShift {
    /// Cyclic `+1` / `-1` modulo `k + 1`.
    #[default]
    Cyclic,
    /// Two-level swap `|l> <-> |l+1>` before and after the rotation.
    TwoLevelSwap,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Ancilla `j -> j+1 mod (k+1)` when qubit `site` equals `qubit_control`.
    AncillaIncrement { site: usize, qubit_control: u8 },
    /// Ancilla `j -> j-1 mod (k+1)` when qubit `site` equals `qubit_control`.
    AncillaDecrement { site: usize, qubit_control: u8 },
    /// Ancilla `|lower> <-> |lower+1>` when qubit `site` equals `qubit_control`.
    AncillaSwap {
        site: usize,
        lower: usize,
        qubit_control: u8,
    },
    /// `R(angle)` on qubit `site` when the ancilla equals `ancilla_control`.
    ControlledRotation {
        site: usize,
        ancilla_control: usize,
        angle: f64,
    },
}

impl Gate {
    pub fn site(&self) -> usize {
        match *self {
            Gate::AncillaIncrement { site, .. }
            | Gate::AncillaDecrement { site, .. }
            | Gate::AncillaSwap { site, .. }
            | Gate::ControlledRotation { site, .. } => site,
        }
    }
}

/// Gate list with `(i, l)` block tags, one per gate.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitDescription {
    pub n: usize,
    pub k: usize,
    pub chi: usize,
    pub gates: Vec<Gate>,
    pub blocks: Vec<(usize, usize)>,
}

impl CircuitDescription {
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn to_json(&self) -> Result<String> {
        let gates = self
            .gates
            .iter()
            .zip(&self.blocks)
            .map(|(g, &(i, l))| {
                let mut rec = GateRecord {
                    kind: String::new(),
                    site: g.site(),
                    ancilla_control: None,
                    qubit_control: None,
                    angle: None,
                    block: [i, l],
                    levels: None,
                };
                match *g {
                    Gate::AncillaIncrement { qubit_control, .. } => {
                        rec.kind = "inc".into();
                        rec.qubit_control = Some(qubit_control);
                    }
                    Gate::AncillaDecrement { qubit_control, .. } => {
                        rec.kind = "dec".into();
                        rec.qubit_control = Some(qubit_control);
                    }
                    Gate::AncillaSwap {
                        lower, qubit_control, ..
                    } => {
                        rec.kind = "swap".into();
                        rec.qubit_control = Some(qubit_control);
                        rec.levels = Some([lower, lower + 1]);
                    }
                    Gate::ControlledRotation {
                        ancilla_control,
                        angle,
                        ..
                    } => {
                        rec.kind = "rot".into();
                        rec.ancilla_control = Some(ancilla_control);
                        rec.angle = Some(angle);
                    }
                }
                rec
            })
            .collect();
        let repr = CircuitRepr {
            n: self.n,
            k: self.k,
            chi: self.chi,
            gates,
        };
        Ok(serde_json::to_string(&repr)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: CircuitRepr = serde_json::from_str(text)?;
        let mut gates = Vec::with_capacity(repr.gates.len());
        let mut blocks = Vec::with_capacity(repr.gates.len());
        for rec in repr.gates {
            let missing = |field: &str| DickeError::format(format!("{} gate without {field}", rec.kind));
            let gate = match rec.kind.as_str() {
                "inc" => Gate::AncillaIncrement {
                    site: rec.site,
                    qubit_control: rec.qubit_control.ok_or_else(|| missing("qubit_control"))?,
                },
                "dec" => Gate::AncillaDecrement {
                    site: rec.site,
                    qubit_control: rec.qubit_control.ok_or_else(|| missing("qubit_control"))?,
                },
                "swap" => Gate::AncillaSwap {
                    site: rec.site,
                    lower: rec.levels.ok_or_else(|| missing("levels"))?[0],
                    qubit_control: rec.qubit_control.ok_or_else(|| missing("qubit_control"))?,
                },
                "rot" => Gate::ControlledRotation {
                    site: rec.site,
                    ancilla_control: rec.ancilla_control.ok_or_else(|| missing("ancilla_control"))?,
                    angle: rec.angle.ok_or_else(|| missing("angle"))?,
                },
                other => return Err(DickeError::format(format!("unknown gate kind {other:?}"))),
            };
            gates.push(gate);
            blocks.push((rec.block[0], rec.block[1]));
        }
        Ok(Self {
            n: repr.n,
            k: repr.k,
            chi: repr.chi,
            gates,
            blocks,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    n: usize,
    k: usize,
    chi: usize,
    gates: Vec<GateRecord>,
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    site: usize,
    ancilla_control: Option<usize>,
    qubit_control: Option<u8>,
    angle: Option<f64>,
    block: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<[usize; 2]>,
}

/// `theta = 2 atan2(gamma_{l,1}, gamma_{l,0})` for block `(i, l)`.
pub fn rotation_angle(n: usize, k: usize, i: usize, l: usize) -> Result<f64> {
    if l >= k {
        return Err(DickeError::domain(format!("block index l={l} outside 0..{k}")));
    }
    let c = gamma_qubit(n, k, i, l, 0)?;
    let s = gamma_qubit(n, k, i, l, 1)?;
    if c == 0.0 && s == 0.0 {
        return Err(DickeError::domain(format!(
            "block (i={i}, l={l}) is outside the support for n={n} k={k}"
        )));
    }
    Ok(2.0 * s.atan2(c))
}

/// The three gates of block `I^{(i)}_l`.
pub fn build_block(n: usize, k: usize, i: usize, l: usize) -> Result<Vec<Gate>> {
    build_block_with(n, k, i, l, AncillaShift::Cyclic)
}

pub fn build_block_with(n: usize, k: usize, i: usize, l: usize, shift: AncillaShift) -> Result<Vec<Gate>> {
    let angle = rotation_angle(n, k, i, l)?;
    let rot = Gate::ControlledRotation {
        site: i,
        ancilla_control: (l + 1) % (k + 1),
        angle,
    };
    Ok(match shift {
        AncillaShift::Cyclic => vec![
            Gate::AncillaIncrement {
                site: i,
                qubit_control: 0,
            },
            rot,
            Gate::AncillaDecrement {
                site: i,
                qubit_control: 0,
            },
        ],
        AncillaShift::TwoLevelSwap => vec![
            Gate::AncillaSwap {
                site: i,
                lower: l,
                qubit_control: 0,
            },
            rot,
            Gate::AncillaSwap {
                site: i,
                lower: l,
                qubit_control: 0,
            },
        ],
    })
}

/// Block indices `l` used by `U_i`, ascending.
pub fn site_block_range(n: usize, k: usize, i: usize) -> std::ops::RangeInclusive<usize> {
    let lo = (i as i64 - n as i64 + k as i64 - 1).max(0) as usize;
    let hi = (i as i64 - 1).min(k as i64 - 1);
    if hi < lo as i64 {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    lo..=hi as usize
}

/// Gates of `U_i`, blocks in ascending `l` (the rightmost operator first).
pub fn build_site_unitary(n: usize, k: usize, i: usize) -> Result<Vec<(usize, Gate)>> {
    build_site_unitary_with(n, k, i, AncillaShift::Cyclic)
}

/// As [`build_site_unitary`], each gate paired with its block index `l`.
pub fn build_site_unitary_with(
    n: usize,
    k: usize,
    i: usize,
    shift: AncillaShift,
) -> Result<Vec<(usize, Gate)>> {
    if i == 0 || i > n {
        return Err(DickeError::domain(format!("site i={i} outside 1..={n}")));
    }
    let mut out = Vec::new();
    for l in site_block_range(n, k, i) {
        out.extend(build_block_with(n, k, i, l, shift)?.into_iter().map(|g| (l, g)));
    }
    Ok(out)
}

/// Full preparation circuit `U_n ... U_1` for `|D^n_k>`, `0 <= k <= n/2`.
pub fn build_circuit(n: usize, k: usize) -> Result<CircuitDescription> {
    build_circuit_with(n, k, AncillaShift::Cyclic)
}

pub fn build_circuit_with(n: usize, k: usize, shift: AncillaShift) -> Result<CircuitDescription> {
    if n == 0 {
        return Err(DickeError::domain("circuit needs n >= 1"));
    }
    if 2 * k > n {
        return Err(DickeError::domain(format!(
            "k={k} > n/2 for n={n}: prepare the complement with k'={} and flip every qubit",
            n.saturating_sub(k)
        )));
    }
    let mut gates = Vec::new();
    let mut blocks = Vec::new();
    for i in 1..=n {
        for (l, g) in build_site_unitary_with(n, k, i, shift)? {
            gates.push(g);
            blocks.push((i, l));
        }
    }
    Ok(CircuitDescription {
        n,
        k,
        chi: k + 1,
        gates,
        blocks,
    })
}

/// Sequential depth; every gate is serialized, so this equals the gate count.
pub fn depth(circuit: &CircuitDescription) -> usize {
    circuit.gates.len()
}

/// Ancilla (`k + 1` levels) tensored with `n` qubits. Index is
/// `ancilla * 2^n + qubits`, qubit 1 least significant.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    n: usize,
    k: usize,
    amplitudes: Vec<C64>,
}

impl HybridState {
    /// `|0>_anc |0...0>`.
    pub fn initial(n: usize, k: usize) -> Result<Self> {
        let len = hilbert_dim(2, n)?
            .checked_mul(k + 1)
            .ok_or_else(|| DickeError::domain("hybrid state size overflows"))?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); len];
        amplitudes[0] = C64::new(1.0, 0.0);
        Ok(Self { n, k, amplitudes })
    }

    /// `|ancilla>_anc |qubits>`.
    pub fn basis(n: usize, k: usize, ancilla: usize, qubits: usize) -> Result<Self> {
        let mut s = Self::initial(n, k)?;
        let idx = s.index(ancilla, qubits);
        if ancilla > k || idx >= s.amplitudes.len() {
            return Err(DickeError::domain(format!(
                "basis state ({ancilla}, {qubits}) out of range"
            )));
        }
        s.amplitudes[0] = C64::new(0.0, 0.0);
        s.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, ancilla: usize, qubits: usize) -> C64 {
        self.amplitudes[self.index(ancilla, qubits)]
    }

    fn index(&self, ancilla: usize, qubits: usize) -> usize {
        (ancilla << self.n) + qubits
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unnormalized system state `(<level|_anc (x) 1) |self>`.
    pub fn project_ancilla(&self, level: usize) -> Result<DenseState> {
        if level > self.k {
            return Err(DickeError::domain(format!(
                "ancilla level {level} exceeds k={}",
                self.k
            )));
        }
        let dim = 1usize << self.n;
        DenseState::new(
            self.n,
            2,
            self.amplitudes[level * dim..(level + 1) * dim].to_vec(),
        )
    }

    /// Probability of each ancilla level.
    pub fn ancilla_populations(&self) -> Vec<f64> {
        self.amplitudes
            .chunks(1 << self.n)
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// `|(<level|_anc <target|) |self>|^2`.
    pub fn fidelity(&self, level: usize, target: &DenseState) -> Result<f64> {
        Ok(target.inner(&self.project_ancilla(level)?)?.norm_sqr())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        let site = gate.site();
        if site == 0 || site > self.n {
            return Err(DickeError::DimensionMismatch {
                context: "gate site",
                expected: self.n,
                found: site,
            });
        }
        let bit = 1usize << (site - 1);
        let dim = 1usize << self.n;
        let levels = self.k + 1;
        let check_qubit = |c: u8| {
            if c > 1 {
                Err(DickeError::domain(format!(
                    "qubit control value {c} is not 0 or 1"
                )))
            } else {
                Ok(c)
            }
        };
        match *gate {
            Gate::AncillaIncrement { qubit_control, .. } | Gate::AncillaDecrement { qubit_control, .. } => {
                let control = check_qubit(qubit_control)?;
                let up = matches!(gate, Gate::AncillaIncrement { .. });
                for q in (0..dim).filter(|q| ((q & bit) != 0) as u8 == control) {
                    let column: Vec<C64> = (0..levels).map(|a| self.amplitudes[a * dim + q]).collect();
                    for (a, amp) in column.into_iter().enumerate() {
                        let to = if up {
                            (a + 1) % levels
                        } else {
                            (a + levels - 1) % levels
                        };
                        self.amplitudes[to * dim + q] = amp;
                    }
                }
            }
            Gate::AncillaSwap {
                lower, qubit_control, ..
            } => {
                let control = check_qubit(qubit_control)?;
                if lower + 1 >= levels {
                    return Err(DickeError::DimensionMismatch {
                        context: "ancilla swap level",
                        expected: levels - 1,
                        found: lower + 1,
                    });
                }
                for q in (0..dim).filter(|q| ((q & bit) != 0) as u8 == control) {
                    self.amplitudes.swap(lower * dim + q, (lower + 1) * dim + q);
                }
            }
            Gate::ControlledRotation {
                ancilla_control,
                angle,
                ..
            } => {
                if ancilla_control >= levels {
                    return Err(DickeError::DimensionMismatch {
                        context: "ancilla control value",
                        expected: levels - 1,
                        found: ancilla_control,
                    });
                }
                let (s, c) = (angle / 2.0).sin_cos();
                let base = ancilla_control * dim;
                for q0 in (0..dim).filter(|q| q & bit == 0) {
                    let (i0, i1) = (base + q0, base + (q0 | bit));
                    let (x0, x1) = (self.amplitudes[i0], self.amplitudes[i1]);
                    self.amplitudes[i0] = x0 * c - x1 * s;
                    self.amplitudes[i1] = x0 * s + x1 * c;
                }
            }
        }
        Ok(())
    }
}

/// Pure form of [`HybridState::apply`].
pub fn apply_gate(state: &HybridState, gate: &Gate) -> Result<HybridState> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Runs `circuit` on `|0>_anc |0...0>`.
pub fn simulate(circuit: &CircuitDescription) -> Result<HybridState> {
    let mut state = HybridState::initial(circuit.n, circuit.k)?;
    for gate in &circuit.gates {
        state.apply(gate)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::dicke_state;
    use std::f64::consts::PI;

    #[test]
    fn first_angle_is_quarter_turn() {
        assert!((rotation_angle(4, 2, 1, 0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(rotation_angle(4, 2, 1, 2).is_err());
        // both gammas vanish: k - l = 2 > n - i + 1 = 1
        assert!(rotation_angle(4, 2, 4, 0).is_err());
        assert_eq!(site_block_range(4, 2, 1), 0..=0);
        assert_eq!(site_block_range(4, 2, 4), 1..=1);
    }

    #[test]
    fn zero_gamma_gives_identity_rotation() {
        // gamma_{l,1} never vanishes alone for l < k, so drive the gate directly
        let mut s = HybridState::basis(2, 1, 1, 0).unwrap();
        let before = s.clone();
        s.apply(&Gate::ControlledRotation {
            site: 1,
            ancilla_control: 1,
            angle: 0.0,
        })
        .unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn gate_counts() {
        assert_eq!(build_circuit(4, 2).unwrap().gate_count(), 18);
        for n in 2..=10 {
            assert_eq!(build_circuit(n, 1).unwrap().gate_count(), 3 * n);
        }
        assert_eq!(depth(&build_circuit(5, 2).unwrap()), 24);
        assert_eq!(depth(&build_circuit(5, 0).unwrap()), 0);
        assert!(build_circuit(4, 3).is_err());
    }

    #[test]
    fn increment_wraps() {
        // |k>|0> -> |0>|0>
        let s = HybridState::basis(2, 2, 2, 0).unwrap();
        let t = apply_gate(
            &s,
            &Gate::AncillaIncrement {
                site: 1,
                qubit_control: 0,
            },
        )
        .unwrap();
        assert_eq!(t, HybridState::basis(2, 2, 0, 0).unwrap());
        // qubit 1 set: no action
        let s = HybridState::basis(2, 2, 2, 1).unwrap();
        let t = apply_gate(
            &s,
            &Gate::AncillaIncrement {
                site: 1,
                qubit_control: 0,
            },
        )
        .unwrap();
        assert_eq!(t, s);
        let t = apply_gate(
            &HybridState::basis(2, 2, 0, 0).unwrap(),
            &Gate::AncillaDecrement {
                site: 2,
                qubit_control: 0,
            },
        )
        .unwrap();
        assert_eq!(t, HybridState::basis(2, 2, 2, 0).unwrap());
    }

    #[test]
    fn bad_gates_are_rejected() {
        let mut s = HybridState::initial(2, 1).unwrap();
        assert!(s
            .apply(&Gate::AncillaIncrement {
                site: 3,
                qubit_control: 0
            })
            .is_err());
        assert!(s
            .apply(&Gate::ControlledRotation {
                site: 1,
                ancilla_control: 2,
                angle: 0.1
            })
            .is_err());
        assert!(s
            .apply(&Gate::AncillaSwap {
                site: 1,
                lower: 1,
                qubit_control: 0
            })
            .is_err());
        assert!(s
            .apply(&Gate::AncillaIncrement {
                site: 1,
                qubit_control: 2
            })
            .is_err());
    }

    #[test]
    fn two_qubit_w_state() {
        let out = simulate(&build_circuit(2, 1).unwrap()).unwrap();
        let h = 0.5f64.sqrt();
        assert!((out.amplitude(1, 0b01).re - h).abs() < 1e-15);
        assert!((out.amplitude(1, 0b10).re - h).abs() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
        assert!(out.ancilla_populations()[0] < 1e-30);
    }

    #[test]
    fn d42_preparation() {
        let out = simulate(&build_circuit(4, 2).unwrap()).unwrap();
        let f = out.fidelity(2, &dicke_state(4, 2).unwrap()).unwrap();
        assert!(f >= 1.0 - 1e-12);
    }

    #[test]
    fn swap_variant_agrees() {
        for (n, k) in [(4, 2), (5, 2), (6, 3)] {
            let a = simulate(&build_circuit(n, k).unwrap()).unwrap();
            let b = simulate(&build_circuit_with(n, k, AncillaShift::TwoLevelSwap).unwrap()).unwrap();
            let diff = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(diff <= 1e-14);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = build_circuit(5, 2).unwrap();
        let json = c.to_json().unwrap();
        assert_eq!(CircuitDescription::from_json(&json).unwrap(), c);
        let first = &serde_json::from_str::<serde_json::Value>(&json).unwrap()["gates"][0];
        assert_eq!(first["kind"], "inc");
        assert_eq!(first["qubit_control"], 0);
        assert!(first["ancilla_control"].is_null());
        assert!(first["angle"].is_null());
        assert_eq!(first["block"], serde_json::json!([1, 0]));
        let swaps = build_circuit_with(4, 2, AncillaShift::TwoLevelSwap).unwrap();
        assert_eq!(
            CircuitDescription::from_json(&swaps.to_json().unwrap()).unwrap(),
            swaps
        );
        assert!(CircuitDescription::from_json(r#"{"n":1,"k":0,"chi":1,"gates":[{"kind":"x","site":1,"ancilla_control":null,"qubit_control":null,"angle":null,"block":[1,0]}]}"#).is_err());
    }
}
