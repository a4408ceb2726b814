//! Schmidt spectra by SVD, and reconstruction of Dicke states from their
//! Schmidt decompositions.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dicke::{
    dicke_state, qubit_schmidt_coefficients, qudit_dicke_state, qudit_schmidt_coefficients, spin_dicke_state,
    spin_schmidt_coefficients, SchmidtCoefficient, SectorLabel,
};
use crate::error::{DickeError, Result};
use crate::state::{hilbert_dim, DenseState, OccupationVector};
use crate::C64;

/// Singular values of a state across the cut between site `cut` and `cut + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtSpectrum {
    pub cut: usize,
    /// Descending.
    pub values: Vec<f64>,
    /// Number of values strictly above the tolerance.
    pub rank: usize,
}

impl SchmidtSpectrum {
    /// `cut,index,value` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cut,index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{i},{v:?}\n", self.cut));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// SVD of the `d^(n-cut) x d^cut` amplitude matrix (rows: sites above the cut,
/// columns: sites `1..=cut`).
pub fn schmidt_spectrum(state: &DenseState, cut: usize, tol: f64) -> Result<SchmidtSpectrum> {
    let n = state.n();
    if cut == 0 || cut >= n {
        return Err(DickeError::domain(format!(
            "cut {cut} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    let cols = hilbert_dim(state.d(), cut)?;
    let rows = state.len() / cols;
    let amps = state.amplitudes();
    let m = DMatrix::<C64>::from_fn(rows, cols, |r, c| amps[r * cols + c]);
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let rank = values.iter().filter(|&&v| v > tol).count();
    Ok(SchmidtSpectrum { cut, values, rank })
}

fn assemble<F>(
    n: usize,
    d: usize,
    cut: usize,
    terms: &[SchmidtCoefficient],
    mut factors: F,
) -> Result<DenseState>
where
    F: FnMut(&SectorLabel, &SectorLabel) -> Result<(DenseState, DenseState)>,
{
    let mut acc = DenseState::zeros(n, d)?.into_amplitudes();
    for term in terms {
        if term.value == 0.0 {
            continue;
        }
        let (high, low) = factors(&term.left, &term.right)?;
        debug_assert_eq!(low.n(), cut);
        let product = DenseState::kron(&high, &low)?;
        for (a, p) in acc.iter_mut().zip(product.amplitudes()) {
            *a += p * term.value;
        }
    }
    DenseState::new(n, d, acc)
}

fn check_cut(n: usize, cut: usize) -> Result<()> {
    if cut == 0 || cut >= n {
        return Err(DickeError::domain(format!(
            "cut {cut} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

fn excitations(label: &SectorLabel) -> usize {
    match label {
        SectorLabel::Excitations(j) => *j,
        SectorLabel::Occupations(_) => unreachable!("qubit/spin terms carry excitation labels"),
    }
}

fn occupations(label: &SectorLabel) -> &OccupationVector {
    match label {
        SectorLabel::Occupations(a) => a,
        SectorLabel::Excitations(_) => unreachable!("qudit terms carry occupation labels"),
    }
}

/// `sum_j c^{nk}_{cut,j} |D^{n-cut}_{k-j}> |D^cut_j>`.
pub fn reconstruct_qubit(n: usize, k: usize, cut: usize) -> Result<DenseState> {
    check_cut(n, cut)?;
    let terms = qubit_schmidt_coefficients(n, k, cut)?;
    assemble(n, 2, cut, &terms, |left, right| {
        Ok((
            dicke_state(n - cut, excitations(left))?,
            dicke_state(cut, excitations(right))?,
        ))
    })
}

/// Spin-s analogue of [`reconstruct_qubit`].
pub fn reconstruct_spin(n: usize, k: usize, two_s: usize, cut: usize) -> Result<DenseState> {
    check_cut(n, cut)?;
    let terms = spin_schmidt_coefficients(n, k, two_s, cut)?;
    assemble(n, two_s + 1, cut, &terms, |left, right| {
        Ok((
            spin_dicke_state(n - cut, excitations(left), two_s)?,
            spin_dicke_state(cut, excitations(right), two_s)?,
        ))
    })
}

/// `sum_{a in A^cut(k)} c^{n,k}_{cut,a} |D^{n-cut}(k-a)> |D^cut(a)>`.
pub fn reconstruct_qudit(n: usize, kvec: &OccupationVector, cut: usize) -> Result<DenseState> {
    check_cut(n, cut)?;
    let terms = qudit_schmidt_coefficients(n, kvec, cut)?;
    assemble(n, kvec.levels(), cut, &terms, |left, right| {
        let left = occupations(left);
        let right = occupations(right);
        Ok((qudit_dicke_state(n - cut, left)?, qudit_dicke_state(cut, right)?))
    })
}
