//! C ABI over `dicke-mps`.
//!
//! Objects are opaque heap handles (`DickeState`, `DickeChain`,
//! `DickeCircuit`) created by the constructor functions and released with the
//! matching `*_free`. Every fallible call returns a `DickeStatus`; on failure
//! the message is kept per thread and can be read with
//! `dicke_last_error_message`.
//!
//! Strings are copied into caller buffers: pass the capacity in bytes and a
//! `needed` pointer, which always receives the size including the trailing
//! NUL. A null or short buffer yields `DICKE_STATUS_BUFFER_TOO_SMALL`.
//!
//! Complex amplitudes are exchanged as interleaved `re, im` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dicke_mps::circuit::{build_circuit_with, simulate, AncillaShift, CircuitDescription};
use dicke_mps::dicke::{dicke_state, hypergeom_coeff, qudit_dicke_state, spin_dicke_state};
use dicke_mps::mps::{
    canonicity_residual, contract, gamma_qubit, qubit_chain, qubit_chain_strict, qudit_chain, spin_chain,
    ti_chain, MpsChain,
};
use dicke_mps::schmidt::schmidt_spectrum;
use dicke_mps::{DenseState, DickeError, OccupationVector};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DickeStatus {
    Ok = 0,
    NullPointer = 1,
    /// Arguments outside the domain of the operation.
    Domain = 2,
    DimensionMismatch = 3,
    BufferTooSmall = 4,
    /// Serialization failure or a caught panic.
    Internal = 5,
}

/// Dense amplitude vector.
pub struct DickeState {
    inner: DenseState,
}

/// Matrix product state.
pub struct DickeChain {
    inner: MpsChain,
}

/// Preparation circuit for a qubit Dicke state.
pub struct DickeCircuit {
    inner: CircuitDescription,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: DickeStatus, msg: impl Into<String>) -> DickeStatus {
    set_error(msg.into());
    status
}

fn from_error(e: DickeError) -> DickeStatus {
    let status = match e {
        DickeError::Domain(_) => DickeStatus::Domain,
        DickeError::DimensionMismatch { .. } => DickeStatus::DimensionMismatch,
        _ => DickeStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `body`, translating library errors and panics into status codes.
fn guard<F>(body: F) -> DickeStatus
where
    F: FnOnce() -> Result<(), DickeStatus>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DickeStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(DickeStatus::Internal, "panic inside dicke-mps"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DickeStatus>;
}

impl<T> OrStatus<T> for dicke_mps::Result<T> {
    fn or_status(self) -> Result<T, DickeStatus> {
        self.map_err(from_error)
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, DickeStatus> {
    p.as_ref()
        .ok_or_else(|| fail(DickeStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, DickeStatus> {
    p.as_mut()
        .ok_or_else(|| fail(DickeStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_string(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), DickeStatus> {
    let size = s.len() + 1;
    *out_ptr(needed, "needed")? = size;
    if buf.is_null() || cap < size {
        return Err(fail(
            DickeStatus::BufferTooSmall,
            format!("need {size} bytes, got {cap}"),
        ));
    }
    ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

// ------------------------------------------------------------------ errors

/// Copies the last error message of this thread into `buf`. `needed` gets the
/// message size including the NUL; 1 when there is no error.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes; `needed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dicke_last_error_message(
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> DickeStatus {
    let msg = LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|m| m.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    // not via write_string: a size query must not replace the stored message
    let Some(needed) = needed.as_mut() else {
        return DickeStatus::NullPointer;
    };
    *needed = msg.len() + 1;
    if buf.is_null() || cap < *needed {
        return DickeStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, msg.len());
    *buf.add(msg.len()) = 0;
    DickeStatus::Ok
}

// ------------------------------------------------------------------ states

/// `|D^n_k>` for `0 <= k <= n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_qubit(n: usize, k: usize, out: *mut *mut DickeState) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DickeState {
            inner: dicke_state(n, k).or_status()?,
        });
        Ok(())
    })
}

/// Spin-s Dicke state with `two_s = 2s`, `0 <= k <= 2sn`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_spin(
    n: usize,
    k: usize,
    two_s: usize,
    out: *mut *mut DickeState,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DickeState {
            inner: spin_dicke_state(n, k, two_s).or_status()?,
        });
        Ok(())
    })
}

/// Qudit Dicke state with occupation numbers `kvec[0..levels]` summing to `n`.
///
/// # Safety
/// `kvec` must be valid for `levels` reads; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_qudit(
    n: usize,
    kvec: *const usize,
    levels: usize,
    out: *mut *mut DickeState,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let k = occupations(kvec, levels)?;
        *out = boxed(DickeState {
            inner: qudit_dicke_state(n, &k).or_status()?,
        });
        Ok(())
    })
}

unsafe fn occupations(kvec: *const usize, levels: usize) -> Result<OccupationVector, DickeStatus> {
    if kvec.is_null() {
        return Err(fail(DickeStatus::NullPointer, "kvec is null"));
    }
    Ok(OccupationVector::new(
        std::slice::from_raw_parts(kvec, levels).to_vec(),
    ))
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_free(state: *mut DickeState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of amplitudes `d^n`; 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_len(state: *const DickeState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.len())
}

/// Number of sites; 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_sites(state: *const DickeState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.n())
}

/// Local dimension; 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_levels(state: *const DickeState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.d())
}

/// Copies the amplitudes as `2 * len` interleaved doubles.
///
/// # Safety
/// `out` must be valid for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_amplitudes(
    state: *const DickeState,
    out: *mut f64,
    cap: usize,
) -> DickeStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let need = 2 * s.inner.len();
        if out.is_null() || cap < need {
            return Err(fail(
                DickeStatus::BufferTooSmall,
                format!("need {need} doubles, got {cap}"),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, need);
        for (pair, z) in dst.chunks_exact_mut(2).zip(s.inner.amplitudes()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// JSON form `{"n","d","amplitudes":[[re,im],...]}`.
///
/// # Safety
/// See the module notes on string buffers.
#[no_mangle]
pub unsafe extern "C" fn dicke_state_to_json(
    state: *const DickeState,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> DickeStatus {
    guard(|| {
        let text = deref(state, "state")?.inner.to_json().or_status()?;
        write_string(&text, buf, cap, needed)
    })
}

/// Singular values across the cut after site `cut`, descending. `count`
/// receives the number of values, `rank` the number above `tol`.
///
/// # Safety
/// `values` must be valid for `cap` doubles; `count` and `rank` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dicke_schmidt_spectrum(
    state: *const DickeState,
    cut: usize,
    tol: f64,
    values: *mut f64,
    cap: usize,
    count: *mut usize,
    rank: *mut usize,
) -> DickeStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let count = out_ptr(count, "count")?;
        let rank = out_ptr(rank, "rank")?;
        let spec = schmidt_spectrum(&s.inner, cut, tol).or_status()?;
        *count = spec.values.len();
        *rank = spec.rank;
        if values.is_null() || cap < spec.values.len() {
            return Err(fail(
                DickeStatus::BufferTooSmall,
                format!("need {} doubles, got {cap}", spec.values.len()),
            ));
        }
        ptr::copy_nonoverlapping(spec.values.as_ptr(), values, spec.values.len());
        Ok(())
    })
}

// ------------------------------------------------------------------ chains

/// Canonical qubit MPS; `strict` selects the strictly canonical tensors.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_qubit(
    n: usize,
    k: usize,
    strict: bool,
    out: *mut *mut DickeChain,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let chain = if strict {
            qubit_chain_strict(n, k)
        } else {
            qubit_chain(n, k)
        };
        *out = boxed(DickeChain {
            inner: chain.or_status()?,
        });
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_spin(
    n: usize,
    k: usize,
    two_s: usize,
    out: *mut *mut DickeChain,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DickeChain {
            inner: spin_chain(n, k, two_s).or_status()?,
        });
        Ok(())
    })
}

/// Translation-invariant chain (not normalized, not canonical).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_translation_invariant(
    n: usize,
    k: usize,
    two_s: usize,
    out: *mut *mut DickeChain,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(DickeChain {
            inner: ti_chain(n, k, two_s).or_status()?,
        });
        Ok(())
    })
}

/// # Safety
/// `kvec` must be valid for `levels` reads; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_qudit(
    n: usize,
    kvec: *const usize,
    levels: usize,
    out: *mut *mut DickeChain,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let k = occupations(kvec, levels)?;
        *out = boxed(DickeChain {
            inner: qudit_chain(n, &k).or_status()?,
        });
        Ok(())
    })
}

/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_free(chain: *mut DickeChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Bond dimension; 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_bond_dimension(chain: *const DickeChain) -> usize {
    chain.as_ref().map_or(0, |c| c.inner.chi())
}

/// Contracts the chain into a new state handle.
///
/// # Safety
/// `chain` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_contract(
    chain: *const DickeChain,
    out: *mut *mut DickeState,
) -> DickeStatus {
    guard(|| {
        let c = deref(chain, "chain")?;
        let out = out_ptr(out, "out")?;
        *out = boxed(DickeState {
            inner: contract(&c.inner).or_status()?,
        });
        Ok(())
    })
}

/// `max |sum_m A^m^dagger A^m - I|` at 1-based `site`.
///
/// # Safety
/// `chain` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_canonicity_residual(
    chain: *const DickeChain,
    site: usize,
    out: *mut f64,
) -> DickeStatus {
    guard(|| {
        let c = deref(chain, "chain")?;
        let out = out_ptr(out, "out")?;
        *out = canonicity_residual(&c.inner, site).or_status()?;
        Ok(())
    })
}

/// # Safety
/// See the module notes on string buffers.
#[no_mangle]
pub unsafe extern "C" fn dicke_mps_to_json(
    chain: *const DickeChain,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> DickeStatus {
    guard(|| {
        let text = deref(chain, "chain")?.inner.to_json().or_status()?;
        write_string(&text, buf, cap, needed)
    })
}

// ------------------------------------------------------------------ circuits

/// Preparation circuit for `|D^n_k>`, `0 <= k <= n/2`. `swap_ancilla` selects
/// two-level ancilla swaps instead of cyclic increment/decrement.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_circuit_build(
    n: usize,
    k: usize,
    swap_ancilla: bool,
    out: *mut *mut DickeCircuit,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let shift = if swap_ancilla {
            AncillaShift::TwoLevelSwap
        } else {
            AncillaShift::Cyclic
        };
        *out = boxed(DickeCircuit {
            inner: build_circuit_with(n, k, shift).or_status()?,
        });
        Ok(())
    })
}

/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_circuit_free(circuit: *mut DickeCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Number of gates; 0 for a null handle.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dicke_circuit_gate_count(circuit: *const DickeCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.inner.gate_count())
}

/// Simulates from `|0>_anc |0...0>`. Writes the fidelity against
/// `|k>_anc |D^n_k>` and the norm drift; when `final_state` is non-null it
/// receives the system state with the ancilla projected on `|k>`.
///
/// # Safety
/// `circuit` must be a live handle; `fidelity` and `norm_drift` must be valid;
/// `final_state` may be null.
#[no_mangle]
pub unsafe extern "C" fn dicke_circuit_simulate(
    circuit: *const DickeCircuit,
    fidelity: *mut f64,
    norm_drift: *mut f64,
    final_state: *mut *mut DickeState,
) -> DickeStatus {
    guard(|| {
        let c = &deref(circuit, "circuit")?.inner;
        let fidelity = out_ptr(fidelity, "fidelity")?;
        let norm_drift = out_ptr(norm_drift, "norm_drift")?;
        let out = simulate(c).or_status()?;
        *fidelity = out
            .fidelity(c.k, &dicke_state(c.n, c.k).or_status()?)
            .or_status()?;
        *norm_drift = (out.norm() - 1.0).abs();
        if let Some(slot) = final_state.as_mut() {
            *slot = boxed(DickeState {
                inner: out.project_ancilla(c.k).or_status()?,
            });
        }
        Ok(())
    })
}

/// # Safety
/// See the module notes on string buffers.
#[no_mangle]
pub unsafe extern "C" fn dicke_circuit_to_json(
    circuit: *const DickeCircuit,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> DickeStatus {
    guard(|| {
        let text = deref(circuit, "circuit")?.inner.to_json().or_status()?;
        write_string(&text, buf, cap, needed)
    })
}

// ------------------------------------------------------------------ scalars

/// Schmidt weight `sqrt(C(i,j) C(n-i,k-j) / C(n,k))`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_hypergeom_coeff(
    n: usize,
    k: usize,
    i: usize,
    j: usize,
    out: *mut f64,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = hypergeom_coeff(n, k, i, j).or_status()?;
        Ok(())
    })
}

/// Qubit tensor element `gamma^{(i)}_{j,m}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dicke_gamma_qubit(
    n: usize,
    k: usize,
    i: usize,
    j: usize,
    m: usize,
    out: *mut f64,
) -> DickeStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = gamma_qubit(n, k, i, j, m).or_status()?;
        Ok(())
    })
}
