//! C interface to `quartetnet`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`QnStatus`]; on an error status, `qn_last_error_message` describes the
//! failure. Strings returned through out-parameters are owned by the caller
//! and released with `qn_string_free`.

use quartetnet::commands::{solve, Mode, Solved};
use quartetnet::general::InconsistencyReason;
use quartetnet::network::{networks_equal, parse_network, quartets_of, random_network, write_dot, write_network};
use quartetnet::network::{Level1Network, QuartetOracle};
use quartetnet::quartet::{parse_quartets, parse_quartets_with, write_quartets};
use quartetnet::{QuartetSet, Taxon, TaxonSet};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnStatus {
    Ok = 0,
    /// A required pointer argument was null.
    ErrNull = 1,
    /// A string argument was not valid UTF-8.
    ErrUtf8 = 2,
    /// Input text could not be parsed.
    ErrParse = 3,
    /// Arguments were well formed but unusable, such as an unknown anchor.
    ErrInvalid = 4,
    /// The quartets admit no network; the result carries a certificate.
    Inconsistent = 5,
    /// The quartets do not determine a network; the result names a 4-set.
    Witness = 6,
    /// Fast mode rejected the input.
    NotLevel1Like = 7,
    ErrInternal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnMode {
    Auto = 0,
    General = 1,
    Fast = 2,
}

/// A set of quartets together with the taxon names they use.
pub struct QnQuartetSet {
    quartets: QuartetSet,
    taxa: TaxonSet,
}

pub struct QnNetwork {
    network: Level1Network,
}

/// The outcome of a reconstruction.
pub struct QnResult {
    status: QnStatus,
    network: Option<QnNetwork>,
    certificate: Option<QnQuartetSet>,
    witness: Option<String>,
    message: Option<String>,
    dim: i64,
    dim_split_space: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

struct Fail(QnStatus);

fn fail(status: QnStatus, msg: impl ToString) -> Fail {
    set_error(msg);
    Fail(status)
}

/// Runs `f`, converting panics into `ErrInternal`.
fn guard(f: impl FnOnce() -> Result<QnStatus, Fail>) -> QnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status))) => status,
        Err(_) => {
            set_error("internal error");
            QnStatus::ErrInternal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(QnStatus::ErrNull, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(QnStatus::ErrUtf8, "string argument is not UTF-8"))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(QnStatus::ErrNull, "null handle"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| fail(QnStatus::ErrNull, "null output pointer"))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message describing the most recent error on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses quartet lines `a b | c d`. Taxa are numbered in order of first
/// appearance.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_quartets_parse(text: *const c_char, out: *mut *mut QnQuartetSet) -> QnStatus {
    guard(|| {
        let out = out_arg(out)?;
        let text = str_arg(text)?;
        let file = parse_quartets(text).map_err(|e| fail(QnStatus::ErrParse, e))?;
        *out = boxed(QnQuartetSet {
            quartets: file.quartets,
            taxa: file.taxa,
        });
        Ok(QnStatus::Ok)
    })
}

/// Parses quartets over a fixed list of `count` taxon names; any other name
/// is a parse error.
///
/// # Safety
/// `names` must point to `count` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn qn_quartets_parse_with_taxa(
    text: *const c_char,
    names: *const *const c_char,
    count: usize,
    out: *mut *mut QnQuartetSet,
) -> QnStatus {
    guard(|| {
        let out = out_arg(out)?;
        let text = str_arg(text)?;
        if names.is_null() && count > 0 {
            return Err(fail(QnStatus::ErrNull, "null name list"));
        }
        let mut list = Vec::with_capacity(count);
        for i in 0..count {
            list.push(str_arg(*names.add(i))?);
        }
        let mut taxa = TaxonSet::from_names(&list).map_err(|e| fail(QnStatus::ErrInvalid, e))?;
        let quartets = parse_quartets_with(text, &mut taxa, false).map_err(|e| fail(QnStatus::ErrParse, e))?;
        *out = boxed(QnQuartetSet { quartets, taxa });
        Ok(QnStatus::Ok)
    })
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qn_quartets_free(set: *mut QnQuartetSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of distinct quartets, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qn_quartets_len(set: *const QnQuartetSet) -> usize {
    set.as_ref().map_or(0, |s| s.quartets.len())
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qn_quartets_num_taxa(set: *const QnQuartetSet) -> usize {
    set.as_ref().map_or(0, |s| s.taxa.len())
}

/// Writes the quartets, one per line.
///
/// # Safety
/// `set` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_quartets_write(set: *const QnQuartetSet, out: *mut *mut c_char) -> QnStatus {
    guard(|| {
        let set = ref_arg(set)?;
        let out = out_arg(out)?;
        *out = to_c_string(write_quartets(&set.quartets, &set.taxa));
        Ok(QnStatus::Ok)
    })
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_network_parse(text: *const c_char, out: *mut *mut QnNetwork) -> QnStatus {
    guard(|| {
        let out = out_arg(out)?;
        let text = str_arg(text)?;
        let network = parse_network(text).map_err(|e| fail(QnStatus::ErrParse, e))?;
        *out = boxed(QnNetwork { network });
        Ok(QnStatus::Ok)
    })
}

/// Random network on `n` taxa; each admissible split is kept with
/// probability `p_split`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_network_generate(n: usize, p_split: f64, seed: u64, out: *mut *mut QnNetwork) -> QnStatus {
    guard(|| {
        let out = out_arg(out)?;
        let network = random_network(n, p_split, seed).map_err(|e| fail(QnStatus::ErrInvalid, e))?;
        *out = boxed(QnNetwork { network });
        Ok(QnStatus::Ok)
    })
}

/// # Safety
/// `net` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qn_network_free(net: *mut QnNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qn_network_num_taxa(net: *const QnNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.network.num_taxa())
}

/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_network_write(net: *const QnNetwork, out: *mut *mut c_char) -> QnStatus {
    guard(|| {
        let net = ref_arg(net)?;
        let out = out_arg(out)?;
        *out = to_c_string(write_network(&net.network));
        Ok(QnStatus::Ok)
    })
}

/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_network_write_dot(net: *const QnNetwork, out: *mut *mut c_char) -> QnStatus {
    guard(|| {
        let net = ref_arg(net)?;
        let out = out_arg(out)?;
        *out = to_c_string(write_dot(&net.network));
        Ok(QnStatus::Ok)
    })
}

/// Quartets displayed by the network; only those containing `anchor` when
/// it is non-null.
///
/// # Safety
/// `net` must be a live handle, `anchor` null or a NUL-terminated string,
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_network_quartets(
    net: *const QnNetwork,
    anchor: *const c_char,
    out: *mut *mut QnQuartetSet,
) -> QnStatus {
    guard(|| {
        let net = ref_arg(net)?;
        let out = out_arg(out)?;
        let taxa = net.network.taxa();
        let anchor = if anchor.is_null() {
            None
        } else {
            Some(taxa.require(str_arg(anchor)?).map_err(|e| fail(QnStatus::ErrInvalid, e))?)
        };
        *out = boxed(QnQuartetSet {
            quartets: quartets_of(&net.network, anchor),
            taxa: taxa.clone(),
        });
        Ok(QnStatus::Ok)
    })
}

/// `Ok` if the network displays every quartet, `Inconsistent` otherwise.
/// `missing`, when non-null, receives the number not displayed.
///
/// # Safety
/// `net` and `set` must be live handles; `missing` null or valid.
#[no_mangle]
pub unsafe extern "C" fn qn_network_verify(
    net: *const QnNetwork,
    set: *const QnQuartetSet,
    missing: *mut usize,
) -> QnStatus {
    guard(|| {
        let net = ref_arg(net)?;
        let set = ref_arg(set)?;
        let g = &net.network;
        let mut count = 0;
        if g.num_taxa() >= 4 {
            let oracle = QuartetOracle::new(g);
            for q in set.quartets.iter() {
                let names = q.pairs().map(|p| p.map(|t| set.taxa.name(t)));
                let mut mapped = [[Taxon(0); 2]; 2];
                for (i, pair) in names.iter().enumerate() {
                    for (j, name) in pair.iter().enumerate() {
                        mapped[i][j] = g.taxa().require(name).map_err(|e| fail(QnStatus::ErrInvalid, e))?;
                    }
                }
                let q = quartetnet::Quartet::new(mapped[0], mapped[1]).map_err(|e| fail(QnStatus::ErrInvalid, e))?;
                if !oracle.displays(&q) {
                    count += 1;
                }
            }
        }
        if let Some(m) = missing.as_mut() {
            *m = count;
        }
        Ok(if count == 0 { QnStatus::Ok } else { QnStatus::Inconsistent })
    })
}

/// 1 if both networks have the same taxa, splits and quartets, else 0.
///
/// # Safety
/// `a` and `b` must be null or live handles.
#[no_mangle]
pub unsafe extern "C" fn qn_network_equal(a: *const QnNetwork, b: *const QnNetwork) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => catch_unwind(AssertUnwindSafe(|| networks_equal(&a.network, &b.network) as i32)).unwrap_or(0),
        _ => 0,
    }
}

/// Reconstructs a network from `set`. The anchor defaults to the first
/// taxon when null. Returns the outcome status; for `Ok`, `Inconsistent`,
/// `Witness` and `NotLevel1Like` a result handle is stored in `out`.
///
/// # Safety
/// `set` must be a live handle, `anchor` null or a NUL-terminated string,
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_reconstruct(
    set: *const QnQuartetSet,
    anchor: *const c_char,
    mode: QnMode,
    verify: bool,
    out: *mut *mut QnResult,
) -> QnStatus {
    guard(|| {
        let set = ref_arg(set)?;
        let out = out_arg(out)?;
        let taxa = &set.taxa;
        let anchor = if anchor.is_null() {
            if taxa.is_empty() {
                return Err(fail(QnStatus::ErrInvalid, "no taxa"));
            }
            Taxon(0)
        } else {
            taxa.require(str_arg(anchor)?).map_err(|e| fail(QnStatus::ErrInvalid, e))?
        };
        let mode = match mode {
            QnMode::Auto => Mode::Auto,
            QnMode::General => Mode::General,
            QnMode::Fast => Mode::Fast,
        };
        let solution = solve(&set.quartets, taxa, anchor, mode, verify).map_err(|e| fail(QnStatus::ErrInvalid, e))?;
        let mut result = QnResult {
            status: QnStatus::Ok,
            network: None,
            certificate: None,
            witness: None,
            message: None,
            dim: -1,
            dim_split_space: -1,
        };
        match solution.outcome {
            Solved::Network(r) => {
                result.dim = r.dim as i64;
                result.dim_split_space = r.dim_split_space as i64;
                result.network = Some(QnNetwork { network: r.network });
            }
            Solved::Inconsistent(cert) => {
                result.status = QnStatus::Inconsistent;
                result.message = Some(
                    match cert.reason {
                        InconsistencyReason::Infeasible => "no common solution",
                        InconsistencyReason::NoCyclicSolution => "no cyclic solution",
                    }
                    .to_string(),
                );
                result.certificate = Some(QnQuartetSet {
                    quartets: cert.quartets.into_iter().collect(),
                    taxa: taxa.clone(),
                });
            }
            Solved::Witness(z) => {
                result.status = QnStatus::Witness;
                result.witness = Some(z.iter().map(|&t| taxa.name(t)).collect::<Vec<_>>().join(" "));
            }
            Solved::Rejected(report) => {
                result.status = QnStatus::NotLevel1Like;
                result.message = Some(report.describe(taxa));
            }
        }
        let status = result.status;
        *out = boxed(result);
        Ok(status)
    })
}

/// # Safety
/// `res` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qn_result_free(res: *mut QnResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qn_result_status(res: *const QnResult) -> QnStatus {
    res.as_ref().map_or(QnStatus::ErrNull, |r| r.status)
}

/// The reconstructed network, borrowed from the result; null unless the
/// status is `Ok`.
///
/// # Safety
/// `res` must be null or a live handle. The returned pointer is valid until
/// the result is freed.
#[no_mangle]
pub unsafe extern "C" fn qn_result_network(res: *const QnResult) -> *const QnNetwork {
    res.as_ref()
        .and_then(|r| r.network.as_ref())
        .map_or(ptr::null(), |n| n as *const QnNetwork)
}

/// Copies the certificate of an inconsistent result into a new set.
///
/// # Safety
/// `res` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_certificate(res: *const QnResult, out: *mut *mut QnQuartetSet) -> QnStatus {
    guard(|| {
        let res = ref_arg(res)?;
        let out = out_arg(out)?;
        let cert = res
            .certificate
            .as_ref()
            .ok_or_else(|| fail(QnStatus::ErrInvalid, "result has no certificate"))?;
        *out = boxed(QnQuartetSet {
            quartets: cert.quartets.clone(),
            taxa: cert.taxa.clone(),
        });
        Ok(QnStatus::Ok)
    })
}

/// The witness 4-set as space-separated names.
///
/// # Safety
/// `res` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_witness(res: *const QnResult, out: *mut *mut c_char) -> QnStatus {
    guard(|| {
        let res = ref_arg(res)?;
        let out = out_arg(out)?;
        let w = res
            .witness
            .as_ref()
            .ok_or_else(|| fail(QnStatus::ErrInvalid, "result has no witness"))?;
        *out = to_c_string(w.clone());
        Ok(QnStatus::Ok)
    })
}

/// Human-readable detail for inconsistent or rejected results.
///
/// # Safety
/// `res` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_message(res: *const QnResult, out: *mut *mut c_char) -> QnStatus {
    guard(|| {
        let res = ref_arg(res)?;
        let out = out_arg(out)?;
        *out = to_c_string(res.message.clone().unwrap_or_default());
        Ok(QnStatus::Ok)
    })
}

/// Dimension of the solution space, or -1 when no network was built.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qn_result_dimension(res: *const QnResult) -> i64 {
    res.as_ref().map_or(-1, |r| r.dim)
}

/// Dimension of the space spanned by the network's splits, or -1.
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qn_result_split_dimension(res: *const QnResult) -> i64 {
    res.as_ref().map_or(-1, |r| r.dim_split_space)
}
