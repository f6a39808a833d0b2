//! C ABI over the slopeflow library.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `sf_*_new` style function and released by the matching `sf_*_free`.
//! Fallible calls return an [`SfStatus`]; the message of the most recent
//! failure on the calling thread is available from [`sf_last_error`].
//! Panics never unwind into C: they are caught and reported as
//! `SF_STATUS_PANIC`.
//!
//! The header `include/slopeflow.h` is regenerated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use slopeflow::cli::{analyze_series, load_input, PipelineError, RunConfig};
use slopeflow::netflow::{
    gomory_hu_tree, max_flow, ratio_constrained_cut, CapacitatedNetwork, CutResult, GomoryHuTree,
    NetflowError, RhoWindow,
};
use slopeflow::stability::StabilityTimeline;

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or malformed.
    InvalidArgument = 2,
    /// The network is not connected.
    Disconnected = 3,
    /// No cut satisfies the requested ratio window.
    NoAdmissibleCut = 4,
    /// A file could not be read or written.
    Io = 5,
    /// The run configuration is invalid.
    Config = 6,
    /// The analysis failed on valid input.
    Analysis = 7,
    /// An internal panic was caught at the boundary.
    Panic = 99,
}

/// Undirected network with link capacities.
pub struct SfNetwork(CapacitatedNetwork);

/// Cut tree of an [`SfNetwork`].
pub struct SfTree(GomoryHuTree);

/// A bipartition of a network and its crossing links.
pub struct SfCut(CutResult);

/// Stability analysis of a displacement series.
pub struct SfTimeline(StabilityTimeline);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

type Failure = (SfStatus, String);

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn netflow_failure(e: NetflowError) -> Failure {
    let status = match e {
        NetflowError::Disconnected { .. } => SfStatus::Disconnected,
        NetflowError::NoAdmissibleCut { .. } => SfStatus::NoAdmissibleCut,
        _ => SfStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn pipeline_failure(e: PipelineError) -> Failure {
    let status = match e {
        PipelineError::Config(_) => SfStatus::Config,
        PipelineError::Input(_) | PipelineError::Output(_) => SfStatus::Io,
        PipelineError::NoAdmissibleCut { .. } => SfStatus::NoAdmissibleCut,
        _ => SfStatus::Analysis,
    };
    (status, e.to_string())
}

fn null(what: &str) -> Failure {
    (SfStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records its failure message and keeps panics on this side.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            SfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SfStatus::Panic
        }
    }
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SfStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: callers pass either null or a pointer to writable storage.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last failure message of the calling thread into `buf`
/// (truncated and always NUL-terminated when `len > 0`) and returns the
/// buffer size needed for the whole message including the terminator.
/// The message is empty after a successful call.
///
/// # Safety
/// `buf` must be null or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sf_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Builds a network on nodes `0..n` from `m` links `(lo[k], hi[k])` with
/// capacities `capacity[k]`. Link order does not matter.
///
/// # Safety
/// `lo`, `hi` and `capacity` must each point to `m` readable elements
/// (they may be null when `m == 0`); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_network_new(
    n: usize,
    lo: *const usize,
    hi: *const usize,
    capacity: *const f64,
    m: usize,
    out: *mut *mut SfNetwork,
) -> SfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let lo = slice_arg(lo, m, "lo")?;
        let hi = slice_arg(hi, m, "hi")?;
        let capacity = slice_arg(capacity, m, "capacity")?;
        let links = (0..m).map(|k| (lo[k], hi[k], capacity[k]));
        let net = CapacitatedNetwork::new(n, links).map_err(netflow_failure)?;
        *out = boxed(SfNetwork(net));
        Ok(())
    })
}

/// Releases a network. Null is ignored.
///
/// # Safety
/// `net` must be null or come from [`sf_network_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sf_network_free(net: *mut SfNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Node count of `net`, or 0 when `net` is null.
///
/// # Safety
/// `net` must be null or a live network handle.
#[no_mangle]
pub unsafe extern "C" fn sf_network_node_count(net: *const SfNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.node_count())
}

/// Maximum flow value between `source` and `sink`.
///
/// # Safety
/// `net` must be a live network handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_max_flow(
    net: *const SfNetwork,
    source: usize,
    sink: usize,
    value: *mut f64,
) -> SfStatus {
    guard(|| {
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        let value = out_arg(value, "value")?;
        *value = max_flow(&net.0, source, sink).map_err(netflow_failure)?.value;
        Ok(())
    })
}

/// Builds the cut tree of a connected network.
///
/// # Safety
/// `net` must be a live network handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_tree_new(net: *const SfNetwork, out: *mut *mut SfTree) -> SfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        let tree = gomory_hu_tree(&net.0).map_err(netflow_failure)?;
        *out = boxed(SfTree(tree));
        Ok(())
    })
}

/// Releases a cut tree. Null is ignored.
///
/// # Safety
/// `tree` must be null or come from [`sf_tree_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sf_tree_free(tree: *mut SfTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Minimum cut capacity between nodes `u` and `v`, read from the tree.
///
/// # Safety
/// `tree` must be a live tree handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_tree_min_cut_value(
    tree: *const SfTree,
    u: usize,
    v: usize,
    value: *mut f64,
) -> SfStatus {
    guard(|| {
        let tree = tree.as_ref().ok_or_else(|| null("tree"))?;
        let value = out_arg(value, "value")?;
        let n = tree.0.node_count();
        if u >= n || v >= n || u == v {
            return Err((SfStatus::InvalidArgument, format!("need two distinct nodes below {n} (got {u}, {v})")));
        }
        *value = tree.0.min_cut_value(u, v);
        Ok(())
    })
}

/// Least-capacity tree cut whose node-count ratio lies in
/// `[rho_min, rho_max]`. Returns `SF_STATUS_NO_ADMISSIBLE_CUT` when none
/// does.
///
/// # Safety
/// `tree` and `net` must be live handles, the tree built from that network,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_bottleneck(
    tree: *const SfTree,
    net: *const SfNetwork,
    rho_min: f64,
    rho_max: f64,
    out: *mut *mut SfCut,
) -> SfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let tree = tree.as_ref().ok_or_else(|| null("tree"))?;
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        let window = RhoWindow::new(rho_min, rho_max).map_err(netflow_failure)?;
        let cut = ratio_constrained_cut(&tree.0, &net.0, window).map_err(netflow_failure)?;
        *out = boxed(SfCut(cut));
        Ok(())
    })
}

/// Releases a cut. Null is ignored.
///
/// # Safety
/// `cut` must be null or come from [`sf_bottleneck`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sf_cut_free(cut: *mut SfCut) {
    if !cut.is_null() {
        drop(Box::from_raw(cut));
    }
}

/// Capacity of `cut`, or NaN when `cut` is null.
///
/// # Safety
/// `cut` must be null or a live cut handle.
#[no_mangle]
pub unsafe extern "C" fn sf_cut_capacity(cut: *const SfCut) -> f64 {
    cut.as_ref().map_or(f64::NAN, |c| c.0.capacity)
}

/// Smaller side size over larger side size, or NaN when `cut` is null.
///
/// # Safety
/// `cut` must be null or a live cut handle.
#[no_mangle]
pub unsafe extern "C" fn sf_cut_ratio(cut: *const SfCut) -> f64 {
    cut.as_ref().map_or(f64::NAN, |c| c.0.ratio)
}

/// Number of links crossing `cut`, or 0 when `cut` is null.
///
/// # Safety
/// `cut` must be null or a live cut handle.
#[no_mangle]
pub unsafe extern "C" fn sf_cut_link_count(cut: *const SfCut) -> usize {
    cut.as_ref().map_or(0, |c| c.0.links.len())
}

/// Copies up to `len` node ids of the cut side `W` (increasing) into `buf`
/// and returns the full size of that side. Call with `len == 0` to size the
/// buffer.
///
/// # Safety
/// `cut` must be a live cut handle; `buf` must be null or point to `len`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn sf_cut_side(cut: *const SfCut, buf: *mut usize, len: usize) -> usize {
    let Some(cut) = cut.as_ref() else { return 0 };
    let side = &cut.0.side_w;
    if !buf.is_null() {
        ptr::copy_nonoverlapping(side.as_ptr(), buf, side.len().min(len));
    }
    side.len()
}

/// Loads a displacement CSV and runs the stability analysis in memory.
/// `config_json` may be null for defaults; when given it uses the same
/// schema as the command-line `--config` file, with `input` replaced by
/// `input_path`. Nothing is written to disk.
///
/// # Safety
/// `input_path` must be a NUL-terminated string, `config_json` null or a
/// NUL-terminated string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_analyze_csv(
    input_path: *const c_char,
    config_json: *const c_char,
    out: *mut *mut SfTimeline,
) -> SfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let input = str_arg(input_path, "input_path")?;
        let mut cfg = if config_json.is_null() {
            RunConfig::default()
        } else {
            RunConfig::from_json(str_arg(config_json, "config_json")?).map_err(pipeline_failure)?
        };
        cfg.input = PathBuf::from(input);
        cfg.validate().map_err(pipeline_failure)?;
        let (series, contacts) = load_input(&cfg).map_err(pipeline_failure)?;
        let (timeline, _) = analyze_series(&series, contacts.as_ref(), &cfg).map_err(pipeline_failure)?;
        *out = boxed(SfTimeline(timeline));
        Ok(())
    })
}

/// Releases a timeline. Null is ignored.
///
/// # Safety
/// `tl` must be null or come from [`sf_analyze_csv`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sf_timeline_free(tl: *mut SfTimeline) {
    if !tl.is_null() {
        drop(Box::from_raw(tl));
    }
}

/// Number of analyzed states, or 0 when `tl` is null.
///
/// # Safety
/// `tl` must be null or a live timeline handle.
#[no_mangle]
pub unsafe extern "C" fn sf_timeline_len(tl: *const SfTimeline) -> usize {
    tl.as_ref().map_or(0, |t| t.0.states.len())
}

/// Series state index of analyzed entry `i`. Returns false when `i` is out
/// of range.
///
/// # Safety
/// `tl` must be a live timeline handle and `state` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_timeline_state(tl: *const SfTimeline, i: usize, state: *mut usize) -> bool {
    match (tl.as_ref().and_then(|t| t.0.states.get(i)), state.as_mut()) {
        (Some(s), Some(out)) => {
            *out = s.t;
            true
        }
        _ => false,
    }
}

/// Failure resistance of analyzed entry `i`. Returns false when `i` is out
/// of range or the state has no admissible cut.
///
/// # Safety
/// `tl` must be a live timeline handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_timeline_failure_resistance(tl: *const SfTimeline, i: usize, value: *mut f64) -> bool {
    match (tl.as_ref().and_then(|t| t.0.states.get(i)).and_then(|s| s.failure_resistance), value.as_mut()) {
        (Some(f), Some(out)) => {
            *out = f;
            true
        }
        _ => false,
    }
}

/// Series state index of the regime change. Returns false when none was
/// detected.
///
/// # Safety
/// `tl` must be a live timeline handle and `state` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_timeline_regime_change(tl: *const SfTimeline, state: *mut usize) -> bool {
    match (tl.as_ref().and_then(|t| t.0.regime_change), state.as_mut()) {
        (Some(t), Some(out)) => {
            *out = t;
            true
        }
        _ => false,
    }
}

/// Failure-time forecast at the last analyzed state, in state units.
/// Returns false when no forecast passed the fit gate.
///
/// # Safety
/// `tl` must be a live timeline handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_timeline_failure_time(tl: *const SfTimeline, value: *mut f64) -> bool {
    match (tl.as_ref().and_then(|t| t.0.forecast()).and_then(|f| f.t_failure), value.as_mut()) {
        (Some(tf), Some(out)) => {
            *out = tf;
            true
        }
        _ => false,
    }
}
