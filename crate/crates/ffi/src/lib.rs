//! C ABI for miscluster.
//!
//! Objects are opaque handles created by `mis_*_load` / `mis_cluster_*` and
//! released by the matching `*_free`. Every call returns a [`MisStatus`];
//! on failure `mis_last_error` describes the problem for the calling thread.
//! Strings returned by the library must be released with `mis_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use miscluster::engine::{cluster, ClusteringResult, EngineConfig, ResultDocument};
use miscluster::eval::{kmodes_cluster, purity};
use miscluster::ingest::{load_delimited, CategoricalDataset, IngestOptions};
use miscluster::summarize::{render_report, summarize_result, ReportOptions};
use miscluster::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MisStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    InvalidInput = 4,
    /// The algorithm could not proceed (for example, nothing left to split).
    Algorithm = 5,
    MissingLabels = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A loaded dataset.
pub struct MisDataset {
    inner: Arc<CategoricalDataset>,
    ingest: IngestOptions,
}

/// A clustering of a dataset. Keeps its dataset alive.
pub struct MisResult {
    dataset: Arc<CategoricalDataset>,
    ingest: IngestOptions,
    inner: ClusteringResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> MisStatus {
    match err {
        Error::Io { .. } => MisStatus::Io,
        Error::MissingLabels => MisStatus::MissingLabels,
        e if !e.is_input_error() => MisStatus::Algorithm,
        _ => MisStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), MisStatus>) -> MisStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MisStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            MisStatus::Panic
        }
    }
}

fn fail(err: Error) -> MisStatus {
    set_error(err.to_string());
    status_of(&err)
}

fn null(what: &str) -> MisStatus {
    set_error(format!("{what} is null"));
    MisStatus::NullPointer
}

fn invalid(message: impl Into<String>) -> MisStatus {
    set_error(message);
    MisStatus::InvalidArgument
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, MisStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

fn boxed<T>(value: T, out: *mut *mut T) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

fn finish_result(ds: &MisDataset, outcome: miscluster::Result<ClusteringResult>, out: *mut *mut MisResult) -> Result<(), MisStatus> {
    let inner = outcome.map_err(fail)?;
    boxed(
        MisResult {
            dataset: Arc::clone(&ds.inner),
            ingest: ds.ingest.clone(),
            inner,
        },
        out,
    );
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mis_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn mis_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Load a delimited file. `class_col` < 0 means the file has no class column.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mis_dataset_load(
    path: *const c_char,
    delimiter: c_char,
    has_header: bool,
    class_col: i64,
    out: *mut *mut MisDataset,
) -> MisStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let delimiter = delimiter as u8;
        if !delimiter.is_ascii() || delimiter == 0 {
            return Err(invalid("delimiter must be a non-NUL ASCII character"));
        }
        let ingest = IngestOptions {
            delimiter: delimiter as char,
            has_header,
            class_column: usize::try_from(class_col).ok(),
            ..IngestOptions::default()
        };
        let dataset = load_delimited(path, &ingest).map_err(fail)?;
        boxed(
            MisDataset {
                inner: Arc::new(dataset),
                ingest,
            },
            out,
        );
        Ok(())
    })
}

/// # Safety
/// `dataset` must come from `mis_dataset_load` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mis_dataset_free(dataset: *mut MisDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_dataset_n_rows(dataset: *const MisDataset, out: *mut usize) -> MisStatus {
    guard(|| {
        let ds = as_ref(dataset, "dataset")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ds.inner.n_rows();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_dataset_n_attributes(dataset: *const MisDataset, out: *mut usize) -> MisStatus {
    guard(|| {
        let ds = as_ref(dataset, "dataset")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ds.inner.n_attributes();
        Ok(())
    })
}

/// Cluster into `k` groups. A shortfall still succeeds; check
/// `mis_result_has_warning`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_cluster_fixed_k(dataset: *const MisDataset, k: usize, out: *mut *mut MisResult) -> MisStatus {
    guard(|| {
        let ds = as_ref(dataset, "dataset")?;
        if out.is_null() {
            return Err(null("out"));
        }
        finish_result(ds, cluster(&ds.inner, &EngineConfig::fixed_k(k)), out)
    })
}

/// Cluster with the automatic stopping rule and stop ratio `theta`
/// (0.9 is the default used elsewhere).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_cluster_auto(dataset: *const MisDataset, theta: f64, out: *mut *mut MisResult) -> MisStatus {
    guard(|| {
        let ds = as_ref(dataset, "dataset")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let config = EngineConfig::auto().with_auto_stop_ratio(theta);
        finish_result(ds, cluster(&ds.inner, &config), out)
    })
}

/// k-modes baseline with `n_init` seeded restarts.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_kmodes(
    dataset: *const MisDataset,
    k: usize,
    seed: u64,
    n_init: usize,
    out: *mut *mut MisResult,
) -> MisStatus {
    guard(|| {
        let ds = as_ref(dataset, "dataset")?;
        if out.is_null() {
            return Err(null("out"));
        }
        finish_result(ds, kmodes_cluster(&ds.inner, k, seed, n_init), out)
    })
}

/// # Safety
/// `result` must come from a `mis_cluster_*` call and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mis_result_free(result: *mut MisResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_result_n_clusters(result: *const MisResult, out: *mut usize) -> MisStatus {
    guard(|| {
        let r = as_ref(result, "result")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.n_clusters();
        Ok(())
    })
}

/// Whether a fixed-k run produced fewer clusters than requested.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_result_has_warning(result: *const MisResult, out: *mut bool) -> MisStatus {
    guard(|| {
        let r = as_ref(result, "result")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.warning.is_some();
        Ok(())
    })
}

/// Write the cluster index of each row into `buf`, which must hold at least
/// as many entries as the dataset has rows.
///
/// # Safety
/// `buf` must point to `len` writable `size_t` values.
#[no_mangle]
pub unsafe extern "C" fn mis_result_assignments(result: *const MisResult, buf: *mut usize, len: usize) -> MisStatus {
    guard(|| {
        let r = as_ref(result, "result")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < r.inner.n_rows {
            set_error(format!("buffer holds {len} entries, need {}", r.inner.n_rows));
            return Err(MisStatus::BufferTooSmall);
        }
        let dst = std::slice::from_raw_parts_mut(buf, r.inner.n_rows);
        dst.copy_from_slice(&r.inner.assignments());
        Ok(())
    })
}

/// Purity against the dataset's class column.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_result_purity(result: *const MisResult, out: *mut f64) -> MisStatus {
    guard(|| {
        let r = as_ref(result, "result")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let labels = r.dataset.labels().ok_or_else(|| fail(Error::MissingLabels))?;
        *out = purity(&r.inner, labels).map_err(fail)?;
        Ok(())
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> Result<(), MisStatus> {
    let s = CString::new(text).map_err(|_| invalid("output contains NUL"))?;
    // SAFETY: callers check `out` for null first.
    unsafe { *out = s.into_raw() };
    Ok(())
}

/// The result as a JSON document. Release with `mis_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_result_to_json(result: *const MisResult, out: *mut *mut c_char) -> MisStatus {
    guard(|| {
        let r = as_ref(result, "result")?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(ResultDocument::from_result(&r.dataset, &r.inner, Some(&r.ingest)).to_json(), out)
    })
}

/// Text profile of every cluster, showing the `top` most divergent
/// attributes each. Release with `mis_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mis_result_summary(result: *const MisResult, top: usize, out: *mut *mut c_char) -> MisStatus {
    guard(|| {
        let r = as_ref(result, "result")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let summaries = summarize_result(&r.dataset, &r.inner).map_err(fail)?;
        let options = ReportOptions {
            top_attributes: top,
            top_categories: None,
        };
        give_string(render_report(&summaries, &options).text, out)
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mis_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
