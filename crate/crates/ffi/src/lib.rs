//! C ABI for the edgepart toolkit.
//!
//! Handles are opaque pointers created and destroyed here; every fallible
//! call returns an [`EpStatus`] and leaves a detailed message retrievable
//! via [`ep_last_error_message`]. A partition handle keeps its graph alive
//! internally, so the graph handle may be freed first. The regenerated
//! header lives in `include/edgepart.h` (see `cbindgen.toml`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use edgepart::lsg::LsgConfig;
use edgepart::lsf::LsfConfig;
use edgepart::partfile;
use edgepart::{Alpha, Error, Graph, Partition};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpStatus {
    EpOk = 0,
    EpNullPointer = 1,
    EpInvalidArgument = 2,
    EpIo = 3,
    EpParse = 4,
    EpUnbalanced = 5,
    EpInternal = 6,
}

/// Opaque graph handle.
pub struct EpGraph {
    inner: Arc<Graph>,
}

/// Opaque partition handle; owns a reference to its graph.
pub struct EpPartition {
    inner: Partition,
}

/// Refinement summary written by `ep_refine_lsg` / `ep_refine_lsf`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct EpRefineStats {
    pub rf_before: f64,
    pub rf_after: f64,
    pub copies_before: u64,
    pub copies_after: u64,
    pub rounds: u64,
    pub adjust_success: u64,
    pub adjust_failed: u64,
    pub blocks_applied: u64,
    pub blocks_reverted: u64,
    pub wall_time_ms: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cstring = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &Error) -> EpStatus {
    match err {
        Error::Io(_) => EpStatus::EpIo,
        Error::Parse { .. } | Error::EmptyGraph | Error::PartitionFile(_) => EpStatus::EpParse,
        Error::InvalidAlpha(_) | Error::InvalidParam(_) => EpStatus::EpInvalidArgument,
        Error::Unbalanced { .. } => EpStatus::EpUnbalanced,
        Error::StaleBlock(_) => EpStatus::EpInternal,
    }
}

fn fail(err: Error) -> EpStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn invalid(message: &str) -> EpStatus {
    set_error(message.to_string());
    EpStatus::EpInvalidArgument
}

fn null_pointer(what: &str) -> EpStatus {
    set_error(format!("{what} is a null pointer"));
    EpStatus::EpNullPointer
}

/// Last error message for this thread, as a newly allocated C string the
/// caller must release with [`ep_string_free`]. Null if no error occurred.
#[no_mangle]
pub extern "C" fn ep_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned by
/// [`ep_last_error_message`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn path_from(ptr: *const c_char) -> Result<PathBuf, EpStatus> {
    if ptr.is_null() {
        return Err(null_pointer("path"));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => Err(invalid("path is not valid UTF-8")),
    }
}

fn alpha_from(millis: u64) -> Result<Alpha, EpStatus> {
    Alpha::from_millis(millis).map_err(fail)
}

/// Load and normalize an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_graph_load_file(
    path: *const c_char,
    out: *mut *mut EpGraph,
) -> EpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match Graph::load_edge_list_path(path) {
        Ok((graph, _)) => {
            *out = Box::into_raw(Box::new(EpGraph { inner: Arc::new(graph) }));
            EpStatus::EpOk
        }
        Err(err) => fail(err),
    }
}

/// Build a graph from `m` edges given as `2m` endpoint ids.
///
/// # Safety
/// `endpoints` must point to `2 * m` readable u64 values; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_graph_from_edges(
    n: u64,
    endpoints: *const u64,
    m: u64,
    out: *mut *mut EpGraph,
) -> EpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if endpoints.is_null() && m > 0 {
        return null_pointer("endpoints");
    }
    let pairs: Vec<(usize, usize)> = (0..m as usize)
        .map(|i| {
            let u = *endpoints.add(2 * i);
            let v = *endpoints.add(2 * i + 1);
            (u as usize, v as usize)
        })
        .collect();
    match Graph::from_edges(n as usize, &pairs) {
        Ok(graph) => {
            *out = Box::into_raw(Box::new(EpGraph { inner: Arc::new(graph) }));
            EpStatus::EpOk
        }
        Err(err) => fail(err),
    }
}

/// Write the normalized edge list of a graph.
///
/// # Safety
/// `graph` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ep_graph_save_file(
    graph: *const EpGraph,
    path: *const c_char,
) -> EpStatus {
    let Some(g) = graph.as_ref() else {
        return null_pointer("graph");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match g.inner.write_edge_list_path(path) {
        Ok(()) => EpStatus::EpOk,
        Err(err) => fail(Error::Io(err)),
    }
}

/// # Safety
/// `graph` must be null or a live handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ep_graph_free(graph: *mut EpGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle (returns 0 on null).
#[no_mangle]
pub unsafe extern "C" fn ep_graph_vertex_count(graph: *const EpGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.vertex_count() as u64)
}

/// # Safety
/// `graph` must be a live handle (returns 0 on null).
#[no_mangle]
pub unsafe extern "C" fn ep_graph_edge_count(graph: *const EpGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.edge_count() as u64)
}

/// # Safety
/// `graph` must be a live handle (returns NaN on null).
#[no_mangle]
pub unsafe extern "C" fn ep_graph_average_degree(graph: *const EpGraph) -> f64 {
    graph.as_ref().map_or(f64::NAN, |g| g.inner.average_degree())
}

unsafe fn new_partition(
    graph: *const EpGraph,
    k: u64,
    alpha_millis: u64,
    assign: Vec<usize>,
    out: *mut *mut EpPartition,
) -> EpStatus {
    let Some(g) = graph.as_ref() else {
        return null_pointer("graph");
    };
    let alpha = match alpha_from(alpha_millis) {
        Ok(a) => a,
        Err(status) => return status,
    };
    match Partition::new(Arc::clone(&g.inner), k as usize, alpha, assign) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(EpPartition { inner }));
            EpStatus::EpOk
        }
        Err(err) => fail(err),
    }
}

/// Seeded random balanced partition (shuffle + round-robin deal).
/// `alpha_millis` is the balance parameter in thousandths (1100 = 1.1).
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_partition_random(
    graph: *const EpGraph,
    k: u64,
    alpha_millis: u64,
    seed: u64,
    out: *mut *mut EpPartition,
) -> EpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let Some(g) = graph.as_ref() else {
        return null_pointer("graph");
    };
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let assign = edgepart::instances::initial_random(&g.inner, k as usize, seed);
    new_partition(graph, k, alpha_millis, assign, out)
}

/// Deterministic baseline partition: edge id modulo k.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_partition_hash(
    graph: *const EpGraph,
    k: u64,
    alpha_millis: u64,
    out: *mut *mut EpPartition,
) -> EpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let Some(g) = graph.as_ref() else {
        return null_pointer("graph");
    };
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let assign = edgepart::instances::initial_hash(&g.inner, k as usize);
    new_partition(graph, k, alpha_millis, assign, out)
}

/// Read a partition file (either supported format) against a graph. The
/// part count comes from the file header, or the largest part id plus one.
///
/// # Safety
/// `graph` must be a live handle, `path` a NUL-terminated string, `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_partition_load_file(
    graph: *const EpGraph,
    path: *const c_char,
    alpha_millis: u64,
    out: *mut *mut EpPartition,
) -> EpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    let Some(g) = graph.as_ref() else {
        return null_pointer("graph");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let (assign, header_k) = match partfile::read_partition_path(path, &g.inner) {
        Ok(v) => v,
        Err(err) => return fail(err),
    };
    let k = header_k.unwrap_or_else(|| assign.iter().max().map_or(1, |&p| p + 1));
    new_partition(graph, k as u64, alpha_millis, assign, out)
}

/// Build a partition from an explicit edge-to-part array of length m.
///
/// # Safety
/// `assign` must point to `len` readable u64 values; `graph` must be a
/// live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_partition_from_assignment(
    graph: *const EpGraph,
    k: u64,
    alpha_millis: u64,
    assign: *const u64,
    len: u64,
    out: *mut *mut EpPartition,
) -> EpStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    if assign.is_null() && len > 0 {
        return null_pointer("assign");
    }
    let assign: Vec<usize> = (0..len as usize).map(|i| *assign.add(i) as usize).collect();
    new_partition(graph, k, alpha_millis, assign, out)
}

/// Write the partition in the primary file format (k= header plus one
/// part id per edge line).
///
/// # Safety
/// `partition` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ep_partition_save_file(
    partition: *const EpPartition,
    path: *const c_char,
) -> EpStatus {
    let Some(p) = partition.as_ref() else {
        return null_pointer("partition");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match partfile::write_partition_path(path, p.inner.k(), p.inner.assignment()) {
        Ok(()) => EpStatus::EpOk,
        Err(err) => fail(Error::Io(err)),
    }
}

/// # Safety
/// `partition` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ep_partition_free(partition: *mut EpPartition) {
    if !partition.is_null() {
        drop(Box::from_raw(partition));
    }
}

/// # Safety
/// `partition` must be a live handle (returns NaN on null).
#[no_mangle]
pub unsafe extern "C" fn ep_partition_replication_factor(partition: *const EpPartition) -> f64 {
    partition.as_ref().map_or(f64::NAN, |p| p.inner.replication_factor())
}

/// # Safety
/// `partition` must be a live handle (returns 0 on null).
#[no_mangle]
pub unsafe extern "C" fn ep_partition_copies(partition: *const EpPartition) -> u64 {
    partition.as_ref().map_or(0, |p| p.inner.copies() as u64)
}

/// # Safety
/// `partition` must be a live handle (returns 0 on null).
#[no_mangle]
pub unsafe extern "C" fn ep_partition_part_count(partition: *const EpPartition) -> u64 {
    partition.as_ref().map_or(0, |p| p.inner.k() as u64)
}

/// Per-part edge capacity, ceil(alpha * m / k).
///
/// # Safety
/// `partition` must be a live handle (returns 0 on null).
#[no_mangle]
pub unsafe extern "C" fn ep_partition_capacity(partition: *const EpPartition) -> u64 {
    partition.as_ref().map_or(0, |p| p.inner.capacity() as u64)
}

/// # Safety
/// `partition` must be a live handle (returns false on null).
#[no_mangle]
pub unsafe extern "C" fn ep_partition_is_balanced(partition: *const EpPartition) -> bool {
    partition.as_ref().is_some_and(|p| p.inner.is_balanced())
}

fn fill_stats(stats: *mut EpRefineStats, report: &edgepart::RefineReport) {
    if stats.is_null() {
        return;
    }
    let out = EpRefineStats {
        rf_before: report.rf_before,
        rf_after: report.rf_after,
        copies_before: report.copies_before as u64,
        copies_after: report.copies_after as u64,
        rounds: report.rounds as u64,
        adjust_success: report.adjust_success as u64,
        adjust_failed: report.adjust_failed as u64,
        blocks_applied: report.blocks_applied as u64,
        blocks_reverted: report.blocks_reverted as u64,
        wall_time_ms: report.wall_time_ms,
    };
    unsafe { *stats = out };
}

/// Run the greedy refiner in place. The partition must be balanced.
///
/// # Safety
/// `partition` must be a live handle; `stats` may be null.
#[no_mangle]
pub unsafe extern "C" fn ep_refine_lsg(
    partition: *mut EpPartition,
    seed: u64,
    stats: *mut EpRefineStats,
) -> EpStatus {
    let Some(p) = partition.as_mut() else {
        return null_pointer("partition");
    };
    if let Some(err) = balance_error(&p.inner) {
        return fail(err);
    }
    let report = edgepart::lsg::refine(&mut p.inner, &LsgConfig { seed, ..Default::default() });
    fill_stats(stats, &report);
    EpStatus::EpOk
}

/// Run the flow-based refiner in place. Zero-valued knobs pick defaults:
/// 200*k rounds, 50 stagnation rounds, a 60 s budget.
///
/// # Safety
/// `partition` must be a live handle; `stats` may be null.
#[no_mangle]
pub unsafe extern "C" fn ep_refine_lsf(
    partition: *mut EpPartition,
    seed: u64,
    max_rounds: u64,
    stagnation_rounds: u64,
    time_budget_ms: u64,
    stats: *mut EpRefineStats,
) -> EpStatus {
    let Some(p) = partition.as_mut() else {
        return null_pointer("partition");
    };
    if let Some(err) = balance_error(&p.inner) {
        return fail(err);
    }
    let cfg = LsfConfig {
        seed,
        max_rounds: if max_rounds == 0 { None } else { Some(max_rounds as usize) },
        stagnation_rounds: if stagnation_rounds == 0 { 50 } else { stagnation_rounds as usize },
        time_budget: Some(Duration::from_millis(if time_budget_ms == 0 {
            60_000
        } else {
            time_budget_ms
        })),
        ..Default::default()
    };
    let report = edgepart::lsf::refine(&mut p.inner, &cfg);
    fill_stats(stats, &report);
    EpStatus::EpOk
}

fn balance_error(p: &Partition) -> Option<Error> {
    p.part_sizes()
        .iter()
        .enumerate()
        .find(|&(_, &s)| s > p.capacity())
        .map(|(part, &size)| Error::Unbalanced { part, size, cap: p.capacity() })
}
