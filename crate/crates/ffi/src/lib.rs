//! C ABI for `mutsched`.
//!
//! Models, traces and campaign reports cross the boundary as opaque handles
//! that the caller releases with the matching `*_free` function. Every
//! fallible call returns an [`MsStatus`]; on failure [`ms_last_error`]
//! describes the problem. Strings returned through `char **` out-parameters
//! are owned by the caller and released with [`ms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mutsched::analysis::{
    access_sequence, run_campaign, AnalysisError, Baseline, CampaignOptions, CampaignReport,
    OraclePolicy,
};
use mutsched::engine::{
    render_svg, run, write_accesses_tsv, write_events_tsv, write_gantt_csv, write_outputs_tsv,
    Trace,
};
use mutsched::mutation::{enumerate_mutants, write_manifest, MutationError, OperatorSet};
use mutsched::{parse_model, DeltaConfig, Semantics, SystemModel, Tick};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The model text could not be parsed or failed validation.
    ParseError = 3,
    /// An argument was out of range or could not be parsed.
    InvalidArgument = 4,
    /// A file could not be read.
    IoError = 5,
    /// The model could not be simulated.
    SimulationError = 6,
    /// The operator selection enables no operator.
    EmptyOperatorSet = 7,
    /// Mutant enumeration or application failed.
    MutationError = 8,
    /// The campaign could not be evaluated.
    AnalysisError = 9,
    /// The campaign has no mutants, so its score is undefined.
    UndefinedScore = 10,
    /// An internal error was caught at the boundary.
    Panic = 11,
}

/// A parsed and validated system model.
pub struct MsModel(SystemModel);

/// A simulation trace.
pub struct MsTrace(Trace);

/// The result of a mutation campaign.
pub struct MsReport(CampaignReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MsStatus, String);

impl Failure {
    fn new(status: MsStatus, message: impl ToString) -> Failure {
        Failure(status, message.to_string())
    }
}

impl From<MutationError> for Failure {
    fn from(e: MutationError) -> Self {
        match e {
            MutationError::EmptyOperatorSet => Failure::new(MsStatus::EmptyOperatorSet, e),
            e => Failure::new(MsStatus::MutationError, e),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Mutation(e) => e.into(),
            AnalysisError::UndefinedScore => Failure::new(MsStatus::UndefinedScore, e),
            e => Failure::new(MsStatus::AnalysisError, e),
        }
    }
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

/// Runs `body`, translating failures and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MsStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            MsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            MsStatus::NullArgument,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(MsStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn optional_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(MsStatus::NullArgument, format!("{what} is null")))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(MsStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::new(
            MsStatus::NullArgument,
            "output pointer is null",
        ))
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    out_ptr(out)?;
    let c = CString::new(s)
        .map_err(|_| Failure::new(MsStatus::InvalidArgument, "output contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(())
}

fn parse(source: &str) -> Result<SystemModel, Failure> {
    parse_model(source).map_err(|e| Failure::new(MsStatus::ParseError, e))
}

unsafe fn deltas(values: *const u64, len: usize) -> Result<Option<Vec<u64>>, Failure> {
    if len == 0 {
        return Ok(None);
    }
    if values.is_null() {
        return Err(Failure::new(MsStatus::NullArgument, "delta list is null"));
    }
    Ok(Some(std::slice::from_raw_parts(values, len).to_vec()))
}

unsafe fn operators(ops: *const c_char) -> Result<OperatorSet, Failure> {
    let spec = optional_text(ops, "operators")?.unwrap_or("all");
    OperatorSet::parse(spec).map_err(|e| Failure::new(MsStatus::InvalidArgument, e))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a model from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_model_parse(json: *const c_char, out: *mut *mut MsModel) -> MsStatus {
    guard(|| {
        out_ptr(out)?;
        let model = parse(text(json, "json")?)?;
        put(out, MsModel(model));
        Ok(())
    })
}

/// Reads and parses a model file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_model_load(path: *const c_char, out: *mut *mut MsModel) -> MsStatus {
    guard(|| {
        out_ptr(out)?;
        let path = text(path, "path")?;
        let source = std::fs::read_to_string(Path::new(path))
            .map_err(|e| Failure::new(MsStatus::IoError, format!("{path}: {e}")))?;
        put(out, MsModel(parse(&source)?));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_model_free(model: *mut MsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Sets the simulated window to `[0, horizon)`. Zero is rejected.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_model_set_horizon(model: *mut MsModel, horizon: u64) -> MsStatus {
    guard(|| {
        let m = handle_mut(model, "model")?;
        if horizon == 0 {
            return Err(Failure::new(
                MsStatus::InvalidArgument,
                "horizon must be positive",
            ));
        }
        m.0.config.horizon = Tick(horizon);
        Ok(())
    })
}

/// Selects `"time-aware"` or `"zero-time"` semantics.
///
/// # Safety
/// `model` must be a live handle and `semantics` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ms_model_set_semantics(
    model: *mut MsModel,
    semantics: *const c_char,
) -> MsStatus {
    guard(|| {
        let m = handle_mut(model, "model")?;
        let s: Semantics = text(semantics, "semantics")?
            .parse()
            .map_err(|e| Failure::new(MsStatus::InvalidArgument, e))?;
        m.0.config.semantics = s;
        Ok(())
    })
}

/// Current horizon in ticks, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_model_horizon(model: *const MsModel) -> u64 {
    model.as_ref().map_or(0, |m| m.0.config.horizon.0)
}

/// Number of tasks, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_model_task_count(model: *const MsModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.tasks.len())
}

/// Simulates the model under its configured semantics.
///
/// # Safety
/// `model` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_simulate(model: *const MsModel, out: *mut *mut MsTrace) -> MsStatus {
    guard(|| {
        out_ptr(out)?;
        let m = handle(model, "model")?;
        let trace = run(&m.0).map_err(|e| Failure::new(MsStatus::SimulationError, e))?;
        put(out, MsTrace(trace));
        Ok(())
    })
}

/// # Safety
/// `trace` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_free(trace: *mut MsTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of scheduler events, or 0 for a null handle.
///
/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_event_count(trace: *const MsTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.events.len())
}

/// Number of deadline misses, or 0 for a null handle.
///
/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_deadline_misses(trace: *const MsTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.deadline_misses().count())
}

unsafe fn trace_text(
    trace: *const MsTrace,
    out: *mut *mut c_char,
    render: impl FnOnce(&Trace) -> String,
) -> MsStatus {
    guard(|| {
        let t = handle(trace, "trace")?;
        put_string(out, render(&t.0))
    })
}

/// Event log as TSV: `time kind task runnable instance`.
///
/// # Safety
/// `trace` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_events_tsv(
    trace: *const MsTrace,
    out: *mut *mut c_char,
) -> MsStatus {
    trace_text(trace, out, write_events_tsv)
}

/// Data-store accesses as TSV.
///
/// # Safety
/// `trace` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_accesses_tsv(
    trace: *const MsTrace,
    out: *mut *mut c_char,
) -> MsStatus {
    trace_text(trace, out, write_accesses_tsv)
}

/// Runnable outputs as TSV.
///
/// # Safety
/// `trace` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_outputs_tsv(
    trace: *const MsTrace,
    out: *mut *mut c_char,
) -> MsStatus {
    trace_text(trace, out, write_outputs_tsv)
}

/// Execution segments as CSV: `task,start,end,runnable`.
///
/// # Safety
/// `trace` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_gantt_csv(
    trace: *const MsTrace,
    out: *mut *mut c_char,
) -> MsStatus {
    trace_text(trace, out, |t| write_gantt_csv(&t.gantt))
}

/// Gantt chart as a standalone SVG document.
///
/// # Safety
/// `trace` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_gantt_svg(
    trace: *const MsTrace,
    out: *mut *mut c_char,
) -> MsStatus {
    trace_text(trace, out, |t| render_svg(&t.gantt, t.horizon))
}

/// R/W pattern of one data store, e.g. `WRWR`.
///
/// # Safety
/// `trace` must be a live handle, `store` a NUL-terminated string and `out`
/// a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_trace_access_sequence(
    trace: *const MsTrace,
    store: *const c_char,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let t = handle(trace, "trace")?;
        let store = text(store, "store")?;
        let seq =
            access_sequence(&t.0, store).map_err(|e| Failure::new(MsStatus::InvalidArgument, e))?;
        put_string(out, seq)
    })
}

/// Mutant manifest, one `id operator target argument` line per mutant.
///
/// `ops` selects operators as on the command line (`mITO`, `period`, `all`,
/// `none`, comma-separated); null means all. `deltas` applies to every
/// parameterized class; an empty list uses the defaults.
///
/// # Safety
/// `model` must be a live handle, `ops` null or a NUL-terminated string,
/// `deltas` valid for `deltas_len` reads and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_mutate_manifest(
    model: *const MsModel,
    ops: *const c_char,
    deltas_ptr: *const u64,
    deltas_len: usize,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        out_ptr(out)?;
        let m = handle(model, "model")?;
        let enabled = operators(ops)?;
        let cfg =
            deltas(deltas_ptr, deltas_len)?.map_or_else(DeltaConfig::default, DeltaConfig::uniform);
        let mutants = enumerate_mutants(&m.0, &cfg, &enabled)?;
        put_string(out, write_manifest(&mutants))
    })
}

/// Runs a mutation campaign.
///
/// `ops` and the δ list are as for [`ms_mutate_manifest`]. `oracles` lists
/// kill oracles (`deadline`, `access`, `output`, `all`); null means all.
/// `baseline` is `"same"` or `"zero-time"`; null means same. `threads` of 0
/// uses one worker per core.
///
/// # Safety
/// Pointer arguments must be null where allowed, otherwise valid as
/// described above; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_campaign(
    model: *const MsModel,
    ops: *const c_char,
    deltas_ptr: *const u64,
    deltas_len: usize,
    oracles: *const c_char,
    baseline: *const c_char,
    threads: usize,
    out: *mut *mut MsReport,
) -> MsStatus {
    guard(|| {
        out_ptr(out)?;
        let m = handle(model, "model")?;
        let invalid = |e: String| Failure::new(MsStatus::InvalidArgument, e);
        let mut opts = CampaignOptions {
            enabled: operators(ops)?,
            threads: (threads > 0).then_some(threads),
            ..CampaignOptions::default()
        };
        if let Some(d) = deltas(deltas_ptr, deltas_len)? {
            opts.deltas = DeltaConfig::uniform(d);
        }
        if let Some(spec) = optional_text(oracles, "oracles")? {
            opts.policy = OraclePolicy::parse(spec).map_err(invalid)?;
        }
        if let Some(b) = optional_text(baseline, "baseline")? {
            opts.baseline = b.parse::<Baseline>().map_err(invalid)?;
        }
        let report = run_campaign(&m.0, &opts)?;
        put(out, MsReport(report));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ms_report_free(report: *mut MsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Per-class CSV with a closing total row.
///
/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_report_csv(report: *const MsReport, out: *mut *mut c_char) -> MsStatus {
    guard(|| put_string(out, handle(report, "report")?.0.to_csv()))
}

/// Aligned text table followed by the score line.
///
/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_report_table(
    report: *const MsReport,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| put_string(out, handle(report, "report")?.0.render()))
}

/// Per-mutant verdicts as TSV.
///
/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_report_details(
    report: *const MsReport,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| put_string(out, handle(report, "report")?.0.details_tsv()))
}

/// Killed and total mutant counts. Returns `UndefinedScore` for a campaign
/// without mutants; the counts are still written.
///
/// # Safety
/// `report` must be a live handle; `kills` and `mutants` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_report_score(
    report: *const MsReport,
    kills: *mut u64,
    mutants: *mut u64,
) -> MsStatus {
    guard(|| {
        let r = handle(report, "report")?;
        if kills.is_null() || mutants.is_null() {
            return Err(Failure::new(
                MsStatus::NullArgument,
                "output pointer is null",
            ));
        }
        let total = r.0.total();
        *kills = total.kills_total;
        *mutants = total.mutants;
        mutsched::mutation_score(&r.0)?;
        Ok(())
    })
}

/// Score as text: `64.71%`, or `—` when undefined.
///
/// # Safety
/// `report` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_report_score_text(
    report: *const MsReport,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let r = handle(report, "report")?;
        put_string(out, mutsched::analysis::render_score(r.0.score()))
    })
}
