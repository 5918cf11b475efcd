//! C ABI for the `cyclic-rules` miner.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Fallible calls return a
//! [`CrStatus`]; on failure, [`cr_last_error_message`] describes the error
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclic_rules::db::{parse_transactions, InputFormat};
use cyclic_rules::mining;
use cyclic_rules::{
    AggregateConstraint, ConstraintSet, CyclicRule, Error, ItemFilter, MiningParams, ScanCounters, TemporalDatabase,
};

/// Bumped on any incompatible change to this interface.
pub const CR_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    UnknownItem = 5,
    EmptyInput = 6,
    OutOfRange = 7,
    UndefinedConfidence = 8,
    Io = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrFormat {
    Fimi = 0,
    FimiQuantified = 1,
    CsvTimestamped = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrAlgorithm {
    Sequential = 0,
    Interleaved = 1,
    Pcar = 2,
    Cbcar = 3,
}

/// Mining thresholds; see `cr_params_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CrParams {
    pub minsupp: f64,
    pub minconf: f64,
    pub nb_partitions: usize,
    /// pcar/cbcar.
    pub cycle_length: u32,
    /// sequential/interleaved.
    pub l_min: u32,
    pub l_max: u32,
    pub allow_empty_premise: bool,
    pub all_cycles: bool,
}

impl From<&CrParams> for MiningParams {
    fn from(p: &CrParams) -> Self {
        MiningParams {
            minsupp: p.minsupp,
            minconf: p.minconf,
            nb_partitions: p.nb_partitions,
            cycle_length: p.cycle_length,
            l_min: p.l_min,
            l_max: p.l_max,
            allow_empty_premise: p.allow_empty_premise,
            all_cycles: p.all_cycles,
        }
    }
}

pub struct CrDatabase {
    db: TemporalDatabase,
}

pub struct CrConstraints {
    cs: ConstraintSet,
}

pub struct CrRuleSet {
    rules: Vec<CyclicRule>,
    counters: ScanCounters,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CrStatus, message: impl Into<String>) -> CrStatus {
    set_error(message.into());
    status
}

fn status_of(e: &Error) -> CrStatus {
    match e {
        Error::Parse { .. } | Error::Csv(_) => CrStatus::Parse,
        Error::EmptyInput => CrStatus::EmptyInput,
        Error::InvalidArgument { .. } | Error::Json(_) => CrStatus::InvalidArgument,
        Error::UnknownItem(_) => CrStatus::UnknownItem,
        Error::UndefinedConfidence(_) => CrStatus::UndefinedConfidence,
        Error::Io(_) => CrStatus::Io,
    }
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CrStatus>) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CrStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(CrStatus::Internal, "internal panic"),
    }
}

fn lib(e: Error) -> CrStatus {
    fail(status_of(&e), e.to_string())
}

fn null(name: &str) -> CrStatus {
    fail(CrStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn items_from<'a>(items: *const u32, len: usize) -> Result<&'a [u32], CrStatus> {
    if len == 0 {
        Ok(&[])
    } else if items.is_null() {
        Err(null("items"))
    } else {
        Ok(std::slice::from_raw_parts(items, len))
    }
}

unsafe fn rule_at<'a>(rules: *const CrRuleSet, index: usize) -> Result<&'a CyclicRule, CrStatus> {
    let rs = rules.as_ref().ok_or_else(|| null("rules"))?;
    rs.rules.get(index).ok_or_else(|| {
        fail(
            CrStatus::OutOfRange,
            format!("rule index {index} out of range (len {})", rs.rules.len()),
        )
    })
}

/// Interface version this library was built with.
#[no_mangle]
pub extern "C" fn cr_abi_version() -> u32 {
    CR_ABI_VERSION
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn cr_params_default() -> CrParams {
    let p = MiningParams::default();
    CrParams {
        minsupp: p.minsupp,
        minconf: p.minconf,
        nb_partitions: p.nb_partitions,
        cycle_length: p.cycle_length,
        l_min: p.l_min,
        l_max: p.l_max,
        allow_empty_premise: p.allow_empty_premise,
        all_cycles: p.all_cycles,
    }
}

/// Parses `len` bytes of transaction text into a new database.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_database_parse(
    data: *const u8,
    len: usize,
    format: CrFormat,
    units_per_group: u32,
    out: *mut *mut CrDatabase,
) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let bytes = bytes_from(data, len)?;
        let format = match format {
            CrFormat::Fimi => InputFormat::Fimi,
            CrFormat::FimiQuantified => InputFormat::FimiQuantified,
            CrFormat::CsvTimestamped => InputFormat::CsvTimestamped,
        };
        let db = parse_transactions(bytes, format, units_per_group).map_err(lib)?;
        *out = Box::into_raw(Box::new(CrDatabase { db }));
        Ok(())
    })
}

unsafe fn bytes_from<'a>(data: *const u8, len: usize) -> Result<&'a [u8], CrStatus> {
    if len == 0 {
        Ok(&[])
    } else if data.is_null() {
        Err(null("data"))
    } else {
        Ok(std::slice::from_raw_parts(data, len))
    }
}

/// # Safety
/// `db` must be NULL or a handle from `cr_database_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_database_free(db: *mut CrDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Number of transactions, or 0 for NULL.
///
/// # Safety
/// `db` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_database_transaction_count(db: *const CrDatabase) -> usize {
    db.as_ref().map_or(0, |d| d.db.len())
}

/// # Safety
/// `db` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_database_unit_count(db: *const CrDatabase) -> u32 {
    db.as_ref().map_or(0, |d| d.db.unit_count())
}

/// Size of the item id universe (largest id + 1).
///
/// # Safety
/// `db` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_database_item_count(db: *const CrDatabase) -> u32 {
    db.as_ref().map_or(0, |d| d.db.item_count())
}

/// An empty (unconstrained) constraint set.
#[no_mangle]
pub extern "C" fn cr_constraints_new() -> *mut CrConstraints {
    Box::into_raw(Box::new(CrConstraints { cs: ConstraintSet::default() }))
}

/// # Safety
/// `cs` must be NULL or a handle from `cr_constraints_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_constraints_free(cs: *mut CrConstraints) {
    if !cs.is_null() {
        drop(Box::from_raw(cs));
    }
}

/// Restricts premises to the given items; `len == 0` lifts the restriction.
///
/// # Safety
/// `cs` must be a live handle; `items` must point to `len` ids.
#[no_mangle]
pub unsafe extern "C" fn cr_constraints_set_premise(cs: *mut CrConstraints, items: *const u32, len: usize) -> CrStatus {
    guard(|| {
        let cs = cs.as_mut().ok_or_else(|| null("cs"))?;
        cs.cs.prm = filter(items_from(items, len)?);
        Ok(())
    })
}

/// Restricts conclusions to the given items; `len == 0` lifts the restriction.
///
/// # Safety
/// `cs` must be a live handle; `items` must point to `len` ids.
#[no_mangle]
pub unsafe extern "C" fn cr_constraints_set_conclusion(
    cs: *mut CrConstraints,
    items: *const u32,
    len: usize,
) -> CrStatus {
    guard(|| {
        let cs = cs.as_mut().ok_or_else(|| null("cs"))?;
        cs.cs.cl = filter(items_from(items, len)?);
        Ok(())
    })
}

fn filter(items: &[u32]) -> ItemFilter {
    if items.is_empty() {
        ItemFilter::Any
    } else {
        ItemFilter::Only(items.iter().copied().collect())
    }
}

/// Adds an aggregate constraint written like `SUM(0)>=1`.
///
/// # Safety
/// `cs` must be a live handle; `expr` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cr_constraints_add_aggregate(cs: *mut CrConstraints, expr: *const c_char) -> CrStatus {
    guard(|| {
        let cs = cs.as_mut().ok_or_else(|| null("cs"))?;
        if expr.is_null() {
            return Err(null("expr"));
        }
        let text = CStr::from_ptr(expr)
            .to_str()
            .map_err(|_| fail(CrStatus::InvalidUtf8, "`expr` is not UTF-8"))?;
        let ac: AggregateConstraint = text.parse().map_err(lib)?;
        cs.cs.aggregates.push(ac);
        Ok(())
    })
}

/// Mines `db`. `constraints` may be NULL and must be NULL or empty for
/// algorithms other than cbcar.
///
/// # Safety
/// `db` and `params` must be valid; `constraints` NULL or live; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cr_mine(
    db: *const CrDatabase,
    algorithm: CrAlgorithm,
    params: *const CrParams,
    constraints: *const CrConstraints,
    out: *mut *mut CrRuleSet,
) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let db = &db.as_ref().ok_or_else(|| null("db"))?.db;
        let params = MiningParams::from(params.as_ref().ok_or_else(|| null("params"))?);
        let unconstrained = ConstraintSet::default();
        let cs = constraints.as_ref().map_or(&unconstrained, |c| &c.cs);
        if algorithm != CrAlgorithm::Cbcar && !cs.is_empty() {
            return Err(fail(CrStatus::InvalidArgument, "only cbcar accepts constraints"));
        }
        let outcome = match algorithm {
            CrAlgorithm::Sequential => mining::sequential(db, &params),
            CrAlgorithm::Interleaved => mining::interleaved(db, &params),
            CrAlgorithm::Pcar => mining::pcar(db, &params),
            CrAlgorithm::Cbcar => mining::cbcar(db, &params, cs),
        }
        .map_err(lib)?;
        *out = Box::into_raw(Box::new(CrRuleSet {
            rules: outcome.rules,
            counters: outcome.counters,
        }));
        Ok(())
    })
}

/// # Safety
/// `rules` must be NULL or a handle from `cr_mine` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_ruleset_free(rules: *mut CrRuleSet) {
    if !rules.is_null() {
        drop(Box::from_raw(rules));
    }
}

/// Number of rules, or 0 for NULL.
///
/// # Safety
/// `rules` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_ruleset_len(rules: *const CrRuleSet) -> usize {
    rules.as_ref().map_or(0, |r| r.rules.len())
}

/// Scan-effort counters of the run that produced `rules`.
///
/// # Safety
/// `rules` must be a live handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cr_ruleset_counters(
    rules: *const CrRuleSet,
    transactions_touched: *mut u64,
    units_evaluated: *mut u64,
) -> CrStatus {
    guard(|| {
        let rs = rules.as_ref().ok_or_else(|| null("rules"))?;
        if transactions_touched.is_null() || units_evaluated.is_null() {
            return Err(null("out"));
        }
        *transactions_touched = rs.counters.transactions_touched;
        *units_evaluated = rs.counters.units_evaluated;
        Ok(())
    })
}

/// Support and confidence of rule `index`.
///
/// # Safety
/// `rules` must be a live handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cr_rule_measures(
    rules: *const CrRuleSet,
    index: usize,
    support: *mut f64,
    confidence: *mut f64,
) -> CrStatus {
    guard(|| {
        let r = rule_at(rules, index)?;
        if support.is_null() || confidence.is_null() {
            return Err(null("out"));
        }
        *support = r.support;
        *confidence = r.confidence;
        Ok(())
    })
}

/// Borrowed view of the premise ids of rule `index`, valid while `rules`
/// lives. An empty premise yields `*len == 0`.
///
/// # Safety
/// `rules` must be a live handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cr_rule_premise(
    rules: *const CrRuleSet,
    index: usize,
    items: *mut *const u32,
    len: *mut usize,
) -> CrStatus {
    guard(|| {
        let r = rule_at(rules, index)?;
        write_items(r.premise.items(), items, len)
    })
}

/// Borrowed view of the conclusion ids of rule `index`.
///
/// # Safety
/// As for `cr_rule_premise`.
#[no_mangle]
pub unsafe extern "C" fn cr_rule_conclusion(
    rules: *const CrRuleSet,
    index: usize,
    items: *mut *const u32,
    len: *mut usize,
) -> CrStatus {
    guard(|| {
        let r = rule_at(rules, index)?;
        write_items(r.conclusion.items(), items, len)
    })
}

unsafe fn write_items(src: &[u32], items: *mut *const u32, len: *mut usize) -> Result<(), CrStatus> {
    if items.is_null() || len.is_null() {
        return Err(null("out"));
    }
    *items = src.as_ptr();
    *len = src.len();
    Ok(())
}

/// Number of cycles of rule `index`, or 0 when out of range.
///
/// # Safety
/// `rules` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_rule_cycle_count(rules: *const CrRuleSet, index: usize) -> usize {
    rules
        .as_ref()
        .and_then(|rs| rs.rules.get(index))
        .map_or(0, |r| r.cycles.len())
}

/// Cycle `cycle` of rule `index` as `(length, offset)`.
///
/// # Safety
/// `rules` must be a live handle; the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cr_rule_cycle(
    rules: *const CrRuleSet,
    index: usize,
    cycle: usize,
    length: *mut u32,
    offset: *mut u32,
) -> CrStatus {
    guard(|| {
        let r = rule_at(rules, index)?;
        let c = r.cycles.get(cycle).ok_or_else(|| {
            fail(
                CrStatus::OutOfRange,
                format!("cycle index {cycle} out of range (len {})", r.cycles.len()),
            )
        })?;
        if length.is_null() || offset.is_null() {
            return Err(null("out"));
        }
        *length = c.length;
        *offset = c.offset;
        Ok(())
    })
}

/// The rules as a JSON array, or NULL on failure. Release with
/// `cr_string_free`.
///
/// # Safety
/// `rules` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_ruleset_to_json(rules: *const CrRuleSet) -> *mut c_char {
    let mut result = ptr::null_mut();
    let status = guard(|| {
        let rs = rules.as_ref().ok_or_else(|| null("rules"))?;
        let json = serde_json::to_string(&rs.rules).map_err(|e| lib(e.into()))?;
        result = CString::new(json)
            .map_err(|_| fail(CrStatus::Internal, "JSON contained a NUL byte"))?
            .into_raw();
        Ok(())
    });
    if status == CrStatus::Ok {
        result
    } else {
        ptr::null_mut()
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
