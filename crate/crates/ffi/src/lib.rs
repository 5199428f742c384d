//! C ABI over the oracle-forge library.
//!
//! Every fallible function returns an [`OfStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! fetched with [`of_last_error`]. Strings handed to the caller are owned by
//! the caller and must be released with [`of_string_free`]; handles are
//! released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use oracle_forge::doc_model::{load_class_doc, parse_class_doc, ClassDoc, DocError, DocFormat};
use oracle_forge::eval::{CompilabilityRow, CoverageRow, Percent};
use oracle_forge::extract::extract_oracles;
use oracle_forge::gateway::{LlmExchange, LlmRequest, DEFAULT_MODEL};
use oracle_forge::partition::PartitionUnit;
use oracle_forge::pipeline::build_units;
use oracle_forge::prompt::{render_prompt, Ablation, PromptConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    MalformedDoc = 4,
    AmbiguousReference = 5,
    Io = 6,
    PromptFailed = 7,
    NoOraclesFound = 8,
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfDocFormat {
    CanonicalJson = 0,
    SourceComments = 1,
}

pub const OF_ABLATE_NO_ASSISTANT: u32 = 1;
pub const OF_ABLATE_NO_FEW_SHOT: u32 = 1 << 1;
pub const OF_ABLATE_NO_CHAIN_OF_THOUGHT: u32 = 1 << 2;

/// Percentages are tenths of a percent; -1 stands for "n/a".
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OfCoverage {
    pub precision_tenths: i64,
    pub recall_tenths: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OfCompilability {
    pub compilable_tenths: i64,
    pub correct_tenths: i64,
}

/// Parsed class documentation.
pub struct OfClassDoc(ClassDoc);

/// Ordered partition units of one class.
pub struct OfUnits(Vec<PartitionUnit>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OfStatus, String);

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        let status = match e {
            DocError::AmbiguousReference { .. } => OfStatus::AmbiguousReference,
            DocError::Io { .. } => OfStatus::Io,
            _ => OfStatus::MalformedDoc,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> OfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            OfStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OfStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(OfStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(OfStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(OfStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NUL bytes removed").into_raw()
}

fn tenths(p: Percent) -> i64 {
    p.tenths().map_or(-1, |t| t as i64)
}

fn unit_at(units: &OfUnits, index: usize) -> Result<&PartitionUnit, Failure> {
    units.0.get(index).ok_or_else(|| {
        Failure(
            OfStatus::InvalidArgument,
            format!("unit index {index} out of range ({} units)", units.0.len()),
        )
    })
}

/// Message of the last failed call on this thread, or null. The caller owns
/// the returned string.
#[no_mangle]
pub extern "C" fn of_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn of_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version; static storage, do not free.
#[no_mangle]
pub extern "C" fn of_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_class_doc_parse(
    source: *const c_char,
    format: OfDocFormat,
    out: *mut *mut OfClassDoc,
) -> OfStatus {
    guard(|| {
        let source = text(source, "source")?;
        let format = match format {
            OfDocFormat::CanonicalJson => DocFormat::CanonicalJson,
            OfDocFormat::SourceComments => DocFormat::SourceComments,
        };
        let doc = parse_class_doc(source, format)?;
        write_out(out, Box::into_raw(Box::new(OfClassDoc(doc))))
    })
}

/// Loads a `.json` or `.java` documentation file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_class_doc_load(path: *const c_char, out: *mut *mut OfClassDoc) -> OfStatus {
    guard(|| {
        let path = text(path, "path")?;
        let doc = load_class_doc(Path::new(path))?;
        write_out(out, Box::into_raw(Box::new(OfClassDoc(doc))))
    })
}

/// # Safety
/// `doc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_class_doc_fqcn(doc: *const OfClassDoc, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let doc = handle(doc, "doc")?;
        write_out(out, owned(doc.0.fqcn.clone()))
    })
}

/// Canonical JSON form of the document.
///
/// # Safety
/// `doc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_class_doc_to_json(doc: *const OfClassDoc, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let doc = handle(doc, "doc")?;
        write_out(out, owned(doc.0.to_canonical_json()))
    })
}

/// # Safety
/// `doc` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn of_class_doc_free(doc: *mut OfClassDoc) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// One unit per method, or a single whole-class unit when `no_partition`.
///
/// # Safety
/// `doc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_partition(doc: *const OfClassDoc, no_partition: bool, out: *mut *mut OfUnits) -> OfStatus {
    guard(|| {
        let doc = handle(doc, "doc")?;
        let units = build_units(&doc.0, no_partition)?;
        write_out(out, Box::into_raw(Box::new(OfUnits(units))))
    })
}

/// Number of units; 0 for a null handle.
///
/// # Safety
/// `units` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn of_units_len(units: *const OfUnits) -> usize {
    units.as_ref().map_or(0, |u| u.0.len())
}

/// # Safety
/// `units` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn of_units_free(units: *mut OfUnits) {
    if !units.is_null() {
        drop(Box::from_raw(units));
    }
}

/// Unit id, `fqcn.signature`.
///
/// # Safety
/// `units` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_units_id(units: *const OfUnits, index: usize, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let unit = unit_at(handle(units, "units")?, index)?;
        write_out(out, owned(unit.id()))
    })
}

/// Documentation text of the unit as it appears in the prompt.
///
/// # Safety
/// `units` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_units_description(units: *const OfUnits, index: usize, out: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let unit = unit_at(handle(units, "units")?, index)?;
        write_out(out, owned(unit.rendered_description.clone()))
    })
}

fn ablations(flags: u32) -> Result<Vec<Ablation>, Failure> {
    let known = OF_ABLATE_NO_ASSISTANT | OF_ABLATE_NO_FEW_SHOT | OF_ABLATE_NO_CHAIN_OF_THOUGHT;
    if flags & !known != 0 {
        return Err(Failure(OfStatus::InvalidArgument, format!("unknown ablation bits {:#x}", flags & !known)));
    }
    Ok([
        (OF_ABLATE_NO_ASSISTANT, Ablation::NoAssistant),
        (OF_ABLATE_NO_FEW_SHOT, Ablation::NoFewShot),
        (OF_ABLATE_NO_CHAIN_OF_THOUGHT, Ablation::NoChainOfThought),
    ]
    .into_iter()
    .filter(|(bit, _)| flags & bit != 0)
    .map(|(_, a)| a)
    .collect())
}

fn prompt_for(unit: &PartitionUnit, flags: u32) -> Result<String, Failure> {
    let cfg = PromptConfig::new(unit.class_fqcn.clone()).with_ablation(ablations(flags)?);
    render_prompt(unit, &cfg)
        .map(|d| d.rendered_text)
        .map_err(|e| Failure(OfStatus::PromptFailed, e.to_string()))
}

/// Renders the prompt for one unit. `ablation_flags` is a bitwise OR of the
/// `OF_ABLATE_*` constants.
///
/// # Safety
/// `units` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_units_render_prompt(
    units: *const OfUnits,
    index: usize,
    ablation_flags: u32,
    out: *mut *mut c_char,
) -> OfStatus {
    guard(|| {
        let unit = unit_at(handle(units, "units")?, index)?;
        write_out(out, owned(prompt_for(unit, ablation_flags)?))
    })
}

/// Extracts oracle methods from a model response to the unit's default
/// prompt and returns them as a JSON array of records.
///
/// # Safety
/// `units` must be a live handle; `response` a NUL-terminated string; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_extract_oracles(
    units: *const OfUnits,
    index: usize,
    response: *const c_char,
    out_json: *mut *mut c_char,
) -> OfStatus {
    guard(|| {
        let unit = unit_at(handle(units, "units")?, index)?;
        let response = text(response, "response")?;
        let request = LlmRequest::new(DEFAULT_MODEL, prompt_for(unit, 0)?);
        let exchange = LlmExchange {
            cassette_key: request.cassette_key(),
            request,
            response_text: response.to_string(),
            recorded_at: chrono::DateTime::UNIX_EPOCH,
        };
        let records =
            extract_oracles(&exchange, unit).map_err(|e| Failure(OfStatus::NoOraclesFound, e.to_string()))?;
        let json = serde_json::to_string(&records).map_err(|e| Failure(OfStatus::Internal, e.to_string()))?;
        write_out(out_json, owned(json))
    })
}

/// Precision = checked / generated, recall = generated / documented.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_coverage_from_counts(
    documented: u64,
    generated: u64,
    checked: u64,
    out: *mut OfCoverage,
) -> OfStatus {
    guard(|| {
        if checked > generated || generated > documented {
            return Err(Failure(
                OfStatus::InvalidArgument,
                format!("need checked <= generated <= documented, got {checked}/{generated}/{documented}"),
            ));
        }
        let row = CoverageRow::from_counts("", documented, generated, checked);
        write_out(
            out,
            OfCoverage {
                precision_tenths: tenths(row.precision),
                recall_tenths: tenths(row.recall),
            },
        )
    })
}

/// Compilable and correct shares of `oracles`; both read 0 when there are no
/// oracles.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn of_compilability_from_counts(
    oracles: u64,
    compilable: u64,
    correct: u64,
    out: *mut OfCompilability,
) -> OfStatus {
    guard(|| {
        if compilable > oracles || correct > oracles {
            return Err(Failure(OfStatus::InvalidArgument, "counts exceed the number of oracles".into()));
        }
        let row = CompilabilityRow::from_counts("", 0, oracles, compilable, correct);
        write_out(
            out,
            OfCompilability {
                compilable_tenths: tenths(row.pct_compilable),
                correct_tenths: tenths(row.pct_correct),
            },
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take(s: *mut c_char) -> String {
        assert!(!s.is_null());
        let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { of_string_free(s) };
        out
    }

    fn fixture(rel: &str) -> CString {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel);
        CString::new(path.to_str().unwrap()).unwrap()
    }

    fn load(rel: &str) -> *mut OfClassDoc {
        let mut doc = ptr::null_mut();
        assert_eq!(unsafe { of_class_doc_load(fixture(rel).as_ptr(), &mut doc) }, OfStatus::Ok);
        doc
    }

    #[test]
    fn prompt_through_handles_matches_golden() {
        let doc = load("docs/java.lang.Object.java");
        let mut units = ptr::null_mut();
        unsafe {
            assert_eq!(of_partition(doc, false, &mut units), OfStatus::Ok);
            assert_eq!(of_units_len(units), 11);
            let index = (0..11)
                .find(|&i| {
                    let mut id = ptr::null_mut();
                    of_units_id(units, i, &mut id);
                    take(id) == "java.lang.Object.equals(Object)"
                })
                .unwrap();
            let mut prompt = ptr::null_mut();
            assert_eq!(of_units_render_prompt(units, index, 0, &mut prompt), OfStatus::Ok);
            let golden = std::fs::read_to_string(fixture("golden/object_equals_prompt.txt").to_str().unwrap()).unwrap();
            assert_eq!(take(prompt), golden);

            let mut bare = ptr::null_mut();
            let all = OF_ABLATE_NO_ASSISTANT | OF_ABLATE_NO_FEW_SHOT | OF_ABLATE_NO_CHAIN_OF_THOUGHT;
            assert_eq!(of_units_render_prompt(units, index, all, &mut bare), OfStatus::Ok);
            assert!(take(bare).starts_with("<instruction>\n"));
            assert_eq!(of_units_render_prompt(units, index, 1 << 7, &mut bare), OfStatus::InvalidArgument);
            assert_eq!(of_units_render_prompt(units, 99, 0, &mut bare), OfStatus::InvalidArgument);
            assert!(take(of_last_error()).contains("out of range"));
            of_units_free(units);
            of_class_doc_free(doc);
        }
    }

    #[test]
    fn extracts_records_as_json() {
        let doc = load("docs/java.util.List.json");
        let mut units = ptr::null_mut();
        unsafe {
            assert_eq!(of_partition(doc, false, &mut units), OfStatus::Ok);
            let response = CString::new(
                "```java\nboolean checkIsEmpty(List<?> list) {\n    return list.isEmpty() == (list.size() == 0);\n}\n```\n",
            )
            .unwrap();
            let mut json = ptr::null_mut();
            assert_eq!(of_extract_oracles(units, 1, response.as_ptr(), &mut json), OfStatus::Ok);
            let records: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
            assert_eq!(records[0]["name"], "checkIsEmpty");
            assert_eq!(records[0]["kind"], "assertion");

            let prose = CString::new("I cannot help with that.").unwrap();
            assert_eq!(of_extract_oracles(units, 1, prose.as_ptr(), &mut json), OfStatus::NoOraclesFound);
            of_units_free(units);
            of_class_doc_free(doc);
        }
    }

    #[test]
    fn parse_errors_map_to_status_codes() {
        let mut doc = ptr::null_mut();
        let junk = CString::new("{\"fqcn\": 3}").unwrap();
        unsafe {
            assert_eq!(of_class_doc_parse(junk.as_ptr(), OfDocFormat::CanonicalJson, &mut doc), OfStatus::MalformedDoc);
            assert!(doc.is_null());
            assert!(!take(of_last_error()).is_empty());
            assert_eq!(of_class_doc_parse(ptr::null(), OfDocFormat::CanonicalJson, &mut doc), OfStatus::NullArgument);
            let missing = CString::new("/no/such/file.json").unwrap();
            assert_eq!(of_class_doc_load(missing.as_ptr(), &mut doc), OfStatus::Io);

            let ambiguous = CString::new(
                r#"{"fqcn": "p.C", "kind": "class", "methods": [
                {"name": "f", "paramTypes": [], "returnType": "int", "description": "", "throws": [], "seeAlso": ["g"], "deprecated": false},
                {"name": "g", "paramTypes": [], "returnType": "int", "description": "", "throws": [], "seeAlso": [], "deprecated": false},
                {"name": "g", "paramTypes": ["int"], "returnType": "int", "description": "", "throws": [], "seeAlso": [], "deprecated": false}]}"#,
            )
            .unwrap();
            assert_eq!(of_class_doc_parse(ambiguous.as_ptr(), OfDocFormat::CanonicalJson, &mut doc), OfStatus::Ok);
            let mut units = ptr::null_mut();
            assert_eq!(of_partition(doc, false, &mut units), OfStatus::AmbiguousReference);
            assert_eq!(of_partition(doc, true, &mut units), OfStatus::Ok);
            assert_eq!(of_units_len(units), 1);
            of_units_free(units);

            let mut json = ptr::null_mut();
            assert_eq!(of_class_doc_to_json(doc, &mut json), OfStatus::Ok);
            assert!(take(json).contains("\"fqcn\": \"p.C\""));
            of_class_doc_free(doc);
        }
        assert!(of_last_error().is_null(), "success clears the last error");
    }

    #[test]
    fn metric_helpers() {
        let mut cov = OfCoverage::default();
        let mut comp = OfCompilability::default();
        unsafe {
            assert_eq!(of_coverage_from_counts(390, 352, 338, &mut cov), OfStatus::Ok);
            assert_eq!(cov, OfCoverage { precision_tenths: 960, recall_tenths: 903 });
            assert_eq!(of_coverage_from_counts(0, 0, 0, &mut cov), OfStatus::Ok);
            assert_eq!(cov, OfCoverage { precision_tenths: -1, recall_tenths: -1 });
            assert_eq!(of_coverage_from_counts(1, 2, 3, &mut cov), OfStatus::InvalidArgument);
            assert_eq!(of_compilability_from_counts(428, 418, 423, &mut comp), OfStatus::Ok);
            assert_eq!(comp, OfCompilability { compilable_tenths: 977, correct_tenths: 988 });
            assert_eq!(of_coverage_from_counts(1, 1, 1, ptr::null_mut()), OfStatus::NullArgument);
        }
        let version = unsafe { CStr::from_ptr(of_version()) };
        assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
