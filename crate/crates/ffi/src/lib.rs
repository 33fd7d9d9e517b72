//! C interface to `nodal-lls`.
//!
//! Instances and chains are passed as JSON text in the same formats the command line tool
//! reads. Every function returns an [`NllsStatus`]; on failure the message is available
//! from [`nlls_last_error`] on the same thread until the next call. Handles are opaque and
//! must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nodal_lls::cli::schema::{ChainFile, InstanceFile};
use nodal_lls::curves::CurveInstance;
use nodal_lls::exactalg::{Field, FieldSpec, PrimeField, Rationals};
use nodal_lls::linkedet::linked_det_membership;
use nodal_lls::llseries::{is_lls_eh, is_lls_kernel, LLSCandidate, MembershipVerdict, Window};
use nodal_lls::Error;
use serde_json::json;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NllsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    NotMultitree = 4,
    Precondition = 5,
    OutOfRange = 6,
    Disagreement = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NllsMethod {
    Kernel = 0,
    Eh = 1,
    Both = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NllsVerdict {
    Negative = 0,
    Member = 1,
}

struct Loaded<F: Field> {
    inst: CurveInstance<F>,
    candidates: Vec<LLSCandidate<F>>,
}

enum Inner {
    Prime(Loaded<PrimeField>),
    Rational(Loaded<Rationals>),
}

/// A curve instance with its candidates.
pub struct NllsInstance(Inner);

/// The JSON result of a membership check.
pub struct NllsReport(CString);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NllsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotMultitree => NllsStatus::NotMultitree,
            Error::Precondition(_) => NllsStatus::Precondition,
            Error::ModelInconsistency(_) => NllsStatus::Internal,
            _ => NllsStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NllsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NllsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NllsStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(NllsStatus::NullArgument, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(NllsStatus::InvalidUtf8, "string is not UTF-8".into()))
}

fn null(what: &str) -> Failure {
    Failure(NllsStatus::NullArgument, format!("null {what}"))
}

fn load<F: Field>(file: &InstanceFile, field: &F) -> Result<Loaded<F>, Error> {
    let inst = file.build(field)?;
    let candidates = file.candidates.iter().map(|c| file.build_candidate(&inst, c)).collect::<Result<_, _>>()?;
    Ok(Loaded { inst, candidates })
}

fn check<F: Field>(l: &Loaded<F>, index: usize, method: NllsMethod) -> Result<(bool, serde_json::Value), Failure> {
    let cand = l
        .candidates
        .get(index)
        .ok_or_else(|| Failure(NllsStatus::OutOfRange, format!("candidate {index} of {}", l.candidates.len())))?;
    let multitree = l.inst.is_multitree();
    let kernel = match method {
        NllsMethod::Eh => None,
        _ => {
            let window = if multitree { Window::BarG } else { Window::Ball(1) };
            Some(is_lls_kernel(&l.inst, cand, &window)?)
        }
    };
    let eh = match method {
        NllsMethod::Kernel => None,
        NllsMethod::Eh => Some(is_lls_eh(&l.inst, cand)?),
        NllsMethod::Both => multitree.then(|| is_lls_eh(&l.inst, cand)).transpose()?,
    };
    let verdicts: Vec<&MembershipVerdict> = kernel.iter().chain(eh.iter()).collect();
    let member = verdicts[0].member;
    if verdicts.iter().any(|v| v.member != member) {
        return Err(Failure(NllsStatus::Disagreement, format!("methods disagree on candidate {index}")));
    }
    Ok((member, json!({ "candidate": index, "member": member, "kernel": kernel, "eh": eh })))
}

impl NllsInstance {
    fn candidate_count(&self) -> usize {
        match &self.0 {
            Inner::Prime(l) => l.candidates.len(),
            Inner::Rational(l) => l.candidates.len(),
        }
    }

    fn check(&self, index: usize, method: NllsMethod) -> Result<(bool, serde_json::Value), Failure> {
        match &self.0 {
            Inner::Prime(l) => check(l, index, method),
            Inner::Rational(l) => check(l, index, method),
        }
    }
}

/// Parses an instance document. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlls_instance_from_json(json: *const c_char, out: *mut *mut NllsInstance) -> NllsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let file = InstanceFile::parse(text(json)?)?;
        let inner = match &file.field {
            FieldSpec::Rationals => Inner::Rational(load(&file, &Rationals)?),
            FieldSpec::Prime { p } => Inner::Prime(load(&file, &PrimeField::new(*p)?)?),
        };
        *out = Box::into_raw(Box::new(NllsInstance(inner)));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from [`nlls_instance_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nlls_instance_free(inst: *mut NllsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of candidates in the instance document.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlls_instance_candidate_count(inst: *const NllsInstance, out: *mut usize) -> NllsStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = inst.candidate_count();
        Ok(())
    })
}

/// Decides membership of candidate `index`. With [`NllsMethod::Both`] the vanishing-condition
/// method runs only on multitrees, and disagreement returns [`NllsStatus::Disagreement`].
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlls_lls_check(
    inst: *const NllsInstance,
    index: usize,
    method: NllsMethod,
    out: *mut NllsVerdict,
) -> NllsStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        let (member, _) = inst.check(index, method)?;
        *out = if member { NllsVerdict::Member } else { NllsVerdict::Negative };
        Ok(())
    })
}

/// Like [`nlls_lls_check`], returning the per-method details as a report handle.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlls_lls_report(
    inst: *const NllsInstance,
    index: usize,
    method: NllsMethod,
    out: *mut *mut NllsReport,
) -> NllsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        let (_, value) = inst.check(index, method)?;
        let s = CString::new(value.to_string()).expect("JSON has no nul");
        *out = Box::into_raw(Box::new(NllsReport(s)));
        Ok(())
    })
}

/// The report as JSON text, owned by the report.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nlls_report_json(report: *const NllsReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.0.as_ptr())
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from [`nlls_lls_report`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nlls_report_free(report: *mut NllsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Linked determinantal membership for a chain document with flags.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nlls_linked_det_check(json: *const c_char, out: *mut NllsVerdict) -> NllsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        let file = ChainFile::parse(text(json)?)?;
        fn member<F: Field>(file: &ChainFile, field: &F) -> Result<bool, Failure> {
            let (chain, flags) = file.build(field)?;
            let flags = flags.ok_or_else(|| Failure(NllsStatus::InvalidInput, "chain has no flags".into()))?;
            Ok(linked_det_membership(&chain, &flags).member)
        }
        let m = match &file.field {
            FieldSpec::Rationals => member(&file, &Rationals)?,
            FieldSpec::Prime { p } => member(&file, &PrimeField::new(*p).map_err(Failure::from)?)?,
        };
        *out = if m { NllsVerdict::Member } else { NllsVerdict::Negative };
        Ok(())
    })
}

/// The message of the last failed call on this thread, or null.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn nlls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nlls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
