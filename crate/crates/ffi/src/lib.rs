//! C interface to `fdes`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! fallible call returns an [`FdesStatus`]; on failure the message is available
//! from [`fdes_last_error`] on the same thread. Strings handed out by the
//! library are released with [`fdes_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fdes::formal::{map_partial, map_pi, map_sigma};
use fdes::kronecker::KroneckerRealization;
use fdes::parse::parse_expression;
use fdes::{Error, FormalElement, QSeries, RelationSystem, Space};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    WrongSpace = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdesSpace {
    Eisenstein = 0,
    Zeta = 1,
}

impl From<FdesSpace> for Space {
    fn from(s: FdesSpace) -> Self {
        match s {
            FdesSpace::Eisenstein => Space::Eisenstein,
            FdesSpace::Zeta => Space::Zeta,
        }
    }
}

impl From<Space> for FdesSpace {
    fn from(s: Space) -> Self {
        match s {
            Space::Eisenstein => FdesSpace::Eisenstein,
            Space::Zeta => FdesSpace::Zeta,
        }
    }
}

/// A homogeneous element of a formal space.
pub struct FdesElement(FormalElement);

/// A reduced relation system of one weight.
pub struct FdesSystem(RelationSystem);

/// A truncated q-series.
pub struct FdesSeries(QSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FdesStatus {
    match e {
        Error::Parse(_) | Error::MixedWeight { .. } | Error::MixedSpace => FdesStatus::Parse,
        Error::WrongSpace { .. } => FdesStatus::WrongSpace,
        Error::Io(_) | Error::Json(_) | Error::Cache(_) => FdesStatus::Io,
        _ => FdesStatus::InvalidArgument,
    }
}

struct Failure(FdesStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FdesStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic; clears the last error on success.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FdesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FdesStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            FdesStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(FdesStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fdes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or null if the last call succeeded.
/// Release with `fdes_string_free`.
#[no_mangle]
pub extern "C" fn fdes_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn fdes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a linear combination such as `5/2*G(4;0) - P(2,2;0,0)`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_element_parse(text: *const c_char, out: *mut *mut FdesElement) -> FdesStatus {
    guard(|| {
        let e = parse_expression(read_str(text, "text")?)?.element;
        write_out(out, Box::into_raw(Box::new(FdesElement(e))))
    })
}

/// # Safety
/// `e` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdes_element_free(e: *mut FdesElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_element_to_string(e: *const FdesElement, out: *mut *mut c_char) -> FdesStatus {
    guard(|| write_out(out, into_c_string(deref(e, "element")?.0.to_string())))
}

/// # Safety
/// `e` must be a live handle; `weight` and `space` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fdes_element_info(e: *const FdesElement, weight: *mut u32, space: *mut FdesSpace) -> FdesStatus {
    guard(|| {
        let e = &deref(e, "element")?.0;
        write_out(weight, e.weight())?;
        write_out(space, e.space().into())
    })
}

/// Builds the reduced relation system of one weight.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_system_build(space: FdesSpace, weight: u32, out: *mut *mut FdesSystem) -> FdesStatus {
    guard(|| {
        if weight == 0 {
            return Err(Failure(FdesStatus::InvalidArgument, "weight must be at least 1".into()));
        }
        let sys = RelationSystem::build(space.into(), weight)?;
        write_out(out, Box::into_raw(Box::new(FdesSystem(sys))))
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdes_system_free(s: *mut FdesSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of generators, rank of the relations and dimension of the quotient.
///
/// # Safety
/// `s` must be a live handle; the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fdes_system_sizes(
    s: *const FdesSystem,
    generators: *mut usize,
    rank: *mut usize,
    dimension: *mut usize,
) -> FdesStatus {
    guard(|| {
        let s = &deref(s, "system")?.0;
        write_out(generators, s.basis().len())?;
        write_out(rank, s.rank())?;
        write_out(dimension, s.dimension())
    })
}

/// # Safety
/// `s`, `e` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_system_normal_form(
    s: *const FdesSystem,
    e: *const FdesElement,
    out: *mut *mut FdesElement,
) -> FdesStatus {
    guard(|| {
        let nf = deref(s, "system")?.0.normal_form(&deref(e, "element")?.0)?;
        write_out(out, Box::into_raw(Box::new(FdesElement(nf))))
    })
}

/// # Safety
/// `s`, `e` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_system_is_zero(s: *const FdesSystem, e: *const FdesElement, out: *mut bool) -> FdesStatus {
    guard(|| {
        let z = deref(s, "system")?.0.is_zero(&deref(e, "element")?.0)?;
        write_out(out, z)
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdesMap {
    Pi = 0,
    Sigma = 1,
    Partial = 2,
}

/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_map(kind: FdesMap, e: *const FdesElement, out: *mut *mut FdesElement) -> FdesStatus {
    guard(|| {
        let e = &deref(e, "element")?.0;
        let image = match kind {
            FdesMap::Pi => map_pi(e)?,
            FdesMap::Sigma => map_sigma(e)?,
            FdesMap::Partial => map_partial(e)?,
        };
        write_out(out, Box::into_raw(Box::new(FdesElement(image))))
    })
}

/// Kronecker realization of an Eisenstein-space element to q-order `order`.
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_realize(e: *const FdesElement, order: usize, out: *mut *mut FdesSeries) -> FdesStatus {
    guard(|| {
        let e = &deref(e, "element")?.0;
        if e.space() != Space::Eisenstein {
            return Err(Error::WrongSpace { expected: Space::Eisenstein, found: e.space() }.into());
        }
        let value = KroneckerRealization::shared(e.weight(), order)?.realize(e)?;
        write_out(out, Box::into_raw(Box::new(FdesSeries(value))))
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdes_series_free(s: *mut FdesSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_series_order(s: *const FdesSeries, out: *mut usize) -> FdesStatus {
    guard(|| write_out(out, deref(s, "series")?.0.order()))
}

/// The coefficient of `q^n` as `p/q` text; zero beyond the order is an error.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_series_coeff(s: *const FdesSeries, n: usize, out: *mut *mut c_char) -> FdesStatus {
    guard(|| {
        let s = &deref(s, "series")?.0;
        if n > s.order() {
            return Err(Failure(FdesStatus::InvalidArgument, format!("q^{n} is beyond the order {}", s.order())));
        }
        write_out(out, into_c_string(fdes::rational::format_rational(s.coeff(n))))
    })
}

/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdes_series_to_string(s: *const FdesSeries, out: *mut *mut c_char) -> FdesStatus {
    guard(|| write_out(out, into_c_string(deref(s, "series")?.0.to_string())))
}
