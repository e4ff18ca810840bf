//! C ABI over the `census` library.
//!
//! Words and presentations cross the boundary as opaque handles that the
//! caller releases with the matching `_free` function. Every fallible call
//! returns a [`CensusStatus`]; on failure `census_last_error()` describes the
//! most recent error on the calling thread. Strings returned through out
//! parameters are owned by the caller and released with
//! `census_string_free`. Big integers are returned as decimal strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use census::genericity::{self, Lambda};
use census::presentations::{self, Presentation};
use census::symmetry::{self, OrbitMethod};
use census::words::{self, WordSet};
use census::{complexity, Error, Word};

/// Result of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CensusStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    NotReduced = 3,
    BudgetExceeded = 4,
    ProperPower = 5,
    SmallCancellation = 6,
    NotPrefixFree = 7,
    BelowResolution = 8,
    TwoTorsionUnasserted = 9,
    Ambiguous = 10,
    NotFound = 11,
    NullPointer = 12,
    Panic = 13,
}

/// Orbit counting method for `census_count_orbits`.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CensusOrbitMethod {
    Canonicalize = 0,
    Burnside = 1,
}

/// A freely reduced word.
pub struct CensusWord {
    inner: Word,
}

/// A finite presentation.
pub struct CensusPresentation {
    inner: Presentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CensusStatus {
    match e {
        Error::InvalidArgument(_) => CensusStatus::InvalidArgument,
        Error::Parse(_) => CensusStatus::ParseError,
        Error::NotReduced { .. } => CensusStatus::NotReduced,
        Error::BudgetExceeded { .. } => CensusStatus::BudgetExceeded,
        Error::ProperPower => CensusStatus::ProperPower,
        Error::SmallCancellation(_) => CensusStatus::SmallCancellation,
        Error::NotPrefixFree { .. } => CensusStatus::NotPrefixFree,
        Error::BelowResolution(_) => CensusStatus::BelowResolution,
        Error::TwoTorsionUnasserted => CensusStatus::TwoTorsionUnasserted,
        Error::Ambiguous(_) => CensusStatus::Ambiguous,
        Error::NotFound => CensusStatus::NotFound,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> CensusStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CensusStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("{what} is null"));
            CensusStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic");
            CensusStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).expect("library strings have no NUL");
    put(out, c.into_raw(), "out")
}

fn boxed_word(w: Word) -> *mut CensusWord {
    Box::into_raw(Box::new(CensusWord { inner: w }))
}

fn lambda(num: u64, den: u64) -> Result<Lambda, Fail> {
    Ok(Lambda::new(num, den)?)
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn census_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn census_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn census_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a word in the letter (`abAB`) or numeric (`x1 X2`) form. Without
/// `reduce`, non-reduced input fails with `CENSUS_STATUS_NOT_REDUCED`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_word_parse(
    text: *const c_char,
    reduce: bool,
    out: *mut *mut CensusWord,
) -> CensusStatus {
    guard(|| {
        let w = Word::parse(str_arg(text, "text")?, reduce)?;
        put(out, boxed_word(w), "out")
    })
}

/// # Safety
/// `w` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn census_word_free(w: *mut CensusWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Length of `w`, or 0 for null.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn census_word_length(w: *const CensusWord) -> usize {
    w.as_ref().map_or(0, |w| w.inner.len())
}

/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_word_to_string(
    w: *const CensusWord,
    numeric: bool,
    out: *mut *mut c_char,
) -> CensusStatus {
    guard(|| put_string(out, handle(w, "word")?.inner.to_text(numeric)))
}

/// Whether `w` is cyclically reduced.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_word_is_cyclically_reduced(
    w: *const CensusWord,
    out: *mut bool,
) -> CensusStatus {
    guard(|| put(out, handle(w, "word")?.inner.is_cyclically_reduced(), "out"))
}

/// Exact `γ(n, F)` (or `γ(n, CR)` with `cyclically_reduced`) as a decimal
/// string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn census_gamma(
    k: u32,
    n: usize,
    cyclically_reduced: bool,
    out: *mut *mut c_char,
) -> CensusStatus {
    guard(|| {
        if k == 0 || (cyclically_reduced && n == 0) {
            return Err(Error::InvalidArgument("need k >= 1, and n >= 1 for CR".into()).into());
        }
        let set = if cyclically_reduced {
            WordSet::CyclicallyReduced
        } else {
            WordSet::Free
        };
        put_string(out, words::gamma(k, n, set).to_string())
    })
}

/// Orbits of length-`n` cyclically reduced words over `k` generators, as a
/// decimal string. `cap` bounds enumeration for the canonicalize method.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn census_count_orbits(
    k: u32,
    n: usize,
    method: CensusOrbitMethod,
    cap: u64,
    out: *mut *mut c_char,
) -> CensusStatus {
    guard(|| {
        let m = match method {
            CensusOrbitMethod::Canonicalize => OrbitMethod::Canonicalize,
            CensusOrbitMethod::Burnside => OrbitMethod::Burnside,
        };
        put_string(out, symmetry::count_orbits(k, n, m, cap)?.to_string())
    })
}

/// Least element of the orbit of a cyclically reduced `w`.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_canonical_form(
    w: *const CensusWord,
    k: u32,
    out: *mut *mut CensusWord,
) -> CensusStatus {
    guard(|| {
        let c = symmetry::canonical_form(&handle(w, "word")?.inner, k)?;
        put(out, boxed_word(c), "out")
    })
}

/// Membership of `w` in `E(num/den)` over `k` generators.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_in_e(
    w: *const CensusWord,
    num: u64,
    den: u64,
    k: u32,
    out: *mut bool,
) -> CensusStatus {
    guard(|| {
        let r = genericity::in_e(&handle(w, "word")?.inner, lambda(num, den)?, k)?;
        put(out, r, "out")
    })
}

/// The `C'(num/den)` test. `max_piece` may be null.
///
/// # Safety
/// `w` must be a live handle, `satisfied` writable and `max_piece` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn census_c_prime(
    w: *const CensusWord,
    num: u64,
    den: u64,
    satisfied: *mut bool,
    max_piece: *mut usize,
) -> CensusStatus {
    guard(|| {
        let r = genericity::satisfies_c_prime(&handle(w, "word")?.inner, lambda(num, den)?)?;
        if !max_piece.is_null() {
            max_piece.write(r.max_piece);
        }
        put(satisfied, r.satisfied, "satisfied")
    })
}

/// Dehn's algorithm: writes the reduced word (empty iff `word` lies in the
/// normal closure of `relator`) and the number of steps (may be null).
///
/// # Safety
/// Handles must be live, `out` writable and `steps` null or writable.
#[no_mangle]
pub unsafe extern "C" fn census_dehn_reduce(
    relator: *const CensusWord,
    word: *const CensusWord,
    out: *mut *mut CensusWord,
    steps: *mut usize,
) -> CensusStatus {
    guard(|| {
        let (reduced, trace) = presentations::dehn_reduce(
            &handle(relator, "relator")?.inner,
            &handle(word, "word")?.inner,
        )?;
        if !steps.is_null() {
            steps.write(trace.steps.len());
        }
        put(out, boxed_word(reduced), "out")
    })
}

/// Bits emitted by the compression estimator for `w` over `k` generators.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_c_est(
    w: *const CensusWord,
    k: u32,
    out: *mut usize,
) -> CensusStatus {
    guard(|| {
        put(
            out,
            complexity::c_est(&handle(w, "word")?.inner, k)?.bits,
            "out",
        )
    })
}

/// Parses the `gens: <m>` / `rel: <word>` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_presentation_parse(
    text: *const c_char,
    reduce: bool,
    out: *mut *mut CensusPresentation,
) -> CensusStatus {
    guard(|| {
        let p = Presentation::parse(str_arg(text, "text")?, reduce)?;
        put(
            out,
            Box::into_raw(Box::new(CensusPresentation { inner: p })),
            "out",
        )
    })
}

/// # Safety
/// `p` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn census_presentation_free(p: *mut CensusPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The presentation in the text file format.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_presentation_to_string(
    p: *const CensusPresentation,
    numeric: bool,
    out: *mut *mut c_char,
) -> CensusStatus {
    guard(|| {
        put_string(
            out,
            handle(p, "presentation")?.inner.to_file_string(numeric),
        )
    })
}

/// `ℓ` and `ℓ₁`; either output may be null.
///
/// # Safety
/// `p` must be a live handle; outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn census_presentation_lengths(
    p: *const CensusPresentation,
    ell: *mut usize,
    ell_1: *mut usize,
) -> CensusStatus {
    guard(|| {
        let p = &handle(p, "presentation")?.inner;
        if !ell.is_null() {
            ell.write(p.ell());
        }
        if !ell_1.is_null() {
            ell_1.write(p.ell_1());
        }
        Ok(())
    })
}

/// Six-letter and binary encodings; `binary` may be null.
///
/// # Safety
/// `p` must be a live handle, `six_letter` writable, `binary` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn census_presentation_encode(
    p: *const CensusPresentation,
    six_letter: *mut *mut c_char,
    binary: *mut *mut c_char,
) -> CensusStatus {
    guard(|| {
        let e = presentations::encode(&handle(p, "presentation")?.inner)?;
        if !binary.is_null() {
            put_string(binary, e.binary)?;
        }
        put_string(six_letter, e.six_letter)
    })
}

/// Inverse of the six-letter encoding.
///
/// # Safety
/// `six_letter` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_presentation_decode(
    six_letter: *const c_char,
    out: *mut *mut CensusPresentation,
) -> CensusStatus {
    guard(|| {
        let p = presentations::decode(str_arg(six_letter, "six_letter")?)?;
        put(
            out,
            Box::into_raw(Box::new(CensusPresentation { inner: p })),
            "out",
        )
    })
}

/// Removes relators of length at most two. `no_two_torsion` asserts the group
/// has no elements of order two, which square relators require.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_tietze_cleanup(
    p: *const CensusPresentation,
    no_two_torsion: bool,
    out: *mut *mut CensusPresentation,
) -> CensusStatus {
    guard(|| {
        let r = presentations::tietze_cleanup(&handle(p, "presentation")?.inner, no_two_torsion)?;
        put(
            out,
            Box::into_raw(Box::new(CensusPresentation {
                inner: r.presentation,
            })),
            "out",
        )
    })
}

/// Recovers the member of the orbit of `candidate` that starts with
/// `prefix` over `k` generators.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn census_recover_from_candidate(
    candidate: *const CensusWord,
    prefix: *const CensusWord,
    k: u32,
    out: *mut *mut CensusWord,
) -> CensusStatus {
    guard(|| {
        let r = presentations::recover_from_candidate(
            &handle(candidate, "candidate")?.inner,
            &handle(prefix, "prefix")?.inner,
            k,
        )?;
        put(out, boxed_word(r), "out")
    })
}
