use std::ffi::{c_char, CStr, CString};
use std::ptr;

use census_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    census_string_free(s);
    out
}

unsafe fn word(s: &str) -> *mut CensusWord {
    let mut w = ptr::null_mut();
    assert_eq!(
        census_word_parse(cstr(s).as_ptr(), false, &mut w),
        CensusStatus::Ok
    );
    w
}

#[test]
fn word_round_trip_and_errors() {
    unsafe {
        let w = word("abAB");
        assert_eq!(census_word_length(w), 4);
        let mut s = ptr::null_mut();
        assert_eq!(census_word_to_string(w, true, &mut s), CensusStatus::Ok);
        assert_eq!(take(s), "x1 x2 X1 X2");
        let mut cr = false;
        assert_eq!(
            census_word_is_cyclically_reduced(w, &mut cr),
            CensusStatus::Ok
        );
        assert!(cr);
        census_word_free(w);

        let mut bad = ptr::null_mut();
        assert_eq!(
            census_word_parse(cstr("aA").as_ptr(), false, &mut bad),
            CensusStatus::NotReduced
        );
        assert!(bad.is_null());
        let msg = CStr::from_ptr(census_last_error()).to_str().unwrap();
        assert!(msg.contains("not freely reduced"), "{msg}");
        assert_eq!(
            census_word_parse(cstr("aA").as_ptr(), true, &mut bad),
            CensusStatus::Ok
        );
        assert_eq!(census_word_length(bad), 0);
        census_word_free(bad);

        assert_eq!(
            census_word_parse(ptr::null(), false, &mut bad),
            CensusStatus::NullPointer
        );
        census_word_free(ptr::null_mut());
        census_string_free(ptr::null_mut());
    }
}

#[test]
fn counts() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(census_gamma(2, 3, true, &mut s), CensusStatus::Ok);
        assert_eq!(take(s), "28");
        assert_eq!(census_gamma(2, 100, false, &mut s), CensusStatus::Ok);
        assert_eq!(take(s).len(), 48);
        for method in [CensusOrbitMethod::Canonicalize, CensusOrbitMethod::Burnside] {
            assert_eq!(
                census_count_orbits(2, 3, method, 1_000_000, &mut s),
                CensusStatus::Ok
            );
            assert_eq!(take(s), "2");
        }
        assert_eq!(
            census_count_orbits(2, 12, CensusOrbitMethod::Canonicalize, 10, &mut s),
            CensusStatus::BudgetExceeded
        );
    }
}

#[test]
fn symmetry_and_genericity() {
    unsafe {
        let aa = word("aa");
        let bb = word("BB");
        let (mut ca, mut cb) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(census_canonical_form(aa, 2, &mut ca), CensusStatus::Ok);
        assert_eq!(census_canonical_form(bb, 2, &mut cb), CensusStatus::Ok);
        let (mut s1, mut s2) = (ptr::null_mut(), ptr::null_mut());
        census_word_to_string(ca, false, &mut s1);
        census_word_to_string(cb, false, &mut s2);
        assert_eq!(take(s1), take(s2));
        for w in [aa, bb, ca, cb] {
            census_word_free(w);
        }
        let not_cr = word("abA");
        assert_eq!(
            census_canonical_form(not_cr, 2, &mut ca),
            CensusStatus::InvalidArgument
        );
        census_word_free(not_cr);

        let x = word("aab");
        let y = word("BAA");
        assert_eq!(census_canonical_form(x, 2, &mut ca), CensusStatus::Ok);
        assert_eq!(census_canonical_form(y, 2, &mut cb), CensusStatus::Ok);
        let (mut s1, mut s2) = (ptr::null_mut(), ptr::null_mut());
        census_word_to_string(ca, false, &mut s1);
        census_word_to_string(cb, false, &mut s2);
        assert_eq!(take(s1), take(s2));
        for w in [x, y, ca, cb] {
            census_word_free(w);
        }

        let c = word("abAB");
        let (mut ok, mut piece) = (true, 0usize);
        assert_eq!(
            census_c_prime(c, 1, 3, &mut ok, &mut piece),
            CensusStatus::Ok
        );
        assert!(!ok);
        assert_eq!(piece, 1);
        assert_eq!(
            census_c_prime(c, 1, 2, &mut ok, ptr::null_mut()),
            CensusStatus::Ok
        );
        assert!(ok);
        let mut in_e = true;
        assert_eq!(census_in_e(c, 1, 6, 2, &mut in_e), CensusStatus::Ok);
        assert!(!in_e);
        assert_eq!(
            census_in_e(c, 1, 2, 2, &mut in_e),
            CensusStatus::InvalidArgument
        );
        census_word_free(c);
    }
}

#[test]
fn dehn_and_estimates() {
    unsafe {
        let generic = "abaabbbaBAbbaBBBABaaBaBBAbABBBAbAAbbbabbaBAbaBABBBabAbbaBAAAB";
        let r = word(generic);
        let (mut ok, mut piece) = (false, 0usize);
        census_c_prime(r, 1, 6, &mut ok, &mut piece);
        if ok {
            let mut out = ptr::null_mut();
            let mut steps = 0usize;
            assert_eq!(
                census_dehn_reduce(r, r, &mut out, &mut steps),
                CensusStatus::Ok
            );
            assert_eq!(census_word_length(out), 0);
            assert_eq!(steps, 1);
            census_word_free(out);
        }
        let comm = word("abAB");
        let mut out = ptr::null_mut();
        assert_eq!(
            census_dehn_reduce(comm, comm, &mut out, ptr::null_mut()),
            CensusStatus::SmallCancellation
        );
        let mut bits = 0usize;
        assert_eq!(census_c_est(comm, 2, &mut bits), CensusStatus::Ok);
        assert!(bits > 0);
        census_word_free(comm);
        census_word_free(r);

        let periodic = word(&"ab".repeat(100));
        assert_eq!(census_c_est(periodic, 2, &mut bits), CensusStatus::Ok);
        assert!(bits < 40);
        census_word_free(periodic);
    }
}

#[test]
fn presentations() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(
            census_presentation_parse(cstr("gens: 2\nrel: abAB\n").as_ptr(), false, &mut p),
            CensusStatus::Ok
        );
        let (mut ell, mut ell1) = (0, 0);
        census_presentation_lengths(p, &mut ell, &mut ell1);
        assert_eq!((ell, ell1), (2, 4));
        let (mut six, mut bin) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            census_presentation_encode(p, &mut six, &mut bin),
            CensusStatus::Ok
        );
        let six = take(six);
        assert_eq!(six, "10|b1b10-b1-b10");
        assert_eq!(take(bin).len(), 45);
        let mut q = ptr::null_mut();
        assert_eq!(
            census_presentation_decode(cstr(&six).as_ptr(), &mut q),
            CensusStatus::Ok
        );
        let mut text = ptr::null_mut();
        census_presentation_to_string(q, false, &mut text);
        assert_eq!(take(text), "gens: 2\nrel: abAB\n");
        census_presentation_free(p);
        census_presentation_free(q);

        census_presentation_parse(cstr("gens: 2\nrel: ab\n").as_ptr(), false, &mut p);
        assert_eq!(census_tietze_cleanup(p, false, &mut q), CensusStatus::Ok);
        census_presentation_to_string(q, false, &mut text);
        assert_eq!(take(text), "gens: 1\n");
        census_presentation_free(p);
        census_presentation_free(q);

        census_presentation_parse(cstr("gens: 1\nrel: aa\n").as_ptr(), false, &mut p);
        assert_eq!(
            census_tietze_cleanup(p, false, &mut q),
            CensusStatus::TwoTorsionUnasserted
        );
        census_presentation_free(p);
    }
}

#[test]
fn recovery() {
    unsafe {
        let v = word("aabab");
        let u = word("a");
        let mut out = ptr::null_mut();
        assert_eq!(
            census_recover_from_candidate(v, u, 2, &mut out),
            CensusStatus::Ambiguous
        );
        let u2 = word("babaa");
        assert_eq!(
            census_recover_from_candidate(v, u2, 2, &mut out),
            CensusStatus::Ok
        );
        let mut s = ptr::null_mut();
        census_word_to_string(out, false, &mut s);
        assert_eq!(take(s), "babaa");
        for w in [v, u, u2, out] {
            census_word_free(w);
        }
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(census_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
