use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use fdes_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { fdes_string_free(p) };
    s
}

fn parse(text: &str) -> *mut FdesElement {
    let c = CString::new(text).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { fdes_element_parse(c.as_ptr(), &mut e) }, FdesStatus::Ok);
    e
}

#[test]
fn element_round_trip() {
    let e = parse("2*G(4;0) - P(2,2;0,0)");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fdes_element_to_string(e, &mut s) }, FdesStatus::Ok);
    let text = take_string(s);
    assert!(text.contains("G(4;0)") && text.contains("P(2,2;0,0)"), "{text}");
    let (mut w, mut sp) = (0u32, FdesSpace::Zeta);
    assert_eq!(unsafe { fdes_element_info(e, &mut w, &mut sp) }, FdesStatus::Ok);
    assert_eq!((w, sp), (4, FdesSpace::Eisenstein));
    unsafe { fdes_element_free(e) };
}

#[test]
fn errors_are_reported() {
    let mut e = ptr::null_mut();
    let bad = CString::new("G(2;0) + Z(3)").unwrap();
    assert_ne!(unsafe { fdes_element_parse(bad.as_ptr(), &mut e) }, FdesStatus::Ok);
    assert!(e.is_null());
    assert!(!take_string(fdes_last_error()).is_empty());

    let junk = CString::new("G(2;").unwrap();
    assert_eq!(unsafe { fdes_element_parse(junk.as_ptr(), &mut e) }, FdesStatus::Parse);
    assert_eq!(unsafe { fdes_element_parse(ptr::null(), &mut e) }, FdesStatus::NullPointer);
    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { fdes_element_parse(invalid.as_ptr().cast(), &mut e) }, FdesStatus::InvalidUtf8);

    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { fdes_system_build(FdesSpace::Eisenstein, 0, &mut sys) }, FdesStatus::InvalidArgument);

    let ok = parse("G(2;0)");
    assert!(fdes_last_error().is_null());
    let z = parse("Z(3)");
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { fdes_realize(z, 4, &mut series) }, FdesStatus::WrongSpace);
    unsafe {
        fdes_element_free(ok);
        fdes_element_free(z);
        fdes_element_free(ptr::null_mut());
    }
}

#[test]
fn system_queries() {
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { fdes_system_build(FdesSpace::Eisenstein, 4, &mut sys) }, FdesStatus::Ok);
    let (mut g, mut r, mut d) = (0, 0, 0);
    assert_eq!(unsafe { fdes_system_sizes(sys, &mut g, &mut r, &mut d) }, FdesStatus::Ok);
    let rust = fdes::RelationSystem::build(fdes::Space::Eisenstein, 4).unwrap();
    assert_eq!((g, r, d), (rust.basis().len(), rust.rank(), rust.dimension()));

    let sum = fdes::identities::sum_formula(4, 0).unwrap();
    let e = parse(&sum.to_string());
    let mut zero = false;
    assert_eq!(unsafe { fdes_system_is_zero(sys, e, &mut zero) }, FdesStatus::Ok);
    assert!(zero);

    let mut nf = ptr::null_mut();
    assert_eq!(unsafe { fdes_system_normal_form(sys, e, &mut nf) }, FdesStatus::Ok);
    let mut s = ptr::null_mut();
    unsafe { fdes_element_to_string(nf, &mut s) };
    assert_eq!(take_string(s), "0");

    let wrong = parse("G(2;0)");
    assert_ne!(unsafe { fdes_system_is_zero(sys, wrong, &mut zero) }, FdesStatus::Ok);
    unsafe {
        fdes_element_free(e);
        fdes_element_free(nf);
        fdes_element_free(wrong);
        fdes_system_free(sys);
    }
}

#[test]
fn maps_match_library() {
    let text = "Z(3,2)";
    let e = parse(text);
    let rust = fdes::parse::parse_expression(text).unwrap().element;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fdes_map(FdesMap::Sigma, e, &mut out) }, FdesStatus::Ok);
    let mut s = ptr::null_mut();
    unsafe { fdes_element_to_string(out, &mut s) };
    assert_eq!(take_string(s), fdes::formal::map_sigma(&rust).unwrap().to_string());

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { fdes_map(FdesMap::Pi, out, &mut back) }, FdesStatus::Ok);
    unsafe { fdes_element_to_string(back, &mut s) };
    assert_eq!(take_string(s), rust.to_string());

    let mut wrong = ptr::null_mut();
    assert_eq!(unsafe { fdes_map(FdesMap::Partial, e, &mut wrong) }, FdesStatus::WrongSpace);
    unsafe {
        fdes_element_free(e);
        fdes_element_free(out);
        fdes_element_free(back);
    }
}

#[test]
fn realization_series() {
    let e = parse("G(2;0)");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fdes_realize(e, 4, &mut s) }, FdesStatus::Ok);
    let mut order = 0;
    assert_eq!(unsafe { fdes_series_order(s, &mut order) }, FdesStatus::Ok);
    assert_eq!(order, 4);
    let mut c = ptr::null_mut();
    let coeffs: Vec<String> = (0..=4)
        .map(|n| {
            assert_eq!(unsafe { fdes_series_coeff(s, n, &mut c) }, FdesStatus::Ok);
            take_string(c)
        })
        .collect();
    assert_eq!(coeffs, ["-1/24", "1", "3", "4", "7"]);
    assert_eq!(unsafe { fdes_series_coeff(s, 5, &mut c) }, FdesStatus::InvalidArgument);
    let mut text = ptr::null_mut();
    unsafe { fdes_series_to_string(s, &mut text) };
    assert_eq!(take_string(text), "-1/24 + q + 3*q^2 + 4*q^3 + 7*q^4 + O(q^5)");
    unsafe {
        fdes_series_free(s);
        fdes_element_free(e);
    }
}

#[test]
fn null_handles() {
    let mut out = 0usize;
    assert_eq!(unsafe { fdes_series_order(ptr::null(), &mut out) }, FdesStatus::NullPointer);
    let e = parse("G(2;0)");
    assert_eq!(unsafe { fdes_element_to_string(e, ptr::null_mut()) }, FdesStatus::NullPointer);
    unsafe { fdes_element_free(e) };
    let v = unsafe { CStr::from_ptr(fdes_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = artifact_dir().join("libfdes_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("fdes_smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("constant term -1/24"), "{stdout}");
}
