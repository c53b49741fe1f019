use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use opcomp_ffi::*;

const WORKED: &str = r#"{"operator":[["1","2"],["3","4"]],"M":{"ambient_dim":2,"span":[["1","0"]]},"N":{"ambient_dim":2,"span":[["1","0"]]}}"#;
const NOT_COMPLEMENTABLE: &str = r#"{"operator":[["1","1"],["0","0"]],"M":{"ambient_dim":2,"span":[["1","0"]]},"N":{"ambient_dim":2,"span":[["1","0"]]}}"#;

fn take(s: *mut c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { oc_string_free(s) };
    serde_json::from_str(&text).unwrap()
}

fn last_error() -> String {
    let p = oc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn instance(json: &str) -> *mut OcInstance {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { oc_instance_from_json(c.as_ptr(), &mut h) }, OcStatus::Ok);
    h
}

#[test]
fn worked_instance_round_trip() {
    let h = instance(WORKED);
    let mut flag: c_int = -1;
    assert_eq!(unsafe { oc_instance_is_complementable(h, &mut flag) }, OcStatus::Ok);
    assert_eq!(flag, 1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { oc_instance_schur(h, &mut out) }, OcStatus::Ok);
    assert_eq!(take(out), serde_json::json!([["-1/2", "0"], ["0", "0"]]));
    assert_eq!(unsafe { oc_instance_check(h, &mut out) }, OcStatus::Ok);
    assert_eq!(take(out)["x_factor"][1][0], "3/4");
    assert!(oc_last_error().is_null());
    unsafe { oc_instance_free(h) };
}

#[test]
fn not_complementable_status() {
    let h = instance(NOT_COMPLEMENTABLE);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { oc_instance_schur(h, &mut out) }, OcStatus::NotComplementable);
    assert!(out.is_null());
    assert!(last_error().contains("Bstar_in_Dstar"));
    assert_eq!(unsafe { oc_instance_check(h, &mut out) }, OcStatus::Ok);
    assert_eq!(take(out)["complementable"], false);
    unsafe { oc_instance_free(h) };
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { oc_instance_from_json(ptr::null(), &mut h) },
        OcStatus::NullPointer
    );
    let bad =
        CString::new(r#"{"operator":[["1","zz"]],"M":{"ambient_dim":2,"span":[]},"N":{"ambient_dim":1,"span":[]}}"#)
            .unwrap();
    assert_eq!(
        unsafe { oc_instance_from_json(bad.as_ptr(), &mut h) },
        OcStatus::MalformedInput
    );
    assert!(last_error().contains("operator[0][1]"));
    let broken = CString::new("{").unwrap();
    assert_eq!(
        unsafe { oc_instance_from_json(broken.as_ptr(), &mut h) },
        OcStatus::MalformedInput
    );
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { oc_instance_from_json(invalid.as_ptr().cast(), &mut h) },
        OcStatus::InvalidUtf8
    );
    assert!(h.is_null());
    let mut flag = 0;
    assert_eq!(
        unsafe { oc_instance_is_complementable(ptr::null(), &mut flag) },
        OcStatus::NullPointer
    );
    unsafe {
        oc_instance_free(ptr::null_mut());
        oc_string_free(ptr::null_mut());
    }
}

#[test]
fn douglas() {
    let mut out = ptr::null_mut();
    let row = CString::new(r#"{"A":[["2"]],"B":[["1","1"]]}"#).unwrap();
    assert_eq!(unsafe { oc_douglas(row.as_ptr(), &mut out) }, OcStatus::Ok);
    let v = take(out);
    assert_eq!(v["reduced_solution"], serde_json::json!([["1"], ["1"]]));
    assert!((v["lambda_star"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let outside = CString::new(r#"{"A":[["0"],["1"]],"B":[["1"],["0"]]}"#).unwrap();
    assert_eq!(
        unsafe { oc_douglas(outside.as_ptr(), &mut out) },
        OcStatus::RangeNotIncluded
    );
    let missing = CString::new(r#"{"A":[["1"]]}"#).unwrap();
    assert_eq!(
        unsafe { oc_douglas(missing.as_ptr(), &mut out) },
        OcStatus::MalformedInput
    );
}

#[test]
fn sequence_model() {
    let spec = CString::new(opcomp::cli::fixture("pairing-example").unwrap()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { oc_seq_from_json(spec.as_ptr(), &mut h) }, OcStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { oc_seq_decide(h, &mut out) }, OcStatus::Ok);
    let v = take(out);
    assert_eq!(v["decision"]["verdict"], "NOT_DECOMPOSABLE");
    assert_eq!(v["witness_terms"][2]["x_second"], "1/5");
    assert_eq!(v["complement"]["consistent"], true);
    unsafe { oc_seq_free(h) };
}

#[test]
fn cli_in_process() {
    let args: Vec<CString> = ["check", "--input", "fixture:worked-complementable", "--format", "json"]
        .iter()
        .map(|a| CString::new(*a).unwrap())
        .collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut code, mut so, mut se) = (-1, ptr::null_mut(), ptr::null_mut());
    let status = unsafe { oc_cli_run(argv.len() as c_int, argv.as_ptr(), &mut code, &mut so, &mut se) };
    assert_eq!(status, OcStatus::Ok);
    assert_eq!(code, 0);
    assert_eq!(take(so)["schur"][0][0], "-1/2");
    unsafe { oc_string_free(se) };

    let bad = [
        CString::new("verify").unwrap(),
        CString::new("--trials").unwrap(),
        CString::new("0").unwrap(),
    ];
    let argv: Vec<*const c_char> = bad.iter().map(|a| a.as_ptr()).collect();
    let status = unsafe { oc_cli_run(3, argv.as_ptr(), &mut code, &mut so, &mut se) };
    assert_eq!(status, OcStatus::Ok);
    assert_eq!(code, 2);
    unsafe {
        oc_string_free(so);
        oc_string_free(se);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(oc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
