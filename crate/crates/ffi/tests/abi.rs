use std::ffi::{CStr, CString};
use std::ptr;

use transproj_ffi::*;

const DIAGONAL: &str = r#"{
  "triple": {
    "alpha": {"chart": ["x", "y"], "dx": "1/x"},
    "beta":  {"chart": ["x", "y"], "dx": "0"},
    "gamma": {"chart": ["x", "y"], "dx": "0"}
  }
}"#;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    tp_string_free(p);
    s
}

unsafe fn last_error() -> Option<String> {
    let p = tp_last_error();
    (!p.is_null()).then(|| CStr::from_ptr(p).to_str().unwrap().to_owned())
}

unsafe fn parse(json: &str) -> *mut TpSession {
    let mut s = ptr::null_mut();
    assert_eq!(tp_session_parse(cs(json).as_ptr(), &mut s), TpStatus::Ok);
    s
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(tp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn parse_and_run_check() {
    unsafe {
        let s = parse(DIAGONAL);
        let mut report = ptr::null_mut();
        let st = tp_session_run(s, cs("check").as_ptr(), ptr::null(), &mut report);
        assert_eq!(st, TpStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["ok"], true);
        assert!(last_error().is_none());
        tp_session_free(s);
    }
}

#[test]
fn malformed_document_is_invalid() {
    unsafe {
        let mut s = ptr::null_mut();
        let st = tp_session_parse(cs("{\"triple\": 3}").as_ptr(), &mut s);
        assert_eq!(st, TpStatus::Invalid);
        assert!(s.is_null());
        assert!(last_error().is_some());
    }
}

#[test]
fn unknown_verb_reports_a_diagnostic() {
    unsafe {
        let s = parse(DIAGONAL);
        let mut report = ptr::null_mut();
        let st = tp_session_run(s, cs("frobnicate").as_ptr(), ptr::null(), &mut report);
        assert_eq!(st, TpStatus::Invalid);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert!(v.get("error").is_some());
        assert!(last_error().unwrap().contains("frobnicate"));
        tp_session_free(s);
    }
}

#[test]
fn bad_options_are_rejected() {
    unsafe {
        let s = parse(DIAGONAL);
        let mut report = ptr::null_mut();
        let st = tp_session_run(s, cs("check").as_ptr(), cs("[1,2]").as_ptr(), &mut report);
        assert_eq!(st, TpStatus::Invalid);
        assert!(report.is_null());
        tp_session_free(s);
    }
}

#[test]
fn null_arguments() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            tp_session_parse(ptr::null(), &mut s),
            TpStatus::NullArgument
        );
        assert_eq!(
            tp_session_parse(cs("{}").as_ptr(), ptr::null_mut()),
            TpStatus::NullArgument
        );
        let mut report = ptr::null_mut();
        assert_eq!(
            tp_session_run(ptr::null(), cs("check").as_ptr(), ptr::null(), &mut report),
            TpStatus::NullArgument
        );
        let mut flag = false;
        assert_eq!(
            tp_triple_is_integrable(ptr::null(), &mut flag),
            TpStatus::NullArgument
        );
        tp_session_free(ptr::null_mut());
        tp_triple_free(ptr::null_mut());
        tp_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8() {
    unsafe {
        let bytes = CString::new(vec![0xffu8, 0xfe]).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(
            tp_session_parse(bytes.as_ptr(), &mut s),
            TpStatus::InvalidUtf8
        );
    }
}

#[test]
fn triple_queries() {
    unsafe {
        let s = parse(DIAGONAL);
        let mut t = ptr::null_mut();
        assert_eq!(tp_session_triple(s, &mut t), TpStatus::Ok);
        let mut flag = false;
        assert_eq!(tp_triple_is_integrable(t, &mut flag), TpStatus::Ok);
        assert!(flag);
        let mut deg = 0;
        assert_eq!(tp_triple_polar_degree(t, &mut deg), TpStatus::Ok);
        assert_eq!(deg, 1);
        let mut d = ptr::null_mut();
        assert_eq!(tp_triple_digest(t, &mut d), TpStatus::Ok);
        let digest = take(d);
        assert_eq!(digest.len(), 64);
        let mut j = ptr::null_mut();
        assert_eq!(tp_triple_to_json(t, &mut j), TpStatus::Ok);
        let doc = format!("{{\"triple\": {}}}", take(j));
        let s2 = parse(&doc);
        let mut t2 = ptr::null_mut();
        assert_eq!(tp_session_triple(s2, &mut t2), TpStatus::Ok);
        let mut d2 = ptr::null_mut();
        tp_triple_digest(t2, &mut d2);
        assert_eq!(take(d2), digest);
        tp_triple_free(t2);
        tp_session_free(s2);
        tp_triple_free(t);
        tp_session_free(s);
    }
}

#[test]
fn missing_triple_is_invalid() {
    unsafe {
        let s = parse("{}");
        let mut t = ptr::null_mut();
        assert_eq!(tp_session_triple(s, &mut t), TpStatus::Invalid);
        assert!(t.is_null());
        tp_session_free(s);
    }
}

#[test]
fn normalize_round_trip() {
    unsafe {
        let doc = r#"{
          "triple": {
            "alpha": {"chart": ["x", "y"], "dx": "1/x^2"},
            "beta":  {"chart": ["x", "y"]},
            "gamma": {"chart": ["x", "y"]}
          },
          "section": ["1", "1"]
        }"#;
        let s = parse(doc);
        let mut t = ptr::null_mut();
        assert_eq!(tp_session_triple(s, &mut t), TpStatus::Ok);
        let mut nf = ptr::null_mut();
        let mut tr = ptr::null_mut();
        let st = tp_triple_normalize(t, 0, &mut nf, &mut tr);
        assert_eq!(st, TpStatus::Ok, "{:?}", last_error());
        let transcript: serde_json::Value = serde_json::from_str(&take(tr)).unwrap();
        assert!(transcript.get("steps").is_some());
        let mut flag = false;
        tp_triple_is_integrable(nf, &mut flag);
        assert!(flag);
        tp_triple_free(nf);
        tp_triple_free(t);
        tp_session_free(s);
    }
}

#[test]
fn eccentricity() {
    assert_eq!(tp_eccentricity(5, 2), 1);
    assert_eq!(tp_eccentricity(3, 2), -1);
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/transproj.h"))
        .unwrap();
    for f in [
        "tp_session_parse",
        "tp_session_run",
        "tp_triple_normalize",
        "tp_last_error",
        "TP_STATUS_NEEDS_EXTENSION",
    ] {
        assert!(h.contains(f), "{f}");
    }
}
