use std::ffi::{CStr, CString};
use std::ptr;

use nodal_lls::cli::runner::sample_rng;
use nodal_lls::cli::schema::InstanceFile;
use nodal_lls::corpus::{random_candidate, random_chains, random_connected_graph, random_multidegree, random_points, CandidateKind};
use nodal_lls::curves::CurveInstance;
use nodal_lls::exactalg::PrimeField;
use nodal_lls::llseries::{is_lls_kernel, Window};
use nodal_lls::multidegrees::{ChainedGraph, ConcentratedTuple};
use nodal_lls_ffi::*;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/");

fn data(name: &str) -> CString {
    CString::new(std::fs::read_to_string(format!("{DATA}{name}")).unwrap()).unwrap()
}

fn last_error() -> String {
    let p = nlls_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn load(name: &str) -> *mut NllsInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { nlls_instance_from_json(data(name).as_ptr(), &mut inst) }, NllsStatus::Ok);
    assert!(!inst.is_null());
    inst
}

#[test]
fn verdicts_match_the_library() {
    let text = std::fs::read_to_string(format!("{DATA}worked.json")).unwrap();
    let file = InstanceFile::parse(&text).unwrap();
    let field = PrimeField::new(7).unwrap();
    let lib = file.build(&field).unwrap();
    let inst = load("worked.json");
    let mut count = 0;
    assert_eq!(unsafe { nlls_instance_candidate_count(inst, &mut count) }, NllsStatus::Ok);
    assert_eq!(count, file.candidates.len());
    for (i, spec) in file.candidates.iter().enumerate() {
        let cand = file.build_candidate(&lib, spec).unwrap();
        let expected = is_lls_kernel(&lib, &cand, &Window::BarG).unwrap().member;
        for method in [NllsMethod::Kernel, NllsMethod::Eh, NllsMethod::Both] {
            let mut v = NllsVerdict::Negative;
            assert_eq!(unsafe { nlls_lls_check(inst, i, method, &mut v) }, NllsStatus::Ok);
            assert_eq!(v == NllsVerdict::Member, expected, "candidate {i} {method:?}");
        }
    }
    unsafe { nlls_instance_free(inst) };
}

#[test]
fn banana_verdicts() {
    let inst = load("banana.json");
    let mut v = NllsVerdict::Member;
    assert_eq!(unsafe { nlls_lls_check(inst, 0, NllsMethod::Both, &mut v) }, NllsStatus::Ok);
    assert_eq!(v, NllsVerdict::Negative);
    assert_eq!(unsafe { nlls_lls_check(inst, 1, NllsMethod::Both, &mut v) }, NllsStatus::Ok);
    assert_eq!(v, NllsVerdict::Member);
    unsafe { nlls_instance_free(inst) };
}

#[test]
fn rational_instance() {
    let inst = load("rational.json");
    let mut v = NllsVerdict::Negative;
    assert_eq!(unsafe { nlls_lls_check(inst, 0, NllsMethod::Both, &mut v) }, NllsStatus::Ok);
    assert_eq!(v, NllsVerdict::Member);
    assert_eq!(unsafe { nlls_lls_check(inst, 1, NllsMethod::Both, &mut v) }, NllsStatus::Ok);
    assert_eq!(v, NllsVerdict::Negative);
    unsafe { nlls_instance_free(inst) };
}

#[test]
fn report_carries_both_methods() {
    let inst = load("worked.json");
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { nlls_lls_report(inst, 0, NllsMethod::Both, &mut report) }, NllsStatus::Ok);
    let json = unsafe { CStr::from_ptr(nlls_report_json(report)) }.to_str().unwrap();
    let value: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(value["candidate"], 0);
    assert_eq!(value["kernel"]["member"], value["member"]);
    assert_eq!(value["eh"]["member"], value["member"]);
    unsafe {
        nlls_report_free(report);
        nlls_instance_free(inst);
    }
}

/// A cycle instance written out through the library's own schema.
fn cycle_instance_json() -> CString {
    let field = PrimeField::new(5).unwrap();
    for i in 0.. {
        let mut rng = sample_rng(7, i);
        let graph = random_connected_graph(&mut rng, 3, 1, 4).unwrap();
        let chains = random_chains(&mut rng, graph.edge_count(), 2);
        let g = ChainedGraph::new(graph, chains).unwrap();
        if g.is_multitree() {
            continue;
        }
        let w0 = random_multidegree(&mut rng, &g, 0..=2);
        let tuple = ConcentratedTuple::derive(&g, &w0).unwrap();
        let (tails, heads) = random_points(&mut rng, &field, g.graph()).unwrap();
        let lambda = vec![1; g.edge_count()];
        let inst = CurveInstance::new(field.clone(), g, tails, heads, lambda, w0, tuple).unwrap();
        let cand = random_candidate(&mut rng, &inst, 0, CandidateKind::Uniform).unwrap();
        let file = InstanceFile::from_instance(&inst, &[&cand]);
        return CString::new(serde_json::to_string(&file).unwrap()).unwrap();
    }
    unreachable!()
}

#[test]
fn non_multitree_needs_the_kernel_method() {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { nlls_instance_from_json(cycle_instance_json().as_ptr(), &mut inst) }, NllsStatus::Ok);
    let mut v = NllsVerdict::Negative;
    assert_eq!(unsafe { nlls_lls_check(inst, 0, NllsMethod::Eh, &mut v) }, NllsStatus::NotMultitree);
    assert!(last_error().contains("multitree"));
    assert_eq!(unsafe { nlls_lls_check(inst, 0, NllsMethod::Kernel, &mut v) }, NllsStatus::Ok);
    let kernel = v;
    assert_eq!(unsafe { nlls_lls_check(inst, 0, NllsMethod::Both, &mut v) }, NllsStatus::Ok);
    assert_eq!(v, kernel);
    unsafe { nlls_instance_free(inst) };
}

#[test]
fn self_loops_are_rejected() {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { nlls_instance_from_json(data("loop.json").as_ptr(), &mut inst) }, NllsStatus::InvalidInput);
    assert!(inst.is_null());
}

#[test]
fn errors_are_reported() {
    let mut inst = ptr::null_mut();
    let bad = CString::new("{\"schema\": \"nope\"}").unwrap();
    assert_eq!(unsafe { nlls_instance_from_json(bad.as_ptr(), &mut inst) }, NllsStatus::InvalidInput);
    assert!(inst.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { nlls_instance_from_json(ptr::null(), &mut inst) }, NllsStatus::NullArgument);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { nlls_instance_from_json(invalid.as_ptr().cast(), &mut inst) }, NllsStatus::InvalidUtf8);

    let good = load("worked.json");
    let mut v = NllsVerdict::Negative;
    assert_eq!(unsafe { nlls_lls_check(good, 99, NllsMethod::Kernel, &mut v) }, NllsStatus::OutOfRange);
    assert_eq!(unsafe { nlls_lls_check(good, 0, NllsMethod::Kernel, ptr::null_mut()) }, NllsStatus::NullArgument);
    assert_eq!(unsafe { nlls_lls_check(ptr::null(), 0, NllsMethod::Kernel, &mut v) }, NllsStatus::NullArgument);
    assert_eq!(unsafe { nlls_lls_check(good, 0, NllsMethod::Kernel, &mut v) }, NllsStatus::Ok);
    assert!(nlls_last_error().is_null());
    unsafe {
        nlls_instance_free(good);
        nlls_instance_free(ptr::null_mut());
        nlls_report_free(ptr::null_mut());
    }
}

#[test]
fn linked_chain_check() {
    let mut v = NllsVerdict::Negative;
    assert_eq!(unsafe { nlls_linked_det_check(data("chain.json").as_ptr(), &mut v) }, NllsStatus::Ok);
    assert_eq!(v, NllsVerdict::Member);
    let flipped = data("chain.json").into_string().unwrap().replace("\"last\": [[1, 0]]", "\"last\": [[0, 1]]");
    let flipped = CString::new(flipped).unwrap();
    assert_eq!(unsafe { nlls_linked_det_check(flipped.as_ptr(), &mut v) }, NllsStatus::Ok);
    assert_eq!(v, NllsVerdict::Negative);
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nodal_lls.h")).unwrap();
    for name in [
        "nlls_instance_from_json",
        "nlls_instance_free",
        "nlls_lls_check",
        "nlls_lls_report",
        "nlls_report_json",
        "nlls_linked_det_check",
        "nlls_last_error",
        "NLLS_STATUS_DISAGREEMENT",
        "typedef struct NllsInstance NllsInstance",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let v = unsafe { CStr::from_ptr(nlls_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
