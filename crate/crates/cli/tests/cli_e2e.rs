//! End-to-end coverage of the command-line surface beyond the acceptance
//! matrix: constructions chained through emitted bundles, the operator
//! search, and the cocycle-truss paths.

use std::path::PathBuf;
use std::process::Command;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_heapcas"))
        .args(args)
        .current_dir(corpus_dir().parent().unwrap())
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn constructed_bundles_reload_and_verify() {
    let tmp = tempfile::tempdir().unwrap();
    // heap -> hopf at a group-like, then the emitted bundle verifies
    let hopf_path = tmp.path().join("hx.json");
    let (code, _, err) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "hopf-from-heap",
        "--heap",
        "C_heap",
        "--grouplike",
        "x_plus",
        "--name",
        "H_x",
        "--out",
        hopf_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = run(&["verify", "hopf", hopf_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // hopf -> heap from the freshly written bundle
    let heap_path = tmp.path().join("roundtrip.json");
    let (code, _, _) = run(&[
        "construct",
        hopf_path.to_str().unwrap(),
        "--op",
        "heap-from-hopf",
        "--hopf",
        "H_x",
        "--out",
        heap_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "heap", heap_path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn truss_constructions_through_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = tmp.path().join("trivial.json");
    let (code, _, err) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "trivial-truss",
        "--heap",
        "C_heap",
        "--grouplike",
        "x_plus",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = run(&["verify", "truss", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // shifting the shipped cocycle truss at g
    let (code, out, _) = run(&[
        "construct",
        "corpus/z2.json",
        "--op",
        "shifted-truss",
        "--cocycle-truss",
        "Z2_cocycle",
        "--grouplike",
        "g",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status: pass"));
    // brace -> truss -> (emitted) -> brace
    let truss_path = tmp.path().join("truss.json");
    let (code, _, _) = run(&[
        "construct",
        "corpus/z2.json",
        "--op",
        "brace-to-truss",
        "--brace",
        "Z2_brace",
        "--name",
        "T",
        "--out",
        truss_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&[
        "construct",
        truss_path.to_str().unwrap(),
        "--op",
        "truss-to-brace",
        "--truss",
        "T",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn search_finds_the_shipped_operators() {
    let (code, out, _) = run(&[
        "search",
        "corpus/example23a.json",
        "--heap",
        "C_heap",
        "--family",
        "all",
        "--height",
        "2",
    ]);
    assert_eq!(code, 0);
    // B_i as an entry list
    assert!(out.contains("[[1, 1, \"1/1\"]]"), "{out}");
    // B_ii
    assert!(out.contains("[[0, 0, \"-1/1\"], [1, 1, \"1/1\"]]"), "{out}");
    // the identity permutation
    assert!(out.contains("[[0, 0, \"1/1\"], [1, 1, \"1/1\"]]"), "{out}");
}

#[test]
fn cooperator_paths() {
    let (code, _, _) = run(&["verify", "rb-cooperator", "corpus/z2.json"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&[
        "construct",
        "corpus/z2.json",
        "--op",
        "cooperator-to-rb",
        "--cooperator",
        "CO_id",
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "rb-to-cooperator",
        "--rb",
        "RB_ii",
        "--grouplike",
        "x_plus",
    ]);
    // B_ii does not fix x_plus
    assert_eq!(code, 1);
    assert!(out.contains("does not fix"), "{out}");
}

#[test]
fn module_constructions_through_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let free_path = tmp.path().join("free.json");
    let (code, _, _) = run(&[
        "construct",
        "corpus/example23a.json",
        "--op",
        "free-module",
        "--heap",
        "C_heap",
        "--dimv",
        "2",
        "--side",
        "right",
        "--name",
        "M",
        "--out",
        free_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify", "module", free_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // induced RB module with the counit-collapse factor
    let (code, out, _) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "induced-rb-module",
        "--rb",
        "RB_ii",
        "--dimv",
        "2",
        "--factor",
        "eps",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("rbmod.compat"));
    // module conversion chain
    let hm_path = tmp.path().join("hopfmod.json");
    let (code, _, _) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "heapmod-to-hopfmod",
        "--module",
        "self_left",
        "--grouplike",
        "x_plus",
        "--name",
        "HM",
        "--out",
        hm_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&[
        "construct",
        hm_path.to_str().unwrap(),
        "--op",
        "hopfmod-to-heapmod",
        "--module",
        "HM",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn descend_writes_a_loadable_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = tmp.path().join("desc.json");
    let (code, out, _) = run(&[
        "descend",
        "corpus/example23a.json",
        "--rb",
        "RB_ii",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("equals the original"), "{out}");
    let (code, _, _) = run(&["verify", "heap", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn grunspan_and_endo_bracket() {
    let (code, out, _) = run(&[
        "construct",
        "corpus/example23a.json",
        "--op",
        "grunspan",
        "--heap",
        "C_heap",
        "--f",
        "theta",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("grunspan.identity"));
    let (code, out, _) = run(&[
        "construct",
        "corpus/example23a.json",
        "--op",
        "endo-bracket",
        "--heap",
        "C_heap",
        "--alpha",
        "B_ii",
        "--beta",
        "B_ii",
        "--gamma",
        "id_C",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status: pass"));
}

#[test]
fn cobrace_certification_through_cli() {
    let (code, out, _) = run(&[
        "construct",
        "corpus/example23a.json",
        "--op",
        "cobrace",
        "--rb",
        "RB_id",
        "--grouplike",
        "x_plus",
    ]);
    // example23a.json has no x_plus vector; the reference is a usage error
    assert_eq!(code, 2, "{out}");
    let (code, out, _) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "cobrace",
        "--rb",
        "RB_ii",
        "--grouplike",
        "x_plus",
    ]);
    // B_ii does not fix x_plus
    assert_eq!(code, 1, "{out}");
    // the identity operator does, and the certification passes
    let (code, out, _) = run(&[
        "construct",
        "corpus/modules23a.json",
        "--op",
        "cobrace",
        "--rb",
        "RB_id",
        "--grouplike",
        "x_plus",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("cobrace.compat"));
}

#[test]
fn tensor_constructions() {
    let tmp = tempfile::tempdir().unwrap();
    // a joint bundle holding both factors
    let joint = tmp.path().join("joint.json");
    let a = std::fs::read_to_string(corpus_dir().join("example23a.json")).unwrap();
    let b = std::fs::read_to_string(corpus_dir().join("z2.json")).unwrap();
    let a_json: serde_json::Value = serde_json::from_str(&a).unwrap();
    let b_json: serde_json::Value = serde_json::from_str(&b).unwrap();
    let mut objects = a_json["objects"].as_array().unwrap().clone();
    // retag the group-algebra objects into the extension field bundle
    for obj in b_json["objects"].as_array().unwrap() {
        objects.push(obj.clone());
    }
    let joint_json = serde_json::json!({
        "field": "Q(sqrt:-1)",
        "name": "joint",
        "objects": objects,
    });
    std::fs::write(&joint, serde_json::to_string_pretty(&joint_json).unwrap()).unwrap();
    let (code, out, _) = run(&[
        "construct",
        joint.to_str().unwrap(),
        "--op",
        "tensor-heap",
        "--left",
        "C_heap",
        "--right",
        "Z2_heap",
    ]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&[
        "construct",
        joint.to_str().unwrap(),
        "--op",
        "tensor-rb",
        "--left",
        "RB_ii",
        "--right",
        "RB_id",
    ]);
    // RB_id lives on C_heap, so this is a same-heap tensor square
    assert_eq!(code, 0, "{out}");
}
