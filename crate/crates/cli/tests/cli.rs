use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermitian-codes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn points_and_tangents() {
    let v = json(&["points", "--q", "4"]);
    assert_eq!(v["count"], 65);
    assert_eq!(v["schema"], "hermitian-codes/1");
    let csv = run(&["points", "--q", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 66);

    let t = json(&["tangents", "--q", "3"]);
    let rows = t["tangents"].as_array().unwrap();
    assert_eq!(rows.len(), 28);
    assert!(rows.iter().all(|r| r["contact"] == 4));
}

#[test]
fn h1_and_classify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    // five points of y = 0 over GF(4) plus a double point on the curve
    let scheme = r#"[
        {"point": ["0", "0", "1"], "mult": 1},
        {"point": ["1", "0", "1"], "mult": 1},
        {"point": ["01", "0", "1"], "mult": 1},
        {"point": ["11", "0", "1"], "mult": 1},
        {"point": ["1", "0", "0"], "mult": 1},
        {"point": ["0", "1", "0"], "mult": 2}
    ]"#;
    let path = dir.path().join("z.json");
    fs::write(&path, scheme).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["h1", "--q", "2", "--d", "3", "--scheme", p]);
    assert_eq!(v["h1"], 1);
    assert_eq!(v["h0"], 4);
    let c = json(&["classify", "--q", "2", "--d", "3", "--scheme", p]);
    assert_eq!(c["regime"], "b");
    assert_eq!(c["witness"]["kind"], "LineD2");
    assert_eq!(c["witness"]["intersection_degree"], 5);
}

#[test]
fn code_and_dual_distance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    fs::write(
        &path,
        r#"{"q": 2, "d": 1, "points": [], "structured_mode": false}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let c = json(&["code", "--code", p]);
    assert_eq!((c["n"].as_u64(), c["k"].as_u64()), (Some(9), Some(3)));
    let d = json(&["dualdist", "--code", p, "--w-max", "4"]);
    assert_eq!(d["dual_distance"], 3);
    assert_eq!(d["guarantee"], "exhaustive");
    // one word per support up to the 3 nonzero scalars of GF(4)
    let supports = d["supports"].as_array().unwrap().len() as u64;
    assert_eq!(d["word_count"].as_u64(), Some(supports * 3));
}

#[test]
fn isometry_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    fs::write(
        &path,
        r#"{"q": 4, "d": 3, "points": [[["0", "1", "0"], 3], [["0", "0", "1"], 5]]}"#,
    )
    .unwrap();
    let v = json(&["isometry", "--code", path.to_str().unwrap()]);
    assert_eq!(v["certificate"], true);
    assert_eq!(v["d_prime"], 1);
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--theorem", "u0.1", "--q", "4", "--d", "3", "--mults", "2,2"]);
    assert!(ok.status.success());
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.starts_with("PASS"), "{text}");

    let skip = run(&["verify", "--theorem", "u0.1", "--q", "4", "--d", "3", "--mults", "1,3"]);
    assert!(skip.status.success());
    assert!(String::from_utf8(skip.stdout).unwrap().contains("SKIP"));

    let bad = run(&["verify", "--theorem", "nope", "--q", "4", "--d", "3", "--mults", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    let usage = run(&["points", "--q", "4", "-q"]);
    assert_eq!(usage.status.code(), Some(2));
    let missing = run(&["h1", "--q", "2", "--d", "1", "--scheme", "/nonexistent.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for p in [&a, &b] {
        let out = run(&[
            "sweep", "--theorem", "lemma_u500", "--q", "2", "--format", "json", "--seed", "9", "--output",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains("seed: 9"));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    for line in text.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["status"], "PASS");
    }
}

#[test]
fn scheme_file_round_trip() {
    use hermitian_codes::curve::HermitianCurve;
    use hermitian_codes::scheme::build_scheme;
    use hermitian_codes::wire::{scheme_from_json, scheme_to_json, ComponentJson};

    let x = HermitianCurve::new(3).unwrap();
    let f = x.field();
    let pts = x.rational_points();
    let z = build_scheme(&x, &[(pts[1], 2), (pts[4], 1), (pts[7], 4)]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.json");
    fs::write(&path, serde_json::to_string(&scheme_to_json(f, &z)).unwrap()).unwrap();
    let back: Vec<ComponentJson> = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(scheme_from_json(f, &back, None).unwrap(), z);
    let v = json(&["h1", "--q", "3", "--d", "3", "--scheme", path.to_str().unwrap()]);
    assert_eq!(v["h1"].as_u64(), Some(z.cohomology(f, 3).h1 as u64));
}
