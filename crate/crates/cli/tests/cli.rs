use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use cayley_poset::algebra::{Certificate, CertificateJson};
use cayley_poset::poset::{enumerate_posets, parse_poset_json, poset_to_json};
use cayley_poset::recognizer::verify_certificate;
use cayley_poset::Poset;

const N_POSET: &str = r#"{"n": 4, "labels": ["a","b","c","d"], "covers": [[0,1],[2,1],[2,3]]}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cayley-poset"));
    c.env_remove("CAYLEY_POSET_BUDGET");
    c
}

fn run(c: &mut Command) -> (i32, Value, String) {
    let Output { status, stdout, stderr } = c.output().unwrap();
    let stdout = String::from_utf8(stdout).unwrap();
    let record = stdout.lines().last().and_then(|l| serde_json::from_str(l).ok()).unwrap_or(Value::Null);
    (status.code().unwrap(), record, String::from_utf8(stderr).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn recognize_writes_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "n.json", N_POSET);
    let cert_path = dir.path().join("cert.json");
    let (code, record, _) = run(bin().args(["recognize", "--class", "full", "--in", &input, "--deterministic", "--out"]).arg(&cert_path));
    assert_eq!(code, 0);
    assert_eq!(record["verdicts"]["full"], "yes");
    assert_eq!(record["inputs"].as_object().unwrap().len(), 1);
    let j: CertificateJson = serde_json::from_str(&fs::read_to_string(&cert_path).unwrap()).unwrap();
    let cert = Certificate::from_json(&j).unwrap();
    assert_eq!(verify_certificate(&Poset::n_poset(), &cert), Ok(()));
}

#[test]
fn deterministic_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "n.json", N_POSET);
    let results: Vec<Value> = (0..2)
        .map(|_| run(bin().args(["recognize", "--class", "monoid", "--in", &input, "--deterministic"])).1["result"].clone())
        .collect();
    assert_eq!(serde_json::to_string(&results[0]).unwrap(), serde_json::to_string(&results[1]).unwrap());
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "n.json", N_POSET);
    let (code, record, _) =
        run(bin().args(["recognize", "--class", "full", "--in", &input, "--no-prune"]).env("CAYLEY_POSET_BUDGET", "1"));
    assert_eq!(code, 2);
    assert_eq!(record["verdicts"]["full"], "unknown");
    // the flag wins over the environment
    let (code, _, _) = run(bin()
        .args(["recognize", "--class", "full", "--in", &input, "--budget", "100000"])
        .env("CAYLEY_POSET_BUDGET", "1"));
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"n\": 2, \"covers\": [[0,");
    assert_eq!(run(bin().args(["classify", "--in", &bad])).0, 1);
    let cyclic = write(dir.path(), "cyc.json", r#"{"n": 2, "covers": [[0,1],[1,0]]}"#);
    assert_eq!(run(bin().args(["classify", "--in", &cyclic])).0, 1);
    assert_eq!(run(bin().args(["classify", "--in", "/nonexistent/poset.json"])).0, 1);
    assert_eq!(run(bin().args(["recognize", "--class", "lattice", "--in", &bad])).0, 1);
    assert_eq!(run(bin().args(["frobnicate"])).0, 1);
    assert_eq!(run(bin().args(["--help"])).0, 0);
}

#[test]
fn classify_n_poset() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "n.json", N_POSET);
    let (code, record, stderr) = run(bin().args(["classify", "--in", &input]));
    assert_eq!(code, 0);
    let v = &record["verdicts"];
    assert_eq!((v["semigroup"].as_str(), v["monoid"].as_str()), (Some("yes"), Some("yes")));
    assert_eq!((v["full"].as_str(), v["full_monoid"].as_str()), (Some("yes"), Some("no")));
    assert!(stderr.contains("full_monoid=no"));
}

#[test]
fn census_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (code, record, _) = run(bin().args(["census", "--n", "3", "--out"]).arg(&out));
    assert_eq!(code, 0);
    assert_eq!(record["result"]["posets"], 8);
    assert_eq!(record["verdicts"]["semigroup"], "8");
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.is_object());
}

#[test]
fn construct_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let ops = r#"[
        {"op": "chain", "name": "c2", "n": 2},
        {"op": "antichain", "name": "a2", "n": 2},
        {"op": "product", "name": "grid", "left": "c2", "right": "c2"},
        {"op": "compose", "name": "sp", "lower": "a2", "upper": "c2", "how": "series"},
        {"op": "adjoin", "name": "v", "input": "a2", "which": "min"}
    ]"#;
    let pipeline = write(dir.path(), "ops.json", ops);
    let out = dir.path().join("bundle.jsonl");
    let (code, record, _) = run(bin().args(["construct", "--pipeline", &pipeline, "--out"]).arg(&out));
    assert_eq!(code, 0);
    assert_eq!(record["verdicts"]["grid"], "full_monoid");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let p = parse_poset_json(&v["poset"].to_string()).unwrap();
        let j: CertificateJson = serde_json::from_value(v["certificate"].clone()).unwrap();
        assert_eq!(verify_certificate(&p, &Certificate::from_json(&j).unwrap()), Ok(()));
    }
    let broken = write(dir.path(), "broken.json", r#"[{"op": "product", "name": "x", "left": "nope", "right": "nope"}]"#);
    assert_eq!(run(bin().args(["construct", "--pipeline", &broken])).0, 1);
}

#[test]
fn numsem_writes_truncation_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("poset.json");
    let (code, record, _) = run(bin().args(["numsem", "--gens", "3,5", "--window", "13", "--out"]).arg(&out));
    assert_eq!(code, 0);
    let elements: Vec<i64> =
        record["result"]["elements"].as_array().unwrap().iter().map(|v| v[0].as_i64().unwrap()).collect();
    assert_eq!(elements, vec![0, 3, 5, 6, 8, 9, 10, 11, 12, 13]);
    let t: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(t["poset"]["n"], 10);
    let dot = fs::read_to_string(out.with_extension("dot")).unwrap();
    assert_eq!(dot.matches("->").count(), 12);
    let again = dir.path().join("again.json");
    run(bin().args(["numsem", "--gens", "3,5", "--window", "13", "--out"]).arg(&again));
    assert_eq!(dot, fs::read_to_string(again.with_extension("dot")).unwrap());
}

#[test]
fn autoequiv_roundtrip_and_lex() {
    let (code, record, _) = run(bin().args(["autoequiv", "--gens", "3,5", "--window", "13", "--roundtrip"]));
    assert_eq!(code, 0);
    assert_eq!(record["verdicts"]["roundtrip"], "true");
    assert_eq!(record["result"]["roundtrip"]["quotient"]["atom_images"], serde_json::json!([[3], [5]]));
    let (code, record, _) =
        run(bin().args(["autoequiv", "--gens", "1:0,1:1", "--torsion", "2", "--window", "6", "--roundtrip"]));
    assert_eq!(code, 0);
    assert_eq!(record["result"]["roundtrip"]["quotient"]["torsion"], serde_json::json!([2]));
    let (code, record, _) = run(bin().args(["autoequiv", "--lex", "3,4"]));
    assert_eq!(code, 0);
    assert_eq!(record["verdicts"]["cancellative"], "false");
    assert_eq!(run(bin().args(["numsem", "--gens", "1,-1", "--window", "3"])).0, 1);
}

#[test]
fn export_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "n.json", N_POSET);
    let a = bin().args(["export", "--in", &input]).output().unwrap().stdout;
    let b = bin().args(["export", "--in", &input]).output().unwrap().stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.matches("->").count(), 3);
    let r1 = bin().args(["export", "--random", "7", "--seed", "11"]).output().unwrap().stdout;
    let r2 = bin().args(["export", "--random", "7", "--seed", "11"]).output().unwrap().stdout;
    assert_eq!(r1, r2);
    assert_eq!(parse_poset_json(&String::from_utf8(r1).unwrap()).unwrap().len(), 7);
}

#[test]
fn poset_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let mut posets: Vec<Poset> = (1..=5).flat_map(|n| enumerate_posets(n, 7).unwrap()).collect();
    for (n, seed) in [(6, 1), (7, 2), (8, 3), (8, 4)] {
        let out = bin().args(["export", "--random", &n.to_string(), "--seed", &seed.to_string()]).output().unwrap();
        posets.push(parse_poset_json(&String::from_utf8(out.stdout).unwrap()).unwrap());
    }
    for (i, p) in posets.iter().enumerate() {
        let path = write(dir.path(), &format!("p{i}.json"), &poset_to_json(p));
        let back = parse_poset_json(&fs::read_to_string(path).unwrap()).unwrap();
        assert!(back.same_order(p));
    }
}
