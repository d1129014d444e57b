use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polardim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polardim"))
        .args(args)
        .output()
        .expect("run polardim")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const K5: &str = "a\tb\na\tc\na\td\na\te\nb\tc\nb\td\nb\te\nc\td\nc\te\nd\te\n";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn complete_graph_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.tsv", K5);
    let out = polardim(&["estimate", &k5, "--k", "5", "--emit-spectrum"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["n_nodes"], 5);
    assert_eq!(doc["n_edges"], 10);
    let spectrum: Vec<f64> = serde_json::from_value(doc["spectrum"].clone()).unwrap();
    for (got, want) in spectrum.iter().zip([4.0, 1.0, 1.0, 1.0, 1.0]) {
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn run_header_names_version_seed_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.tsv", K5);
    let out = polardim(&["estimate", &k5, "--seed", "17"]);
    let header: Value = serde_json::from_str(stderr(&out).lines().next().unwrap()).unwrap();
    assert_eq!(header["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(header["seed"], 17);
    assert_eq!(header["config"]["solver"]["k"], 100);
    assert_eq!(header["input_digest"], json(&out)["input_digest"]);
    assert!(header["input_digest"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
}

#[test]
fn oversized_k_is_clamped_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.tsv", K5);
    let out = polardim(&["estimate", &k5]);
    assert!(out.status.success());
    assert_eq!(json(&out)["k_used"], 5);
    assert!(stderr(&out).contains("warning: --k 100 exceeds"));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.tsv", K5);
    let a = polardim(&["estimate", &k5]);
    let b = polardim(&["estimate", &k5]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.tsv", "");
    let bad = write(dir.path(), "bad.tsv", "a b c\n");
    assert_eq!(polardim(&["estimate", &empty]).status.code(), Some(3));
    assert_eq!(polardim(&["estimate", &bad]).status.code(), Some(3));
    assert_eq!(
        polardim(&["estimate", "/no/such/file"]).status.code(),
        Some(3)
    );
    assert_eq!(polardim(&["estimate"]).status.code(), Some(2));
    assert_eq!(
        polardim(&["estimate", &empty, "--k", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        polardim(&["sbm", "imbalance", "--splits", "0.9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unconverged_large_graph_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..4500 {
        text.push_str(&format!("{i}\t{}\n", (i + 1) % 4500));
        text.push_str(&format!("{i}\t{}\n", (i * 7 + 3) % 4500));
    }
    let ring = write(dir.path(), "ring.tsv", &text);
    let out = polardim(&["spectrum", &ring, "--k", "10", "--max-basis", "12"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn unconverged_small_graph_falls_back_to_dense() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..1500 {
        text.push_str(&format!("{i}\t{}\n", (i * 7 + 3) % 1500));
    }
    let g = write(dir.path(), "g.tsv", &text);
    let out = polardim(&["spectrum", &g, "--k", "10", "--max-basis", "12"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json(&out)["converged"], true);
    assert!(stderr(&out).contains("retrying with the dense route"));
}

fn records() -> String {
    let mut text = String::from("source_user\ttarget_user\tkind\ttimestamp\n");
    for t in 0..400u64 {
        let s = t % 23;
        let d = (t * 5 + 1) % 23;
        text.push_str(&format!("u{s}\tu{d}\treply\t{t}\n"));
    }
    text
}

#[test]
fn windows_are_processed_in_time_order() {
    let dir = tempfile::tempdir().unwrap();
    let recs = write(dir.path(), "r.tsv", &records());
    let forward = polardim(&[
        "compare",
        "--records",
        &recs,
        "--window",
        "a:0:200",
        "--window",
        "b:200:400",
        "--k",
        "10",
    ]);
    let reversed = polardim(&[
        "compare",
        "--records",
        &recs,
        "--window",
        "b:200:400",
        "--window",
        "a:0:200",
        "--k",
        "10",
    ]);
    assert!(forward.status.success(), "{}", stderr(&forward));
    assert_eq!(forward.stdout, reversed.stdout);
    let doc = json(&forward);
    assert_eq!(doc["table"][0]["Window"], "a");
    assert_eq!(doc["windows"][1]["label"], "b");
    assert_eq!(doc["k_requested"], 10);
}

#[test]
fn empty_window_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let recs = write(dir.path(), "r.tsv", &records());
    let out = polardim(&[
        "compare",
        "--records",
        &recs,
        "--window",
        "a:0:200",
        "--window",
        "quiet:900:1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("quiet"));
}

#[test]
fn compare_needs_two_windows() {
    let dir = tempfile::tempdir().unwrap();
    let recs = write(dir.path(), "r.tsv", &records());
    let out = polardim(&["compare", "--records", &recs, "--window", "a:0:200"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bootstrap_quantiles_and_small_giant_warning() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from(K5);
    for i in 0..8 {
        text.push_str(&format!("x{i}\ty{i}\n"));
    }
    let g = write(dir.path(), "g.tsv", &text);
    let out = polardim(&[
        "bootstrap",
        &g,
        "--replicates",
        "50",
        "--seed",
        "2",
        "--emit-rows",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("giant component holds only 5 of 21 nodes"));
    let doc = json(&out);
    assert_eq!(doc["n_nodes"], 5);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 50);
    let q = &doc["d_hat"];
    assert!(q["min"].as_f64() <= q["median"].as_f64() && q["median"].as_f64() <= q["max"].as_f64());
    let again = polardim(&[
        "bootstrap",
        &g,
        "--replicates",
        "50",
        "--seed",
        "2",
        "--emit-rows",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn default_grids_have_published_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.csv");
    let i = dir.path().join("i.csv");
    assert!(polardim(&[
        "sbm",
        "engagement",
        "--n",
        "20",
        "--k",
        "10",
        "-o",
        e.to_str().unwrap()
    ])
    .status
    .success());
    assert!(polardim(&[
        "sbm",
        "imbalance",
        "--n",
        "100",
        "--k",
        "10",
        "-o",
        i.to_str().unwrap()
    ])
    .status
    .success());
    let rows = |p: &Path| fs::read_to_string(p).unwrap().lines().count() - 1;
    assert_eq!(rows(&e), 1200);
    assert_eq!(rows(&i), 1600);
    assert!(fs::read_to_string(&e)
        .unwrap()
        .starts_with("config_id,in_prob,out_prob,split,replicate,d_hat,entropy,gc_fraction\n"));
}
