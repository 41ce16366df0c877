use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use streamcode::layered::{extend, seed_code, LayeredCode, LayeredPlan};
use streamcode::subset::greedy_construct;
use tempfile::TempDir;

fn streamcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streamcode"))
        .args(args)
        .env_remove("STREAMCODE_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const A1: &[&str] = &["construct", "linear", "--eps", "0.01", "--R", "0.5", "--tau", "0.7", "--k0", "8", "--n", "60"];

fn construct_a1(dir: &TempDir, seed: &str) -> PathBuf {
    let out = path(dir, &format!("a1-{seed}.txt"));
    let mut args = A1.to_vec();
    args.extend(["--seed", seed, "--out", s(&out)]);
    let o = streamcode(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn construct_linear_is_verified_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let first = construct_a1(&dir, "7");
    let text = std::fs::read_to_string(&first).unwrap();
    assert!(text.starts_with("lincode v1 eps=0.01 R=0.5 tau=0.7 k0=8 n=60"));
    assert_eq!(text.lines().count(), 61);

    let again = path(&dir, "again.txt");
    let mut args = A1.to_vec();
    args.extend(["--seed", "7", "--out", s(&again)]);
    let o = streamcode(&args);
    assert!(stdout(&o).contains("result=pass"));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&again).unwrap());

    let o = streamcode(&["verify", s(&first)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("artifact=lincode"));
}

#[test]
fn usage_and_domain_errors() {
    let o = streamcode(A1);
    assert_eq!(code(&o), 64, "missing seed");
    let o = streamcode(&["construct", "linear", "--eps", "1.0", "--R", "0.5", "--tau", "0.7", "--k0", "8", "--n", "60", "--seed", "1"]);
    assert_eq!(code(&o), 2, "eps >= 1");
    assert_eq!(code(&streamcode(&["bogus"])), 64);
    assert_eq!(code(&streamcode(&["--help"])), 0);
    assert_eq!(code(&streamcode(&["bounds", "--eps", "0.1"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_streamcode"))
        .args(["bounds", "--eps", "0.01"])
        .env("STREAMCODE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 64);
    let o = Command::new(env!("CARGO_BIN_EXE_streamcode"))
        .args(["bounds", "--eps", "0.01"])
        .env("STREAMCODE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn construction_exhaustion_and_scale_limits() {
    // one parity bit cannot lift an 11-bit word to distance 5
    let o = streamcode(&["construct", "checksum", "--input", "10", "--delta", "0.45", "--rows", "1", "--seed", "0", "--max-attempts", "2"]);
    assert_eq!(code(&o), 3);
    let o = streamcode(&["construct", "checksum", "--input", "30", "--delta", "0.01", "--seed", "0"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn corrupted_and_missing_artifacts() {
    let dir = TempDir::new().unwrap();
    let a1 = construct_a1(&dir, "2");
    let text = std::fs::read_to_string(&a1).unwrap();
    let bad = path(&dir, "bad.txt");
    // drop a coefficient row
    let truncated: Vec<&str> = text.lines().take(30).collect();
    std::fs::write(&bad, truncated.join("\n")).unwrap();
    assert_eq!(code(&streamcode(&["verify", s(&bad)])), 65);
    std::fs::write(&bad, text.replacen("k0=8", "k0=eight", 1)).unwrap();
    assert_eq!(code(&streamcode(&["verify", s(&bad)])), 65);
    std::fs::write(&bad, "not an artifact\n").unwrap();
    assert_eq!(code(&streamcode(&["verify", s(&bad)])), 65);
    assert_eq!(code(&streamcode(&["verify", s(&path(&dir, "absent.txt"))])), 74);
}

#[test]
fn layered_construction_matches_library_and_control_fails() {
    let dir = TempDir::new().unwrap();
    let sub = path(&dir, "sub.txt");
    let o = streamcode(&["construct", "subset", "--n", "14", "--k", "4", "--delta", "0.14285714285714285", "--seed", "2024", "--t", "4", "--out", s(&sub)]);
    assert_eq!(code(&o), 0);
    let lay = path(&dir, "lay.txt");
    let o = streamcode(&["construct", "layered", "--eps", "0.05", "--ell", "2", "--block-bits", "3", "--subblock-bits", "2", "--subset", s(&sub), "--seed", "1", "--out", s(&lay)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // the same code built directly: seed code from --seed, extension from
    // the derived stream (1 ^ 1 = 0)
    let subset = greedy_construct(14, 4, 1.0 / 7.0, 2024, 10_000).unwrap().truncated(4).unwrap();
    let base = seed_code(8, 0.05, 0.5, 1, 50).unwrap();
    let plan = LayeredPlan {
        epsilon: 0.05,
        ell: 2,
        block_bits: 3,
        subblock_bits: 2,
        subset,
        checksum_delta: 0.1,
        seed: 0,
        max_attempts: 50,
    };
    let direct = extend(&base, &plan).unwrap();
    let text = std::fs::read_to_string(&lay).unwrap();
    assert_eq!(text, direct.to_text());

    let control = path(&dir, "control.txt");
    let stripped = LayeredCode::from_text(&text).unwrap().with_segments(2).unwrap();
    std::fs::write(&control, stripped.to_text()).unwrap();
    let o = streamcode(&["verify", s(&control)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("result=fail"));
    assert!(stdout(&o).contains("counterexample"));
}

fn summary_field(out: &str, key: &str) -> f64 {
    let line = out.lines().find(|l| l.starts_with("failure_rate=")).expect("summary line");
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {line}"))
        .parse()
        .unwrap()
}

#[test]
fn simulate_clean_channel() {
    let dir = TempDir::new().unwrap();
    let a1 = construct_a1(&dir, "2");
    let o = streamcode(&["simulate", s(&a1), "--eps", "0", "--j", "40", "--trials", "20", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("trial=")).count(), 20);
    assert_eq!(summary_field(&out, "failure_rate"), 0.0);
    assert_eq!(code(&streamcode(&["simulate", s(&a1), "--j", "40", "--trials", "2"])), 64);
}

#[test]
fn simulate_per_packet_separation() {
    let dir = TempDir::new().unwrap();
    let a1 = construct_a1(&dir, "2");
    let args = ["simulate", s(&a1), "--channel", "per-packet", "--eps", "0.01", "--packet-len", "8", "--overshoot", "1", "--packets", "1", "--j", "56", "--target", "28", "--trials", "1", "--seed", "3"];
    let o = streamcode(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(summary_field(&out, "baseline_recovered"), 0.0);
    assert_eq!(summary_field(&out, "unbounded_recovered"), 28.0);
    assert_eq!(o.stdout, streamcode(&args).stdout, "byte-identical reruns");

    let mut capped = args.to_vec();
    capped.extend(["--cap", "4"]);
    assert_eq!(code(&streamcode(&capped)), 4);
}

#[test]
fn simulate_random_errors() {
    let dir = TempDir::new().unwrap();
    let a4 = path(&dir, "a4.txt");
    let o = streamcode(&["construct", "linear", "--eps", "0.02", "--R", "0.5", "--tau", "0.6", "--k0", "8", "--n", "48", "--seed", "4", "--criterion", "random-error", "--out", s(&a4)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("attempts=3"));
    let o = streamcode(&["verify", s(&a4), "--criterion", "random-error"]);
    assert_eq!(code(&o), 0);
    let o = streamcode(&["simulate", s(&a4), "--eps", "0.02", "--j", "32", "--target", "8", "--trials", "500", "--seed", "11", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rate_col = header.iter().position(|h| *h == "failure_rate").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 501);
    assert!(rows.iter().all(|r| r.len() == header.len()));
    let rate: f64 = rows[500][rate_col].parse().unwrap();
    assert!(rate <= 0.05, "failure rate {rate}");
}

fn h2(p: f64) -> f64 {
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

#[test]
fn bounds_table() {
    let o = streamcode(&["bounds", "--eps", "0.05,0.02,0.01,0.005,0.001,0.0001", "--format", "json-lines"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r["schema"], "streamcode.bounds/1");
        assert_eq!(r["source"], "formula");
    }
    let col = |k: &str| rows.iter().map(|r| r[k].as_f64().unwrap()).collect::<Vec<_>>();
    // rows are ordered by decreasing eps, so every rate column increases
    for k in ["construction_rate", "linear_upper_bound", "random_error_rate"] {
        assert!(col(k).windows(2).all(|w| w[0] < w[1]), "{k}");
        assert!(col(k).iter().all(|&v| v < 1.0), "{k}");
    }
    let e = 0.001f64;
    let construct = 1.0 - 4.0 * (e * (1.0 / e).log2()).sqrt();
    assert!((col("construction_rate")[4] - construct).abs() < 1e-12);
    assert!((construct - 0.6007).abs() < 5e-4);
    let random = 1.0 - h2(0.03);
    assert!((col("random_error_rate")[2] - random).abs() < 1e-12);
    assert!((random - 0.8056).abs() < 5e-4);

    let csv = stdout(&streamcode(&["bounds", "--eps", "0.01", "--format", "csv"]));
    assert!(csv.starts_with("schema,source,eps,construction_rate"));
    let table = stdout(&streamcode(&["bounds", "--eps", "0.01"]));
    assert!(table.contains("formula evaluations"));
}
