use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-diaphony"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Parses CSV output into (header, rows).
fn table(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(args);
    let mut lines = text.lines().map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let header = lines.next().unwrap();
    (header, lines.collect())
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("padic-diaphony-{}-{name}", std::process::id()))
}

#[test]
fn halton_rows() {
    let (h, rows) = table(&["halton", "--bases", "2,3", "--count", "2"]);
    assert_eq!(h, ["n", "x1", "x1_dec", "x2", "x2_dec"]);
    assert_eq!(rows[0][1], "0/1");
    assert_eq!(rows[1][1], "1/2");
    assert_eq!(rows[1][3], "1/3");

    let (_, rows) = table(&["halton", "--bases", "2", "--count", "1", "--start", "5"]);
    assert_eq!(rows, [["5", "5/8", "0.62500000000000000"]]);
}

#[test]
fn duplicate_base_is_usage_error() {
    let out = run(&["halton", "--bases", "2,2", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bases"));
    assert_eq!(run(&["halton", "--bases", "4", "--count", "1"]).status.code(), Some(2));
}

#[test]
fn diaphony_kernel_values() {
    let (h, rows) = table(&["diaphony", "--bases", "2", "--count", "1", "--method", "kernel"]);
    assert_eq!(num(&rows[0][column(&h, "F")]), 1.0);
    let (h, rows) = table(&["diaphony", "--bases", "2", "--count", "2"]);
    assert_eq!(num(&rows[0][column(&h, "F")]), 0.5);
    let (h, rows) = table(&["diaphony", "--bases", "2", "--count", "2", "--mode", "exact"]);
    assert_eq!(num(&rows[0][column(&h, "F2")]), 0.25);
}

#[test]
fn diaphony_spectral_enclosure() {
    let (h, rows) = table(&["diaphony", "--bases", "2", "--count", "2", "--method", "spectral", "--g", "3"]);
    assert_eq!(num(&rows[0][column(&h, "lower_F2")]), 0.1875);
    assert_eq!(num(&rows[0][column(&h, "upper_F2")]), 0.3125);

    let missing = run(&["diaphony", "--bases", "2", "--count", "2", "--method", "spectral"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--g"));
}

#[test]
fn oversized_box_exits_three() {
    let out = run(&["diaphony", "--bases", "2", "--count", "2", "--method", "spectral", "--g", "40"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["verify-lemma", "--bases", "2", "--count", "2", "--g", "40"]).status.code(), Some(3));
}

#[test]
fn bound_values() {
    let (h, rows) = table(&["bound", "--bases", "2", "--count", "1"]);
    assert_eq!(num(&rows[0][column(&h, "bound_F2")]), 4.0);
    let (h, rows) = table(&["bound", "--bases", "2,3", "--count", "1"]);
    assert_eq!(num(&rows[0][column(&h, "d")]), 12.0);

    let (h, rows) = table(&["bound", "--bases", "2", "--count", "1024"]);
    let c = num(&rows[0][column(&h, "c")]);
    let expect = (c * 1024f64.ln() + 4.0) / (1024.0 * 1024.0);
    assert!((num(&rows[0][column(&h, "bound_F2")]) - expect).abs() < 1e-18);
    assert_eq!(run(&["bound", "--bases", "2", "--count", "0"]).status.code(), Some(2));
}

#[test]
fn sweep_rows_and_header() {
    let text = stdout(&["sweep", "--bases", "2", "--from", "1", "--to", "4", "--step", "1"]);
    assert_eq!(text.lines().next().unwrap(), "N,F,F2,bound_F2,ratio");
    let (_, rows) = table(&["sweep", "--bases", "2", "--from", "1", "--to", "4", "--step", "1"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(num(&rows[0][1]), 1.0);
    assert_eq!(num(&rows[0][4]), 0.25);

    let (_, rows) = table(&["sweep", "--bases", "2", "--from", "2", "--to", "16", "--step", "pow2"]);
    let ns: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ns, ["2", "4", "8", "16"]);
}

#[test]
fn sweep_ratios_at_most_one() {
    for bases in ["2", "2,3", "2,3,5"] {
        let (_, rows) = table(&["sweep", "--bases", bases, "--from", "1", "--to", "512", "--step", "7"]);
        for r in rows {
            assert!(num(&r[4]) <= 1.0, "bases {bases} N={}", r[0]);
        }
    }
}

#[test]
fn sweep_bad_range() {
    assert_eq!(run(&["sweep", "--bases", "2", "--from", "8", "--to", "4"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--bases", "2", "--from", "0", "--to", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--bases", "2", "--from", "1", "--to", "4", "--step", "x"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_lemma_statuses() {
    let (h, rows) = table(&["verify-lemma", "--bases", "2", "--count", "2", "--g", "1"]);
    assert_eq!(rows[0][column(&h, "violations")], "0");
    let text = stdout(&["verify-lemma", "--bases", "2,3", "--count", "128", "--g", "4,3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["rows"][0]["violations"], 0);
    assert_eq!(doc["rows"][0]["g"], "(4,3)");
    assert_eq!(run(&["verify-lemma", "--bases", "2", "--count", "2"]).status.code(), Some(2));
}

#[test]
fn dim_shorthand_matches_bases() {
    assert_eq!(
        stdout(&["halton", "--dim", "3", "--count", "5"]),
        stdout(&["halton", "--bases", "2,3,5", "--count", "5"])
    );
    assert_eq!(run(&["halton", "--dim", "0", "--count", "1"]).status.code(), Some(2));
}

#[test]
fn json_mirrors_csv() {
    let text = stdout(&["sweep", "--bases", "2", "--from", "1", "--to", "4", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["config"]["bases"], serde_json::json!([2]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["ratio"], 0.25);
    assert_eq!(rows[3]["N"], 4);
}

#[test]
fn output_deterministic_across_runs_and_workers() {
    let args = ["sweep", "--dim", "2", "--from", "1", "--to", "300", "--step", "13", "--workers", "2"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let mut one = args.to_vec();
    one[10] = "1";
    assert_eq!(a, stdout(&one));
}

#[test]
fn out_file_and_points_file() {
    let pts = scratch("points.csv");
    std::fs::write(&pts, "# x, y\n0.0, 0.0\n0.5, 0.2\n").unwrap();
    let out = scratch("out.csv");
    let status = run(&[
        "diaphony",
        "--bases",
        "2,5",
        "--points",
        pts.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let from_file: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let halton = stdout(&["diaphony", "--bases", "2,5", "--count", "2"]);
    let from_halton: Vec<&str> = halton.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(from_file[0], "2");
    assert!((num(from_file[2]) - num(from_halton[2])).abs() < 1e-12);

    std::fs::write(&pts, "1.5, 0.25\n").unwrap();
    let bad = run(&["diaphony", "--bases", "2,5", "--points", pts.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let _ = std::fs::remove_file(&pts);
    let _ = std::fs::remove_file(&out);
}
