use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TABLE1: &str = include_str!("../../../goldens/table1.csv");
const FIG1: &str = include_str!("../../../goldens/fig1.csv");

fn gcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcs"))
        .args(args)
        .env_remove("GCS_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn table1_json(dir: &TempDir) -> std::path::PathBuf {
    let path = dir.path().join("table1.json");
    let out = gcs(&[
        "generate",
        "--p",
        "4",
        "--q",
        "4",
        "--L",
        "19",
        "--pi",
        "1,2",
        "--g",
        "3:1,1",
        "--c",
        "0,0,0",
        "--c-prime",
        "0",
        "--output",
        path_str(&path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    path
}

#[test]
fn generate_reproduces_the_length_19_matrix() {
    let dir = TempDir::new().unwrap();
    let path = table1_json(&dir);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let rows: Vec<String> = doc["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| {
            let seq: Vec<String> = m["seq"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.to_string())
                .collect();
            seq.join(",")
        })
        .collect();
    assert_eq!(rows.join("\n") + "\n", TABLE1);
    assert_eq!(doc["k"], 2);
    assert_eq!(doc["m"], 3);
    assert_eq!(doc["members"][1]["gamma"], serde_json::json!([1, 0]));
}

#[test]
fn generate_summary_reports_collapse_for_binary_length_8() {
    let dir = TempDir::new().unwrap();
    let raw = dir.path().join("raw.json");
    let out = gcs(&[
        "generate",
        "--p",
        "2",
        "--q",
        "2",
        "--L",
        "8",
        "--seed",
        "7",
        "-o",
        path_str(&raw),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout(&out);
    assert!(summary.contains("(2, 4 -> 2, 8)"), "{summary}");
    assert!(summary.contains("GCS pass"), "{summary}");
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&raw).unwrap()).unwrap();
    assert_eq!(doc["members"].as_array().unwrap().len(), 4);

    let pair = dir.path().join("pair.json");
    let out = gcs(&[
        "generate",
        "--p",
        "2",
        "--q",
        "2",
        "--L",
        "8",
        "--seed",
        "7",
        "--dedupe",
        "-o",
        path_str(&pair),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&pair).unwrap()).unwrap();
    assert_eq!(doc["members"].as_array().unwrap().len(), 2);
    let verify = gcs(&["verify", "--input", path_str(&pair)]);
    assert_eq!(verify.status.code(), Some(0), "{}", stdout(&verify));
}

#[test]
fn generate_rejects_indivisible_alphabet() {
    let out = gcs(&["generate", "--p", "3", "--q", "4", "--L", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("does not divide"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        gcs(&["generate", "--q", "4", "--L", "9"]).status.code(),
        Some(1)
    );
    assert_eq!(gcs(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        gcs(&[
            "generate",
            "--p",
            "2",
            "--q",
            "2",
            "--L",
            "8",
            "--g",
            "1:1,1,1,1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(gcs(&["--help"]).status.code(), Some(0));
}

#[test]
fn oversized_request_exits_three() {
    let out = gcs(&["generate", "--p", "2", "--q", "2", "--L", "3000000"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"p": 4, "q": 4, "L": 19, "g": "3:1,1", "c_prime": 1}"#,
    )
    .unwrap();
    let out_path = dir.path().join("set.csv");
    let out = gcs(&[
        "generate",
        "--config",
        path_str(&cfg),
        "--c-prime",
        "0",
        "--format",
        "csv",
        "-o",
        path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(&out_path).unwrap(), TABLE1);

    fs::write(&cfg, r#"{"p": 4, "bogus": 1}"#).unwrap();
    assert_eq!(
        gcs(&["generate", "--config", path_str(&cfg)]).status.code(),
        Some(1)
    );
}

#[test]
fn out_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gcs"))
        .args(["generate", "--p", "3", "--q", "3", "--L", "9"])
        .env("GCS_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("gcs_p3_q3_L9.json").exists());
}

#[test]
fn verify_accepts_generated_and_rejects_corrupted() {
    let dir = TempDir::new().unwrap();
    let path = table1_json(&dir);
    let out = gcs(&["verify", "--input", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert!(
        report.contains("peak 304.000000000000 at tau=0"),
        "{report}"
    );
    assert!(report.trim_end().ends_with("pass"));

    let mut rows: Vec<Vec<u64>> = TABLE1
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    rows[3][7] = (rows[3][7] + 1) % 4;
    let text: String = rows
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, text).unwrap();
    let out = gcs(&["verify", "--input", path_str(&bad), "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout(&out);
    assert!(report.trim_end().ends_with("fail"));
    assert!(
        !report.contains("max off-peak |sum| 0.000000000000"),
        "{report}"
    );
}

#[test]
fn verify_reports_ragged_rows() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("ragged.csv");
    fs::write(&bad, "0,1,2,3\n1,2,3\n").unwrap();
    let out = gcs(&["verify", "--input", path_str(&bad), "--q", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("parse error at line 2"),
        "{}",
        stderr(&out)
    );
    let out = gcs(&["verify", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
}

fn pmepr_values(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn pmepr_of_length_19_set_within_member_count() {
    let dir = TempDir::new().unwrap();
    let path = table1_json(&dir);
    let out = gcs(&["pmepr", "--input", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    assert!(
        csv.starts_with("member_index,gamma,pmepr\n0,\"0,0\","),
        "{csv}"
    );
    let values = pmepr_values(&csv);
    assert_eq!(values.len(), 16);
    assert!(values.iter().all(|&v| v <= 16.0 + 1e-6));
    assert!(stderr(&out).contains("<= bound 16"));

    let fine = gcs(&[
        "pmepr",
        "--input",
        path_str(&path),
        "--oversampling",
        "1024",
    ]);
    for (a, b) in pmepr_values(&stdout(&fine)).iter().zip(&values) {
        assert!(*a >= b - 1e-9);
    }
}

#[test]
fn pmepr_of_constant_row() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("zero.csv");
    fs::write(&path, "0,0,0,0,0,0,0,0\n").unwrap();
    let csv_out = dir.path().join("out.csv");
    let out = gcs(&[
        "pmepr",
        "--input",
        path_str(&path),
        "--q",
        "2",
        "-o",
        path_str(&csv_out),
    ]);
    // a lone sequence is measured against the bound 1
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        pmepr_values(&fs::read_to_string(&csv_out).unwrap()),
        vec![8.0]
    );
    assert!(stdout(&out).contains("> bound 1"));
}

#[test]
fn sweep_default_ranges_all_pass() {
    let out = gcs(&[
        "sweep", "--p", "2,3,4,5", "--q-mult", "1,2,3", "--L-max", "200", "--count", "200",
        "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("p,q,L,m,k,M,verdict,max_sidelobe,max_pmepr")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.split(',').nth(6) == Some("pass")));
    assert!(stderr(&out).contains("failures: none"));
}

#[test]
fn sweep_skips_short_lengths() {
    let out = gcs(&[
        "sweep", "--p", "5", "--q-mult", "1", "--L-min", "1", "--L-max", "7", "--count", "12",
        "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    assert!(csv.lines().any(|l| l.contains("skipped (")), "{csv}");
    assert!(csv.lines().any(|l| l.contains(",pass,")), "{csv}");
}

#[test]
fn reproduce_matches_goldens() {
    let out = gcs(&["reproduce", "--target", "table1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), TABLE1);
    let out = gcs(&["reproduce", "--target", "fig1"]);
    let csv = stdout(&out);
    assert_eq!(csv, FIG1);
    assert!(csv.contains("\n0,304.000000000000,0.000000000000\n"));
    let row7 = csv.lines().find(|l| l.starts_with("7,")).unwrap();
    let parts: Vec<f64> = row7
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(parts[0].hypot(parts[1]) < 1e-9 * 304.0);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &[
            "generate", "--p", "3", "--q", "6", "--L", "40", "--seed", "11",
        ][..],
        &["sweep", "--count", "20", "--seed", "5", "--L-max", "60"][..],
    ] {
        let a = gcs(args);
        let b = gcs(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stderr, b.stderr);
    }
}
