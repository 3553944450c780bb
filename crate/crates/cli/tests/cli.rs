// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn sregen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sregen"))
        .args(args)
        .env_remove("SREGEN_ENUM_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn construct(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let path = dir.path().join(format!("{name}.json"));
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["construct", name, "--out", &p];
    args.extend_from_slice(extra);
    let out = sregen(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    p
}

#[test]
fn construct_table1_writes_a_verified_descriptor() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "table1-423", &[]);
    let d: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(d["schema_version"], 1);
    assert_eq!(d["provenance"]["builder"], "table1-423");
    assert_eq!(d["params"]["alpha"], 2);
    assert_eq!(d["params"]["B"], 2);
    assert_eq!(d["field"]["p"], 5);
    assert_eq!(d["layout"].as_array().unwrap().len(), 4);
    assert_eq!(d["repair"][0]["helpers"], serde_json::json!([2, 3, 4]));
}

#[test]
fn construct_mbr_point() {
    let out = sregen(&[
        "construct",
        "mbr",
        "--n",
        "3",
        "--k",
        "2",
        "--d",
        "2",
        "--l",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out);
    let p = &d["params"];
    assert_eq!(
        (p["alpha"].as_u64(), p["beta"].as_u64(), p["B"].as_u64()),
        (Some(2), Some(1), Some(1))
    );
    assert_eq!(p["attack"], "type2");
}

#[test]
fn construct_table3_over_f9_reports_the_failure() {
    let out = sregen(&["construct", "table3-433", "--field", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(r["field"], "F_9");
    assert_eq!(r["checks"][0]["witness"], serde_json::json!([1]));
}

#[test]
fn construct_usage_errors() {
    for args in [
        vec!["construct", "nope"],
        vec!["construct", "mbr", "--n", "4"],
        vec![
            "construct",
            "mbr",
            "--n",
            "4",
            "--k",
            "2",
            "--d",
            "2",
            "--l",
            "1",
        ],
        vec!["construct", "table1-423", "--field", "6"],
        vec!["construct", "table1-423", "--field", "3"],
        vec!["construct", "table2-433", "--field", "3"],
        vec!["construct", "table1-423", "--n", "5"],
        vec!["bogus"],
    ] {
        let out = sregen(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_reports() {
    let dir = TempDir::new().unwrap();
    let t2 = construct(&dir, "table2-433", &[]);
    let out = sregen(&["verify", &t2, "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["exhaustive"].as_array().unwrap().len(), 4);
    assert!(r["exhaustive"]
        .as_array()
        .unwrap()
        .iter()
        .all(|row| row["exhaustive_leakage"] == "0"));

    let f1 = construct(&dir, "fig1-322", &[]);
    let out = sregen(&["verify", &f1, "--attack", "type2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["secrecy"]["worst"]["leakage"], 1);
}

#[test]
fn verify_respects_the_budget_variable() {
    let dir = TempDir::new().unwrap();
    let t1 = construct(&dir, "table1-423", &[]);
    let out = Command::new(env!("CARGO_BIN_EXE_sregen"))
        .args(["verify", &t1, "--exhaustive"])
        .env("SREGEN_ENUM_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn tampered_descriptor_is_rejected() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "table2-433", &[]);
    let mut d: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    // drop the key from node 4
    d["generator"]["data"][11] = 0.into();
    fs::write(&path, d.to_string()).unwrap();
    let out = sregen(&["verify", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);

    fs::write(&path, "{").unwrap();
    assert_eq!(sregen(&["verify", &path]).status.code(), Some(2));
    assert_eq!(
        sregen(&["verify", "/nonexistent.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_counts_disk_reads_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let t3 = construct(&dir, "table3-433", &[]);
    let out = sregen(&["simulate", &t3, "--failures", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["disk_reads"]["total"], 6);

    let logs: Vec<String> = (0..2)
        .map(|i| {
            let log = dir.path().join(format!("run{i}.jsonl"));
            let log = log.to_str().unwrap();
            let out = sregen(&[
                "simulate",
                &t3,
                "--seed",
                "7",
                "--failures",
                "1,3",
                "--wiretap",
                "type1:2",
                "--log",
                log,
            ]);
            assert_eq!(out.status.code(), Some(0));
            fs::read_to_string(log).unwrap()
        })
        .collect();
    assert_eq!(logs[0], logs[1]);
    let first: Value = serde_json::from_str(logs[0].lines().next().unwrap()).unwrap();
    assert_eq!(first["kind"], "init");
    assert_eq!(first["seed"], 7);
}

#[test]
fn simulate_wiretap_reports_leakage() {
    let dir = TempDir::new().unwrap();
    let t1 = construct(&dir, "table1-423", &[]);
    let out = sregen(&[
        "simulate",
        &t1,
        "--wiretap",
        "type1:3",
        "--reconstruct",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["wiretaps"][0]["leakage"]["leakage"], 0);
    assert_eq!(r["wiretaps"][0]["values"].as_array().unwrap().len(), 2);
    assert_eq!(r["reconstruct"]["correct"], true);

    let f1 = construct(&dir, "fig1-322", &[]);
    let out = sregen(&["simulate", &f1, "--wiretap", "type2:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["wiretaps"][0]["leakage"]["leakage"], 1);

    assert_eq!(
        sregen(&["simulate", &f1, "--failures", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sregen(&["simulate", &f1, "--wiretap", "none:1"])
            .status
            .code(),
        Some(2)
    );
}

fn region_rows(path: &Path) -> Vec<(f64, f64, String)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["alpha_bar", "beta_bar", "label"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (
                rec[0].parse().unwrap(),
                rec[1].parse().unwrap(),
                rec[2].to_string(),
            )
        })
        .collect()
}

fn corners(rows: &[(f64, f64, String)]) -> Vec<(f64, f64, String)> {
    rows.iter().filter(|r| !r.2.is_empty()).cloned().collect()
}

#[test]
fn region_corners() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("r.csv");
    let out = out_path.to_str().unwrap();

    let run = |args: &[&str]| {
        let mut all = vec!["region", "--out", out];
        all.extend_from_slice(args);
        sregen(&all)
    };
    let st = run(&[
        "--n", "3", "--k", "2", "--d", "2", "--l", "1", "--attack", "type2",
    ]);
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(
        corners(&region_rows(&out_path)),
        vec![(2.0, 1.0, "MBR".to_string())]
    );

    let st = run(&[
        "--n", "4", "--k", "3", "--d", "3", "--l", "1", "--attack", "type1",
    ]);
    assert_eq!(st.status.code(), Some(0));
    let rows = region_rows(&out_path);
    let c = corners(&rows);
    assert_eq!(c[0], (0.5, 0.5, "corner".to_string()));
    assert_eq!(c[1], (0.6, 0.4, "corner".to_string()));
    // boundary is a staircase: beta_bar never increases
    assert!(rows
        .windows(2)
        .all(|w| w[0].0 <= w[1].0 && w[0].1 >= w[1].1));
    let first = fs::read(&out_path).unwrap();
    run(&[
        "--n", "4", "--k", "3", "--d", "3", "--l", "1", "--attack", "type1",
    ]);
    assert_eq!(fs::read(&out_path).unwrap(), first);

    let uncovered = [
        "--n", "5", "--k", "3", "--d", "4", "--l", "1", "--attack", "type2",
    ];
    assert_eq!(run(&uncovered).status.code(), Some(2));
    let mut flagged = uncovered.to_vec();
    flagged.push("--upper-bound-only");
    assert_eq!(run(&flagged).status.code(), Some(0));
}

#[test]
fn bound_json() {
    let out = sregen(&[
        "bound", "--n", "4", "--k", "3", "--d", "3", "--l", "1", "--alpha", "3", "--beta", "2",
        "--attack", "type1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["capacity"], "5");
    assert_eq!(r["tight"], true);

    let args = [
        "bound", "--n", "5", "--k", "3", "--d", "4", "--l", "1", "--alpha", "1/2", "--beta", "1/4",
        "--attack", "type1",
    ];
    assert_eq!(sregen(&args).status.code(), Some(2));
    let mut flagged = args.to_vec();
    flagged.push("--upper-bound-only");
    let r = json(&sregen(&flagged));
    assert_eq!(r["tight"], false);
    assert_eq!(r["source"], "secure-cut");
}
