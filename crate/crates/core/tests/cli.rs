use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn arc_phase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arc-phase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = arc_phase(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn samplesize_default_epsilon() {
    let out = stdout_ok(&["samplesize", "--stages", "6"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "stages,epsilon,n_per_basis,n_total_per_stage,channel_uses"
    );
    assert_eq!(lines.next().unwrap(), "6,0.000244140625,62,124,7812");
}

#[test]
fn samplesize_explicit_epsilon() {
    let out = stdout_ok(&["samplesize", "--stages", "1", "--epsilon", "0.5"]);
    assert!(out.lines().nth(1).unwrap().starts_with("1,0.5,12,24,24"));
}

#[test]
fn samplesize_rejects_bad_epsilon() {
    assert!(
        !arc_phase(&["samplesize", "--stages", "3", "--epsilon", "1.5"])
            .status
            .success()
    );
}

#[test]
fn refine_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("arcs.json");
    fs::write(&input, r#"{"width": 0.3, "lowers": [0.6, 0.3, 2.8]}"#).unwrap();
    let out = stdout_ok(&["refine", "--input", input.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stages"], 3);
    assert!((v["lower"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert!((v["upper"].as_f64().unwrap() - 0.775).abs() < 1e-12);
    assert!((v["estimate"].as_f64().unwrap() - 0.7375).abs() < 1e-12);
}

#[test]
fn refine_rejects_wide_arcs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("arcs.json");
    fs::write(&input, r#"{"width": 0.5, "lowers": [0.1]}"#).unwrap();
    assert!(!arc_phase(&["refine", "--input", input.to_str().unwrap()])
        .status
        .success());
}

#[test]
fn fisher_csv_shape() {
    let out = stdout_ok(&["fisher", "--noise", "0.03125", "--kmax", "9"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,m,H_per_use,Fx_avg_per_use,Fy_avg_per_use");
    assert_eq!(lines.len(), 10);
    let h: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let peak = h
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    assert_eq!(peak + 1, 5);
}

#[test]
fn simulate_fixed_theta_rows() {
    let out = stdout_ok(&[
        "simulate", "--theta", "0.3", "--stages", "6", "--ntot", "30", "--seed", "4", "--trials",
        "5",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "trial,theta,estimate,arc_lower,arc_width,hit");
    assert_eq!(lines.len(), 6);
    assert!(lines[1..]
        .iter()
        .all(|l| l.split(',').nth(1) == Some("0.3")));
    assert_eq!(
        out,
        stdout_ok(&[
            "simulate", "--theta", "0.3", "--stages", "6", "--ntot", "30", "--seed", "4",
            "--trials", "5",
        ])
    );
}

#[test]
fn simulate_rejects_odd_budget() {
    assert!(!arc_phase(&["simulate", "--stages", "3", "--ntot", "31"])
        .status
        .success());
    assert!(
        !arc_phase(&["simulate", "--stages", "3", "--ntot", "30", "--noise", "1.0"])
            .status
            .success()
    );
}

#[test]
fn table1_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table1.csv");
    let out = arc_phase(&[
        "table1",
        "--trials",
        "200",
        "--seed",
        "9",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ntot,stages,trials,hits,coverage,ci_low,ci_high");
    assert_eq!(lines.len(), 17);
    assert!(lines[1].starts_with("20,6,200,"));
    assert!(lines[16].starts_with("50,9,200,"));

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("table1.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "table1");
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["trials"], 200);
    assert_eq!(manifest["content_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn table2_grid() {
    let out = stdout_ok(&["table2", "--trials", "100", "--seed", "1"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "noise,stages,ntot,trials,hits,coverage,ci_low,ci_high"
    );
    assert_eq!(lines.len(), 31);
    assert!(lines[1].starts_with("0.0625,4,30,100,"));
    assert!(lines[30].starts_with("0.00390625,9,30,100,"));
}

#[test]
fn scaling_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scaling.csv");
    let out = arc_phase(&[
        "scaling",
        "--lmin",
        "2",
        "--lmax",
        "4",
        "--trials",
        "100",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "l,epsilon,Ntot,n,mean_cost");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,0.0625,"));
    assert!(dir.path().join("scaling.manifest.json").exists());
}

#[test]
fn scaling_rejects_empty_range() {
    assert!(!arc_phase(&["scaling", "--lmin", "5", "--lmax", "4"])
        .status
        .success());
}
