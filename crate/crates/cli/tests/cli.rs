use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bbcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbcap")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bbcap(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn report_value(text: &str, quantity: &str, column: usize) -> f64 {
    let line = text.lines().find(|l| l.split_whitespace().next() == Some(quantity)).expect("row present");
    num(line.split_whitespace().nth(column).unwrap())
}

#[test]
fn loss_sweep_reproduces_square_root_law() {
    let csv = ok(&["sweep", "--model", "loss", "--quantity", "c_lower", "--eta", "0:1:0.1"]);
    assert!(csv.starts_with("model,quantity,eta,nbar,rho_t,y0,f,factor,error\n"));
    let rows = records(&csv);
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert_eq!(r[1], "c_lower");
        assert!((num(&r[7]) - num(&r[2]).sqrt()).abs() < 1e-5, "{r:?}");
        assert!(r[8].is_empty());
    }
}

#[test]
fn white_sweep_orders_factors() {
    let rows = records(&ok(&["sweep", "--model", "white", "--nbar", "1", "--quantity", "all", "--eta", "0.5"]));
    let get = |q: &str| num(&rows.iter().find(|r| r[1] == q).unwrap()[7]);
    assert!(get("ce") >= get("c_lower"));
    assert!(get("ce") / 2.0 >= get("q_lower"));
    assert!(get("ce") / 2.0 >= get("q_alt"));
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = ["sweep", "--model", "white", "--nbar", "0.5", "--eta", "0:1:0.25"];
    let mut args = common.to_vec();
    args.extend(["--jobs", "1", "--out", a.to_str().unwrap()]);
    ok(&args);
    let mut args = common.to_vec();
    args.extend(["--jobs", "3", "--out", b.to_str().unwrap()]);
    ok(&args);
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    assert_eq!(records(std::str::from_utf8(&first).unwrap()).len(), 20);
}

fn assert_single_line_error(out: &Output, kind: &str) {
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error: kind={kind} msg=")), "{err}");
}

#[test]
fn errors_are_single_machine_readable_lines() {
    assert_single_line_error(&bbcap(&["sweep", "--eta", "1.5"]), "config");
    assert_single_line_error(&bbcap(&["verify", "--eta", "1.5"]), "config");
    assert_single_line_error(&bbcap(&["sweep", "--eta", "0:1:-0.1"]), "config");
    assert_single_line_error(&bbcap(&["sweep", "--model", "thermal"]), "config");
    assert_single_line_error(&bbcap(&["sweep", "--model", "warm"]), "config");
    assert_single_line_error(&bbcap(&["sweep", "--eta", "0.5", "--out", "/nonexistent/dir/x.csv"]), "io");
    assert_single_line_error(&bbcap(&["sweep", "--frobnicate"]), "usage");
    assert_single_line_error(&bbcap(&["verify", "--suite", "nope"]), "config");
}

#[test]
fn loss_profile_matches_closed_form() {
    let eta = 0.6;
    let rows = records(&ok(&["profile", "--model", "loss", "--eta", "0.6", "--points", "40", "--xmax", "6"]));
    assert_eq!(rows.len(), 40);
    for r in rows {
        let x = num(&r[0]);
        let expected = (1.0 / eta) / (x / eta).exp_m1();
        assert!((num(&r[1]) - expected).abs() < 1e-8 * (1.0 + expected), "{r:?}");
        assert_eq!(r[2], "0");
    }
}

#[test]
fn white_profile_vanishes_past_cutoff() {
    let (eta, nbar): (f64, f64) = (0.7, 1.0);
    let cutoff = eta * (1.0 + 1.0 / ((1.0 - eta) * nbar)).ln();
    let rows =
        records(&ok(&["profile", "--model", "white", "--nbar", "1", "--eta", "0.7", "--points", "50", "--xmax", "3"]));
    for r in rows {
        let x = num(&r[0]);
        if x > cutoff * (1.0 + 1e-6) {
            assert_eq!(num(&r[1]), 0.0);
            assert_eq!(r[2], "1");
        } else if x < cutoff * (1.0 - 1e-3) {
            assert!(num(&r[1]) > 0.0);
        }
    }
}

#[test]
fn thermal_quantum_profile_starts_with_zero_region() {
    let rows = records(&ok(&[
        "profile",
        "--model",
        "thermal",
        "--rho",
        "0.41",
        "--eta",
        "0.7",
        "--quantity",
        "q_lower",
        "--points",
        "200",
    ]));
    assert_eq!(rows[0][2], "1");
    let first_on = rows.iter().position(|r| r[2] == "0").expect("positive occupations exist");
    let last_on = rows.iter().rposition(|r| r[2] == "0").unwrap();
    assert!(first_on > 0 && last_on + 1 < rows.len());
}

#[test]
fn report_shows_square_root_power_law() {
    for model in
        [&["--model", "loss"][..], &["--model", "white", "--nbar", "1"], &["--model", "thermal", "--rho", "0.41"]]
    {
        let run = |power: &str| {
            let mut args = vec!["report", "--eta", "0.8", "--power", power];
            args.extend_from_slice(model);
            ok(&args)
        };
        let (a, b) = (run("1e-6"), run("4e-6"));
        for q in ["ce", "c_lower", "q_lower", "q_alt"] {
            let (small, large) = (report_value(&a, q, 3), report_value(&b, q, 3));
            assert!((large - 2.0 * small).abs() <= 1e-9 * large, "{model:?} {q}: {small} {large}");
        }
    }
}

#[test]
fn noiseless_report_values() {
    let text = ok(&["report", "--model", "loss", "--eta", "1", "--power", "1e-3", "--time", "2"]);
    let rc = text.lines().find(|l| l.starts_with("rc_bits_per_s")).unwrap().split_whitespace().nth(1).unwrap();
    let rc = num(rc);
    assert!((report_value(&text, "ce", 3) - 4.0 * rc).abs() < 1e-6 * rc);
    assert!((report_value(&text, "c_lower", 3) - 2.0 * rc).abs() < 1e-6 * rc);
    assert!((report_value(&text, "qe", 1) - 1.0).abs() < 1e-9);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "model = loss\nquantity = c_lower\neta = 0.25\n").unwrap();
    let from_file = records(&ok(&["sweep", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_file.len(), 1);
    assert!((num(&from_file[0][7]) - 0.5).abs() < 1e-6);
    let overridden = records(&ok(&["sweep", "--config", cfg.to_str().unwrap(), "--eta", "0.81"]));
    assert!((num(&overridden[0][7]) - 0.9).abs() < 1e-6);
}

#[test]
fn verify_no_squeezing_suite_passes() {
    let text = ok(&["verify", "--suite", "no-squeezing"]);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 4);
    assert!(!text.contains("FAIL"));
}

#[test]
fn figure_seven_writes_one_scan_per_sum() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["figure", "fig7", "--points", "21", "--out", dir.path().to_str().unwrap()]);
    let path = Path::new(dir.path()).join("fig7_sum_3.csv");
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("lambda_diff,mutual_info_bits\n"));
    let rows = records(&text);
    assert_eq!(rows.len(), 21);
    let best = rows.iter().map(|r| num(&r[1])).fold(f64::MIN, f64::max);
    assert_eq!(num(&rows[0][1]), best);
}
