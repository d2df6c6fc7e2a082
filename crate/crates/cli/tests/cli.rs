use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gkmn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkmn")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_case1_reports_saddles_at_two() {
    let out = gkmn(&["classify", "--A", "-4", "--B", "-0.5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["regime"]["tag"], "Case1");
    let saddles: Vec<&Value> = v["equilibria"].as_array().unwrap().iter().filter(|e| e["kind"] == "saddle").collect();
    assert_eq!(saddles.len(), 2);
    for s in saddles {
        assert!((s["location"].as_f64().unwrap().abs() - 2.0).abs() < 1e-12);
        assert!((s["energy"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    }
}

#[test]
fn classify_type2_regimes() {
    let out = gkmn(&["classify", "--alpha1", "1", "--alpha2", "-4", "--alpha3", "0.1"]);
    assert_eq!(json(&out)["regime"]["tag"], "CaseI");
    let out = gkmn(&["classify", "--alpha1", "1", "--alpha2", "0", "--alpha3", "0.1"]);
    let v = json(&out);
    assert_eq!(v["regime"]["tag"], "CaseIII");
    assert!(v["equilibria"].as_array().unwrap().is_empty());
}

#[test]
fn out_of_scope_and_config_errors_have_distinct_codes() {
    assert_eq!(code(&gkmn(&["classify", "--A", "1", "--B", "0"])), 3);
    assert_eq!(code(&gkmn(&["classify", "--alpha1", "0", "--alpha2", "1", "--alpha3", "1"])), 3);
    assert_eq!(code(&gkmn(&["classify", "--alpha1", "1", "--alpha2", "1", "--alpha3", "0"])), 3);
    assert_eq!(code(&gkmn(&["classify", "--A", "1"])), 2);
    assert_eq!(code(&gkmn(&["classify", "--A", "1", "--B", "1", "--alpha1", "1"])), 2);
    assert_eq!(code(&gkmn(&["classify"])), 2);
}

#[test]
fn solve_kink_reports_heteroclinic_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("kink.csv");
    let out = gkmn(&["solve", "--A", "-4", "--B", "-0.5", "--family", "p_b2", "--energy", "4", "--samples", "41", "--output", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("kink.json")).unwrap()).unwrap();
    assert_eq!(meta["orbit_class"], "heteroclinic");
    assert_eq!(meta["samples"], 41);
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let rows: Vec<Vec<f64>> =
        reader.records().map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 41);
    // tanh kink between the saddles at -2 and 2
    for r in &rows {
        assert!(r[1].abs() < 2.0);
        assert!((r[1] - 2.0 * (r[0] * 2f64.sqrt()).tanh()).abs() < 1e-12);
    }
}

#[test]
fn solve_rejects_inadmissible_family_with_list() {
    let out = gkmn(&["solve", "--A", "4", "--B", "0.5", "--family", "p_b1", "--energy", "1"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("admissible") && err.contains("p_b4"), "{err}");
}

#[test]
fn solve_q8_writes_complex_wave() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q8.csv");
    let out = gkmn(&["solve", "--family", "q_8", "--xi-max", "5", "--samples", "20", "--output", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), ["xi", "amplitude", "phase", "re", "im"]);
    let mut n = 0;
    for r in reader.records() {
        let v: Vec<f64> = r.unwrap().iter().map(|x| x.parse().unwrap()).collect();
        assert!(v[0] <= 5.0);
        assert!((v[3].hypot(v[4]) - v[1]).abs() < 1e-12 * v[1].max(1.0));
        n += 1;
    }
    assert_eq!(n, 20);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"coefficients": {"linear": -4, "cubic": -0.5}, "family": "p_b2", "energy": 4}"#).unwrap();
    let out = gkmn(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(json(&out)["regime"]["tag"], "Case1");
    // flags win: A = 4, B = 0.5 is the double-well regime
    let out = gkmn(&["classify", "--config", cfg.to_str().unwrap(), "--A", "4", "--B", "0.5"]);
    assert_eq!(json(&out)["regime"]["tag"], "Case2");
    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(code(&gkmn(&["classify", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&gkmn(&["classify", "--config", dir.path().join("missing.json").to_str().unwrap()])), 4);
}

#[test]
fn physical_parameters_reduce_to_the_system() {
    // a = m = kappa = omega = 1, b = -0.5, r = 5 gives (linear, cubic) = (-4, -0.5)
    let out = gkmn(&[
        "classify", "--mode", "type1", "--a", "1", "--b", "-0.5", "--m", "1", "--kappa", "1", "--omega", "1", "--r", "5",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["system"]["linear"], -4.0);
    assert_eq!(v["system"]["cubic"], -0.5);
}

#[test]
fn verify_single_family_passes() {
    let out = gkmn(&["verify", "--family", "p_b4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["reports"][0]["verdict"], "pass");
    assert_eq!(v["summary"]["pass"], 1);
}

#[test]
fn verify_type1_sweep_has_no_failures() {
    let out = gkmn(&["verify", "--all", "--mode", "type1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["reports"].as_array().unwrap().len() >= 15);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn verify_full_sweep_exits_5_on_failure() {
    let out = gkmn(&["verify", "--all"]);
    let v = json(&out);
    let fails = v["summary"]["fail"].as_u64().unwrap();
    assert_eq!(code(&out), if fails > 0 { 5 } else { 0 });
}

#[test]
fn portrait_writes_three_files_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let prefix = dir.path().join(name);
        let out = gkmn(&["portrait", "--A", "4", "--B", "0.5", "--grid", "128", "--out", prefix.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["topology"]["homoclinic_loops"], 2);
        ["svg", "csv", "json"].map(|ext| std::fs::read(dir.path().join(format!("{name}.{ext}"))).unwrap())
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b);
    let csv_rows = String::from_utf8(a[1].clone()).unwrap().lines().count() - 1;
    let sidecar: Value = serde_json::from_slice(&a[2]).unwrap();
    let points: usize =
        sidecar["portrait"]["curves"].as_array().unwrap().iter().map(|c| c["points"].as_array().unwrap().len()).sum();
    assert_eq!(csv_rows, points);
}

#[test]
fn portrait_bad_path_exits_4() {
    let out = gkmn(&["portrait", "--A", "-4", "--B", "-0.5", "--grid", "64", "--out", "/nonexistent/dir/p"]);
    assert_eq!(code(&out), 4);
    assert!(!Path::new("/nonexistent/dir/p.svg").exists());
}

#[test]
fn elliptic_values() {
    let v = json(&gkmn(&["elliptic", "pi", "--phi", "0.3", "--n", "-0.3", "--k2", "0.6"]));
    assert!((v["value"].as_f64().unwrap() - 0.3000636987314943).abs() < 1e-14);
    let v = json(&gkmn(&["elliptic", "k", "--k2", "0"]));
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    let v = json(&gkmn(&["elliptic", "sn", "--u", "0.7", "--k2", "1"]));
    assert!((v["value"].as_f64().unwrap() - 0.7f64.tanh()).abs() < 1e-14);
    assert_eq!(code(&gkmn(&["elliptic", "f", "--k2", "0.5"])), 2);
}
