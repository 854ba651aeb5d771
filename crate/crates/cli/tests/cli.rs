//! End-to-end tests of the qflow binary: artifact layout, determinism,
//! exit codes, and the cross-path equality the exact pipeline promises.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qflow::circuit::Circuit;
use qflow::circuits::CircuitReport;
use qflow::fieldio::{parse_complex_field, parse_real_field};
use qflow::measurement::MeasurementPlan;

fn qflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_real(path: &Path) -> Vec<f64> {
    let (_, values) = parse_real_field(&fs::read_to_string(path).unwrap()).unwrap();
    values
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Every file under `dir`, keyed by relative path.
fn tree_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn exact_run_matches_oracle_and_reruns_bit_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");
    let common = [
        "run", "--flow", "diverging", "--nx", "3", "--ny", "3", "--times", "0,pi/4", "--exact",
    ];
    let run1 = qflow(&[&common[..], &["--out", out1.to_str().unwrap()]].concat());
    assert!(run1.status.success(), "{}", stderr_of(&run1));

    for t in ["t0", "t1"] {
        for name in ["rho", "jx", "jy"] {
            let oracle = read_real(&out1.join("oracle").join(t).join(format!("{name}.csv")));
            let circuit = read_real(&out1.join("circuit").join(t).join(format!("{name}.csv")));
            let dev = max_abs_diff(&oracle, &circuit);
            assert!(dev < 1e-10, "{t}/{name} deviates by {dev}");
        }
        let op = parse_complex_field(
            &fs::read_to_string(out1.join("oracle").join(t).join("psi_c0.csv")).unwrap(),
        )
        .unwrap();
        let cp = parse_complex_field(
            &fs::read_to_string(out1.join("circuit").join(t).join("psi_c0.csv")).unwrap(),
        )
        .unwrap();
        let dev = op.iter().zip(&cp).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-10, "{t}/psi deviates by {dev}");
    }

    let run2 = qflow(&[&common[..], &["--out", out2.to_str().unwrap()]].concat());
    assert!(run2.status.success());
    assert_eq!(tree_bytes(&out1), tree_bytes(&out2));
}

#[test]
fn manifest_reruns_bit_identically_and_overrides_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");
    let run1 = qflow(&[
        "run", "--flow", "vortex", "--nx", "2", "--ny", "2", "--times", "pi/4", "--shots",
        "2000", "--repeats", "2", "--seed", "11", "--out", out1.to_str().unwrap(),
    ]);
    assert!(run1.status.success(), "{}", stderr_of(&run1));

    // The recorded manifest re-runs the same case even under contradictory
    // flags: config files win.
    let manifest = out1.join("manifest.json");
    let run2 = qflow(&[
        "run",
        "--config",
        manifest.to_str().unwrap(),
        "--flow",
        "diverging",
        "--seed",
        "999",
        "--shots",
        "17",
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert!(run2.status.success(), "{}", stderr_of(&run2));
    assert_eq!(tree_bytes(&out1), tree_bytes(&out2));
}

#[test]
fn sampled_run_emits_results_and_error_bars() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let run = qflow(&[
        "run", "--flow", "vortex", "--nx", "3", "--ny", "3", "--times", "pi/4", "--shots",
        "3000", "--repeats", "3", "--seed", "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", stderr_of(&run));

    for c in 0..2 {
        let results = fs::read_to_string(out.join(format!("circuit/t0/results_c{c}.csv"))).unwrap();
        let mut lines = results.lines();
        assert_eq!(lines.next(), Some("basis,string,estimate,stderr"));
        assert!(lines.count() > 100);
    }
    let profiles: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("circuit/t0/profiles.json")).unwrap())
            .unwrap();
    let stds = profiles["omega_theta_std"].as_array().unwrap();
    assert_eq!(stds.len(), profiles["omega_theta_avg"].as_array().unwrap().len());
    assert!(stds.iter().any(|v| v.as_f64().unwrap() > 0.0));
    // Oracle snapshots carry no sampling spread.
    let oracle: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("oracle/t0/profiles.json")).unwrap())
            .unwrap();
    assert!(oracle.get("omega_theta_std").is_none());
}

#[test]
fn report_summarizes_run_and_rejects_incomplete_dirs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let run = qflow(&[
        "run", "--flow", "diverging", "--nx", "3", "--ny", "3", "--times", "0,pi/2", "--exact",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success());

    let report = qflow(&["report", out.to_str().unwrap()]);
    assert!(report.status.success(), "{}", stderr_of(&report));
    let text = stdout_of(&report);
    assert!(text.contains("plan: 192 momentum strings in 14 bases"), "{text}");
    assert!(text.contains("r_rho=1.000000"), "{text}");
    let residual: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("conservation residual: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual < 1e-10, "residual {residual}");

    let empty = tmp.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let bad = qflow(&["report", empty.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(stderr_of(&bad).contains("incomplete run directory"), "{}", stderr_of(&bad));
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x");
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--flow", "nosuch", "--out", out.to_str().unwrap()],
        vec!["run", "--times", "pie", "--out", out.to_str().unwrap()],
        vec!["run", "--scheme", "upwind", "--out", out.to_str().unwrap()],
        vec!["run", "--shots", "0", "--out", out.to_str().unwrap()],
        vec!["noise-sweep", "--nx", "2", "--ny", "2", "--out", out.to_str().unwrap()],
    ];
    for args in cases {
        let run = qflow(&args);
        assert_eq!(run.status.code(), Some(2), "args {args:?}: {}", stderr_of(&run));
        assert!(!out.exists());
    }

    let cfg = tmp.path().join("bad.json");
    fs::write(&cfg, "{\"bogus\": 1}").unwrap();
    let run = qflow(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr_of(&run).contains("bogus"));
}

#[test]
fn zero_amplitude_sweep_reproduces_noiseless_correlations() {
    let tmp = tempfile::tempdir().unwrap();
    let model = tmp.path().join("model.json");
    fs::write(&model, "{\"mode\":\"random-all-qubits\",\"amplitude\":0.0,\"seed\":1}").unwrap();
    let out = tmp.path().join("sweep");
    let run = qflow(&[
        "noise-sweep", "--flow", "diverging", "--nx", "3", "--ny", "3", "--times", "pi/2",
        "--error-model", model.to_str().unwrap(), "--seeds", "1..4",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", stderr_of(&run));

    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("qubit,seed,freq,power,r_rho,r_jx,r_jy"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row[0], "all");
        assert_eq!(row[2], "0");
        assert_eq!(row[3], "0");
        // Zero-amplitude errors leave the circuit untouched, so every row
        // equals the noiseless circuit-vs-oracle correlation.
        assert_eq!(row[4], rows[0][4]);
        let r_rho: f64 = row[4].parse().unwrap();
        assert!(r_rho > 0.9999, "{r_rho}");
    }
}

#[test]
fn fixed_sweep_grids_qubits_and_seeds() {
    let tmp = tempfile::tempdir().unwrap();
    let model = tmp.path().join("model.json");
    fs::write(
        &model,
        "{\"mode\":\"fixed-single-qubit\",\"targets\":[3],\"gate\":{\"kind\":\"rx\",\"theta\":0.025}}",
    )
    .unwrap();
    let out = tmp.path().join("sweep");
    let run = qflow(&[
        "noise-sweep", "--flow", "diverging", "--nx", "3", "--ny", "3", "--times", "pi/2",
        "--error-model", model.to_str().unwrap(), "--qubits", "3,4,5", "--seeds", "1,2",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", stderr_of(&run));

    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    // A fixed model ignores the seed on the exact path: rows for the same
    // qubit are identical apart from the seed column.
    for q in ["3", "4", "5"] {
        let per_q: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == *q).collect();
        assert_eq!(per_q.len(), 2);
        assert_eq!(per_q[0][2..], per_q[1][2..]);
        let power: f64 = per_q[0][3].parse().unwrap();
        assert!(power > 0.5, "qubit {q} stripe power {power}");
    }
}

#[test]
fn plan_and_circuit_artifacts_parse_back() {
    let tmp = tempfile::tempdir().unwrap();
    let plan_dir = tmp.path().join("plan");
    let run = qflow(&["plan", "--nx", "3", "--ny", "3", "--out", plan_dir.to_str().unwrap()]);
    assert!(run.status.success());
    assert!(stdout_of(&run).contains("192 momentum strings in 14 bases"));
    let plan =
        MeasurementPlan::from_json(&fs::read_to_string(plan_dir.join("plan.json")).unwrap())
            .unwrap();
    assert_eq!(plan.num_qubits, 6);
    assert_eq!(plan.num_bases(), 15);

    // Without --out the plan itself is the stdout payload.
    let piped = qflow(&["plan", "--nx", "2", "--ny", "2"]);
    assert!(piped.status.success());
    let piped_plan = MeasurementPlan::from_json(&stdout_of(&piped)).unwrap();
    assert_eq!(piped_plan.num_qubits, 4);

    let circ_dir = tmp.path().join("circ");
    let run = qflow(&[
        "circuit", "--flow", "diverging", "--nx", "2", "--ny", "2", "--times", "0,pi/2",
        "--out", circ_dir.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", stderr_of(&run));
    let text = fs::read_to_string(circ_dir.join("evolve_t1.txt")).unwrap();
    let circ = Circuit::from_text(&text).unwrap();
    assert_eq!(circ.num_qubits(), 4);
    assert!(!circ.is_empty());
    let reports: Vec<CircuitReport> =
        serde_json::from_str(&fs::read_to_string(circ_dir.join("gate_counts.json")).unwrap())
            .unwrap();
    assert_eq!(reports.len(), 3);
    let evolve = reports.iter().find(|r| r.name == "evolve_t1").unwrap();
    assert_eq!(evolve.gates, circ.len());
}
