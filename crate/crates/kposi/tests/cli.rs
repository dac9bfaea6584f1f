//! End-to-end checks of the kposi binary: exit codes, output formats,
//! determinism, and the tolerance-profile plumbing.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kposi"));
    // keep the environment fallback out of unrelated tests
    c.env_remove("KPOSI_TOL_PROFILE");
    c
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

const INTRO4: &str = "1,2,0,0\n0,1,1,0\n0,0,2,0.1\n1,0,0,2\n";
const WEDGE3: &str = "0.79,0.2,0.01\n0.1,0.8,0.1\n0.01,0.1,0.89\n";
const EXAMPLE1: &str = "9,2,-2,1\n3,10,1,-1\n-4,1.5,12,4\n1,-1,2,15\n";
const SPECTRAL4: &str = "2,6,0,0\n0,2,2,0\n0,0,4,2\n2,0,0,4\n";

#[test]
fn classify_reports_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "intro4.csv", INTRO4);

    // not SSR overall: exit 1, but the report is complete
    let out = bin().arg("classify").arg(&matrix).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let verdicts: Vec<&str> = report["result"]["classifications"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, vec!["SR_not_SSR", "not_SR", "SSR", "SSR"]);
    assert_eq!(report["result"]["is_ssr"], Value::Bool(false));
    assert_eq!(report["result"]["nonsingular"], Value::Bool(true));
    let neg = &report["result"]["classifications"][1]["witness_negative"];
    assert_eq!(neg["rows"], serde_json::json!([1, 4]));
    assert_eq!(neg["value"], serde_json::json!(-2.0));

    // SSR at order 3: exit 0
    let out = bin()
        .arg("classify")
        .arg(&matrix)
        .args(["--k", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn classify_scalar_matrix_is_ssr1() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "scalar.csv", "5\n");
    let out = bin().arg("classify").arg(&matrix).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["is_ssr"], Value::Bool(true));
    assert_eq!(
        report["result"]["classifications"][0]["signature"],
        serde_json::json!(1)
    );
}

#[test]
fn ragged_csv_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "ragged.csv", "1,2\n3\n");
    let out = bin().arg("classify").arg(&matrix).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "diagnostics missing: {err}");
}

#[test]
fn classify_vdp_flag_refutes_the_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "counter3.csv", "10,4,1\n1,3,1\n2,4,6\n");
    let out = bin()
        .arg("classify")
        .arg(&matrix)
        .args(["--vdp", "weak", "--samples", "2000", "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["vdp"]["pass"], Value::Bool(false));
    assert!(report["result"]["vdp"]["counterexample"].is_object());
}

#[test]
fn signvar_counts_and_cone_membership() {
    let dir = tempfile::tempdir().unwrap();
    let vector = write(dir.path(), "x.csv", "19,-6,-2\n");
    let out = bin()
        .arg("signvar")
        .arg(&vector)
        .args(["--k", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["s_minus"], serde_json::json!(1));
    assert_eq!(report["result"]["cone"]["in_p_minus"], Value::Bool(true));

    let outside = write(dir.path(), "ax.csv", "164,-1,2\n");
    let out = bin()
        .arg("signvar")
        .arg(&outside)
        .args(["--k", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compound_emits_the_known_minor_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "wedge3.csv", WEDGE3);
    let out = bin()
        .arg("compound")
        .arg(&matrix)
        .args(["--k", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    let expected = [
        [0.612, 0.078, 0.012],
        [0.077, 0.703, 0.177],
        [0.002, 0.088, 0.702],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert!((rows[i][j] - expected[i][j]).abs() < 1e-9);
        }
    }

    let out = bin()
        .arg("compound")
        .arg(&matrix)
        .args(["--k", "2", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["order"], serde_json::json!(2));
    let first = report["result"]["compound"]["data"][0][0].as_f64().unwrap();
    assert!((first - 0.612).abs() < 1e-9);
}

#[test]
fn simulate_traces_example1_with_bounded_s_plus() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "a.csv", EXAMPLE1);
    let x0 = write(dir.path(), "x0.csv", "1,1,-1,1\n");
    let csv_path = dir.path().join("trace.csv");
    let out = bin()
        .arg("simulate")
        .arg(&matrix)
        .arg(&x0)
        .args(["--steps", "20", "--k", "3", "--renorm"])
        .arg("--csv-out")
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["s_minus_initial"], serde_json::json!(2));
    assert!(report["result"]["max_s_plus_after_start"].as_u64().unwrap() <= 2);

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "j,x_1,x_2,x_3,x_4,s_minus,s_plus");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21, "x(0)..x(20)");
    for row in rows {
        let sp: usize = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(sp <= 2);
    }
}

#[test]
fn simulate_zero_steps_emits_only_the_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "i.csv", "1,0\n0,1\n");
    let x0 = write(dir.path(), "x0.csv", "1,2\n");
    let out = bin()
        .arg("simulate")
        .arg(&matrix)
        .arg(&x0)
        .args(["--steps", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 2, "header plus x(0)");
}

#[test]
fn simulate_dimension_mismatch_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "i.csv", "1,0\n0,1\n");
    let x0 = write(dir.path(), "x0.csv", "1,2,3\n");
    let out = bin()
        .arg("simulate")
        .arg(&matrix)
        .arg(&x0)
        .args(["--steps", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn separation_passes_on_the_spectral_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "s4.csv", SPECTRAL4);
    let out = bin()
        .arg("separation")
        .arg(&matrix)
        .args([
            "--k",
            "3",
            "--trials",
            "100",
            "--horizon",
            "50",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], Value::Bool(true));
    let ev = report["result"]["split"]["eigenvalues"].as_array().unwrap();
    assert_eq!(ev.len(), 4);
    assert!((ev[0]["re"].as_f64().unwrap() - 5.8157).abs() < 5e-4);
    assert!((report["result"]["split"]["gap_ratio"].as_f64().unwrap() - 0.0477).abs() < 5e-4);
    assert_eq!(
        report["result"]["separation"]["e_in_cone"],
        Value::Bool(true)
    );
}

#[test]
fn separation_on_equal_modulus_pair_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let matrix = write(dir.path(), "rot.csv", &format!("{c},{}\n{c},{c}\n", -c));
    let out = bin()
        .arg("separation")
        .arg(&matrix)
        .args(["--k", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("degenerate"), "missing gap diagnostics: {err}");
}

#[test]
fn wedge_reproduces_the_parallelogram_example() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "a.csv", WEDGE3);
    let e1 = write(dir.path(), "e1.csv", "1,0,0\n");
    let e2 = write(dir.path(), "e2.csv", "0,1,0\n");
    let out = bin()
        .arg("wedge")
        .arg(&matrix)
        .arg(&e1)
        .arg(&e2)
        .args(["--steps", "15"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    let eta15 = report["result"]["eta"][15].as_array().unwrap();
    let want = [0.0057, 0.0139, 0.0083];
    for (g, w) in eta15.iter().zip(&want) {
        assert!((g.as_f64().unwrap() - w).abs() < 5e-4);
    }
    assert!((report["result"]["rho"].as_f64().unwrap() - 0.8430).abs() < 5e-4);
    assert!(report["result"]["predicted_limit"].is_array());
}

#[test]
fn gen_is_deterministic_and_verified() {
    let run = || {
        bin()
            .args(["gen", "--kind", "tp", "--n", "4", "--seed", "7"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed, same matrix");
    let rows: Vec<&str> = std::str::from_utf8(&a.stdout).unwrap().lines().collect();
    assert_eq!(rows.len(), 4);

    let out = bin()
        .args([
            "gen",
            "--kind",
            "ssr-k-only",
            "--n",
            "4",
            "--k",
            "3",
            "--seed",
            "1",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(
        report["result"]["classification"]["classifications"][2]["verdict"],
        serde_json::json!("SSR")
    );
}

#[test]
fn gen_fixture_round_trips_exactly() {
    let out = bin()
        .args(["gen", "--kind", "fixture", "--name", "intro4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), INTRO4);

    let bad = bin()
        .args(["gen", "--kind", "fixture", "--name", "nope"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let missing = bin()
        .args(["gen", "--kind", "ssr-k-only", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn selftest_passes_and_detects_corruption() {
    let out = bin().arg("selftest").output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS intro4-minors"));
    assert!(!text.contains("FAIL"));

    let corrupted = bin()
        .args(["selftest", "--corrupt-fixtures"])
        .output()
        .unwrap();
    assert_eq!(corrupted.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&corrupted.stdout).contains("FAIL"));
}

#[test]
fn reports_are_deterministic_modulo_duration() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "intro4.csv", INTRO4);
    let run = || {
        let out = bin().arg("classify").arg(&matrix).output().unwrap();
        let mut v = stdout_json(&out);
        v.as_object_mut().unwrap().remove("duration_ms");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn tolerance_profile_file_and_flags_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(dir.path(), "intro4.csv", INTRO4);
    let profile = write(dir.path(), "tols.txt", "tau_zero = 1e-7\n");

    let out = bin()
        .arg("classify")
        .arg(&matrix)
        .arg("--tol-profile")
        .arg(&profile)
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(
        report["tolerance_profile"]["tau_zero"],
        serde_json::json!(1e-7)
    );

    // individual flags override the file
    let out = bin()
        .arg("classify")
        .arg(&matrix)
        .arg("--tol-profile")
        .arg(&profile)
        .args(["--tau-zero", "1e-5"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(
        report["tolerance_profile"]["tau_zero"],
        serde_json::json!(1e-5)
    );

    // environment fallback
    let out = {
        let mut c = Command::new(env!("CARGO_BIN_EXE_kposi"));
        c.env("KPOSI_TOL_PROFILE", &profile);
        c.arg("classify").arg(&matrix).output().unwrap()
    };
    let report = stdout_json(&out);
    assert_eq!(
        report["tolerance_profile"]["tau_zero"],
        serde_json::json!(1e-7)
    );

    // a broken profile is a usage error
    let bad = write(dir.path(), "bad.txt", "tau_zero = -3\n");
    let out = bin()
        .arg("classify")
        .arg(&matrix)
        .arg("--tol-profile")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = bin().args(["classify", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_matrix_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write(
        dir.path(),
        "m.json",
        r#"{"rows": 2, "cols": 2, "data": [[2, 1], [1, 2]]}"#,
    );
    let out = bin()
        .arg("classify")
        .arg(&matrix)
        .args(["--k", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
