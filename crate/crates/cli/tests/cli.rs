//! End-to-end runs of the compiled binary: exit codes, output formats, and
//! determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_arsmooth");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("SMOOTH_LOG")
        .output()
        .expect("binary runs")
}

fn stdout_values(out: &Output) -> Vec<f64> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.trim().parse::<f64>().expect("numeric row"))
        .collect()
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn spike_csv(dir: &TempDir) -> String {
    let path = dir.path().join("y.csv");
    write(&path, "3.0\n0.0\n0.0\n");
    path.display().to_string()
}

fn worked_weights(dir: &TempDir) -> String {
    let path = dir.path().join("w.json");
    write(
        &path,
        r#"{"alpha": [0.3333333333333333], "beta": [0.3333333333333333, 0.0, 0.3333333333333333]}"#,
    );
    path.display().to_string()
}

#[test]
fn smooth_worked_instance_with_verification() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "smooth",
        "--input",
        &spike_csv(&dir),
        "--weights",
        &worked_weights(&dir),
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let x = stdout_values(&out);
    let want = [9.0 / 7.0, 6.0 / 7.0, 6.0 / 7.0];
    for (got, want) in x.iter().zip(want) {
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
    }
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("max relative deviation"),
        "stderr: {stderr}"
    );
}

#[test]
fn constant_series_is_a_fixed_point() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.csv");
    write(&path, "2.5\n2.5\n2.5\n2.5\n2.5\n");
    let out = run(&[
        "smooth",
        "--input",
        &path.display().to_string(),
        "--uniform",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for v in stdout_values(&out) {
        assert!((v - 2.5).abs() <= 1e-12);
    }
}

#[test]
fn missing_input_exits_with_io_code() {
    let out = run(&["smooth", "--input", "/nonexistent/y.csv", "--uniform", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_input_exits_with_validation_code() {
    let dir = TempDir::new().unwrap();
    let short = dir.path().join("short.csv");
    write(&short, "1.0\n2.0\n");
    let out = run(&[
        "smooth",
        "--input",
        &short.display().to_string(),
        "--uniform",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let bad_weights = dir.path().join("bad.json");
    write(&bad_weights, r#"{"alpha": [0.5, 0.2, 0.1], "beta": [0.0]}"#);
    let out = run(&[
        "smooth",
        "--input",
        &spike_csv(&dir),
        "--weights",
        &bad_weights.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn oversized_series_cannot_be_verified() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("long.csv");
    let text: String = (0..600).map(|i| format!("{}.0\n", i % 7)).collect();
    write(&path, &text);
    let out = run(&[
        "smooth",
        "--input",
        &path.display().to_string(),
        "--uniform",
        "1",
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn design_tied_reports_one_candidate_per_width() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("y.csv");
    write(&path, "1.0\n5.0\n-3.0\n2.0\n2.0\n-1.0\n0.0\n4.0\n1.0\n");
    let out = run(&[
        "design",
        "--input",
        &path.display().to_string(),
        "--mode",
        "tied",
        "--max-halfwidth",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["candidates"].as_array().unwrap().len(), 4);
    assert_eq!(report["mode"], "tied");
}

#[test]
fn design_joint_l2_evaluates_the_grid() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("y.csv");
    write(&path, "0.0\n0.0\n5.0\n0.0\n0.0\n0.0\n");
    let out = run(&[
        "design",
        "--input",
        &path.display().to_string(),
        "--mode",
        "joint",
        "--max-halfwidth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["candidates"].as_array().unwrap().len(), 4);
}

#[test]
fn design_cascade_names_the_stage2_kernel() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "design",
        "--input",
        &spike_csv(&dir),
        "--mode",
        "cascade",
        "--max-halfwidth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["stage2_kernel"], serde_json::json!([-2.0, 5.0, -2.0]));
}

#[test]
fn analyze_reports_the_decay_root() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "analyze",
        "--weights",
        &worked_weights(&dir),
        "--n",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r_star = report["r_star"].as_f64().unwrap();
    assert!((r_star - 0.5).abs() <= 1e-10, "r* = {r_star}");
    let v = report["V"].as_array().unwrap();
    assert_eq!(v[0].as_f64().unwrap(), 1.0);
    assert!(v.iter().all(|x| x.as_f64().unwrap() >= 1.0));
}

#[test]
fn analyze_delta_weights_have_no_root() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("delta.json");
    write(&path, r#"{"alpha": [1.0], "beta": [0.0]}"#);
    let out = run(&[
        "analyze",
        "--weights",
        &path.display().to_string(),
        "--n",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["r_star"].is_null());
    let u = report["u"].as_array().unwrap();
    assert_eq!(u[0].as_f64().unwrap(), 1.0);
    assert!(u[1..].iter().all(|x| x.as_f64().unwrap() == 0.0));
}

#[test]
fn file_outputs_are_byte_identical_across_reruns() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("y.csv");
    write(&input, "1.0\n4.0\n-2.0\n0.5\n3.0\n-1.5\n2.0\n");
    let run_once = |tag: &str| -> (Vec<u8>, Vec<Vec<u8>>, serde_json::Value) {
        let out_path = dir.path().join(format!("x-{tag}.csv"));
        let out = run(&[
            "smooth",
            "--input",
            &input.display().to_string(),
            "--output",
            &out_path.display().to_string(),
            "--uniform",
            "2",
            "--emit-plot",
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        let main = fs::read(&out_path).unwrap();
        let plots = [".y.dat", ".ybar.dat", ".xstar.dat"]
            .iter()
            .map(|s| {
                fs::read(dir.path().join(format!("x-{tag}.csv{s}"))).unwrap()
            })
            .collect();
        let manifest: serde_json::Value = serde_json::from_slice(
            &fs::read(dir.path().join(format!("x-{tag}.csv.manifest.json"))).unwrap(),
        )
        .unwrap();
        (main, plots, manifest)
    };
    let (a_main, a_plots, mut a_manifest) = run_once("a");
    let (b_main, b_plots, mut b_manifest) = run_once("b");
    assert_eq!(a_main, b_main);
    assert_eq!(a_plots, b_plots);
    // Everything in the manifest except timing and the self-referential
    // paths must agree.
    for m in [&mut a_manifest, &mut b_manifest] {
        let obj = m.as_object_mut().unwrap();
        obj.remove("elapsed_ms");
        obj.remove("outputs");
    }
    assert_eq!(a_manifest, b_manifest);
}

#[test]
fn written_csv_round_trips_through_the_parser() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("y.csv");
    write(&input, "0.1\n0.7\n-0.3\n0.9\n0.2\n");
    let out_path = dir.path().join("x.csv");
    let run1 = run(&[
        "smooth",
        "--input",
        &input.display().to_string(),
        "--output",
        &out_path.display().to_string(),
        "--uniform",
        "1",
    ]);
    assert_eq!(run1.status.code(), Some(0));
    // Feed the output back in as input with the identity smoother: values
    // must survive both the write and the parse losslessly.
    let run2 = run(&[
        "smooth",
        "--input",
        &out_path.display().to_string(),
        "--uniform",
        "0",
    ]);
    assert_eq!(run2.status.code(), Some(0), "{run2:?}");
    let first: Vec<f64> = fs::read_to_string(&out_path)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    let second = stdout_values(&run2);
    for (a, b) in first.iter().zip(&second) {
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
    }
}

#[test]
fn analyze_plot_rows_are_centered() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("spec.json");
    let out = run(&[
        "analyze",
        "--weights",
        &worked_weights(&dir),
        "--n",
        "8",
        "--output",
        &out_path.display().to_string(),
        "--emit-plot",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let rows = fs::read_to_string(dir.path().join("spec.json.u.dat")).unwrap();
    let offsets: Vec<i64> = rows
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(offsets, (-4..=3).collect::<Vec<_>>());
}
