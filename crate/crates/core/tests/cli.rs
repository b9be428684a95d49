use std::path::Path;

use bordered_flow::cli::{run, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};
use bordered_flow::io::{mesh_to_json, parse_trajectory_csv, FlowReport, SolveFileReport};
use bordered_flow::IdealTriangulation;
use tempfile::TempDir;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bordered-flow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn pants_file(dir: &TempDir) -> String {
    write(dir, "pants.json", &mesh_to_json(&IdealTriangulation::pair_of_pants()))
}

fn path_str(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = pants_file(&dir);
    let (code, out, _) = call(&["validate", "--mesh", &good]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("euler characteristic = -1"), "{out}");

    // edge 3 listed but used by one face only
    let bad = write(
        &dir,
        "bad.json",
        r#"{"n_boundaries": 3, "edges": [[1,2],[2,3],[3,1]], "faces": [{"sides": [1,2,3], "corners": [2,3,1]}]}"#,
    );
    let (code, out, _) = call(&["validate", "--mesh", &bad]);
    assert_eq!(code, EXIT_NUMERIC, "{out}");
    assert!(out.starts_with("invalid"));

    let garbage = write(&dir, "garbage.json", "{ not json");
    assert_eq!(call(&["validate", "--mesh", &garbage]).0, EXIT_USAGE);
    assert_eq!(call(&["validate", "--mesh", "/nonexistent/mesh.json"]).0, EXIT_USAGE);
    assert_eq!(call(&["validate"]).0, EXIT_USAGE);
}

#[test]
fn flow_converges_and_writes_artifacts() {
    let dir = TempDir::new().unwrap();
    let mesh = pants_file(&dir);
    let csv = path_str(&dir, "traj.csv");
    let json = path_str(&dir, "report.json");
    let (code, _, err) = call(&[
        "flow", "--mesh", &mesh, "--kind", "fractional-calabi", "--s", "1", "--targets", "1,1,1", "--out-csv", &csv,
        "--out-json", &json,
    ]);
    assert_eq!(code, EXIT_OK, "{err}");

    let report: FlowReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.status, "converged");
    assert!(report.final_residual < 1e-8);
    assert!(report.version.starts_with('v'));
    let w_star = report.newton_w_star.unwrap();
    for (a, b) in report.final_w.iter().zip(&w_star) {
        assert!((a - b).abs() < 1e-6);
    }

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,w_1,w_2,w_3,B_1,B_2,B_3,residual,energy\n"));
    let samples = parse_trajectory_csv(&text).unwrap();
    let last = samples.last().unwrap();
    assert_eq!(last.w, report.final_w);
    assert_eq!(last.residual, report.final_residual);
    assert!(samples.windows(2).all(|p| p[1].energy <= p[0].energy));
}

#[test]
fn guo_flow_with_short_budget_is_numeric_failure() {
    let dir = TempDir::new().unwrap();
    let mesh = pants_file(&dir);
    let json = path_str(&dir, "guo.json");
    let (code, _, _) = call(&["flow", "--mesh", &mesh, "--kind", "guo", "--t-max", "100", "--out-json", &json]);
    assert_eq!(code, EXIT_NUMERIC);
    let report: FlowReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.status, "time-budget-exhausted");
    assert_eq!(report.final_time, 100.0);
    assert!(report.final_boundary.iter().all(|b| *b > 0.0 && *b < 0.1));
}

#[test]
fn flow_usage_errors() {
    let dir = TempDir::new().unwrap();
    let mesh = pants_file(&dir);
    let cases: &[&[&str]] = &[
        &["flow", "--mesh", &mesh, "--kind", "generalized-yamabe", "--s", "1", "--targets", "1,1,1"],
        &["flow", "--mesh", &mesh, "--kind", "fractional-calabi", "--s", "1"],
        &["flow", "--mesh", &mesh, "--kind", "fractional-calabi", "--targets", "1,1"],
        &["flow", "--mesh", &mesh, "--kind", "guo", "--targets", "1,1,1"],
        &["flow", "--mesh", &mesh, "--kind", "generalized-yamabe", "--p", "2", "--targets", "1,1,1"],
        &["flow", "--mesh", &mesh, "--kind", "fractional-calabi", "--targets", "1,1,1", "--w0", "-1,-1,0"],
        &["flow", "--kind", "guo"],
        &["flow", "--mesh", &mesh, "--kind", "nope"],
    ];
    for args in cases {
        assert_eq!(call(args).0, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn solve_plant_and_targets() {
    let dir = TempDir::new().unwrap();
    let mesh = pants_file(&dir);
    let json = path_str(&dir, "solve.json");
    let (code, _, err) = call(&["solve", "--mesh", &mesh, "--plant", "0.3,-0.2,0.5", "--out-json", &json]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report: SolveFileReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let inner = report.report.unwrap();
    assert!(inner.converged);
    for (a, b) in inner.w_star.iter().zip([0.3, -0.2, 0.5]) {
        assert!((a - b).abs() < 1e-8);
    }

    assert_eq!(call(&["solve", "--mesh", &mesh, "--targets", "1,0,1"]).0, EXIT_USAGE);
    assert_eq!(call(&["solve", "--mesh", &mesh, "--targets", "1,-1,1"]).0, EXIT_USAGE);
    assert_eq!(call(&["solve", "--mesh", &mesh]).0, EXIT_USAGE);

    let targets = write(&dir, "targets.json", "[0.5, 2.0, 1.0]");
    let (code, out, _) = call(&["solve", "--mesh", &mesh, "--targets", &targets]);
    assert_eq!(code, EXIT_OK);
    let report: SolveFileReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.targets, vec![0.5, 2.0, 1.0]);
}

#[test]
fn solve_on_generated_instance_is_reproducible() {
    let a = call(&["solve", "--seed", "7", "--plant", "0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1"]);
    // the generated surface need not have ten boundaries
    if a.0 == EXIT_USAGE {
        return;
    }
    let b = call(&["solve", "--seed", "7", "--plant", "0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1,0.1"]);
    let ra: SolveFileReport = serde_json::from_str(&a.1).unwrap();
    let rb: SolveFileReport = serde_json::from_str(&b.1).unwrap();
    assert_eq!(ra.report.unwrap().w_star, rb.report.unwrap().w_star);
}

#[test]
fn compare_runs_variants() {
    let dir = TempDir::new().unwrap();
    let mesh = pants_file(&dir);
    let csv = path_str(&dir, "cmp.csv");
    let (code, out, err) = call(&[
        "compare", "--mesh", &mesh, "--s", "0,1", "--p", "0.5", "--targets", "1,2,1.5", "--out-csv", &csv,
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("variant,parameter,status"));
    assert!(rows[1..].iter().all(|r| r.contains(",converged,")));

    assert_eq!(call(&["compare", "--mesh", &mesh, "--s", "", "--targets", "1,1,1"]).0, EXIT_USAGE);
    assert_eq!(call(&["compare", "--mesh", &mesh, "--targets", "1,1,1"]).0, EXIT_USAGE);
}

#[test]
fn help_is_not_an_error() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("flow"));
    assert!(Path::new(env!("CARGO_MANIFEST_DIR")).join("Cargo.toml").exists());
}
