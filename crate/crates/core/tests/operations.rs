//! Worked examples for each operation, checked against closed forms or
//! independent oracles.

mod common;

use bordered_flow::cli::{run, EXIT_NUMERIC, EXIT_OK};
use bordered_flow::energy::{lyapunov_values, residual_c, residual_upsilon};
use bordered_flow::flows::{decay_rate, integrate, FlowKind, FlowSpec, FlowStatus};
use bordered_flow::hexagon::{arc_side_jacobian, opposite_arcs, HexagonSides};
use bordered_flow::io::{mesh_to_json, parse_trajectory_csv, SolveFileReport};
use bordered_flow::jacobian::boundary_jacobian;
use bordered_flow::newton::{solve_prescribed, NewtonOptions};
use bordered_flow::random::{admissible_factor, rng_from_seed};
use bordered_flow::{Error, IdealTriangulation};
use common::*;
use rand::Rng;
use tempfile::TempDir;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("bordered-flow").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

#[test]
fn incidence_out_of_range() {
    let t = IdealTriangulation::pair_of_pants();
    assert!(matches!(t.incident_corners(3), Err(Error::InvalidBoundaryIndex { index: 3, n: 3 })));
    assert_eq!(IdealTriangulation::one_holed_torus().incident_corners(0).unwrap().len(), 6);
}

#[test]
fn arc_derivatives_match_finite_differences() {
    let mut rng = rng_from_seed(11);
    for _ in 0..200 {
        let l = [rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0)];
        let jac = arc_side_jacobian(&HexagonSides::new(l[0], l[1], l[2]).unwrap()).unwrap();
        let fd = central_jacobian(&l, 1e-5, |x| {
            let a = opposite_arcs(&HexagonSides::new(x[0], x[1], x[2]).unwrap()).unwrap();
            vec![a.theta_i, a.theta_j, a.theta_k]
        });
        for side in 0..3 {
            for arc in 0..3 {
                let exact = jac[(arc, side)];
                assert!((fd[side][arc] - exact).abs() < 1e-6 * exact.abs().max(1e-3), "{l:?}");
            }
        }
    }
}

#[test]
fn symmetric_pants_jacobian_pattern() {
    let s = pants_uniform(1.7);
    let l = boundary_jacobian(&s, &[0.0; 3]).unwrap();
    let m = l.matrix();
    for i in 0..3 {
        assert!((m[(i, i)] - m[(0, 0)]).abs() < 1e-13);
        for j in 0..3 {
            if i != j {
                assert!((m[(i, j)] - m[(0, 1)]).abs() < 1e-13);
            }
        }
    }
    let row_sums: Vec<f64> = (0..3).map(|i| m.row(i).sum()).collect();
    assert!(row_sums.iter().all(|r| (r - row_sums[0]).abs() < 1e-13));
}

#[test]
fn pants_flows_share_newton_solution() {
    let s = pants_standard();
    let targets = vec![1.0; 3];
    let w_star = solve_prescribed(&s, &targets, &[0.0; 3], &NewtonOptions::default()).unwrap().w_star;
    for kind in [FlowKind::FractionalCalabi { s: 1.0 }, FlowKind::GeneralizedYamabe { p: 1.0 }] {
        let traj = integrate(&s, &[0.0; 3], &FlowSpec::new(kind, targets.clone())).unwrap();
        assert_eq!(traj.status, FlowStatus::Converged);
        assert!(traj.last().boundary.iter().all(|b| (b - 1.0).abs() < 1e-8));
        assert!(max_abs_diff(&traj.last().w, &w_star) < 1e-6);
        let fit = decay_rate(&traj).unwrap();
        assert!(fit.rate > 0.0 && fit.r_squared > 0.99, "{fit:?}");
    }
}

#[test]
fn trajectory_at_solution_has_no_decay_fit() {
    let s = pants_standard();
    let b = s.boundary_lengths(&[0.0; 3]).unwrap().into_vec();
    let traj = integrate(&s, &[0.0; 3], &FlowSpec::new(FlowKind::FractionalCalabi { s: 0.5 }, b)).unwrap();
    assert!(matches!(decay_rate(&traj), Err(Error::InsufficientData { .. })));
}

#[test]
fn guo_flow_monotone_on_pants() {
    let s = pants_standard();
    let mut spec = FlowSpec::guo(3);
    spec.t_max = 50.0;
    let traj = integrate(&s, &[0.2, -0.1, 0.4], &spec).unwrap();
    assert_eq!(traj.status, FlowStatus::TimeBudgetExhausted);
    for p in traj.samples.windows(2) {
        for i in 0..3 {
            assert!(p[1].boundary[i] < p[0].boundary[i]);
            assert!(p[1].w[i] > p[0].w[i]);
        }
    }
}

#[test]
fn lyapunov_values_at_and_away_from_solution() {
    let mut rng = rng_from_seed(12);
    for (surface, w) in mixed_instances(12, 15) {
        let n = surface.n_boundaries();
        let targets: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
        let w_star = solve_prescribed(&surface, &targets, &vec![0.0; n], &NewtonOptions::default())
            .unwrap()
            .w_star;
        let origin = vec![0.0; n];
        let at = lyapunov_values(&surface, &w_star, &targets, 1.0, &w_star, &origin).unwrap();
        assert!(at.lambda_val.abs() < 1e-12 && at.xi.abs() < 1e-12, "{at:?}");
        let away = lyapunov_values(&surface, &w, &targets, 1.0, &w_star, &origin).unwrap();
        assert!(away.lambda_val > 0.0 && away.xi > 0.0);

        // Λ - C does not depend on the base point of the potential
        let other: Vec<f64> = admissible_factor(&mut rng, &surface);
        let moved = lyapunov_values(&surface, &w, &targets, 1.0, &w_star, &other).unwrap();
        assert!((moved.lambda_val - away.lambda_val).abs() < 1e-8);

        let b = surface.boundary_lengths(&w).unwrap().into_vec();
        assert_eq!(residual_upsilon(&b, &targets, 0.0), residual_c(&b, &targets));
    }
}

#[test]
fn newton_from_solution_takes_no_step() {
    let s = pants_standard();
    let b = s.boundary_lengths(&[0.0; 3]).unwrap().into_vec();
    let r = solve_prescribed(&s, &b, &[0.0; 3], &NewtonOptions::default()).unwrap();
    assert!(r.iterations <= 1);
    assert!(r.w_star.iter().all(|w| w.abs() < 1e-10));
}

/// Common factor `w` of symmetric pants with `2 θ(l(w)) = b`, by bisection
/// on the closed form `cosh θ = cosh l / (cosh l - 1)`.
fn bisect_symmetric(l0: f64, b: f64) -> f64 {
    let boundary = |w: f64| {
        let c = (2.0 * w).exp() * (l0 / 2.0).cosh();
        let cosh_l = 2.0 * c * c - 1.0;
        2.0 * (cosh_l / (cosh_l - 1.0)).acosh()
    };
    let (mut lo, mut hi) = (-0.5 * (l0 / 2.0).cosh().ln() + 1e-15, 30.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if boundary(mid) > b {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn symmetric_pants_matches_bisection() {
    for (l0, b) in [(2.0 * 2f64.acosh(), 2.0), (1.0, 0.3), (3.0, 5.0)] {
        let s = pants_uniform(l0);
        let r = solve_prescribed(&s, &[b; 3], &[0.0; 3], &NewtonOptions::default()).unwrap();
        let expected = bisect_symmetric(l0, b);
        for w in &r.w_star {
            assert!((w - expected).abs() < 1e-10, "{w} vs {expected}");
        }
    }
}

#[test]
fn newton_start_does_not_matter() {
    let mut rng = rng_from_seed(13);
    for (surface, _) in mixed_instances(13, 20) {
        let n = surface.n_boundaries();
        let targets: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..4.0)).collect();
        let a = solve_prescribed(&surface, &targets, &vec![0.0; n], &NewtonOptions::default()).unwrap();
        let start = admissible_factor(&mut rng, &surface);
        let b = solve_prescribed(&surface, &targets, &start, &NewtonOptions::default()).unwrap();
        assert!(max_abs_diff(&a.w_star, &b.w_star) < 1e-7);
    }
}

#[test]
fn validate_names_the_bad_edge() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dangling.json");
    std::fs::write(
        &path,
        r#"{"n_boundaries": 3, "edges": [[1,2],[2,3],[3,1]],
            "faces": [{"sides": [0,1,2], "corners": [2,3,1]}, {"sides": [0,1,1], "corners": [2,3,1]}]}"#,
    )
    .unwrap();
    let (code, out) = call(&["validate", "--mesh", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(out.contains("edge 1"), "{out}");
}

#[test]
fn guo_budget_csv_is_strictly_decreasing() {
    let dir = TempDir::new().unwrap();
    let mesh = dir.path().join("pants.json");
    std::fs::write(&mesh, mesh_to_json(&IdealTriangulation::pair_of_pants())).unwrap();
    let csv = dir.path().join("guo.csv");
    let (code, _) = call(&[
        "flow", "--mesh", mesh.to_str().unwrap(), "--kind", "guo", "--t-max", "100", "--out-csv",
        csv.to_str().unwrap(), "--out-json", dir.path().join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_NUMERIC);
    let samples = parse_trajectory_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert!(samples.len() > 100);
    for p in samples.windows(2) {
        assert!(p[1].boundary.iter().zip(&p[0].boundary).all(|(a, b)| a < b));
    }
}

#[test]
fn solve_symmetric_targets() {
    let dir = TempDir::new().unwrap();
    let mesh = dir.path().join("pants.json");
    std::fs::write(&mesh, mesh_to_json(&IdealTriangulation::pair_of_pants())).unwrap();
    let (code, out) = call(&["solve", "--mesh", mesh.to_str().unwrap(), "--targets", "2,2,2"]);
    assert_eq!(code, EXIT_OK);
    let r: SolveFileReport = serde_json::from_str(&out).unwrap();
    let w = r.report.unwrap().w_star;
    let expected = bisect_symmetric(2.0 * 2f64.acosh(), 2.0);
    assert!(w.iter().all(|x| (x - expected).abs() < 1e-10));
}

#[test]
fn compare_rows_share_solution() {
    let dir = TempDir::new().unwrap();
    let mesh = dir.path().join("pants.json");
    std::fs::write(&mesh, mesh_to_json(&IdealTriangulation::pair_of_pants())).unwrap();
    let csv = dir.path().join("cmp.csv");
    let (code, out) = call(&[
        "compare", "--mesh", mesh.to_str().unwrap(), "--s=-1,0,1", "--targets", "1,1.5,2", "--out-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let text = std::fs::read_to_string(&csv).unwrap();
    for row in text.lines().skip(1) {
        let dev: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev < 1e-6, "{row}");
    }

    // large w0 with several p: speeds are reported, not ordered
    let (code, out) = call(&[
        "compare", "--mesh", mesh.to_str().unwrap(), "--w0", "3,3,3", "--p", "0,1,1.5", "--targets", "1,1,1",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("generalized-yamabe")).count(), 3);
}
