//! Write a trajectory as CSV plus a JSON run report, then read the CSV back.

use bordered_flow::flows::{integrate, FlowKind, FlowSpec};
use bordered_flow::io::{parse_trajectory_csv, trajectory_to_csv, version};
use bordered_flow::{BaseMetric, IdealTriangulation, Surface};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string());
    let surface = Surface::new(IdealTriangulation::one_holed_torus(), BaseMetric::new(vec![1.1, 1.8, 2.4])?)?;
    let spec = FlowSpec::new(FlowKind::FractionalCalabi { s: 0.5 }, vec![3.0]);
    let traj = integrate(&surface, &[0.2], &spec)?;

    let path = std::path::Path::new(&out_dir).join("torus_trajectory.csv");
    let csv = trajectory_to_csv(&traj);
    std::fs::write(&path, &csv)?;
    let back = parse_trajectory_csv(&std::fs::read_to_string(&path)?)?;
    assert_eq!(back, traj.samples);

    let report = serde_json::json!({
        "version": version(),
        "status": format!("{:?}", traj.status),
        "samples": back.len(),
        "final": back.last(),
    });
    println!("{}", csv.lines().next().unwrap_or_default());
    println!("wrote {} rows to {}", back.len(), path.display());
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
