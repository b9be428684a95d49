//! File formats: mesh and metric JSON, trajectory CSV and run reports.
//!
//! Mesh JSON:
//!
//! ```json
//! {
//!   "n_boundaries": 3,
//!   "edges": [[1, 2], [2, 3], [3, 1]],
//!   "faces": [
//!     {"sides": [0, 1, 2], "corners": [2, 3, 1]},
//!     {"sides": [0, 1, 2], "corners": [2, 3, 1]}
//!   ]
//! }
//! ```
//!
//! Boundary indices are 1-based in files and 0-based in memory; edge indices
//! are 0-based in both.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conformal::BaseMetric;
use crate::error::{Error, Result};
use crate::flows::{FlowKind, Sample, Trajectory};
use crate::triangulation::{EdgeRecord, FaceRecord, IdealTriangulation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub n_boundaries: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<FaceFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceFile {
    pub sides: [usize; 3],
    pub corners: [usize; 3],
}

fn one_based(v: usize, what: &str) -> Result<usize> {
    v.checked_sub(1)
        .ok_or_else(|| Error::malformed(format!("{what} uses boundary index 0; boundary indices are 1-based")))
}

impl MeshFile {
    pub fn from_triangulation(t: &IdealTriangulation) -> Self {
        Self {
            n_boundaries: t.n_boundaries(),
            edges: t.edges().iter().map(|e| e.endpoints.map(|v| v + 1)).collect(),
            faces: t
                .faces()
                .iter()
                .map(|f| FaceFile {
                    sides: f.sides,
                    corners: f.corners.map(|c| c + 1),
                })
                .collect(),
        }
    }

    pub fn to_triangulation(&self) -> Result<IdealTriangulation> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, [i, j])| {
                let what = format!("edge {e}");
                Ok(EdgeRecord::new(one_based(*i, &what)?, one_based(*j, &what)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(f, face)| {
                let what = format!("face {f}");
                let c = &face.corners;
                Ok(FaceRecord::new(
                    face.sides,
                    [one_based(c[0], &what)?, one_based(c[1], &what)?, one_based(c[2], &what)?],
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        IdealTriangulation::new(self.n_boundaries, edges, faces)
    }
}

/// Parse mesh JSON. Syntax and schema problems are [`Error::Parse`];
/// well-formed JSON describing an invalid mesh is [`Error::MalformedMesh`].
pub fn parse_mesh(text: &str) -> Result<IdealTriangulation> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("mesh: {e}")))?;
    file.to_triangulation()
}

pub fn mesh_to_json(t: &IdealTriangulation) -> String {
    serde_json::to_string_pretty(&MeshFile::from_triangulation(t)).expect("mesh serializes")
}

pub fn parse_metric(text: &str) -> Result<BaseMetric> {
    let v: Vec<f64> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("metric: {e}")))?;
    BaseMetric::new(v)
}

pub fn metric_to_json(m: &BaseMetric) -> String {
    serde_json::to_string(m.lengths()).expect("metric serializes")
}

/// Comma-separated reals, e.g. `1,1,1` or `-1, 0.5`.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
        })
        .collect()
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_string(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_mesh(path: &Path) -> Result<IdealTriangulation> {
    parse_mesh(&read_to_string(path)?)
}

pub fn load_metric(path: &Path) -> Result<BaseMetric> {
    parse_metric(&read_to_string(path)?)
}

/// Full-precision real: 17 significant digits.
fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_header(n: usize) -> String {
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=n).map(|i| format!("w_{i}")));
    cols.extend((1..=n).map(|i| format!("B_{i}")));
    cols.push("residual".into());
    cols.push("energy".into());
    cols.join(",")
}

pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let n = traj.targets.len();
    let mut out = trajectory_header(n);
    out.push('\n');
    for s in &traj.samples {
        let mut row = vec![fmt_real(s.t)];
        row.extend(s.w.iter().map(|&x| fmt_real(x)));
        row.extend(s.boundary.iter().map(|&x| fmt_real(x)));
        row.push(fmt_real(s.residual));
        row.push(fmt_real(s.energy));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Parse samples back from [`trajectory_to_csv`] output.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<Sample>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty trajectory CSV".into()))?;
    let cols = header.split(',').count();
    if cols < 5 || (cols - 3) % 2 != 0 {
        return Err(Error::Parse(format!("unexpected trajectory header {header:?}")));
    }
    let n = (cols - 3) / 2;
    if header != trajectory_header(n) {
        return Err(Error::Parse(format!("unexpected trajectory header {header:?}")));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(row, line)| {
            let v: Vec<f64> = line
                .split(',')
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {row}: {e}")))?;
            if v.len() != cols {
                return Err(Error::Parse(format!("row {row} has {} fields, expected {cols}", v.len())));
            }
            Ok(Sample {
                t: v[0],
                w: v[1..=n].to_vec(),
                boundary: v[n + 1..=2 * n].to_vec(),
                residual: v[2 * n + 1],
                energy: v[2 * n + 2],
            })
        })
        .collect()
}

/// Version string embedded in every report.
pub fn version() -> &'static str {
    env!("BORDERED_FLOW_VERSION")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowParameters {
    pub kind: FlowKind,
    pub targets: Vec<f64>,
    pub w0: Vec<f64>,
    pub step: f64,
    pub tol: f64,
    pub t_max: f64,
    pub safety: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    pub flow_kind: String,
    pub parameters: FlowParameters,
    pub status: String,
    pub final_residual: f64,
    pub final_time: f64,
    pub final_w: Vec<f64>,
    pub final_boundary: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub decay_rate: Option<f64>,
    pub decay_r_squared: Option<f64>,
    pub newton_w_star: Option<Vec<f64>>,
    pub guard_reason: Option<String>,
    pub wall_time_s: f64,
    pub seed: Option<u64>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveFileReport {
    pub status: String,
    pub targets: Vec<f64>,
    pub w_init: Vec<f64>,
    pub tol: f64,
    pub report: Option<crate::newton::SolveReport>,
    pub error: Option<String>,
    pub wall_time_s: f64,
    pub seed: Option<u64>,
    pub version: String,
}
