//! Discrete conformal factors acting on a base metric.
//!
//! A factor `w` (one real per boundary component) deforms each ideal edge by
//! `cosh(l_ij / 2) = exp(w_i + w_j) cosh(l0_ij / 2)`. It is admissible when
//! every right-hand side exceeds 1, i.e. `w_i + w_j + ln cosh(l0_ij / 2) > 0`.
//! A self-edge `(i, i)` uses `2 w_i`.

use crate::error::{Error, Result};
use crate::hexagon::{acosh1p, face_arcs};
use crate::triangulation::IdealTriangulation;

/// Positive length per ideal edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMetric(Vec<f64>);

impl BaseMetric {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if let Some((e, l)) = lengths
            .iter()
            .enumerate()
            .find(|(_, l)| !(l.is_finite() && **l > 0.0))
        {
            return Err(Error::InvalidParameter(format!(
                "base length of edge {e} must be positive and finite, got {l}"
            )));
        }
        Ok(Self(lengths))
    }

    /// Every edge gets the same length.
    pub fn uniform(n_edges: usize, length: f64) -> Result<Self> {
        Self::new(vec![length; n_edges])
    }

    pub fn lengths(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Hyperbolic length of each geodesic boundary component.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLengths(pub Vec<f64>);

impl BoundaryLengths {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Triangulation together with its fixed background metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    mesh: IdealTriangulation,
    metric: BaseMetric,
    log_cosh_half: Vec<f64>,
}

impl Surface {
    pub fn new(mesh: IdealTriangulation, metric: BaseMetric) -> Result<Self> {
        if metric.len() != mesh.n_edges() {
            return Err(Error::DimensionMismatch {
                what: "base metric",
                expected: mesh.n_edges(),
                found: metric.len(),
            });
        }
        let log_cosh_half = metric.lengths().iter().map(|l| (l / 2.0).cosh().ln()).collect();
        Ok(Self {
            mesh,
            metric,
            log_cosh_half,
        })
    }

    pub fn mesh(&self) -> &IdealTriangulation {
        &self.mesh
    }

    pub fn metric(&self) -> &BaseMetric {
        &self.metric
    }

    pub fn n_boundaries(&self) -> usize {
        self.mesh.n_boundaries()
    }

    pub(crate) fn check_factor(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.n_boundaries() {
            return Err(Error::DimensionMismatch {
                what: "conformal factor",
                expected: self.n_boundaries(),
                found: w.len(),
            });
        }
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("conformal factor"));
        }
        Ok(())
    }

    /// `w_i + w_j + ln cosh(l0/2)` per edge; `w` is admissible iff all are positive.
    pub fn admissibility_margin(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_factor(w)?;
        Ok(self
            .mesh
            .edges()
            .iter()
            .zip(&self.log_cosh_half)
            .map(|(e, lc)| w[e.endpoints[0]] + w[e.endpoints[1]] + lc)
            .collect())
    }

    /// Smallest edge margin and the edge attaining it.
    pub fn min_margin(&self, w: &[f64]) -> Result<(usize, f64)> {
        let margins = self.admissibility_margin(w)?;
        Ok(margins
            .into_iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (e, m)| if m < acc.1 { (e, m) } else { acc }))
    }

    pub fn is_admissible(&self, w: &[f64]) -> bool {
        self.min_margin(w).map(|(_, m)| m > 0.0).unwrap_or(false)
    }

    /// Deformed edge lengths `w * l0`.
    pub fn deform(&self, w: &[f64]) -> Result<Vec<f64>> {
        let margins = self.admissibility_margin(w)?;
        margins
            .into_iter()
            .enumerate()
            .map(|(edge, margin)| {
                let [i, j] = self.mesh.edges()[edge].endpoints;
                if w[i] + w[j] == 0.0 {
                    Ok(self.metric.0[edge])
                } else if margin > 0.0 {
                    // cosh(l/2) = exp(margin)
                    Ok(2.0 * acosh1p(margin.exp_m1()))
                } else {
                    Err(Error::InadmissibleFactor { edge, margin })
                }
            })
            .collect()
    }

    /// Boundary lengths `B = ψ(w)`, summing each face's arcs into the
    /// boundary labelled at the corresponding corner.
    pub fn boundary_lengths(&self, w: &[f64]) -> Result<BoundaryLengths> {
        let lengths = self.deform(w)?;
        let mut b = vec![0.0; self.n_boundaries()];
        for face in self.mesh.faces() {
            let arcs = face_arcs(face.sides.map(|e| lengths[e]))?;
            for (c, theta) in face.corners.iter().zip(arcs) {
                b[*c] += theta;
            }
        }
        Ok(BoundaryLengths(b))
    }
}

/// `∂l/∂(w_i + w_j)` for an edge of current length `l`: `2 coth(l/2)`.
pub fn edge_length_derivative(l: f64) -> f64 {
    2.0 / (l / 2.0).tanh()
}
