//! Jacobian of the boundary-length map and fractional powers of its negation.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};

use crate::conformal::{edge_length_derivative, Surface};
use crate::error::{Error, Result};
use crate::hexagon::face_arcs_with_jacobian;

/// `L[i][j] = ∂B_j / ∂w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryJacobian(DMatrix<f64>);

impl BoundaryJacobian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// `max |L - Lᵀ| / max |L|`.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.0;
        let scale = m.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (m - m.transpose()).amax() / scale
    }

    /// Smallest row slack `|L_ii| - Σ_{j≠i} |L_ij|`; non-negative iff diagonally dominant.
    pub fn dominance_slack(&self) -> f64 {
        let m = &self.0;
        (0..m.nrows())
            .map(|i| {
                let off: f64 = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
                m[(i, i)].abs() - off
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Per-face block `∂θ_a / ∂w_c` with one local variable per corner slot.
pub fn face_block(surface: &Surface, w: &[f64], face: usize) -> Result<Matrix3<f64>> {
    let lengths = surface.deform(w)?;
    let f = surface
        .mesh()
        .faces()
        .get(face)
        .ok_or_else(|| Error::InvalidParameter(format!("face index {face} out of range")))?;
    local_block(f.sides.map(|e| lengths[e]))
}

// Side m joins corners m-1 and m, so its length depends on both of those
// local factors with derivative 2 coth(l/2).
fn local_block(sides: [f64; 3]) -> Result<Matrix3<f64>> {
    let (_, d_arc_d_side) = face_arcs_with_jacobian(sides)?;
    let mut d_side_d_w = Matrix3::zeros();
    for m in 0..3 {
        let d = edge_length_derivative(sides[m]);
        d_side_d_w[(m, (m + 2) % 3)] += d;
        d_side_d_w[(m, m)] += d;
    }
    Ok(d_arc_d_side * d_side_d_w)
}

/// Assemble `L` by scattering each face block onto its corner labels.
///
/// Faces are summed in index order so the result is reproducible bit for bit.
pub fn boundary_jacobian(surface: &Surface, w: &[f64]) -> Result<BoundaryJacobian> {
    let lengths = surface.deform(w)?;
    let n = surface.n_boundaries();
    let mut l = DMatrix::zeros(n, n);
    for face in surface.mesh().faces() {
        let block = local_block(face.sides.map(|e| lengths[e]))?;
        for a in 0..3 {
            for c in 0..3 {
                // block[(a, c)] = ∂θ_a/∂w_c contributes to ∂B_{corner a}/∂w_{corner c}
                l[(face.corners[c], face.corners[a])] += block[(a, c)];
            }
        }
    }
    Ok(BoundaryJacobian(l))
}

/// `Δ^s` for `Δ = -L`, from an orthogonal eigendecomposition.
#[derive(Debug, Clone)]
pub struct DeltaPower {
    pub s: f64,
    pub matrix: DMatrix<f64>,
    /// Eigenvalues of `Δ` (not of `Δ^s`), matching the columns of `eigenvectors`.
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;
const SINGULAR_RATIO: f64 = 1e-12;

pub fn delta_power(l: &BoundaryJacobian, s: f64) -> Result<DeltaPower> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent s must be finite, got {s}")));
    }
    let delta = -l.matrix();
    let n = delta.nrows();
    let eig = SymmetricEigen::try_new(delta, EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigSolveFailure("QR iteration did not converge".into()))?;
    let lambda_max = eig.eigenvalues.max();
    let lambda_min = eig.eigenvalues.min();
    if lambda_min.is_nan() || lambda_min <= 0.0 || !lambda_max.is_finite() {
        return Err(Error::EigSolveFailure(format!(
            "Δ is not positive definite (smallest eigenvalue {lambda_min:e})"
        )));
    }
    if s < 0.0 && lambda_min < SINGULAR_RATIO * lambda_max {
        return Err(Error::EigSolveFailure(format!(
            "Δ is numerically singular (λ_min/λ_max = {:e}) for negative exponent",
            lambda_min / lambda_max
        )));
    }
    let matrix = if s == 0.0 {
        DMatrix::identity(n, n)
    } else {
        let q = &eig.eigenvectors;
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| x.powf(s)));
        let m = q * d * q.transpose();
        // symmetrize away rounding
        (&m + m.transpose()) * 0.5
    };
    Ok(DeltaPower {
        s,
        matrix,
        eigenvalues: eig.eigenvalues,
        eigenvectors: eig.eigenvectors,
    })
}
