//! Variational potentials and Lyapunov functions.
//!
//! The 1-form `Σ B_i dw_i` is closed on the admissible set, so
//! `Φ(w) = -∫_c^w Σ B_i dw_i` does not depend on the path. We integrate along
//! the straight segment from the base point `c`, which stays admissible
//! because the admissible set is an intersection of half-spaces.
//!
//! * `Ψ(w) = Φ(w) + Σ b_i w_i` is strictly convex with minimiser `w*`, where `B(w*) = b`.
//! * `C(w) = Σ (B_i - b_i)²`, `Υ(w) = Σ (B_i - b_i)² / B_i^p`.
//! * `Λ = Ψ(w) - Ψ(w*) + C` and `Ξ = Ψ(w) - Ψ(w*) + Υ`.

use serde::{Deserialize, Serialize};

use crate::conformal::Surface;
use crate::error::{Error, Result};

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];
const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_8,
];

pub const QUADRATURE_RTOL: f64 = 1e-10;
pub const MAX_REFINEMENTS: usize = 20;

/// Integrand of `∫ Σ (b_i - B_i) dw_i` at parameter `tau ∈ [0, 1]` of the
/// segment, with `Σ (|b_i| + |B_i|) |dw_i|` as its rounding scale.
fn integrand(surface: &Surface, from: &[f64], dir: &[f64], targets: Option<&[f64]>, tau: f64) -> Result<(f64, f64)> {
    let w: Vec<f64> = from.iter().zip(dir).map(|(a, d)| a + tau * d).collect();
    let b = surface.boundary_lengths(&w)?;
    Ok(b.as_slice().iter().enumerate().fold((0.0, 0.0), |(v, s), (i, bi)| {
        let t = targets.map_or(0.0, |t| t[i]);
        (v + (t - bi) * dir[i], s + (t.abs() + bi.abs()) * dir[i].abs())
    }))
}

/// Panel sums of a composite Gauss–Legendre rule with `panels` equal panels.
/// Returns `(integral, integrated rounding scale)`.
fn composite<F>(f: &mut F, panels: usize, nodes: &[f64], weights: &[f64]) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let h = 1.0 / panels as f64;
    let (mut sum, mut scale) = (0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, wt) in nodes.iter().zip(weights) {
            let (v, s) = f(mid + 0.5 * h * x)?;
            sum += 0.5 * h * wt * v;
            scale += 0.5 * h * wt * s;
        }
    }
    Ok((sum, scale))
}

fn check_segment(surface: &Surface, from: &[f64], to: &[f64], targets: Option<&[f64]>) -> Result<Vec<f64>> {
    for w in [from, to] {
        surface.check_factor(w)?;
        let (edge, margin) = surface.min_margin(w)?;
        if margin <= 0.0 {
            return Err(Error::InadmissibleFactor { edge, margin });
        }
    }
    if let Some(t) = targets {
        if t.len() != from.len() {
            return Err(Error::DimensionMismatch {
                what: "targets",
                expected: from.len(),
                found: t.len(),
            });
        }
    }
    Ok(from.iter().zip(to).map(|(a, b)| b - a).collect())
}

/// `∫_from^to Σ (b_i - B_i) dw_i` along the straight segment, by composite
/// 5-point Gauss–Legendre with panel doubling until two successive levels
/// agree to [`QUADRATURE_RTOL`]. With `targets = None` this is `Φ(to) - Φ(from)`;
/// with targets it is `Ψ(to) - Ψ(from)`.
pub fn segment_integral(surface: &Surface, from: &[f64], to: &[f64], targets: Option<&[f64]>) -> Result<f64> {
    let dir = check_segment(surface, from, to, targets)?;
    if dir.iter().all(|d| *d == 0.0) {
        return Ok(0.0);
    }
    let mut f = |tau| integrand(surface, from, &dir, targets, tau);
    let (mut prev, _) = composite(&mut f, 1, &GL5_NODES, &GL5_WEIGHTS)?;
    let mut panels = 1;
    for _ in 0..MAX_REFINEMENTS {
        panels *= 2;
        let (cur, scale) = composite(&mut f, panels, &GL5_NODES, &GL5_WEIGHTS)?;
        let diff = (cur - prev).abs();
        // second test: the integrand itself is only known to rounding
        if diff <= QUADRATURE_RTOL * cur.abs() || diff <= 1e-14 * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureStall {
        refinements: MAX_REFINEMENTS,
    })
}

/// Same integral with a single 4-point Gauss–Legendre panel. Used for the
/// short segments of individual integrator steps.
pub fn short_segment_integral(surface: &Surface, from: &[f64], to: &[f64], targets: Option<&[f64]>) -> Result<f64> {
    let dir = check_segment(surface, from, to, targets)?;
    let mut f = |tau| integrand(surface, from, &dir, targets, tau);
    Ok(composite(&mut f, 1, &GL4_NODES, &GL4_WEIGHTS)?.0)
}

/// `Φ(w) = -∫_base^w Σ B_i dw_i`.
pub fn potential_phi(surface: &Surface, w: &[f64], base: &[f64]) -> Result<f64> {
    segment_integral(surface, base, w, None)
}

/// `Ψ(w) = Φ(w) + Σ b_i w_i`.
pub fn potential_psi(surface: &Surface, w: &[f64], targets: &[f64], base: &[f64]) -> Result<f64> {
    let phi = potential_phi(surface, w, base)?;
    Ok(phi + targets.iter().zip(w).map(|(b, x)| b * x).sum::<f64>())
}

pub fn residual_c(boundary: &[f64], targets: &[f64]) -> f64 {
    boundary.iter().zip(targets).map(|(b, t)| (b - t).powi(2)).sum()
}

pub fn residual_upsilon(boundary: &[f64], targets: &[f64], p: f64) -> f64 {
    boundary
        .iter()
        .zip(targets)
        .map(|(b, t)| (b - t).powi(2) / b.powf(p))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub phi: f64,
    pub psi: f64,
    pub lambda_val: f64,
    pub xi: f64,
    pub c_val: f64,
    pub upsilon: f64,
    pub base: Vec<f64>,
    pub w_star: Vec<f64>,
}

/// All potentials and Lyapunov values at `w`, relative to the critical point `w_star`.
pub fn lyapunov_values(
    surface: &Surface,
    w: &[f64],
    targets: &[f64],
    p: f64,
    w_star: &[f64],
    base: &[f64],
) -> Result<EnergyRecord> {
    let phi = potential_phi(surface, w, base)?;
    let psi = phi + targets.iter().zip(w).map(|(b, x)| b * x).sum::<f64>();
    let psi_star = potential_psi(surface, w_star, targets, base)?;
    let boundary = surface.boundary_lengths(w)?;
    let c_val = residual_c(boundary.as_slice(), targets);
    let upsilon = residual_upsilon(boundary.as_slice(), targets, p);
    Ok(EnergyRecord {
        phi,
        psi,
        lambda_val: psi - psi_star + c_val,
        xi: psi - psi_star + upsilon,
        c_val,
        upsilon,
        base: base.to_vec(),
        w_star: w_star.to_vec(),
    })
}
