//! Combinatorial curvature flows on the conformal factor.
//!
//! Three vector fields are supported:
//!
//! * Guo's flow, `dw/dt = B`, which shrinks every boundary towards a cusp;
//! * the fractional Calabi flow, `dw/dt = Δ^s (B - b)`;
//! * the generalized Yamabe flow, `dw_i/dt = g_i (B_i - b_i)` with
//!   `g_i = ((2 - p) B_i + p b_i) / B_i^(p+1)`, `0 <= p < 2`.
//!
//! [`integrate`] uses classical RK4. A step is rejected and halved when any
//! stage leaves the admissible set (margin below `safety`), when one full
//! step and two half steps disagree by more than `local_tol`, or when the
//! flow's Lyapunov function would increase. Five accepted steps in a row grow the
//! step by 1.5, never past the initial step.

use serde::{Deserialize, Serialize};

use crate::conformal::Surface;
use crate::energy::{potential_phi, potential_psi, residual_c, residual_upsilon, short_segment_integral};
use crate::error::{Error, Result};
use crate::jacobian::{boundary_jacobian, delta_power};
use crate::newton::check_targets;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FlowKind {
    Guo,
    FractionalCalabi { s: f64 },
    GeneralizedYamabe { p: f64 },
}

impl FlowKind {
    pub fn name(&self) -> &'static str {
        match self {
            FlowKind::Guo => "guo",
            FlowKind::FractionalCalabi { .. } => "fractional-calabi",
            FlowKind::GeneralizedYamabe { .. } => "generalized-yamabe",
        }
    }

    pub fn uses_targets(&self) -> bool {
        !matches!(self, FlowKind::Guo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSpec {
    pub kind: FlowKind,
    /// Prescribed boundary lengths; ignored by Guo's flow.
    pub targets: Vec<f64>,
    pub step: f64,
    pub tol: f64,
    pub t_max: f64,
    pub safety: f64,
    /// Reject steps on the exact Lyapunov function (Λ or Ξ). When off, the
    /// residual `C = Σ (B_i - b_i)²` is used instead.
    pub track_energy: bool,
    /// Local error bound per step, relative to `1 + ‖w‖_∞`, estimated by
    /// comparing one RK4 step with two half steps.
    pub local_tol: f64,
    /// Critical point used to offset the reported Λ / Ξ. Without it the
    /// reported energy is shifted by the constant `Ψ(w*) - Ψ(w0)`.
    pub w_star: Option<Vec<f64>>,
}

pub const MIN_STEP: f64 = 1e-12;
const GROW_AFTER: usize = 5;
const GROW_FACTOR: f64 = 1.5;

impl FlowSpec {
    pub fn new(kind: FlowKind, targets: Vec<f64>) -> Self {
        Self {
            kind,
            targets,
            step: 0.1,
            tol: 1e-8,
            t_max: 1e4,
            safety: 1e-6,
            track_energy: true,
            local_tol: 1e-6,
            w_star: None,
        }
    }

    pub fn guo(n: usize) -> Self {
        Self::new(FlowKind::Guo, vec![0.0; n])
    }

    pub fn validate(&self, surface: &Surface) -> Result<()> {
        match self.kind {
            FlowKind::Guo => {}
            FlowKind::FractionalCalabi { s } if !s.is_finite() => {
                return Err(Error::InvalidParameter(format!("s must be finite, got {s}")));
            }
            FlowKind::GeneralizedYamabe { p } if !(0.0..2.0).contains(&p) => {
                return Err(Error::InvalidParameter(format!("p must lie in [0, 2), got {p}")));
            }
            _ => {}
        }
        if self.kind.uses_targets() {
            check_targets(surface, &self.targets)?;
        } else if self.targets.len() != surface.n_boundaries() {
            return Err(Error::DimensionMismatch {
                what: "targets",
                expected: surface.n_boundaries(),
                found: self.targets.len(),
            });
        }
        for (name, v) in [("step", self.step), ("tol", self.tol), ("t_max", self.t_max), ("local_tol", self.local_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.safety.is_finite() && self.safety >= 0.0) {
            return Err(Error::InvalidParameter(format!("safety must be non-negative, got {}", self.safety)));
        }
        if let Some(ws) = &self.w_star {
            surface.check_factor(ws)?;
        }
        Ok(())
    }

    /// Distance of `boundary` from the flow's target: `‖B - b‖_∞`, or `‖B‖_∞` for Guo.
    pub fn residual(&self, boundary: &[f64]) -> f64 {
        match self.kind {
            FlowKind::Guo => boundary.iter().fold(0.0, |m, b| f64::max(m, b.abs())),
            _ => boundary
                .iter()
                .zip(&self.targets)
                .fold(0.0, |m, (b, t)| f64::max(m, (b - t).abs())),
        }
    }
}

/// `g_i = ((2 - p) B_i + p b_i) / B_i^(p+1)`.
pub fn yamabe_coefficients(boundary: &[f64], targets: &[f64], p: f64) -> Vec<f64> {
    boundary
        .iter()
        .zip(targets)
        .map(|(b, t)| ((2.0 - p) * b + p * t) / b.powf(p + 1.0))
        .collect()
}

fn field_from_boundary(surface: &Surface, w: &[f64], boundary: &[f64], spec: &FlowSpec) -> Result<Vec<f64>> {
    match spec.kind {
        FlowKind::Guo => Ok(boundary.to_vec()),
        FlowKind::FractionalCalabi { s } => {
            let r: Vec<f64> = boundary.iter().zip(&spec.targets).map(|(b, t)| b - t).collect();
            if s == 0.0 {
                return Ok(r);
            }
            let l = boundary_jacobian(surface, w)?;
            let m = delta_power(&l, s)?.matrix;
            Ok((0..r.len())
                .map(|i| (0..r.len()).map(|j| m[(i, j)] * r[j]).sum())
                .collect())
        }
        FlowKind::GeneralizedYamabe { p } => Ok(yamabe_coefficients(boundary, &spec.targets, p)
            .into_iter()
            .zip(boundary.iter().zip(&spec.targets))
            .map(|(g, (b, t))| g * (b - t))
            .collect()),
    }
}

/// `dw/dt` at an admissible `w`.
pub fn vector_field(surface: &Surface, w: &[f64], spec: &FlowSpec) -> Result<Vec<f64>> {
    let b = surface.boundary_lengths(w)?;
    field_from_boundary(surface, w, b.as_slice(), spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowStatus {
    Converged,
    TimeBudgetExhausted,
    GuardTriggered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub w: Vec<f64>,
    pub boundary: Vec<f64>,
    pub residual: f64,
    /// Λ for the Calabi flow, Ξ for the Yamabe flow, Φ for Guo's flow (see [`FlowSpec::w_star`]).
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub kind: FlowKind,
    pub targets: Vec<f64>,
    pub samples: Vec<Sample>,
    pub status: FlowStatus,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub guard_reason: Option<String>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }
}

/// Per-sample Lyapunov ingredients apart from the Ψ / Φ integral.
fn penalty(spec: &FlowSpec, boundary: &[f64]) -> f64 {
    match spec.kind {
        FlowKind::Guo => 0.0,
        FlowKind::FractionalCalabi { .. } => residual_c(boundary, &spec.targets),
        FlowKind::GeneralizedYamabe { p } => {
            if spec.track_energy {
                residual_upsilon(boundary, &spec.targets, p)
            } else {
                residual_c(boundary, &spec.targets)
            }
        }
    }
}

fn initial_energy(surface: &Surface, w0: &[f64], boundary: &[f64], spec: &FlowSpec) -> Result<f64> {
    if !spec.track_energy {
        return Ok(match spec.kind {
            FlowKind::Guo => f64::NAN,
            _ => penalty(spec, boundary),
        });
    }
    let origin = vec![0.0; w0.len()];
    match spec.kind {
        FlowKind::Guo => potential_phi(surface, w0, &origin),
        _ => {
            let shift = match &spec.w_star {
                Some(ws) => {
                    potential_psi(surface, w0, &spec.targets, &origin)?
                        - potential_psi(surface, ws, &spec.targets, &origin)?
                }
                None => 0.0,
            };
            Ok(shift + penalty(spec, boundary))
        }
    }
}

/// Change of the tracked energy across an accepted-candidate step.
fn energy_increment(
    surface: &Surface,
    w: &[f64],
    w_next: &[f64],
    b: &[f64],
    b_next: &[f64],
    spec: &FlowSpec,
) -> Result<f64> {
    let dpen = penalty(spec, b_next) - penalty(spec, b);
    if !spec.track_energy {
        return Ok(dpen);
    }
    let targets = match spec.kind {
        FlowKind::Guo => None,
        _ => Some(spec.targets.as_slice()),
    };
    Ok(short_segment_integral(surface, w, w_next, targets)? + dpen)
}

struct StepOutcome {
    w: Vec<f64>,
    boundary: Vec<f64>,
    k1_next: Vec<f64>,
    d_energy: f64,
}

fn axpy(w: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    w.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Plain RK4 increment from `w` with first stage `k1`; `None` when a stage
/// falls below the safety margin.
fn rk4(surface: &Surface, w: &[f64], k1: &[f64], h: f64, spec: &FlowSpec) -> Option<Vec<f64>> {
    let stage = |x: &[f64]| -> Option<Vec<f64>> {
        if surface.min_margin(x).ok()?.1 < spec.safety {
            return None;
        }
        vector_field(surface, x, spec).ok()
    };
    let k2 = stage(&axpy(w, 0.5 * h, k1))?;
    let k3 = stage(&axpy(w, 0.5 * h, &k2))?;
    let k4 = stage(&axpy(w, h, &k3))?;
    let w_next: Vec<f64> = (0..w.len())
        .map(|i| w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if surface.min_margin(&w_next).ok()?.1 < spec.safety {
        return None;
    }
    Some(w_next)
}

/// One candidate step of size `h`, taken as two RK4 half steps and checked
/// against a single full step; `None` means "reject and halve".
fn try_step(surface: &Surface, w: &[f64], b: &[f64], k1: &[f64], h: f64, spec: &FlowSpec) -> Option<StepOutcome> {
    let full = rk4(surface, w, k1, h, spec)?;
    let mid = rk4(surface, w, k1, 0.5 * h, spec)?;
    let k_mid = vector_field(surface, &mid, spec).ok()?;
    let w_next = rk4(surface, &mid, &k_mid, 0.5 * h, spec)?;
    let scale = 1.0 + w_next.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    let err = full.iter().zip(&w_next).fold(0.0, |m: f64, (a, b)| m.max((a - b).abs())) / 15.0;
    if err.is_nan() || err > spec.local_tol * scale {
        return None;
    }
    let b_next = surface.boundary_lengths(&w_next).ok()?.into_vec();
    let d_energy = energy_increment(surface, w, &w_next, b, &b_next, spec).ok()?;
    let descending = match spec.kind {
        FlowKind::Guo => true,
        _ => d_energy <= 0.0,
    };
    if !descending || !d_energy.is_finite() {
        return None;
    }
    let k1_next = field_from_boundary(surface, &w_next, &b_next, spec).ok()?;
    Some(StepOutcome {
        w: w_next,
        boundary: b_next,
        k1_next,
        d_energy,
    })
}

/// Integrate the flow from `w0` until the residual drops below `tol`, the
/// time budget runs out, or the flow cannot continue.
pub fn integrate(surface: &Surface, w0: &[f64], spec: &FlowSpec) -> Result<Trajectory> {
    spec.validate(surface)?;
    surface.check_factor(w0)?;
    let (edge, margin) = surface.min_margin(w0)?;
    if margin <= 0.0 {
        return Err(Error::InadmissibleFactor { edge, margin });
    }

    let mut w = w0.to_vec();
    let mut b = surface.boundary_lengths(&w)?.into_vec();
    let mut energy = initial_energy(surface, &w, &b, spec)?;
    let mut t = 0.0;
    let mut traj = Trajectory {
        kind: spec.kind,
        targets: spec.targets.clone(),
        samples: vec![Sample {
            t,
            w: w.clone(),
            boundary: b.clone(),
            residual: spec.residual(&b),
            energy,
        }],
        status: FlowStatus::TimeBudgetExhausted,
        accepted_steps: 0,
        rejected_steps: 0,
        guard_reason: None,
    };
    if spec.residual(&b) < spec.tol {
        traj.status = FlowStatus::Converged;
        return Ok(traj);
    }
    let mut k1 = match field_from_boundary(surface, &w, &b, spec) {
        Ok(k) => k,
        Err(e) => {
            traj.status = FlowStatus::GuardTriggered;
            traj.guard_reason = Some(e.to_string());
            return Ok(traj);
        }
    };

    let mut h = spec.step;
    let mut streak = 0;
    while t < spec.t_max {
        let h_eff = h.min(spec.t_max - t);
        match try_step(surface, &w, &b, &k1, h_eff, spec) {
            Some(out) => {
                t = if h_eff < h { spec.t_max } else { t + h_eff };
                w = out.w;
                b = out.boundary;
                k1 = out.k1_next;
                energy += out.d_energy;
                traj.accepted_steps += 1;
                let residual = spec.residual(&b);
                traj.samples.push(Sample {
                    t,
                    w: w.clone(),
                    boundary: b.clone(),
                    residual,
                    energy,
                });
                if residual < spec.tol {
                    traj.status = FlowStatus::Converged;
                    return Ok(traj);
                }
                if k1.iter().any(|x| !x.is_finite()) {
                    traj.status = FlowStatus::GuardTriggered;
                    traj.guard_reason = Some("non-finite vector field".into());
                    return Ok(traj);
                }
                streak += 1;
                if streak >= GROW_AFTER {
                    h = (h * GROW_FACTOR).min(spec.step);
                    streak = 0;
                }
            }
            None => {
                traj.rejected_steps += 1;
                streak = 0;
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(Error::StepCollapse {
                        t,
                        h,
                        partial: Box::new(traj),
                    });
                }
            }
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Fitted exponent λ in `‖B - b‖₂ ≈ A e^{-λ t}`.
    pub rate: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 10;

/// Residual below which a trajectory counts as being in its linear tail.
pub const TAIL_RESIDUAL: f64 = 1e-3;

/// Least-squares fit of `ln ‖B - b‖₂` against `t` over the tail of the
/// trajectory: samples with `‖B - b‖₂ <= TAIL_RESIDUAL`, or, when that
/// leaves too few points, the second half in time. Only samples below the
/// initial residual are used.
pub fn decay_rate(traj: &Trajectory) -> Result<DecayFit> {
    let norm = |s: &Sample| -> f64 {
        match traj.kind {
            FlowKind::Guo => s.boundary.iter().map(|b| b * b).sum::<f64>().sqrt(),
            _ => residual_c(&s.boundary, &traj.targets).sqrt(),
        }
    };
    let first = traj.samples.first().map(norm).unwrap_or(0.0);
    let t_end = traj.samples.last().map_or(0.0, |s| s.t);
    let usable = |keep: &dyn Fn(f64, f64) -> bool| -> Vec<(f64, f64)> {
        traj.samples
            .iter()
            .map(|s| (s.t, norm(s)))
            .filter(|&(t, r)| r > 0.0 && r < first && keep(t, r))
            .map(|(t, r)| (t, r.ln()))
            .collect()
    };
    let mut points = usable(&|_, r| r <= TAIL_RESIDUAL);
    if points.len() < MIN_FIT_POINTS {
        points = usable(&|t, _| t >= 0.5 * t_end);
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            usable: points.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData {
            usable: 1,
            needed: MIN_FIT_POINTS,
        });
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(DecayFit {
        rate: -slope,
        r_squared,
        points: points.len(),
    })
}
