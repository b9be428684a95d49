//! Right-angled hyperbolic hexagons.
//!
//! A right-angled hexagon is fixed by three alternating side lengths. The
//! other three sides follow from the hexagon cosine rule
//!
//! ```text
//! cosh θ_i = (cosh l_jk + cosh l_ij cosh l_ki) / (sinh l_ij sinh l_ki)
//! ```
//!
//! where `θ_i` is the side between `l_ij` and `l_ki`, opposite `l_jk`.
//! Subtracting 1 from both sides gives
//!
//! ```text
//! cosh θ_i - 1 = (cosh l_jk + cosh(l_ij - l_ki)) / (sinh l_ij sinh l_ki)
//! ```
//!
//! which has no cancellation, so arcs close to zero keep full relative
//! precision.

use nalgebra::Matrix3;

use crate::error::{Error, Result};

/// Side lengths beyond this overflow `cosh` products in double precision.
pub const MAX_SIDE: f64 = 350.0;

/// Three alternating sides of a right-angled hexagon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexagonSides {
    pub l_jk: f64,
    pub l_ki: f64,
    pub l_ij: f64,
}

/// The remaining three sides; `theta_i` is opposite `l_jk`, and so on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexagonArcs {
    pub theta_i: f64,
    pub theta_j: f64,
    pub theta_k: f64,
}

impl HexagonSides {
    pub fn new(l_jk: f64, l_ki: f64, l_ij: f64) -> Result<Self> {
        let s = Self { l_jk, l_ki, l_ij };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        for l in [self.l_jk, self.l_ki, self.l_ij] {
            if !l.is_finite() || l > MAX_SIDE {
                return Err(Error::NonFinite("hexagon side length"));
            }
            if l <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "hexagon side lengths must be positive, got {l}"
                )));
            }
        }
        Ok(())
    }
}

/// `arccosh(1 + u)` for `u >= 0`.
pub(crate) fn acosh1p(u: f64) -> f64 {
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// Arc opposite side `opp`, lying between sides `a` and `b`, together with
/// its partial derivatives with respect to `(opp, a, b)`.
fn arc_with_gradient(opp: f64, a: f64, b: f64) -> (f64, [f64; 3]) {
    let (sa, sb) = (a.sinh(), b.sinh());
    let (ca, cb) = (a.cosh(), b.cosh());
    let (so, co) = (opp.sinh(), opp.cosh());
    let u = (co + (a - b).cosh()) / (sa * sb);
    let theta = acosh1p(u);
    let sinh_theta = (u * (u + 2.0)).sqrt();
    let d_opp = so / (sa * sb);
    let d_a = -(cb + co * ca) / (sa * sa * sb);
    let d_b = -(ca + co * cb) / (sb * sb * sa);
    (theta, [d_opp / sinh_theta, d_a / sinh_theta, d_b / sinh_theta])
}

fn finite3(v: [f64; 3], what: &'static str) -> Result<[f64; 3]> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Solve the hexagon for the three arcs opposite the given sides.
pub fn opposite_arcs(s: &HexagonSides) -> Result<HexagonArcs> {
    s.check()?;
    let [theta_i, theta_j, theta_k] = finite3(
        [
            arc_with_gradient(s.l_jk, s.l_ij, s.l_ki).0,
            arc_with_gradient(s.l_ki, s.l_jk, s.l_ij).0,
            arc_with_gradient(s.l_ij, s.l_ki, s.l_jk).0,
        ],
        "hexagon arc",
    )?;
    Ok(HexagonArcs {
        theta_i,
        theta_j,
        theta_k,
    })
}

/// `∂(θ_i, θ_j, θ_k) / ∂(l_jk, l_ki, l_ij)`, rows indexed by arc.
pub fn arc_side_jacobian(s: &HexagonSides) -> Result<Matrix3<f64>> {
    s.check()?;
    let (_, gi) = arc_with_gradient(s.l_jk, s.l_ij, s.l_ki);
    let (_, gj) = arc_with_gradient(s.l_ki, s.l_jk, s.l_ij);
    let (_, gk) = arc_with_gradient(s.l_ij, s.l_ki, s.l_jk);
    // columns: l_jk, l_ki, l_ij
    let m = Matrix3::new(
        gi[0], gi[2], gi[1], //
        gj[1], gj[0], gj[2], //
        gk[2], gk[1], gk[0],
    );
    if m.iter().all(|x| x.is_finite()) {
        Ok(m)
    } else {
        Err(Error::NonFinite("hexagon arc derivative"))
    }
}

/// Arcs of a face in corner order, given its side lengths in side order.
///
/// Corner `m` lies between sides `m` and `m + 1` and faces side `m + 2`.
pub fn face_arcs(sides: [f64; 3]) -> Result<[f64; 3]> {
    HexagonSides::new(sides[2], sides[0], sides[1])?;
    let arcs = [0, 1, 2].map(|m| arc_with_gradient(sides[(m + 2) % 3], sides[m], sides[(m + 1) % 3]).0);
    finite3(arcs, "hexagon arc")
}

/// Face arcs plus `∂arc[m] / ∂side[q]` in the same corner/side ordering as
/// [`face_arcs`].
pub fn face_arcs_with_jacobian(sides: [f64; 3]) -> Result<([f64; 3], Matrix3<f64>)> {
    HexagonSides::new(sides[2], sides[0], sides[1])?;
    let mut arcs = [0.0; 3];
    let mut jac = Matrix3::zeros();
    for m in 0..3 {
        let (opp, a, b) = ((m + 2) % 3, m, (m + 1) % 3);
        let (theta, g) = arc_with_gradient(sides[opp], sides[a], sides[b]);
        arcs[m] = theta;
        jac[(m, opp)] = g[0];
        jac[(m, a)] = g[1];
        jac[(m, b)] = g[2];
    }
    finite3(arcs, "hexagon arc")?;
    if jac.iter().all(|x| x.is_finite()) {
        Ok((arcs, jac))
    } else {
        Err(Error::NonFinite("hexagon arc derivative"))
    }
}
