//! Hyperbolic metrics with prescribed geodesic boundary lengths on ideally
//! triangulated bordered surfaces.
//!
//! A [`Surface`] pairs an [`IdealTriangulation`] with a base metric. A
//! discrete conformal factor `w` (one real per boundary component) deforms
//! the metric; each face becomes a right-angled hexagon and the boundary
//! lengths `B(w)` are sums of hexagon arcs. The crate drives `B(w)` to a
//! prescribed target with:
//!
//! * the fractional Calabi flow `dw/dt = Δ^s (B - b)` ([`flows`]),
//! * the generalized Yamabe flow `dw_i/dt = g_i (B_i - b_i)` ([`flows`]),
//! * a damped Newton solve of the convex potential `Ψ` ([`newton`]),
//!
//! and also integrates Guo's flow `dw/dt = B`, which shrinks all boundaries.
//!
//! ```
//! use bordered_flow::{FlowKind, FlowSpec, Surface, BaseMetric, IdealTriangulation};
//!
//! let mesh = IdealTriangulation::pair_of_pants();
//! let surface = Surface::new(mesh, BaseMetric::uniform(3, 2.0).unwrap()).unwrap();
//! let spec = FlowSpec::new(FlowKind::FractionalCalabi { s: 1.0 }, vec![1.0, 1.0, 1.0]);
//! let traj = bordered_flow::integrate(&surface, &[0.0; 3], &spec).unwrap();
//! assert!(traj.last().residual < 1e-8);
//! ```

pub mod cli;
pub mod conformal;
pub mod energy;
pub mod error;
pub mod flows;
pub mod hexagon;
pub mod io;
pub mod jacobian;
pub mod newton;
pub mod random;
pub mod triangulation;

pub use conformal::{BaseMetric, BoundaryLengths, Surface};
pub use energy::{lyapunov_values, potential_phi, EnergyRecord};
pub use error::{Error, Result};
pub use flows::{decay_rate, integrate, vector_field, DecayFit, FlowKind, FlowSpec, FlowStatus, Trajectory};
pub use hexagon::{arc_side_jacobian, opposite_arcs, HexagonArcs, HexagonSides};
pub use jacobian::{boundary_jacobian, delta_power, BoundaryJacobian, DeltaPower};
pub use newton::{solve_prescribed, NewtonOptions, SolveReport};
pub use triangulation::{EdgeRecord, FaceRecord, IdealTriangulation};
