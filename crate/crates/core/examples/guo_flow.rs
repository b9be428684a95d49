//! Guo's flow dw/dt = B: every boundary shrinks towards a cusp, slowly.

use bordered_flow::flows::{integrate, FlowSpec};
use bordered_flow::{BaseMetric, IdealTriangulation, Surface};

fn main() {
    let surface = Surface::new(IdealTriangulation::pair_of_pants(), BaseMetric::uniform(3, 2.0 * 2f64.acosh()).unwrap()).unwrap();
    let mut spec = FlowSpec::guo(3);
    spec.tol = 1e-3;
    let traj = integrate(&surface, &[0.0; 3], &spec).unwrap();

    let mut next = 1.0;
    for s in &traj.samples {
        if s.t >= next || s.residual < spec.tol {
            // B ~ 1/(2t) once the boundaries are short
            println!("t = {:>8.2}  B = {:.6?}  2tB = {:.4}", s.t, s.boundary, 2.0 * s.t * s.boundary[0]);
            next *= 4.0;
        }
    }
    println!("{:?} after {} steps", traj.status, traj.accepted_steps);
}
