//! Fractional Calabi flow dw/dt = Delta^s (B - b) on the pair of pants, for
//! several s, from the same start.

use bordered_flow::flows::{decay_rate, integrate, FlowKind, FlowSpec};
use bordered_flow::{solve_prescribed, BaseMetric, IdealTriangulation, NewtonOptions, Surface};

fn main() {
    let surface = Surface::new(IdealTriangulation::pair_of_pants(), BaseMetric::new(vec![1.2, 2.0, 2.7]).unwrap()).unwrap();
    let targets = vec![1.0, 1.5, 0.7];
    let w0 = [0.3, -0.1, 0.2];
    let w_star = solve_prescribed(&surface, &targets, &[0.0; 3], &NewtonOptions::default()).unwrap().w_star;

    for s in [-1.0, 0.0, 0.5, 1.0, 2.0] {
        let mut spec = FlowSpec::new(FlowKind::FractionalCalabi { s }, targets.clone());
        spec.w_star = Some(w_star.clone());
        let traj = integrate(&surface, &w0, &spec).unwrap();
        let last = traj.last();
        let fit = decay_rate(&traj).unwrap();
        println!(
            "s = {s:>4}: {:?} at t = {:.3} ({} steps, {} rejected), residual {:.2e}, rate {:.4} (R^2 {:.5}), energy {:.3e} -> {:.3e}",
            traj.status,
            last.t,
            traj.accepted_steps,
            traj.rejected_steps,
            last.residual,
            fit.rate,
            fit.r_squared,
            traj.samples[0].energy,
            last.energy
        );
    }
    println!("newton w* = {w_star:.10?}");
}
