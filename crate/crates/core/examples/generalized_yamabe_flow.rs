//! Generalized Yamabe flow dw_i/dt = g_i (B_i - b_i) for p in [0, 2).

use bordered_flow::flows::{decay_rate, integrate, yamabe_coefficients, FlowKind, FlowSpec};
use bordered_flow::random::{random_instance, rng_from_seed};
use bordered_flow::{solve_prescribed, NewtonOptions};

fn main() {
    let inst = random_instance(&mut rng_from_seed(21), 5, 12).unwrap();
    let surface = &inst.surface;
    let n = surface.n_boundaries();
    let targets: Vec<f64> = (0..n).map(|i| 0.8 + 0.4 * i as f64).collect();
    let w_star = solve_prescribed(surface, &targets, &vec![0.0; n], &NewtonOptions::default()).unwrap().w_star;
    println!("n = {n}, targets {targets:?}");

    for p in [0.0, 0.5, 1.0, 1.5, 1.9] {
        let mut spec = FlowSpec::new(FlowKind::GeneralizedYamabe { p }, targets.clone());
        spec.w_star = Some(w_star.clone());
        let traj = integrate(surface, &inst.w0, &spec).unwrap();
        let g_min = traj
            .samples
            .iter()
            .flat_map(|s| yamabe_coefficients(&s.boundary, &targets, p))
            .fold(f64::INFINITY, f64::min);
        let dev = traj.last().w.iter().zip(&w_star).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let rate = decay_rate(&traj).map(|f| f.rate).unwrap_or(f64::NAN);
        println!(
            "p = {p}: {:?} at t = {:.3}, |w - w*| = {dev:.1e}, min g = {g_min:.4}, rate {rate:.4}",
            traj.status,
            traj.last().t
        );
    }
}
