//! Prescribe boundary lengths and solve for the conformal factor with
//! damped Newton. The targets are planted from a known factor, so the answer
//! can be checked.

use bordered_flow::random::{admissible_factor, random_instance, rng_from_seed};
use bordered_flow::{solve_prescribed, NewtonOptions};

fn main() {
    let mut rng = rng_from_seed(5);
    for _ in 0..5 {
        let inst = random_instance(&mut rng, 8, 16).unwrap();
        let surface = &inst.surface;
        let planted = admissible_factor(&mut rng, surface);
        let targets = surface.boundary_lengths(&planted).unwrap().into_vec();

        let report = solve_prescribed(surface, &targets, &vec![0.0; targets.len()], &NewtonOptions::default()).unwrap();
        let err = report.w_star.iter().zip(&planted).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let history: Vec<String> = report.residual_history.iter().map(|r| format!("{r:.1e}")).collect();
        println!(
            "n = {:>2}: {} iterations, recovery error {err:.1e}, residuals [{}]",
            surface.n_boundaries(),
            report.iterations,
            history.join(", ")
        );
    }
}
