//! The Jacobian L = dB/dw on a generated surface, its spectrum and a few
//! fractional powers of -L.

use bordered_flow::random::{random_instance, rng_from_seed};
use bordered_flow::{boundary_jacobian, delta_power};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let inst = random_instance(&mut rng_from_seed(seed), 6, 14).unwrap();
    let surface = &inst.surface;
    println!(
        "seed {seed}: n = {}, |F| = {}, chi = {}",
        surface.n_boundaries(),
        surface.mesh().n_faces(),
        surface.mesh().euler_characteristic()
    );

    let l = boundary_jacobian(surface, &inst.w0).unwrap();
    println!("L ={:.5}", l.matrix());
    println!("eigenvalues {:.5?}", l.eigenvalues());
    println!("asymmetry {:.1e}, dominance slack {:.4}", l.asymmetry(), l.dominance_slack());

    for s in [-1.0, 0.5, 2.0] {
        let d = delta_power(&l, s).unwrap();
        let spectrum: Vec<f64> = d.eigenvalues.iter().map(|x| x.powf(s)).collect();
        println!("Delta^{s}: spectrum {spectrum:.5?}, trace {:.6}", d.matrix.trace());
    }
}
