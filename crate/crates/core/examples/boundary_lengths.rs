//! Deform the base metric by a conformal factor and read off the geodesic
//! boundary lengths.

use bordered_flow::{BaseMetric, IdealTriangulation, Surface};

fn main() {
    let surface = Surface::new(IdealTriangulation::pair_of_pants(), BaseMetric::uniform(3, 2.0 * 2f64.acosh()).unwrap()).unwrap();

    for w in [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [-0.3, -0.3, 0.2], [15.0, 0.0, 0.0]] {
        let (edge, margin) = surface.min_margin(&w).unwrap();
        let l = surface.deform(&w).unwrap();
        let b = surface.boundary_lengths(&w).unwrap();
        println!("w = {w:?}");
        println!("  edge lengths {l:.6?}, tightest edge {edge} margin {margin:.4}");
        println!("  boundary lengths {:.6?}", b.as_slice());
    }

    // Just past the admissibility threshold -ln 2 on edge (1, 2).
    match surface.boundary_lengths(&[-0.35, -0.35, 0.0]) {
        Ok(b) => println!("unexpected: {b:?}"),
        Err(e) => println!("w = [-0.35, -0.35, 0]: {e}"),
    }

    let torus = Surface::new(IdealTriangulation::one_holed_torus(), BaseMetric::uniform(3, 1.3).unwrap()).unwrap();
    println!("one-holed torus, l0 = 1.3: B = {:.12}", torus.boundary_lengths(&[0.0]).unwrap().as_slice()[0]);
}
