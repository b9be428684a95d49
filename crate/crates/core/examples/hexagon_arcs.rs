//! Right-angled hexagons: arcs from alternating sides, and how they react to
//! each side.

use bordered_flow::{arc_side_jacobian, opposite_arcs, HexagonSides};

fn main() {
    let l = 2f64.acosh();
    let eq = opposite_arcs(&HexagonSides::new(l, l, l).unwrap()).unwrap();
    println!("cosh l = 2: theta = {:.15} (l = {l:.15})", eq.theta_i);

    for sides in [(5.0, 5.0, 5.0), (0.3, 1.0, 2.0), (1.3, 40.0, 40.0)] {
        let s = HexagonSides::new(sides.0, sides.1, sides.2).unwrap();
        let a = opposite_arcs(&s).unwrap();
        println!("sides {sides:?} -> arcs ({:.6e}, {:.6e}, {:.6e})", a.theta_i, a.theta_j, a.theta_k);
    }

    let j = arc_side_jacobian(&HexagonSides::new(0.8, 1.5, 2.2).unwrap()).unwrap();
    println!("d(arcs)/d(sides) at (0.8, 1.5, 2.2):{j:.6}");
}
