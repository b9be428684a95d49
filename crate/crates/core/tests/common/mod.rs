#![allow(dead_code)]

use bordered_flow::random::{admissible_factor, random_instance, rng_from_seed, InstanceRng};
use bordered_flow::{BaseMetric, IdealTriangulation, Surface};
use rand::Rng;

pub fn pants_uniform(l: f64) -> Surface {
    Surface::new(IdealTriangulation::pair_of_pants(), BaseMetric::uniform(3, l).unwrap()).unwrap()
}

pub fn pants_standard() -> Surface {
    pants_uniform(2.0 * 2f64.acosh())
}

pub fn torus(rng: &mut InstanceRng) -> Surface {
    let l = (0..3).map(|_| rng.gen_range(1.0..3.0)).collect();
    Surface::new(IdealTriangulation::one_holed_torus(), BaseMetric::new(l).unwrap()).unwrap()
}

pub fn pants_random(rng: &mut InstanceRng) -> Surface {
    let l = (0..3).map(|_| rng.gen_range(1.0..3.0)).collect();
    Surface::new(IdealTriangulation::pair_of_pants(), BaseMetric::new(l).unwrap()).unwrap()
}

/// Cycles through pair of pants, one-holed torus and generated meshes with
/// at most 10 boundaries, each with a random admissible factor.
pub fn mixed_instances(seed: u64, count: usize) -> Vec<(Surface, Vec<f64>)> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|k| {
            let surface = match k % 3 {
                0 => pants_random(&mut rng),
                1 => torus(&mut rng),
                _ => random_instance(&mut rng, 10, 16).unwrap().surface,
            };
            let w = admissible_factor(&mut rng, &surface);
            (surface, w)
        })
        .collect()
}

/// Generated meshes only.
pub fn generated_instances(seed: u64, count: usize, max_boundaries: usize) -> Vec<(Surface, Vec<f64>)> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let inst = random_instance(&mut rng, max_boundaries, 2 * max_boundaries + 2).unwrap();
            (inst.surface, inst.w0)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Central difference Jacobian of `f` at `x`; `out[i][j] = ∂f_j/∂x_i`.
pub fn central_jacobian<F>(x: &[f64], h: f64, mut f: F) -> Vec<Vec<f64>>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    (0..x.len())
        .map(|i| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect()
}

pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!("[{}] criterion {id}: {name} ({detail})", if pass { "PASS" } else { "FAIL" });
}
