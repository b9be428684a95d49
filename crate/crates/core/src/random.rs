//! Seeded random instances: triangulations glued from hexagon pairs, base
//! metrics and admissible starting factors.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::{BaseMetric, Surface};
use crate::error::{Error, Result};
use crate::triangulation::{EdgeRecord, FaceRecord, IdealTriangulation};

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Glue `n_faces` (even) triangles along a random orientable side pairing.
/// Returns `None` when the result is disconnected.
fn glue(rng: &mut InstanceRng, n_faces: usize) -> Option<IdealTriangulation> {
    let mut slots: Vec<usize> = (0..3 * n_faces).collect();
    slots.shuffle(rng);
    let corner = |f: usize, m: usize| 3 * f + m;

    let mut corners = UnionFind((0..3 * n_faces).collect());
    let mut faces_uf = UnionFind((0..n_faces).collect());
    let mut side_edge = vec![0usize; 3 * n_faces];
    for (e, pair) in slots.chunks(2).enumerate() {
        let (f, a) = (pair[0] / 3, pair[0] % 3);
        let (g, b) = (pair[1] / 3, pair[1] % 3);
        // side m runs from corner m-1 to corner m; orientable gluing reverses it
        corners.union(corner(f, (a + 2) % 3), corner(g, b));
        corners.union(corner(f, a), corner(g, (b + 2) % 3));
        faces_uf.union(f, g);
        side_edge[pair[0]] = e;
        side_edge[pair[1]] = e;
    }
    let root = faces_uf.find(0);
    if (0..n_faces).any(|f| faces_uf.find(f) != root) {
        return None;
    }

    let mut label = vec![usize::MAX; 3 * n_faces];
    let mut n = 0;
    let mut labels = Vec::with_capacity(3 * n_faces);
    for c in 0..3 * n_faces {
        let r = corners.find(c);
        if label[r] == usize::MAX {
            label[r] = n;
            n += 1;
        }
        labels.push(label[r]);
    }

    let edges: Vec<EdgeRecord> = slots
        .chunks(2)
        .map(|pair| {
            let (f, a) = (pair[0] / 3, pair[0] % 3);
            EdgeRecord::new(labels[corner(f, (a + 2) % 3)], labels[corner(f, a)])
        })
        .collect();
    let faces: Vec<FaceRecord> = (0..n_faces)
        .map(|f| {
            FaceRecord::new(
                [0, 1, 2].map(|m| side_edge[3 * f + m]),
                [0, 1, 2].map(|m| labels[corner(f, m)]),
            )
        })
        .collect();
    IdealTriangulation::new(n, edges, faces).ok()
}

/// Random connected ideal triangulation with at most `max_boundaries`
/// boundary components and `2..=max_faces` faces (even count).
pub fn random_triangulation(rng: &mut InstanceRng, max_boundaries: usize, max_faces: usize) -> Result<IdealTriangulation> {
    if max_boundaries == 0 || max_faces < 2 {
        return Err(Error::InvalidParameter(
            "need at least one boundary and two faces".into(),
        ));
    }
    for _ in 0..10_000 {
        let n_faces = 2 * rng.gen_range(1..=max_faces / 2);
        if let Some(t) = glue(rng, n_faces) {
            if t.n_boundaries() <= max_boundaries {
                return Ok(t);
            }
        }
    }
    Err(Error::InvalidParameter(format!(
        "could not generate a triangulation with at most {max_boundaries} boundaries"
    )))
}

/// A random surface with base lengths uniform in `[1, 3]`.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub surface: Surface,
    pub w0: Vec<f64>,
}

/// Uniform sample from the box `[-0.45 m, 1]^n`, where `m` is the smallest
/// `ln cosh(l0/2)`; every such factor is admissible.
pub fn admissible_factor(rng: &mut InstanceRng, surface: &Surface) -> Vec<f64> {
    let m = surface
        .metric()
        .lengths()
        .iter()
        .map(|l| (l / 2.0).cosh().ln())
        .fold(f64::INFINITY, f64::min);
    let lo = -0.45 * m;
    (0..surface.n_boundaries()).map(|_| rng.gen_range(lo..1.0)).collect()
}

pub fn random_instance(rng: &mut InstanceRng, max_boundaries: usize, max_faces: usize) -> Result<RandomInstance> {
    let mesh = random_triangulation(rng, max_boundaries, max_faces)?;
    let lengths = (0..mesh.n_edges()).map(|_| rng.gen_range(1.0..3.0)).collect();
    let surface = Surface::new(mesh, BaseMetric::new(lengths)?)?;
    let w0 = admissible_factor(rng, &surface);
    Ok(RandomInstance { surface, w0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_meshes_are_valid_and_bounded() {
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, 10, 16).unwrap();
            let mesh = inst.surface.mesh();
            assert!(mesh.n_boundaries() <= 10);
            assert_eq!(3 * mesh.n_faces(), 2 * mesh.n_edges());
            assert!(inst.surface.is_admissible(&inst.w0));
        }
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = random_instance(&mut rng_from_seed(99), 6, 12).unwrap();
        let b = random_instance(&mut rng_from_seed(99), 6, 12).unwrap();
        assert_eq!(a.surface, b.surface);
        assert_eq!(a.w0, b.w0);
    }
}
