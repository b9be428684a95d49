//! Ideal triangulations of bordered surfaces.
//!
//! A bordered surface is cut into ideal faces (right-angled hexagons once a
//! metric is chosen). Each face has three *sides* lying on ideal edges and
//! three *corners* lying on boundary components. Corner `m` sits between
//! sides `m` and `m + 1 (mod 3)`, so side `m` runs from corner `m - 1` to
//! corner `m` and is opposite corner `m + 1`.
//!
//! Boundary components are 0-based in this API. The JSON mesh format in
//! [`crate::io`] uses 1-based boundary indices.

use crate::error::{Error, Result};

/// Ideal edge joining two (possibly equal) boundary components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRecord {
    pub endpoints: [usize; 2],
}

impl EdgeRecord {
    pub fn new(i: usize, j: usize) -> Self {
        Self { endpoints: [i, j] }
    }

    pub fn is_self_edge(&self) -> bool {
        self.endpoints[0] == self.endpoints[1]
    }
}

/// One ideal face: three side edge indices in cyclic order and the boundary
/// label of each corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceRecord {
    pub sides: [usize; 3],
    pub corners: [usize; 3],
}

impl FaceRecord {
    pub fn new(sides: [usize; 3], corners: [usize; 3]) -> Self {
        Self { sides, corners }
    }

    /// Corners flanking side `m`, as (start, end) in cyclic order.
    pub fn side_corners(&self, m: usize) -> [usize; 2] {
        [self.corners[(m + 2) % 3], self.corners[m]]
    }
}

/// Validated, immutable ideal triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    n_boundaries: usize,
    edges: Vec<EdgeRecord>,
    faces: Vec<FaceRecord>,
    incidence: Vec<Vec<(usize, usize)>>,
}

impl IdealTriangulation {
    /// Validate and build a triangulation.
    ///
    /// Rejected with [`Error::MalformedMesh`] when: `3|F| != 2|E|`, an edge
    /// is not used by exactly two face sides, a side's flanking corners do
    /// not match its edge endpoints, some boundary has no corner, or the mesh
    /// is empty. Indices out of range are rejected the same way.
    pub fn new(n_boundaries: usize, edges: Vec<EdgeRecord>, faces: Vec<FaceRecord>) -> Result<Self> {
        if n_boundaries == 0 {
            return Err(Error::malformed("mesh needs at least one boundary component"));
        }
        if faces.is_empty() {
            return Err(Error::malformed("mesh has no faces (Euler characteristic must be negative)"));
        }
        for (e, edge) in edges.iter().enumerate() {
            for &v in &edge.endpoints {
                if v >= n_boundaries {
                    return Err(Error::malformed(format!(
                        "edge {e} has endpoint {v} outside 0..{n_boundaries}"
                    )));
                }
            }
        }
        for (f, face) in faces.iter().enumerate() {
            for &e in &face.sides {
                if e >= edges.len() {
                    return Err(Error::malformed(format!(
                        "face {f} references edge {e}, but the mesh has {} edges",
                        edges.len()
                    )));
                }
            }
            for &c in &face.corners {
                if c >= n_boundaries {
                    return Err(Error::malformed(format!(
                        "face {f} has corner label {c} outside 0..{n_boundaries}"
                    )));
                }
            }
        }
        if 3 * faces.len() != 2 * edges.len() {
            return Err(Error::malformed(format!(
                "3|F| = {} but 2|E| = {}",
                3 * faces.len(),
                2 * edges.len()
            )));
        }

        let mut uses = vec![0usize; edges.len()];
        for face in &faces {
            for &e in &face.sides {
                uses[e] += 1;
            }
        }
        if let Some((e, &k)) = uses.iter().enumerate().find(|(_, &k)| k != 2) {
            return Err(Error::malformed(format!(
                "edge {e} appears in {k} face sides (expected 2)"
            )));
        }

        for (f, face) in faces.iter().enumerate() {
            for m in 0..3 {
                let mut flank = face.side_corners(m);
                let mut ends = edges[face.sides[m]].endpoints;
                flank.sort_unstable();
                ends.sort_unstable();
                if flank != ends {
                    return Err(Error::malformed(format!(
                        "face {f} side {m} (edge {}) is flanked by corners {:?} but the edge joins {:?}",
                        face.sides[m],
                        face.side_corners(m),
                        edges[face.sides[m]].endpoints
                    )));
                }
            }
        }

        let mut incidence = vec![Vec::new(); n_boundaries];
        for (f, face) in faces.iter().enumerate() {
            for (m, &c) in face.corners.iter().enumerate() {
                incidence[c].push((f, m));
            }
        }
        if let Some(i) = incidence.iter().position(Vec::is_empty) {
            return Err(Error::malformed(format!("boundary {i} touches no face corner")));
        }

        Ok(Self {
            n_boundaries,
            edges,
            faces,
            incidence,
        })
    }

    /// Three-holed sphere: edges (0,1), (1,2), (2,0) and two congruent faces.
    pub fn pair_of_pants() -> Self {
        let edges = vec![EdgeRecord::new(0, 1), EdgeRecord::new(1, 2), EdgeRecord::new(2, 0)];
        let face = FaceRecord::new([0, 1, 2], [1, 2, 0]);
        Self::new(3, edges, vec![face, face]).expect("pair of pants is valid")
    }

    /// One-holed torus: three self-edges on the single boundary, two faces.
    pub fn one_holed_torus() -> Self {
        let edges = vec![EdgeRecord::new(0, 0); 3];
        let face = FaceRecord::new([0, 1, 2], [0, 0, 0]);
        Self::new(1, edges, vec![face, face]).expect("one-holed torus is valid")
    }

    pub fn n_boundaries(&self) -> usize {
        self.n_boundaries
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn faces(&self) -> &[FaceRecord] {
        &self.faces
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Euler characteristic of the bordered surface, `|F| - |E|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces.len() as i64 - self.edges.len() as i64
    }

    /// Every `(face, corner slot)` labelled `i`, ascending by face then slot.
    pub fn incident_corners(&self, i: usize) -> Result<&[(usize, usize)]> {
        self.incidence
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::InvalidBoundaryIndex {
                index: i,
                n: self.n_boundaries,
            })
    }
}
