//! Load a mesh file and print its combinatorics.
//!
//!     cargo run --example validate_mesh -- data/torus.json

use bordered_flow::io::load_mesh;
use std::path::PathBuf;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/pants.json")));
    match load_mesh(&path) {
        Ok(mesh) => {
            println!("{}: n = {}, |E| = {}, |F| = {}, chi = {}", path.display(), mesh.n_boundaries(), mesh.n_edges(), mesh.n_faces(), mesh.euler_characteristic());
            for i in 0..mesh.n_boundaries() {
                let corners = mesh.incident_corners(i).unwrap();
                println!("  boundary {}: {} corners {:?}", i + 1, corners.len(), corners);
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            std::process::exit(1);
        }
    }
}
