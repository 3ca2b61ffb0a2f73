//! The tile-adjacency graph of a subdivision rule next to the complex of the
//! matching degree-4 torus map.

use selfsim::complex::{build_truncation, delta_estimate, DeltaMode};
use selfsim::fixtures;
use selfsim::subdivision::{tile_graph, Contact};

fn main() {
    let rule = fixtures::quad_2x2();
    let c0 = rule.initial_complex().unwrap();
    let sigma = build_truncation(&fixtures::torus_machine([2, 0, 0, 2]), 4, 10_000).unwrap();
    for contact in [Contact::Vertex, Contact::Edge] {
        let gamma = tile_graph(&rule, &c0, 3, contact, 10_000).unwrap();
        let d = delta_estimate(&gamma, DeltaMode::Sampled { samples: 5000, seed: 0 }).unwrap();
        println!("Γ ({contact:?} contact): levels {:?}, {} edges, sampled δ {}", gamma.level_counts(), gamma.edge_count(), d.delta);
    }
    println!("Σ (2·Id on the torus): levels {:?}", sigma.level_counts());
}
