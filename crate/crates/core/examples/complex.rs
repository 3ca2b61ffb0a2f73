//! Truncations of the self-similarity complex, distances, and the four-point
//! hyperbolicity constant.

use selfsim::complex::{build_truncation, delta_estimate, graph_distance, DeltaMode, ExportFormat};
use selfsim::fixtures;

fn main() {
    let m = fixtures::odometer();
    let g = build_truncation(&m, 3, 1000).unwrap();
    println!("odometer Σ_3: {} vertices, {} edges, levels {:?}", g.vertex_count(), g.edge_count(), g.level_counts());
    let (a, b) = (g.find("000").unwrap(), g.find("111").unwrap());
    println!("dist(000, 111) = {}", graph_distance(&g, a, b));

    for (name, m) in [("odometer", fixtures::odometer()), ("basilica", fixtures::basilica())] {
        for n in [3, 5] {
            let g = build_truncation(&m, n, 10_000).unwrap();
            let e = delta_estimate(&g, DeltaMode::Exhaustive).unwrap();
            let s = delta_estimate(&g, DeltaMode::Sampled { samples: 2000, seed: 1 }).unwrap();
            println!("{name} n={n}: δ = {} (sampled {})", e.delta, s.delta);
        }
    }

    // small graphs export to Graphviz
    print!("{}", build_truncation(&fixtures::basilica(), 2, 100).unwrap().export(ExportFormat::Dot));
}
