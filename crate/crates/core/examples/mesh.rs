//! Refining square subdivision rules on the pillowcase and searching for the
//! first level where the mesh conditions hold.

use selfsim::fixtures;
use selfsim::subdivision::{mesh_search, refine_levels};

fn main() {
    for (name, rule) in [("2x2 grid", fixtures::quad_2x2()), ("1x2 strip", fixtures::quad_1x2()), ("delayed", fixtures::delayed())] {
        let c0 = rule.initial_complex().unwrap();
        let sizes: Vec<String> = refine_levels(&rule, &c0, 3)
            .unwrap()
            .iter()
            .map(|c| format!("{}/{}/{}", c.vertices, c.edges.len(), c.faces.len()))
            .collect();
        println!("{name}: V/E/F by level {}", sizes.join("  "));

        let s = mesh_search(&rule, &c0, 5).unwrap();
        match s.level {
            Some(n) => println!("  mesh conditions hold at n = {n}"),
            None => {
                let last = s.reports.last().unwrap();
                println!(
                    "  no level up to 5; condition (i) fails on level-0 edges {:?}, (ii) has {} offences",
                    last.condition_i.offending_edges,
                    last.condition_ii.offending.len()
                );
            }
        }
    }
}
