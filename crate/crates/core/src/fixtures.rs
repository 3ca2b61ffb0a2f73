//! Small machines and subdivision rules used throughout the tests and
//! examples. The same objects ship as JSON under `fixtures/`.

use crate::biset::{BisetMachine, MachineSpec};
use crate::subdivision::{RuleSpec, SubdivisionRule};
use crate::torus::{torus_biset, IntMatrix2};

fn machine(json: &str) -> BisetMachine {
    BisetMachine::validate(&MachineSpec::from_json(json).expect("fixture parses")).expect("fixture validates")
}

/// Binary adding machine: `a = σ(1, a)`.
pub const ODOMETER_JSON: &str = include_str!("../fixtures/odometer.json");

/// Basilica: `a = σ(1, b)`, `b = (a, 1)`.
pub const BASILICA_JSON: &str = include_str!("../fixtures/basilica.json");

/// `g = (g, 1)` with trivial permutation: `g · 0 = 0 · g`.
pub const OBSTRUCTED_JSON: &str = include_str!("../fixtures/obstructed.json");

pub fn odometer() -> BisetMachine {
    machine(ODOMETER_JSON)
}

pub fn basilica() -> BisetMachine {
    machine(BASILICA_JSON)
}

pub fn obstructed() -> BisetMachine {
    machine(OBSTRUCTED_JSON)
}

/// The Z² biset of the torus endomorphism `[[a, b], [c, d]]`.
pub fn torus_machine(entries: [i64; 4]) -> BisetMachine {
    let m = IntMatrix2::new(entries[0], entries[1], entries[2], entries[3]);
    torus_biset(&m).expect("determinant at least 2").machine
}

// Square tiles below use corners 0 (bottom left), 1, 2, 3 counter-clockwise.
// Horizontal edges point right and vertical edges point up, so the sides
// have orientations [+1, +1, -1, -1]. The pillowcase glues the front tile
// to the back tile seen in a mirror: bottom to bottom, top to top, and left
// to right.

/// Square tile with one edge type; every tile splits into a 2×2 grid. Grid
/// vertices are numbered row by row from the bottom left.
pub const QUAD_2X2_JSON: &str = include_str!("../fixtures/quad_2x2.json");

/// Square tile with horizontal sides `H` (split in two) and vertical sides
/// `V` (never split); each tile splits into a 1×2 strip.
pub const QUAD_1X2_JSON: &str = include_str!("../fixtures/quad_1x2.json");

/// Edges of type `A` become a single `B` edge; `B` splits into two `A`
/// edges. Tiles alternate between an unsubdivided `QA` and a 2×2 grid.
pub const DELAYED_JSON: &str = include_str!("../fixtures/delayed.json");

fn rule(json: &str) -> SubdivisionRule {
    SubdivisionRule::validate(&RuleSpec::from_json(json).expect("fixture parses")).expect("fixture validates")
}

pub fn quad_2x2() -> SubdivisionRule {
    rule(QUAD_2X2_JSON)
}

pub fn quad_1x2() -> SubdivisionRule {
    rule(QUAD_1X2_JSON)
}

pub fn delayed() -> SubdivisionRule {
    rule(DELAYED_JSON)
}
