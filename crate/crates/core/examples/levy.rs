//! Searching for elements that fix a word and restrict back to themselves,
//! up to conjugacy.

use selfsim::contraction::{levy_candidates, levy_search, restriction_cycle, LevyOptions};
use selfsim::fixtures;

fn main() {
    let opts = LevyOptions::new(4, 4);

    let m = fixtures::obstructed();
    let w = levy_search(&m, &opts).expect("obstructed machine has a witness");
    println!("obstructed: {} replays={}", w.describe(&m), w.replay(&m));

    let m = fixtures::torus_machine([2, 0, 1, 1]);
    let w = levy_search(&m, &opts).expect("eigenvalue one");
    println!("[[2,0],[1,1]]: {}", w.describe(&m));

    let m = fixtures::basilica();
    println!("basilica: {} candidates, witness {:?}", levy_candidates(&m, 4).len(), levy_search(&m, &opts).map(|w| w.describe(&m)));

    // following 0-restrictions of a² in the basilica shrinks it to the identity
    let g = m.model().parse("a a").unwrap();
    let c = restriction_cycle(&m, &g, 16);
    let orbit: Vec<String> = c.orbit.iter().map(|h| m.model().format(h)).collect();
    println!("restriction orbit of a²: {orbit:?} → {:?}", c.outcome);
}
