//! Nucleus closure on three machines with different outcomes.

use selfsim::contraction::{nucleus, verify_closure};
use selfsim::{fixtures, Budget, ContractionStatus};

fn main() {
    let budget = Budget::default();
    for (name, m) in [("odometer", fixtures::odometer()), ("basilica", fixtures::basilica()), ("obstructed", fixtures::obstructed())] {
        let r = nucleus(&m, &budget);
        print!("{name:<11} {:?}", r.status);
        match r.status {
            ContractionStatus::Contracting => {
                verify_closure(&m, &r.nucleus, r.level).expect("closed");
                let core: Vec<String> = r.recurrent.iter().map(|g| m.model().format(g)).collect();
                println!(" at depth {}, {} elements, recurrent core {core:?}", r.level, r.nucleus.len());
            }
            ContractionStatus::ObstructionFound => {
                println!(" witness {}", r.witness.as_ref().unwrap().describe(&m));
            }
            _ => println!(" (inconclusive, {} iterations)", r.stats.iterations),
        }
    }

    // a tight budget turns a contracting machine into an inconclusive run
    let tight = Budget { max_nucleus_size: 3, max_level: 1, ..Budget::default() };
    println!("basilica with size budget 3: {:?}", nucleus(&fixtures::basilica(), &tight).status);
}
