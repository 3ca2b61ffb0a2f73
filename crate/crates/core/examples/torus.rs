//! Classifying integer matrices as torus endomorphisms and checking the
//! answer against the nucleus of their biset.

use selfsim::contraction::{levy_search, nucleus, LevyOptions};
use selfsim::torus::{classify, torus_biset, unit_eigen_witness, IntMatrix2};
use selfsim::Budget;

fn main() {
    for text in ["2,0,0,2", "2,1,-1,2", "3,1,1,1", "2,0,1,1", "0,-2,1,0"] {
        let a = IntMatrix2::parse(text).unwrap();
        let class = classify(&a).unwrap();
        let tb = torus_biset(&a).unwrap();
        let r = nucleus(&tb.machine, &Budget::default());
        print!("[{text}] τ={} δ={} {:?}; nucleus {:?}", class.trace, class.det, class.kind, r.status);
        if let Some(v) = unit_eigen_witness(&a).unwrap() {
            let w = levy_search(&tb.machine, &LevyOptions::new(8, 4)).expect("unit eigenvalue has a witness");
            print!("; eigenvector {v:?}, witness {}", w.describe(&tb.machine));
        }
        println!();
    }
}
