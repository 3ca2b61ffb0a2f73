//! Every 2×2 integer matrix with entries in [-3, 3] and determinant 2..=9,
//! nucleus verdict against the exact classification. Takes a couple of
//! minutes in release mode.

use std::collections::BTreeMap;
use std::time::Instant;

use selfsim::contraction::LevyOptions;
use selfsim::torus::sweep;
use selfsim::Budget;

fn main() {
    let t = Instant::now();
    let report = sweep(3, 9, &Budget::default(), &LevyOptions::new(8, 4));
    for row in report.rows.iter().filter(|r| !r.agrees) {
        println!("disagreement: {:?} {:?} {:?}", row.matrix, row.class.kind, row.nucleus_status);
    }
    let mut levels: BTreeMap<Option<usize>, usize> = BTreeMap::new();
    for row in &report.rows {
        *levels.entry(row.nucleus_level).or_default() += 1;
    }
    println!("closure depth histogram: {levels:?}");
    println!("{}/{} agree in {:.1?}", report.agreement, report.total, t.elapsed());
}
