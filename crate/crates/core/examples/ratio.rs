//! Estimating the contraction ratio ‖g|_{x₀ⁿ}‖ / ‖g‖ over long elements.

use selfsim::contraction::{contraction_ratio_estimate, RatioOptions};
use selfsim::fixtures;

fn main() {
    let opts = RatioOptions::default();
    for (name, m) in [("odometer", fixtures::odometer()), ("basilica", fixtures::basilica()), ("torus 2·Id", fixtures::torus_machine([2, 0, 0, 2]))] {
        println!("{name}");
        for n in 1..=3 {
            let e = contraction_ratio_estimate(&m, n, 12, &opts);
            let exact = e.exact.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
            println!(
                "  n={n}  max ratio {:<6} estimate {:.4}  exact {exact:<5} in domain {}/{} ({:?})",
                e.max_ratio.to_string(),
                e.estimate,
                e.in_domain,
                e.examined,
                e.sampling
            );
        }
    }
}
