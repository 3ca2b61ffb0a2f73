use proptest::prelude::*;
use selfsim::complex::{
    build_truncation, delta_estimate, shift_equivariance_violations, ComplexGraph, DeltaMode, EdgeKind, ExportFormat,
};
use selfsim::fixtures;

fn fixtures_with_names() -> Vec<(&'static str, selfsim::BisetMachine)> {
    vec![
        ("odometer", fixtures::odometer()),
        ("basilica", fixtures::basilica()),
        ("torus", fixtures::torus_machine([2, 0, 1, 1])),
        ("obstructed", fixtures::obstructed()),
    ]
}

#[test]
fn vertex_counts_are_geometric_sums() {
    for (name, m) in fixtures_with_names() {
        let d = m.degree();
        for n in 0..=5 {
            let g = build_truncation(&m, n, 100_000).unwrap();
            let expected: usize = (0..=n as u32).map(|k| d.pow(k)).sum();
            assert_eq!(g.vertex_count(), expected, "{name} n={n}");
            let counts: Vec<usize> = (0..=n as u32).map(|k| d.pow(k)).collect();
            assert_eq!(g.level_counts(), counts);
        }
    }
}

#[test]
fn vertical_degrees() {
    for (name, m) in fixtures_with_names() {
        let n = 4;
        let g = build_truncation(&m, n, 100_000).unwrap();
        for u in 0..g.vertex_count() {
            let k = g.level(u);
            assert_eq!(g.parents(u).len(), usize::from(k >= 1), "{name}");
            assert_eq!(g.children(u).len(), if k < n { m.degree() } else { 0 }, "{name}");
        }
    }
}

#[test]
fn edge_kinds_respect_levels() {
    for (_, m) in fixtures_with_names() {
        let g = build_truncation(&m, 4, 100_000).unwrap();
        let mut seen = std::collections::HashSet::new();
        for e in g.edges() {
            assert!(e.u < e.v);
            assert!(seen.insert((e.u, e.v)), "duplicate edge");
            match e.kind {
                EdgeKind::Horizontal => assert_eq!(g.level(e.u), g.level(e.v)),
                EdgeKind::Vertical => assert_eq!(g.level(e.u) + 1, g.level(e.v)),
            }
        }
    }
}

#[test]
fn shift_equivariance_on_fixtures() {
    for (name, m) in fixtures_with_names() {
        let g = build_truncation(&m, 5, 100_000).unwrap();
        let v = shift_equivariance_violations(&m, &g, 5);
        assert!(v.is_empty(), "{name}: {v:?}");
    }
}

#[test]
fn json_round_trip_preserves_graph() {
    let g = build_truncation(&fixtures::basilica(), 4, 1000).unwrap();
    let back = ComplexGraph::from_json(&g.export(ExportFormat::Json)).unwrap();
    assert_eq!(back.vertex_count(), g.vertex_count());
    let key = |g: &ComplexGraph| {
        let mut v: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.kind == EdgeKind::Vertical, e.labels.clone(), e.multiplicity)).collect();
        v.sort();
        v
    };
    assert_eq!(key(&back), key(&g));
    assert!(g.to_dot().starts_with("graph"));
}

#[test]
fn truncations_are_connected() {
    for (name, m) in fixtures_with_names() {
        assert!(build_truncation(&m, 5, 100_000).unwrap().is_connected(), "{name}");
    }
}

#[test]
fn budget_is_enforced() {
    assert!(build_truncation(&fixtures::odometer(), 10, 100).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(a in 0usize..63, b in 0usize..63, c in 0usize..63, which in 0usize..4) {
        let m = &fixtures_with_names()[which].1;
        let g = build_truncation(m, 5, 100_000).unwrap();
        let n = g.vertex_count();
        let (a, b, c) = (a % n, b % n, c % n);
        let (da, db) = (g.distances_from(a), g.distances_from(b));
        prop_assert_eq!(da[b], db[a]);
        prop_assert!(da[c] <= da[b] + db[c]);
        prop_assert_eq!(da[b] == 0, a == b);
    }

    #[test]
    fn sampled_delta_never_exceeds_exhaustive(seed in any::<u64>(), samples in 1usize..500) {
        let g = build_truncation(&fixtures::basilica(), 4, 1000).unwrap();
        let e = delta_estimate(&g, DeltaMode::Exhaustive).unwrap();
        let s = delta_estimate(&g, DeltaMode::Sampled { samples, seed }).unwrap();
        prop_assert!(s.twice_delta <= e.twice_delta);
        prop_assert!(e.exhaustive && !s.exhaustive);
        prop_assert_eq!(s.seed, Some(seed));
    }
}
