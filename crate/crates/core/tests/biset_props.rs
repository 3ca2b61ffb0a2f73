use proptest::prelude::*;
use selfsim::biset::{Alphabet, BisetMachine, GeneratorRecursion};
use selfsim::contraction::{levy_search, nucleus, verify_closure, Budget, ContractionStatus, LevyOptions, WitnessKind};
use selfsim::fixtures;
use selfsim::group::{GroupElement, GroupModel, Letter};
use selfsim::torus::{classify, torus_biset, IntMatrix2};

fn element(rank: usize, max: usize) -> impl Strategy<Value = GroupElement> {
    let m = GroupModel::free((0..rank).map(|i| format!("g{i}"))).unwrap();
    prop::collection::vec((0..rank, any::<bool>()), 0..=max)
        .prop_map(move |v| m.reduce(&v.iter().map(|&(i, s)| Letter::new(i, s)).collect::<Vec<_>>()).unwrap())
}

/// Random free machine of degree 2 with short restrictions.
fn machine() -> impl Strategy<Value = BisetMachine> {
    (1..=2usize).prop_flat_map(|rank| {
        prop::collection::vec((any::<bool>(), element(rank, 2), element(rank, 2)), rank).prop_map(move |gens| {
            let model = GroupModel::free((0..rank).map(|i| format!("g{i}"))).unwrap();
            let forward = gens
                .into_iter()
                .enumerate()
                .map(|(g, (swap, r0, r1))| GeneratorRecursion {
                    generator: g,
                    perm: if swap { vec![1, 0] } else { vec![0, 1] },
                    restrictions: vec![r0, r1],
                })
                .collect();
            BisetMachine::from_recursions(model, Alphabet::numbered(2).unwrap(), forward).unwrap()
        })
    })
}

fn word(d: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..d, 0..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cocycle_law(m in machine(), g in element(2, 6), h in element(2, 6), w in word(2, 8)) {
        let g = m.model().reduce(&g.letters().into_iter().filter(|l| l.index() < m.model().rank()).collect::<Vec<_>>()).unwrap();
        let h = m.model().reduce(&h.letters().into_iter().filter(|l| l.index() < m.model().rank()).collect::<Vec<_>>()).unwrap();
        let (hw, hr) = m.act_word(&h, &w).unwrap();
        let (ghw, gr) = m.act_word(&g, &hw).unwrap();
        let (v, r) = m.act_word(&g.mul(&h).unwrap(), &w).unwrap();
        prop_assert_eq!(v, ghw);
        prop_assert_eq!(r, gr.mul(&hr).unwrap());
    }

    #[test]
    fn inverse_consistency(m in machine(), g in element(2, 6), w in word(2, 8)) {
        let g = m.model().reduce(&g.letters().into_iter().filter(|l| l.index() < m.model().rank()).collect::<Vec<_>>()).unwrap();
        let (v, r) = m.act_word(&g, &w).unwrap();
        let (back, ri) = m.act_word(&g.inverse(), &v).unwrap();
        prop_assert_eq!(back, w);
        prop_assert_eq!(ri, r.inverse());
    }

    #[test]
    fn prefix_consistency(g in element(2, 8), w in word(2, 10), cut in 0usize..=10) {
        let m = fixtures::basilica();
        let cut = cut.min(w.len());
        let (v1, r1) = m.act_word(&g, &w[..cut]).unwrap();
        let (v2, r2) = m.act_word(&r1, &w[cut..]).unwrap();
        let (v, r) = m.act_word(&g, &w).unwrap();
        prop_assert_eq!(v, [v1, v2].concat());
        prop_assert_eq!(r, r2);
    }

    #[test]
    fn level_action_is_a_permutation(m in machine(), g in element(2, 6), n in 0usize..=6) {
        let g = m.model().reduce(&g.letters().into_iter().filter(|l| l.index() < m.model().rank()).collect::<Vec<_>>()).unwrap();
        let perm = m.level_action(&g, n, 1 << 20).unwrap();
        let mut seen = vec![false; perm.len()];
        for &y in &perm {
            prop_assert!(!seen[y]);
            seen[y] = true;
        }
        prop_assert_eq!(perm.len(), 1 << n);
    }

    #[test]
    fn soundness_exclusivity(m in machine()) {
        let budget = Budget { max_nucleus_size: 200, max_element_length: 20, max_depth: 20, max_level: 2 };
        let r = nucleus(&m, &budget);
        if r.status == ContractionStatus::Contracting {
            prop_assert!(verify_closure(&m, &r.nucleus, r.level).is_ok());
            prop_assert!(r.nucleus.contains(&m.model().identity()));
            prop_assert!(r.nucleus.iter().all(|g| r.nucleus.contains(&g.inverse())));
            if let Some(w) = levy_search(&m, &LevyOptions::new(3, 3)) {
                prop_assert!(w.kind != WitnessKind::ExactFixed, "contracting machine with fixed witness {:?}", w);
            }
        }
        if let Some(w) = &r.witness {
            prop_assert!(w.replay(&m));
        }
    }

    #[test]
    fn classify_invariant_under_unimodular_conjugation(
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3,
        steps in prop::collection::vec(0usize..4, 1..6),
    ) {
        let m = IntMatrix2::new(a, b, c, d);
        prop_assume!(m.det() >= 2);
        // products of elementary unimodular matrices
        let gens = [
            (IntMatrix2::new(1, 1, 0, 1), IntMatrix2::new(1, -1, 0, 1)),
            (IntMatrix2::new(1, 0, 1, 1), IntMatrix2::new(1, 0, -1, 1)),
            (IntMatrix2::new(0, 1, 1, 0), IntMatrix2::new(0, 1, 1, 0)),
            (IntMatrix2::new(-1, 0, 0, 1), IntMatrix2::new(-1, 0, 0, 1)),
        ];
        let mut p = IntMatrix2::new(1, 0, 0, 1);
        let mut q = p;
        for &s in &steps {
            p = p.mul(&gens[s].0);
            q = gens[s].1.mul(&q);
        }
        prop_assert_eq!(p.mul(&q), IntMatrix2::new(1, 0, 0, 1));
        let conj = p.mul(&m).mul(&q);
        prop_assert_eq!(classify(&m).unwrap(), classify(&conj).unwrap());
    }

    #[test]
    fn torus_biset_agrees_with_coset_arithmetic(
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3,
        v in prop::array::uniform2(-6i64..=6), x in 0usize..9,
    ) {
        let m = IntMatrix2::new(a, b, c, d);
        prop_assume!((2..=9).contains(&m.det()));
        let t = torus_biset(&m).unwrap();
        let x = x % t.reps.len();
        let (y, u) = t.act(v, x);
        // v + r_x = r_y + A·u
        let au = m.apply(u);
        let rx = t.reps[x];
        let ry = t.reps[y];
        prop_assert_eq!([v[0] + rx[0], v[1] + rx[1]], [ry[0] + au[0], ry[1] + au[1]]);
        let (y2, r2) = t.machine.act_letter(&GroupElement::Abelian(v.to_vec()), x).unwrap();
        prop_assert_eq!(y2, y);
        prop_assert_eq!(r2, GroupElement::Abelian(u.to_vec()));
    }
}
