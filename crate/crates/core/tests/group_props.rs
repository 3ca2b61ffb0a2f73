use proptest::prelude::*;
use selfsim::group::{GroupElement, GroupModel, Letter};

fn model() -> GroupModel {
    GroupModel::free(["a", "b"]).unwrap()
}

fn raw_letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..2usize, any::<bool>()).prop_map(|(i, inv)| Letter::new(i, inv)), 0..max)
}

/// Every reduced word of length ≤ n over two generators.
fn ball(m: &GroupModel, n: usize) -> Vec<GroupElement> {
    let letters: Vec<Letter> = (0..2).flat_map(|i| [Letter::new(i, false), Letter::new(i, true)]).collect();
    let mut out = vec![m.identity()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last().is_some_and(|&p| p == l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                out.push(m.reduce(&v).unwrap());
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

#[test]
fn ball_sizes_match_free_group_growth() {
    let m = model();
    // 1 + 4·(3^n − 1)/2
    assert_eq!(ball(&m, 3).len(), 1 + 4 + 12 + 36);
}

#[test]
fn associativity_and_inverses_on_ball_of_radius_three() {
    let m = model();
    let b = ball(&m, 3);
    let e = m.identity();
    for g in &b {
        assert_eq!(m.multiply(g, &m.invert(g).unwrap()).unwrap(), e);
        assert_eq!(m.multiply(&m.invert(g).unwrap(), g).unwrap(), e);
    }
    for g in &b {
        for h in &b {
            let gh = m.multiply(g, h).unwrap();
            for k in &b {
                let left = m.multiply(&gh, k).unwrap();
                let right = m.multiply(g, &m.multiply(h, k).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

proptest! {
    #[test]
    fn reduce_is_idempotent(raw in raw_letters(24)) {
        let m = model();
        let once = m.reduce(&raw).unwrap();
        prop_assert_eq!(m.reduce(&once.letters()).unwrap(), once.clone());
        let w = once.letters();
        prop_assert!(w.windows(2).all(|p| p[0] != p[1].inverse()));
    }

    #[test]
    fn length_is_subadditive(x in raw_letters(16), y in raw_letters(16)) {
        let m = model();
        let (g, h) = (m.reduce(&x).unwrap(), m.reduce(&y).unwrap());
        prop_assert!(m.multiply(&g, &h).unwrap().length() <= g.length() + h.length());
    }

    #[test]
    fn cyclic_reduction_round_trip(raw in raw_letters(20)) {
        let m = model();
        let g = m.reduce(&raw).unwrap();
        let (core, conj) = m.cyclically_reduce(&g).unwrap();
        let back = m.multiply(&conj, &m.multiply(&core, &m.invert(&conj).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(back, g);
        let w = core.letters();
        if w.len() >= 2 {
            prop_assert_ne!(w[0], w[w.len() - 1].inverse());
        }
    }

    #[test]
    fn conjugacy_representative_is_class_invariant(raw in raw_letters(12), c in raw_letters(6)) {
        let m = model();
        let g = m.reduce(&raw).unwrap();
        let t = m.reduce(&c).unwrap();
        let conj = m.multiply(&t, &m.multiply(&g, &m.invert(&t).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(m.conjugacy_representative(&g).unwrap().0, m.conjugacy_representative(&conj).unwrap().0);
    }

    #[test]
    fn format_parse_round_trip(raw in raw_letters(16)) {
        let m = model();
        let g = m.reduce(&raw).unwrap();
        prop_assert_eq!(m.parse(&m.format(&g)).unwrap(), g);
    }

    #[test]
    fn abelian_length_is_l1(v in prop::collection::vec(-50i64..50, 3), w in prop::collection::vec(-50i64..50, 3)) {
        let m = GroupModel::abelian(3).unwrap();
        let (g, h) = (GroupElement::Abelian(v.clone()), GroupElement::Abelian(w));
        prop_assert_eq!(g.length(), v.iter().map(|x| x.unsigned_abs() as usize).sum::<usize>());
        prop_assert_eq!(m.multiply(&g, &h).unwrap(), m.multiply(&h, &g).unwrap());
        prop_assert!(m.multiply(&g, &h).unwrap().length() <= g.length() + h.length());
    }
}
