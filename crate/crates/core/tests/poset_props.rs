#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use eqtransfer::poset::{
    is_acyclic, transitive_closure, validate_order, BinaryRelation, Multiset, OrderError, Subset,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn order_strategy(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, any::<u64>(), 0.0..1.0f64).prop_map(|(n, seed, density)| {
        random_order(&mut ChaCha8Rng::seed_from_u64(seed), n, density)
    })
}

fn mask(n: usize, bits: u32) -> u32 {
    bits & ((1u32 << n) - 1)
}

fn set(n: usize, bits: u32) -> Subset {
    Subset::from_bits(n, u64::from(bits))
}

proptest! {
    #[test]
    fn lift_procedures_match_definition(m in order_strategy(8), a in any::<u32>(), b in any::<u32>()) {
        let n = m.len();
        let (a, b) = (mask(n, a), mask(n, b));
        let p = poset_of(&m);
        let expected = lift_by_definition(&m, a, b);
        let (sa, sb) = (set(n, a), set(n, b));
        prop_assert_eq!(p.lift_less_witness(&sa, &sb), expected);
        prop_assert_eq!(p.lift_less(&sa, &sb), expected);
        prop_assert_eq!(p.lift_less_poly(&sa, &sb), expected);
    }

    #[test]
    fn lift_is_a_strict_order(m in order_strategy(8), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let n = m.len();
        let p = poset_of(&m);
        let (a, b, c) = (set(n, mask(n, a)), set(n, mask(n, b)), set(n, mask(n, c)));
        prop_assert!(!p.lift_less(&a, &a));
        if p.lift_less(&a, &b) && p.lift_less(&b, &c) {
            prop_assert!(p.lift_less(&a, &c));
        }
        prop_assert!(!(p.lift_less(&a, &b) && p.lift_less(&b, &a)));
    }

    #[test]
    fn lift_extends_order_on_singletons(m in order_strategy(8), x in 0usize..8, y in 0usize..8) {
        let n = m.len();
        let (x, y) = (x % n, y % n);
        let p = poset_of(&m);
        prop_assert_eq!(p.lift_less(&Subset::singleton(n, x), &Subset::singleton(n, y)), m[x][y]);
    }

    #[test]
    fn proper_subsets_are_preferred(m in order_strategy(8), a in any::<u32>(), b in any::<u32>()) {
        let n = m.len();
        let big = mask(n, a | b);
        let small = mask(n, a & b);
        prop_assume!(big != small);
        prop_assert!(poset_of(&m).lift_less(&set(n, big), &set(n, small)));
    }

    #[test]
    fn multiset_lift_on_indicators(m in order_strategy(8), a in any::<u32>(), b in any::<u32>()) {
        let n = m.len();
        let p = poset_of(&m);
        let (sa, sb) = (set(n, mask(n, a)), set(n, mask(n, b)));
        prop_assert_eq!(
            p.multiset_lift_less(&Multiset::indicator(&sa), &Multiset::indicator(&sb)),
            p.lift_less(&sa, &sb)
        );
    }

    #[test]
    fn multiset_lift_depends_on_count_comparison(m in order_strategy(6), f in prop::collection::vec(0u64..4, 6), g in prop::collection::vec(0u64..4, 6)) {
        let n = m.len();
        let (f, g) = (f[..n].to_vec(), g[..n].to_vec());
        let down = (0..n).filter(|&x| g[x] < f[x]).fold(0u32, |s, x| s | 1 << x);
        let up = (0..n).filter(|&x| f[x] < g[x]).fold(0u32, |s, x| s | 1 << x);
        let p = poset_of(&m);
        prop_assert_eq!(p.multiset_lift_less(&Multiset::new(f), &Multiset::new(g)), lift_by_definition(&m, down, up));
    }

    #[test]
    fn closure_matches_fixpoint(n in 1usize..7, seed in any::<u64>(), density in 0.0..0.6f64) {
        // random DAG, deliberately not closed
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = {
            let closed = random_order(&mut rng, n, density);
            let mut cover = closed.clone();
            for x in 0..n {
                for y in 0..n {
                    if closed[x][y] && (0..n).any(|z| closed[x][z] && closed[z][y]) {
                        cover[x][y] = false;
                    }
                }
            }
            cover
        };
        let r = relation_of(&dag);
        prop_assert!(is_acyclic(&r));
        let closed = transitive_closure(&r).unwrap();
        prop_assert_eq!(matrix_of(&closed.relation()), fixpoint_closure(&dag));
    }

    #[test]
    fn cycles_are_reported_with_a_witness(n in 2usize..7, pairs in prop::collection::vec((0usize..7, 0usize..7), 0..20)) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(x, y)| (x % n, y % n)).collect();
        let r = BinaryRelation::from_pairs(n, pairs.iter().copied()).unwrap();
        let closure = fixpoint_closure(&matrix_of(&r));
        let cyclic = (0..n).any(|x| closure[x][x]);
        prop_assert_eq!(is_acyclic(&r), !cyclic);
        match transitive_closure(&r) {
            Ok(p) => prop_assert_eq!(matrix_of(&p.relation()), closure),
            Err(OrderError::CyclicRelation(c)) => {
                prop_assert!(cyclic && !c.is_empty());
                for i in 0..c.len() {
                    prop_assert!(r.contains(c[i], c[(i + 1) % c.len()]));
                }
            }
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
    }

    #[test]
    fn validate_order_accepts_exactly_strict_orders(n in 1usize..6, pairs in prop::collection::vec((0usize..6, 0usize..6), 0..15)) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(x, y)| (x % n, y % n)).collect();
        let r = BinaryRelation::from_pairs(n, pairs.iter().copied()).unwrap();
        let m = matrix_of(&r);
        let strict = (0..n).all(|x| !m[x][x]) && warshall(&m) == m;
        prop_assert_eq!(validate_order(&r).is_ok(), strict);
    }

    #[test]
    fn linear_extension_is_compatible(m in order_strategy(10)) {
        let n = m.len();
        let ext = poset_of(&m).linear_extension();
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in ext.iter().enumerate() {
            prop_assert_eq!(pos[x], usize::MAX);
            pos[x] = i;
        }
        for x in 0..n {
            for y in 0..n {
                if m[x][y] {
                    prop_assert!(pos[x] < pos[y]);
                }
            }
        }
    }

    #[test]
    fn upper_sets_and_extremes(m in order_strategy(8), bits in any::<u32>()) {
        let n = m.len();
        let p = poset_of(&m);
        for x in 0..n {
            let up: Vec<usize> = p.upper_set(x).unwrap().iter().collect();
            prop_assert_eq!(up, (0..n).filter(|&y| m[x][y]).collect::<Vec<_>>());
        }
        let s = set(n, mask(n, bits));
        prop_assume!(!s.is_empty());
        let maxima: Vec<usize> = p.maximal_elements(&s).unwrap().iter().collect();
        let expected: Vec<usize> = s.iter().filter(|&x| !s.iter().any(|y| m[x][y])).collect();
        prop_assert_eq!(maxima, expected);
    }

    #[test]
    fn subset_algebra(n in 1usize..130, a in prop::collection::vec(any::<bool>(), 130), b in prop::collection::vec(any::<bool>(), 130)) {
        let sa = Subset::from_indices(n, (0..n).filter(|&i| a[i]));
        let sb = Subset::from_indices(n, (0..n).filter(|&i| b[i]));
        let d = sa.symmetric_difference(&sb);
        for i in 0..n {
            prop_assert_eq!(d.contains(i), a[i] != b[i]);
            prop_assert_eq!(sa.union(&sb).contains(i), a[i] || b[i]);
            prop_assert_eq!(sa.complement().contains(i), !a[i]);
        }
        prop_assert_eq!(sa.difference(&sb).union(&sb.difference(&sa)), d);
        prop_assert_eq!(sa.intersection(&sb).is_subset_of(&sa), true);
        prop_assert_eq!(sa.len(), (0..n).filter(|&i| a[i]).count());
    }
}
