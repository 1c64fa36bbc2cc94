use std::collections::HashSet;

use proptest::prelude::*;

use sunweave::certificate::{u_min, verify_embedding};
use sunweave::design::{verify_decomposition, Block};
use sunweave::embed::embed;
use sunweave::matching::{konig_color, redistribute_to_profile, BipartiteGraph, MatchingPartition};
use sunweave::notation::{format_design, BlockFile};
use sunweave::sts::{standard_sts, sts_isomorphism};
use sunweave::suns::SunFactory;

fn graph(left: u32, right: u32, edges: &[(u32, u32)]) -> BipartiteGraph {
    let mut g = BipartiteGraph::new(left, right);
    for &(a, b) in edges {
        g.add_edge(a % left, b % right);
    }
    g
}

fn arb_graph() -> impl Strategy<Value = BipartiteGraph> {
    (
        1u32..=20,
        1u32..=20,
        prop::collection::vec((0u32..20, 0u32..20), 0..120),
    )
        .prop_map(|(l, r, e)| graph(l, r, &e))
}

fn assert_partition(g: &BipartiteGraph, p: &MatchingPartition) {
    p.validate(g).unwrap();
    let union: usize = p.sizes().iter().sum();
    assert_eq!(union, g.edge_count());
}

fn permutation(n: u32, keys: &[u64]) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..n).collect();
    idx.sort_by_key(|&i| (keys[i as usize % keys.len()].wrapping_mul(i as u64 + 1), i));
    idx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn konig_uses_max_degree_colours(g in arb_graph()) {
        let p = konig_color(&g);
        prop_assert_eq!(p.len(), g.max_degree());
        assert_partition(&g, &p);
    }

    #[test]
    fn redistribution_hits_balanced_targets(g in arb_graph(), moves in 0usize..40, extra in 0usize..3) {
        let p = konig_color(&g);
        let mut targets = p.sizes();
        targets.resize(targets.len() + extra, 0);
        // moving size from a largest to a smallest part is always feasible
        for _ in 0..moves {
            let (hi, &max) = targets.iter().enumerate().max_by_key(|&(i, &s)| (s, i)).unwrap();
            let (lo, &min) = targets.iter().enumerate().min_by_key(|&(i, &s)| (s, i)).unwrap();
            if max < min + 2 {
                break;
            }
            targets[hi] -= 1;
            targets[lo] += 1;
        }
        let q = redistribute_to_profile(&g, &p, &targets).unwrap();
        prop_assert_eq!(q.sizes(), targets);
        assert_partition(&g, &q);
    }

    #[test]
    fn translation_round_trips(shift in 0u32..41, a in 0u32..41, b in 0u32..41, c in 0u32..41) {
        prop_assume!(a != b && b != c && a != c);
        let t = Block::triangle(a, b, c).unwrap();
        let back = t.translate(shift, 41).unwrap().translate(41 - shift, 41).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn relabelled_systems_stay_isomorphic(n in prop::sample::select(vec![7u32, 9, 13, 15, 19]),
                                          keys in prop::collection::vec(any::<u64>(), 1..8)) {
        let s = standard_sts(n).unwrap();
        let f = permutation(n, &keys);
        let t = s.relabel(&f).unwrap();
        t.validate().unwrap();
        let g = sts_isomorphism(&s, &t).unwrap();
        for tri in &s.triples {
            let image = [g[tri[0] as usize], g[tri[1] as usize], g[tri[2] as usize]];
            prop_assert!(t.position(&image).is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn relabelled_inputs_embed(n in prop::sample::select(vec![7u32, 9, 13, 15, 21, 25, 37, 39]),
                               keys in prop::collection::vec(any::<u64>(), 1..8),
                               seed in any::<u64>()) {
        let s = standard_sts(n).unwrap().relabel(&permutation(n, &keys)).unwrap();
        let cert = embed(&s, &SunFactory::uncached(seed), seed).unwrap();
        prop_assert!(verify_embedding(&cert).is_ok());
        prop_assert_eq!(cert.u, u_min(n).unwrap());
        prop_assert_eq!(&cert.sts, &s.triples);
        let images: HashSet<usize> = cert.map.iter().copied().collect();
        prop_assert_eq!(images.len(), s.triples.len());
    }

    #[test]
    fn notation_round_trips(m in prop::sample::select(vec![9u32, 12, 13, 16, 21, 24])) {
        let d = SunFactory::uncached(1).sun_system(m).unwrap();
        let back = BlockFile::parse(&format_design(&d)).unwrap().into_design().unwrap();
        prop_assert_eq!(&back.blocks, &d.blocks);
        prop_assert!(verify_decomposition(&back).is_ok());
    }
}
