use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treehelly::bits::mask_vertices;
use treehelly::constructions::{flower, flower_family, FlowerSpec};
use treehelly::counting::{
    canonical_family, decode_map, encode_map, encoding_frame, extract_distinguishing, highly_extendable_subtrees,
    is_distinguishing, mon, pseudo_pierces,
};
use treehelly::piercing::{random_subtree, random_tree};
use treehelly::search::{is_isomorphic, is_monomorphism};
use treehelly::{neighborhood, tree_metrics, two_core, SimpleGraph, Tree};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            SimpleGraph::from_edges(n, &edges).unwrap()
        })
    })
}

fn bfs_far(t: &Tree, from: usize) -> (usize, usize) {
    let d = t.distances_from(from);
    (0..t.n()).map(|v| (d[v], v)).max().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_core_is_idempotent(g in graph_strategy(7)) {
        let (core, survivors) = two_core(&g);
        prop_assert_eq!(core.n(), survivors.len());
        prop_assert!((0..core.n()).all(|v| core.degree(v) >= 2));
        prop_assert_eq!(core.clone(), g.induced(&survivors));
        let (again, kept) = two_core(&core);
        prop_assert_eq!(again, core.clone());
        prop_assert_eq!(kept, (0..core.n()).collect::<Vec<_>>());
    }

    #[test]
    fn neighborhood_is_the_outer_boundary(seed: u64, n in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        let s = random_subtree(&t, &mut rng);
        let nb = neighborhood(&t, &s);
        for v in 0..t.n() {
            let touches = s.vertices().iter().any(|&u| t.adjacent(u, v));
            prop_assert_eq!(nb.contains(&v), !s.contains(v) && touches);
        }
    }

    #[test]
    fn metrics_match_double_sweep(seed: u64, n in 1usize..15) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        let m = tree_metrics(&t);
        let (_, a) = bfs_far(&t, 0);
        let (d, _) = bfs_far(&t, a);
        prop_assert_eq!(m.diameter, d);
        prop_assert_eq!(m.longest_path.len(), d + 1);
        prop_assert!(m.longest_path.windows(2).all(|w| t.adjacent(w[0], w[1])));
        let leaves: Vec<usize> = (0..t.n()).filter(|&v| t.degree(v) <= 1).collect();
        prop_assert_eq!(m.leaves, leaves);
    }

    #[test]
    fn every_flower_copy_is_the_pattern(seed: u64, n in 2usize..8, q in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        for spec in flower_family(&t, 2, q) {
            let f = flower(&spec);
            for copy in &f.copies {
                prop_assert!(is_monomorphism(&t, &f.graph, copy));
                let mut image = copy.clone();
                image.sort_unstable();
                prop_assert!(is_isomorphic(&f.graph.induced(&image), &t));
            }
        }
    }

    #[test]
    fn extracted_families_are_distinguishing(seed: u64, g in graph_strategy(6)) {
        let h = SimpleGraph::path(3);
        let fam = extract_distinguishing(&h, &g, seed);
        prop_assert!(is_distinguishing(&fam));
        prop_assert!(fam.partition_is_witness());
        prop_assert!(fam.len() as u64 * 27 >= mon(&h, &g));
        let half: Vec<usize> = (0..fam.len()).step_by(2).collect();
        prop_assert!(is_distinguishing(&fam.subset(&half)));
    }
}

fn p5_family(m: usize) -> treehelly::counting::MonomorphismFamily {
    let spec = FlowerSpec::new(SimpleGraph::path(5), vec![2, 3], m).unwrap();
    canonical_family(&spec).1
}

#[test]
fn highly_extendable_systems_shrink_with_c() {
    let fam = p5_family(4);
    for phi in fam.members().iter().step_by(3) {
        let mut prev: Option<Vec<u64>> = None;
        for c in 1..=6 {
            let masks = highly_extendable_subtrees(phi, &fam, c).unwrap().member_masks();
            if let Some(p) = &prev {
                assert!(masks.iter().all(|m| p.contains(m)), "c={c}");
            }
            prev = Some(masks);
        }
    }
}

#[test]
fn encoding_round_trips() {
    let fam = p5_family(3);
    let host_edges = fam.host().edges();
    for (i, phi) in fam.members().iter().enumerate() {
        let e = [host_edges[i % host_edges.len()]];
        let u = [phi.get(0)];
        let frame = encoding_frame(&fam, &e, &u);
        let tuple = encode_map(&frame, phi);
        assert_eq!(decode_map(&frame, &tuple, 5), phi.map());
    }
}

#[test]
fn piercing_implies_pseudo_piercing() {
    let fam = p5_family(4);
    let t = Tree::path(5);
    for phi in fam.members().iter().step_by(2) {
        for wmask in 1u64..1 << 5 {
            let w = mask_vertices(wmask);
            for sub in treehelly::enumerate_subtrees(&t, None) {
                if sub.intersects_mask(wmask) {
                    assert!(pseudo_pierces(&w, &sub, phi, &fam), "w={w:?} sub={:?}", sub.vertices());
                }
            }
        }
    }
}
