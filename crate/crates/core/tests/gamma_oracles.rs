use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sizeable_core::gamma::*;

/// Shortest cycle by BFS from every root: a non-tree edge `xy` met during the
/// search from `r` closes a closed walk of length `d(x) + d(y) + 1`, and the
/// minimum over all roots is attained by an embedded cycle.
fn girth_oracle(g: &ModGraph) -> Option<usize> {
    let adj = g.adjacency();
    let mut best = None::<usize>;
    for r in g.vertices() {
        let mut dist = BTreeMap::from([(r, 0usize)]);
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if parent.get(&x) == Some(&y) {
                    continue;
                }
                match dist.get(&y) {
                    Some(&dy) => {
                        let len = dist[&x] + dy + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                    None => {
                        dist.insert(y, dist[&x] + 1);
                        parent.insert(y, x);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    best
}

#[test]
fn gamma_shape() {
    let g = build_gamma();
    assert_eq!(g.vertex_count(), 36);
    assert_eq!(g.edge_count(), 72);
    assert_eq!(g.regular_degree(), Some(4));
    assert!(g.is_bipartite_ab());
    assert!(g.is_connected());
    assert_eq!(girth(&g), Some(6));
    assert_eq!(girth_oracle(&g), Some(6));
}

#[test]
fn girth_matches_bfs_oracle_on_random_subgraphs() {
    let g = build_gamma();
    let edges: Vec<Edge> = g.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6172);
    for case in 0..50 {
        // Keep rates from sparse (mostly forests) to nearly all of Γ.
        let keep = 0.3 + 0.7 * case as f64 / 49.0;
        let sub = ModGraph::new(g.vertices(), edges.iter().copied().filter(|_| rng.gen_bool(keep))).unwrap();
        assert_eq!(girth(&sub), girth_oracle(&sub), "case {case}");
        if let Some(c) = shortest_cycle(&sub) {
            assert!(c.verify(|x, y| sub.has_edge(*x, *y)), "case {case}");
        }
    }
}

#[test]
fn girth_oracle_on_small_cycles() {
    let v = |s: &str| s.parse::<GammaVertex>().unwrap();
    let square = ModGraph::new(
        ["A+,0", "B+,0", "A+,1", "B+,1"].map(v),
        [("A+,0", "B+,0"), ("B+,0", "A+,1"), ("A+,1", "B+,1"), ("B+,1", "A+,0")].map(|(x, y)| (v(x), v(y))),
    )
    .unwrap();
    assert_eq!(girth(&square), Some(4));
    assert_eq!(girth_oracle(&square), Some(4));
    let path = square.without_edge(v("B+,1"), v("A+,0"));
    assert_eq!(girth(&path), None);
    assert_eq!(girth_oracle(&path), None);
}

#[test]
fn special_subgraphs_are_18_cycles() {
    let g = build_gamma();
    for s in Sign::BOTH {
        for t in Sign::BOTH {
            let cert = special_cycle(&g, s, t).unwrap();
            assert_eq!(cert.len(), 18);
            assert!(cert.verify(|x, y| g.has_edge(*x, *y)));
            let sub = g.special_subgraph(s, t);
            assert_eq!(sub.edge_count(), 18);
            assert_eq!(girth_oracle(&sub), Some(18));
        }
    }
}

#[test]
fn printed_rule_variant_fails_girth() {
    let g = build_gamma_with(&EdgeRules::plus_two_variant());
    assert_eq!(g.edge_count(), 72);
    assert_eq!(girth(&g), Some(4));
    assert_eq!(girth_oracle(&g), Some(4));
    let witness = shortest_cycle(&g).unwrap();
    assert_eq!(witness.len(), 4);
    assert!(witness.verify(|x, y| g.has_edge(*x, *y)));
}

#[test]
fn link_covers() {
    let g = build_gamma();
    for p in [2u32, 3, 5, 7] {
        let cover = build_link_cover(&g, p, default_designated()).unwrap();
        assert_eq!(cover.vertices().len(), 36 * p as usize);
        assert_eq!(cover.edges().len(), 72 * p as usize);
        assert!(cover.is_connected());
        assert!(cover.deck_is_free_automorphism());
        assert_eq!(cover.deck_order(), p);
        for s in Sign::BOTH {
            let cert = special_cycle(&g, s, s).unwrap();
            // One designated edge per cycle, traversed in either direction.
            assert!([1, p - 1].contains(&cover.cycle_weight(&cert)));
            assert_eq!(cover.special_preimage_cycles(s, s), Some(vec![18 * p as usize]));
        }
    }
    assert!(build_link_cover(&g, 4, default_designated()).is_err());
}

#[test]
fn text_round_trip() {
    let g = build_gamma();
    assert_eq!(ModGraph::parse_text(&g.to_text()).unwrap(), g);
}
