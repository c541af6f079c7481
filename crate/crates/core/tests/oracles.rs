mod common;

use common::Dense;
use linkpred::baselines::sam;
use linkpred::globalsim::{i4, SimCache, SimConfig, SimRoute, TieBreak};
use linkpred::indices::{i1, i2, i3, local_features, DensityConvention};

const STD: DensityConvention = DensityConvention::Standard;

fn wide() -> SimConfig {
    SimConfig {
        max_hops: 64,
        tie_break: TieBreak::MaxProduct,
    }
}

#[test]
fn local_indices_and_sam_match_brute_force() {
    for seed in 0..100u64 {
        let n = 2 + (seed % 11) as usize;
        let p = [0.15, 0.3, 0.5, 0.8][(seed % 4) as usize];
        let d = Dense::random(n, p, seed);
        let g = d.graph();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let (a, b) = (u as u32, v as u32);
                assert_eq!(
                    i1(&g, a, b).unwrap(),
                    d.common(u, v).len(),
                    "seed {seed} ({u},{v})"
                );
                assert_eq!(i2(&g, a, b, STD).unwrap(), d.density(&d.common(u, v)));
                assert_eq!(i3(&g, a, b, STD).unwrap(), d.density(&d.either(u, v)));
                assert_eq!(sam(&g, a, b).unwrap(), d.sam(u, v));
                let lf = local_features(&g, a, b, STD).unwrap();
                assert_eq!(lf.i1, d.common(u, v).len());
            }
        }
    }
}

#[test]
fn literal_density_doubles_standard() {
    let d = Dense::random(9, 0.5, 3);
    let g = d.graph();
    for u in 0..9u32 {
        for v in u + 1..9 {
            let s = i3(&g, u, v, STD).unwrap();
            let l = i3(&g, u, v, DensityConvention::Literal).unwrap();
            assert_eq!(l, 2.0 * s);
        }
    }
}

#[test]
fn global_index_matches_exhaustive_min_hop_paths() {
    for seed in 0..100u64 {
        let n = 2 + (seed % 9) as usize;
        let p = [0.2, 0.35, 0.5][(seed % 3) as usize];
        let d = Dense::random(n, p, 1000 + seed);
        let g = d.graph();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let got = i4(&g, u as u32, v as u32, &wide()).unwrap();
                let want = d.i4(u, v);
                assert!(
                    (got.value - want).abs() <= 1e-12,
                    "seed {seed} ({u},{v}): {} vs {want}",
                    got.value
                );
                match (d.adj[u][v], d.min_hop_paths(u, v), got.route) {
                    (true, _, SimRoute::Direct) => {}
                    (false, Some((h, _)), SimRoute::Transitive { hops }) => {
                        assert_eq!(h, hops as usize)
                    }
                    (false, None, SimRoute::Disconnected) => {}
                    other => panic!("route mismatch {other:?}"),
                }
            }
        }
    }
}

#[test]
fn hop_cap_treats_far_pairs_as_disconnected() {
    let g = linkpred::Graph::from_edges((0..9u64).map(|i| (i, i + 1)));
    let cfg = SimConfig {
        max_hops: 6,
        ..SimConfig::default()
    };
    assert_eq!(
        i4(&g, 0, 6, &cfg).unwrap().route,
        SimRoute::Transitive { hops: 6 }
    );
    assert_eq!(i4(&g, 0, 7, &cfg).unwrap().route, SimRoute::Disconnected);
    assert_eq!(i4(&g, 0, 7, &cfg).unwrap().value, 0.0);
}

#[test]
fn first_found_never_beats_max_product() {
    for seed in 0..30u64 {
        let d = Dense::random(10, 0.3, 50 + seed);
        let g = d.graph();
        let ff = SimConfig {
            max_hops: 64,
            tie_break: TieBreak::FirstFound,
        };
        for u in 0..10u32 {
            for v in 0..10u32 {
                if u != v {
                    let a = i4(&g, u, v, &ff).unwrap();
                    let b = i4(&g, u, v, &wide()).unwrap();
                    assert!(a.value <= b.value);
                    assert_eq!(a.route, b.route);
                }
            }
        }
    }
}

#[test]
fn batched_search_agrees_with_single_pairs() {
    for seed in 0..20u64 {
        let d = Dense::random(12, 0.25, 500 + seed);
        let g = d.graph();
        let pairs: Vec<(u32, u32)> = (0..12u32)
            .flat_map(|u| (0..12u32).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let cache = SimCache::new();
        let batch = cache.compute(&g, &pairs, &SimConfig::default()).unwrap();
        for (&(u, v), s) in pairs.iter().zip(&batch) {
            assert_eq!(*s, i4(&g, u, v, &SimConfig::default()).unwrap());
        }
        let transitive_sources: std::collections::BTreeSet<u32> = pairs
            .iter()
            .filter(|&&(u, v)| !g.has_edge(u, v))
            .map(|&(u, v)| u.min(v))
            .collect();
        assert_eq!(cache.searches(), transitive_sources.len());
    }
}

#[test]
fn social_fixture_hand_values() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/social.txt"))
        .unwrap();
    let edges = linkpred::graph::parse_edge_list(text.as_bytes()).unwrap();
    let g = linkpred::graph::symmetrize(&edges);
    let id = |x: u64| g.index_of(x).unwrap();
    let (a, b) = (id(1), id(5));
    // N(1) = {2,3,4}, N(5) = {2,6,7}; union {2,3,4,6,7} holds 2-3, 3-4, 4-6.
    let lf = local_features(&g, a, b, STD).unwrap();
    assert_eq!(lf.i1, 1);
    assert_eq!(lf.i2, 0.0);
    assert_eq!(lf.i3, 0.3);
    // Only shortest path 1-2-5; both edges have degree sum 6.
    let s = i4(&g, a, b, &SimConfig::default()).unwrap();
    assert!((s.value - 1.0 / 25.0).abs() < 1e-15);
    assert_eq!(s.route, SimRoute::Transitive { hops: 2 });
    assert_eq!(sam(&g, a, b).unwrap(), 1.0 / 3.0);
    assert_eq!(
        i4(&g, id(1), id(2), &SimConfig::default()).unwrap().value,
        0.2
    );
    // 1 and 12 are 5 hops apart: 1-4-6-8-9-12.
    assert_eq!(
        i4(&g, id(1), id(12), &SimConfig::default()).unwrap().route,
        SimRoute::Transitive { hops: 5 }
    );
}
