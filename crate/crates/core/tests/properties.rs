use std::collections::{BTreeSet, HashSet};

use linkpred::baselines::sam;
use linkpred::boost::{init_weights, update_weights, Label};
use linkpred::globalsim::{i4, SimConfig};
use linkpred::graph::{mutualize, parse_edge_list, subsample, EdgeList};
use linkpred::indices::{local_features, DensityConvention};
use linkpred::sampling::{generate_examples, kfold_split, CandidatePolicy, SamplingConfig};
use linkpred::Graph;
use proptest::prelude::*;

fn edge_pairs(max_node: u64, max_len: usize) -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::vec((0..max_node, 0..max_node), 1..max_len)
}

fn edge_text(pairs: &[(u64, u64)]) -> String {
    pairs.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjacency_is_symmetric_and_degrees_sum(pairs in edge_pairs(30, 120)) {
        let g = Graph::from_edges(pairs.iter().copied().filter(|(u, v)| u != v));
        let mut deg_sum = 0;
        for v in g.nodes() {
            let nb = g.neighbors(v).unwrap();
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nb.contains(&v));
            for &w in nb {
                prop_assert!(g.neighbors(w).unwrap().contains(&v));
            }
            deg_sum += nb.len();
        }
        prop_assert_eq!(deg_sum, 2 * g.edge_count());
        prop_assert_eq!(g.edges().count(), g.edge_count());
    }

    #[test]
    fn mutualize_keeps_exactly_reciprocated_pairs(pairs in edge_pairs(15, 80)) {
        let parsed: EdgeList = parse_edge_list(edge_text(&pairs).as_bytes()).unwrap();
        let g = mutualize(&parsed);
        let directed: HashSet<(u64, u64)> = pairs.iter().copied().filter(|(u, v)| u != v).collect();
        let kept: BTreeSet<(u64, u64)> = g
            .edges()
            .map(|(a, b)| (g.original_id(a), g.original_id(b)))
            .collect();
        let want: BTreeSet<(u64, u64)> = directed
            .iter()
            .filter(|(u, v)| u < v && directed.contains(&(*v, *u)))
            .copied()
            .collect();
        prop_assert_eq!(&kept, &want);
        for v in g.nodes() {
            prop_assert!(g.degree(v).unwrap() > 0);
        }
    }

    #[test]
    fn pair_indices_are_symmetric_and_bounded(pairs in edge_pairs(12, 50)) {
        let g = Graph::from_edges(pairs.iter().copied().filter(|(u, v)| u != v));
        let cfg = SimConfig::default();
        for u in g.nodes() {
            for v in g.nodes() {
                if u >= v { continue; }
                let a = local_features(&g, u, v, DensityConvention::Standard).unwrap();
                let b = local_features(&g, v, u, DensityConvention::Standard).unwrap();
                prop_assert_eq!(a, b);
                prop_assert!((0.0..=1.0).contains(&a.i2) && (0.0..=1.0).contains(&a.i3));
                let s = i4(&g, u, v, &cfg).unwrap().value;
                prop_assert_eq!(s, i4(&g, v, u, &cfg).unwrap().value);
                prop_assert!((0.0..=1.0).contains(&s));
                let m = sam(&g, u, v).unwrap();
                prop_assert_eq!(m, sam(&g, v, u).unwrap());
                prop_assert!((0.0..=1.0).contains(&m));
            }
        }
    }

    #[test]
    fn subsample_is_an_induced_subgraph_of_size_k(pairs in edge_pairs(40, 150), k in 1usize..40, seed in any::<u64>()) {
        let g = Graph::from_edges(pairs.iter().copied().filter(|(u, v)| u != v));
        prop_assume!(k <= g.node_count());
        let s = subsample(&g, k, seed).unwrap();
        prop_assert_eq!(s.node_count(), k);
        let ids: Vec<u64> = s.nodes().map(|v| s.original_id(v)).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let in_g = g.has_edge(g.index_of(a).unwrap(), g.index_of(b).unwrap());
                let in_s = s.has_edge(s.index_of(a).unwrap(), s.index_of(b).unwrap());
                prop_assert_eq!(in_g, in_s);
            }
        }
        let again = subsample(&g, k, seed).unwrap();
        prop_assert_eq!(again.edges().collect::<Vec<_>>(), s.edges().collect::<Vec<_>>());
    }

    #[test]
    fn folds_partition_the_examples(n in 2usize..300, k in 2usize..12, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let f = kfold_split(n, k, seed).unwrap();
        prop_assert_eq!(f.len(), k);
        let mut all: Vec<usize> = f.folds.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        let sizes: Vec<usize> = f.folds.iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for i in 0..k {
            prop_assert_eq!(f.training_indices(i).len() + f.folds[i].len(), n);
        }
        prop_assert_eq!(kfold_split(n, k, seed).unwrap(), f);
    }

    #[test]
    fn weight_updates_stay_normalised(
        n in 2usize..60,
        theta in 0.01f64..40.0,
        flips in prop::collection::vec(any::<bool>(), 60),
    ) {
        let d = init_weights(n).unwrap();
        let labels = vec![Label::Positive; n];
        let preds: Vec<Label> = (0..n)
            .map(|i| if flips[i] { Label::Negative } else { Label::Positive })
            .collect();
        let next = update_weights(&d, theta, &preds, &labels).unwrap();
        prop_assert!((next.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(next.as_slice().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn examples_respect_the_holdout(seed in any::<u64>(), uniform in any::<bool>()) {
        let g = dense_ring(30);
        let cfg = SamplingConfig {
            positive_fraction: 0.2,
            negative_ratio: 1.0,
            candidate_policy: if uniform { CandidatePolicy::UniformNonedge } else { CandidatePolicy::DistanceTwo },
            seed,
        };
        let (train, pairs) = generate_examples(&g, &cfg).unwrap();
        let n_pos = pairs.iter().filter(|p| p.label == Label::Positive).count();
        prop_assert_eq!(n_pos, (0.2 * g.edge_count() as f64).ceil() as usize);
        prop_assert_eq!(pairs.len(), 2 * n_pos);
        prop_assert_eq!(train.edge_count(), g.edge_count() - n_pos);
        let mut seen = HashSet::new();
        for p in &pairs {
            prop_assert!(p.u < p.v);
            prop_assert!(seen.insert((p.u, p.v)));
            prop_assert!(!train.has_edge(p.u, p.v));
            match p.label {
                Label::Positive => prop_assert!(g.has_edge(p.u, p.v)),
                Label::Negative => {
                    prop_assert!(!g.has_edge(p.u, p.v));
                    if !uniform {
                        let common = train.neighbors(p.u).unwrap().iter()
                            .any(|w| train.neighbors(p.v).unwrap().contains(w));
                        prop_assert!(common);
                    }
                }
            }
        }
        for v in train.nodes() {
            prop_assert!(train.degree(v).unwrap() > 0);
        }
    }
}

/// Ring where each node links to its four nearest neighbours on each side.
fn dense_ring(n: u64) -> Graph {
    Graph::from_edges((0..n).flat_map(|i| (1..=4).map(move |d| (i, (i + d) % n))))
}
