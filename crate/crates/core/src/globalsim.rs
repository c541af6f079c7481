//! Global pair index: degree-based similarity of adjacent nodes, extended to
//! non-adjacent nodes as a product of edge similarities along a minimum-hop
//! path.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Which minimum-hop path supplies the product when several exist.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Largest product over all minimum-hop paths.
    #[default]
    MaxProduct,
    /// The path through the first-discovered parent (ascending ids, BFS order).
    FirstFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Pairs further apart than this are treated as disconnected.
    pub max_hops: u32,
    pub tie_break: TieBreak,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_hops: 6,
            tie_break: TieBreak::MaxProduct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SimRoute {
    Direct,
    Transitive { hops: u32 },
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimScore {
    pub value: f64,
    pub route: SimRoute,
}

impl SimScore {
    const DISCONNECTED: SimScore = SimScore {
        value: 0.0,
        route: SimRoute::Disconnected,
    };
}

#[inline]
fn edge_sim(g: &Graph, u: NodeId, v: NodeId) -> f64 {
    1.0 / (g.adj(u).len() + g.adj(v).len() - 1) as f64
}

/// `1 / (deg(u) + deg(v) - 1)` for an adjacent pair.
pub fn direct_sim(g: &Graph, u: NodeId, v: NodeId) -> Result<f64> {
    g.check(u)?;
    g.check(v)?;
    if !g.has_edge(u, v) {
        return Err(Error::NotAdjacent(g.original_id(u), g.original_id(v)));
    }
    Ok(edge_sim(g, u, v))
}

/// Breadth-first layers from `source`, tracking the best path product for
/// every reached node. Stops once every target is settled or `max_hops` is
/// reached.
struct Layered {
    hops: Vec<u32>,
    best: Vec<f64>,
}

const UNSEEN: u32 = u32::MAX;

impl Layered {
    fn run(g: &Graph, source: NodeId, targets: &[NodeId], cfg: &SimConfig) -> Layered {
        let n = g.node_count();
        let mut hops = vec![UNSEEN; n];
        let mut best = vec![0.0f64; n];
        hops[source as usize] = 0;
        best[source as usize] = 1.0;

        let mut frontier = vec![source];
        let mut depth = 0u32;
        while !frontier.is_empty() && depth < cfg.max_hops {
            if targets.iter().all(|&t| hops[t as usize] <= depth) {
                break;
            }
            let mut next = Vec::new();
            for &w in &frontier {
                let reach = best[w as usize];
                for &x in g.adj(w) {
                    let cand = reach * edge_sim(g, w, x);
                    let xi = x as usize;
                    if hops[xi] == UNSEEN {
                        hops[xi] = depth + 1;
                        best[xi] = cand;
                        next.push(x);
                    } else if hops[xi] == depth + 1
                        && cfg.tie_break == TieBreak::MaxProduct
                        && cand > best[xi]
                    {
                        best[xi] = cand;
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        Layered { hops, best }
    }

    fn score(&self, target: NodeId) -> SimScore {
        match self.hops[target as usize] {
            UNSEEN => SimScore::DISCONNECTED,
            h => SimScore {
                value: self.best[target as usize],
                route: SimRoute::Transitive { hops: h },
            },
        }
    }
}

fn check_pair(g: &Graph, u: NodeId, v: NodeId) -> Result<()> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Err(Error::SelfPair(g.original_id(u)));
    }
    Ok(())
}

/// Product of edge similarities along a minimum-hop path between two
/// non-adjacent nodes; zero (disconnected) when no path within `max_hops` exists.
/// The search starts from the smaller id, so the value is exactly symmetric.
pub fn transitive_sim(g: &Graph, u: NodeId, v: NodeId, cfg: &SimConfig) -> Result<SimScore> {
    check_pair(g, u, v)?;
    if g.has_edge(u, v) {
        return Err(Error::AdjacentPair(g.original_id(u), g.original_id(v)));
    }
    let (source, target) = (u.min(v), u.max(v));
    Ok(Layered::run(g, source, &[target], cfg).score(target))
}

/// Direct similarity for adjacent pairs, transitive similarity otherwise.
pub fn i4(g: &Graph, u: NodeId, v: NodeId, cfg: &SimConfig) -> Result<SimScore> {
    check_pair(g, u, v)?;
    if g.has_edge(u, v) {
        Ok(SimScore {
            value: edge_sim(g, u, v),
            route: SimRoute::Direct,
        })
    } else {
        transitive_sim(g, u, v, cfg)
    }
}

/// Batch evaluation of the global index. Pairs are grouped by their smaller
/// node, and one breadth-first search per distinct smaller node serves every
/// transitive pair in the group.
#[derive(Debug, Default)]
pub struct SimCache {
    searches: AtomicUsize,
}

impl SimCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of breadth-first searches run so far.
    pub fn searches(&self) -> usize {
        self.searches.load(Ordering::Relaxed)
    }

    /// Scores aligned with `pairs`.
    pub fn compute(
        &self,
        g: &Graph,
        pairs: &[(NodeId, NodeId)],
        cfg: &SimConfig,
    ) -> Result<Vec<SimScore>> {
        let mut out = vec![SimScore::DISCONNECTED; pairs.len()];
        let mut groups: BTreeMap<NodeId, Vec<(usize, NodeId)>> = BTreeMap::new();
        for (idx, &(u, v)) in pairs.iter().enumerate() {
            check_pair(g, u, v)?;
            if g.has_edge(u, v) {
                out[idx] = SimScore {
                    value: edge_sim(g, u, v),
                    route: SimRoute::Direct,
                };
            } else {
                groups.entry(u.min(v)).or_default().push((idx, u.max(v)));
            }
        }

        let solved: Vec<Vec<(usize, SimScore)>> = groups
            .into_par_iter()
            .map(|(source, members)| {
                self.searches.fetch_add(1, Ordering::Relaxed);
                let targets: Vec<NodeId> = members.iter().map(|&(_, t)| t).collect();
                let layers = Layered::run(g, source, &targets, cfg);
                members
                    .into_iter()
                    .map(|(idx, t)| (idx, layers.score(t)))
                    .collect()
            })
            .collect();
        for (idx, score) in solved.into_iter().flatten() {
            out[idx] = score;
        }
        Ok(out)
    }

    /// Same as [`SimCache::compute`], keyed by pair.
    pub fn compute_map(
        &self,
        g: &Graph,
        pairs: &[(NodeId, NodeId)],
        cfg: &SimConfig,
    ) -> Result<BTreeMap<(NodeId, NodeId), SimScore>> {
        let scores = self.compute(g, pairs, cfg)?;
        Ok(pairs.iter().copied().zip(scores).collect())
    }
}
