//! Local pair indices: common-neighbour count and the densities of the
//! common and combined neighbourhoods.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// How edges inside a node set are counted when computing its density.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityConvention {
    /// Each unordered internal edge counted once; density in `[0, 1]`.
    #[default]
    Standard,
    /// Adjacency-matrix sum over ordered pairs; each edge counted twice, range `[0, 2]`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFeatures {
    pub i1: usize,
    pub i2: f64,
    pub i3: f64,
}

/// Number of graph edges with both endpoints in `set` (sorted, deduplicated).
fn internal_edges(g: &Graph, set: &[NodeId]) -> usize {
    let mut twice = 0;
    for &w in set {
        let adj = g.adj(w);
        twice += if adj.len() < set.len() {
            adj.iter().filter(|x| set.binary_search(x).is_ok()).count()
        } else {
            set.iter().filter(|x| adj.binary_search(x).is_ok()).count()
        };
    }
    twice / 2
}

fn density_of_sorted(g: &Graph, set: &[NodeId], conv: DensityConvention) -> f64 {
    let n = set.len();
    if n <= 1 {
        return 0.0;
    }
    let edges = internal_edges(g, set) as f64;
    let possible = (n * (n - 1)) as f64 / 2.0;
    match conv {
        DensityConvention::Standard => edges / possible,
        DensityConvention::Literal => 2.0 * edges / possible,
    }
}

/// Fraction of realised edges among all pairs of `set`; 0 for sets of size ≤ 1.
pub fn set_density(g: &Graph, set: &[NodeId], conv: DensityConvention) -> Result<f64> {
    for &v in set {
        g.check(v)?;
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(density_of_sorted(g, &sorted, conv))
}

fn check_pair(g: &Graph, u: NodeId, v: NodeId) -> Result<()> {
    g.check(u)?;
    g.check(v)?;
    if u == v {
        return Err(Error::SelfPair(u as u64));
    }
    Ok(())
}

pub(crate) fn intersect(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn union(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                j += 1;
                i += 1;
                *x
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                *x
            }
            (Some(_), Some(y)) => {
                j += 1;
                *y
            }
            (Some(x), None) => {
                i += 1;
                *x
            }
            (None, Some(y)) => {
                j += 1;
                *y
            }
            (None, None) => unreachable!(),
        };
        out.push(take);
    }
    out
}

/// Common-neighbour count.
pub fn i1(g: &Graph, u: NodeId, v: NodeId) -> Result<usize> {
    check_pair(g, u, v)?;
    Ok(intersect(g.adj(u), g.adj(v)).len())
}

/// Density of the common neighbourhood.
pub fn i2(g: &Graph, u: NodeId, v: NodeId, conv: DensityConvention) -> Result<f64> {
    check_pair(g, u, v)?;
    Ok(density_of_sorted(g, &intersect(g.adj(u), g.adj(v)), conv))
}

/// Density of the combined neighbourhood. `u` and `v` belong to the set only
/// when they are adjacent (each is then in the other's neighbourhood).
pub fn i3(g: &Graph, u: NodeId, v: NodeId, conv: DensityConvention) -> Result<f64> {
    check_pair(g, u, v)?;
    Ok(density_of_sorted(g, &union(g.adj(u), g.adj(v)), conv))
}

/// All three local indices in one pass over the two neighbourhoods.
pub fn local_features(
    g: &Graph,
    u: NodeId,
    v: NodeId,
    conv: DensityConvention,
) -> Result<LocalFeatures> {
    check_pair(g, u, v)?;
    let common = intersect(g.adj(u), g.adj(v));
    let all = union(g.adj(u), g.adj(v));
    Ok(LocalFeatures {
        i1: common.len(),
        i2: density_of_sorted(g, &common, conv),
        i3: density_of_sorted(g, &all, conv),
    })
}
