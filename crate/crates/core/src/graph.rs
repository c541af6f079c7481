//! Edge-list loading, reciprocity preprocessing and the immutable undirected graph.
//!
//! Node ids read from input are arbitrary non-negative integers. A [`Graph`]
//! remaps them onto a dense `0..n` range ([`NodeId`]) ordered by original id,
//! and keeps the original ids for reporting.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::GzDecoder;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index inside a [`Graph`].
pub type NodeId = u32;

/// Directed pairs exactly as read from a SNAP-style edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    /// Pairs in input order, without self-loops or exact duplicates.
    pub pairs: Vec<(u64, u64)>,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
    pub comment_lines: usize,
}

impl EdgeList {
    /// Number of distinct node ids mentioned by any pair.
    pub fn node_count(&self) -> usize {
        let mut ids: HashSet<u64> = HashSet::with_capacity(self.pairs.len());
        for &(u, v) in &self.pairs {
            ids.insert(u);
            ids.insert(v);
        }
        ids.len()
    }
}

/// Parses whitespace-separated `u v` lines; `#` starts a comment line.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut out = EdgeList::default();
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut data_lines = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(format!("reading line {lineno}"), e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            out.comment_lines += 1;
            continue;
        }
        data_lines += 1;

        let mut tokens = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {what} node id"),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("{what} node id {tok:?} is not a non-negative integer"),
            })
        };
        let u = next_id("source")?;
        let v = next_id("target")?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected trailing token {extra:?}"),
            });
        }

        if u == v {
            out.self_loops_dropped += 1;
        } else if !seen.insert((u, v)) {
            out.duplicates_dropped += 1;
        } else {
            out.pairs.push((u, v));
        }
    }

    if data_lines == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// Reads an edge list from disk, transparently decompressing gzip input
/// (detected by its magic bytes, not by file extension).
pub fn read_edge_list(path: &Path) -> Result<EdgeList> {
    let ctx = || format!("opening {}", path.display());
    let mut file = File::open(path).map_err(|e| Error::io(ctx(), e))?;
    let mut magic = [0u8; 2];
    let n = read_up_to(&mut file, &mut magic).map_err(|e| Error::io(ctx(), e))?;
    let file = File::open(path).map_err(|e| Error::io(ctx(), e))?;
    if n == 2 && magic == [0x1f, 0x8b] {
        parse_edge_list(BufReader::new(GzDecoder::new(file)))
    } else {
        parse_edge_list(BufReader::new(file))
    }
}

fn read_up_to(r: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}

/// How the lines of an edge list are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeSemantics {
    /// Each line is one direction of a relationship; only reciprocated pairs survive.
    Directed,
    /// Each line is an undirected edge listed once (e.g. SNAP `facebook_combined`).
    Undirected,
}

impl EdgeSemantics {
    /// A listing in which no pair appears in both orientations is taken to be
    /// an undirected listing; anything else is directed.
    pub fn detect(edges: &EdgeList) -> Self {
        let set: HashSet<(u64, u64)> = edges.pairs.iter().copied().collect();
        if edges.pairs.iter().any(|&(u, v)| set.contains(&(v, u))) {
            EdgeSemantics::Directed
        } else {
            EdgeSemantics::Undirected
        }
    }
}

/// Immutable undirected simple graph over dense node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    original_ids: Vec<u64>,
    index: HashMap<u64, NodeId>,
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from undirected edges plus optional extra (possibly
    /// isolated) nodes. Self-loops and repeated edges are ignored.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = u64>,
        edges: impl IntoIterator<Item = (u64, u64)>,
    ) -> Self {
        let edges: Vec<(u64, u64)> = edges.into_iter().filter(|(u, v)| u != v).collect();
        let mut ids: Vec<u64> = nodes.into_iter().collect();
        ids.extend(edges.iter().flat_map(|&(u, v)| [u, v]));
        ids.sort_unstable();
        ids.dedup();

        let index: HashMap<u64, NodeId> = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as NodeId))
            .collect();
        let mut adjacency = vec![Vec::new(); ids.len()];
        for (u, v) in edges {
            let (a, b) = (index[&u], index[&v]);
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Graph {
            original_ids: ids,
            index,
            adjacency,
            edge_count: twice / 2,
        }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (u64, u64)>) -> Self {
        Self::from_parts(std::iter::empty(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        0..self.adjacency.len() as NodeId
    }

    /// Undirected edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn contains(&self, v: NodeId) -> bool {
        (v as usize) < self.adjacency.len()
    }

    pub(crate) fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v as u64))
        }
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check(v)?;
        Ok(&self.adjacency[v as usize])
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.neighbors(v).map(<[NodeId]>::len)
    }

    /// Neighbour list without bounds reporting; panics on an invalid id.
    pub(crate) fn adj(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        let (a, b) = if self.adj(u).len() <= self.adj(v).len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj(a).binary_search(&b).is_ok()
    }

    /// Dense id of an original (input) node id.
    pub fn index_of(&self, original: u64) -> Result<NodeId> {
        self.index
            .get(&original)
            .copied()
            .ok_or(Error::UnknownNode(original))
    }

    pub fn original_id(&self, v: NodeId) -> u64 {
        self.original_ids[v as usize]
    }

    /// Subgraph induced by `nodes` (dense ids of `self`).
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let keep: HashSet<NodeId> = nodes.iter().copied().collect();
        let edges = self
            .edges()
            .filter(|(u, v)| keep.contains(u) && keep.contains(v))
            .map(|(u, v)| (self.original_id(u), self.original_id(v)));
        Graph::from_parts(nodes.iter().map(|&v| self.original_id(v)), edges)
    }

    /// Copy of the graph with the given edges removed. Node set is unchanged.
    pub fn without_edges(&self, removed: &[(NodeId, NodeId)]) -> Graph {
        let drop: HashSet<(NodeId, NodeId)> =
            removed.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let mut adjacency = self.adjacency.clone();
        let mut edge_count = self.edge_count;
        for &(u, v) in &drop {
            if self.has_edge(u, v) {
                adjacency[u as usize].retain(|&w| w != v);
                adjacency[v as usize].retain(|&w| w != u);
                edge_count -= 1;
            }
        }
        Graph {
            original_ids: self.original_ids.clone(),
            index: self.index.clone(),
            adjacency,
            edge_count,
        }
    }
}

/// Keeps undirected edge `{u, v}` iff both `(u, v)` and `(v, u)` occur.
/// Nodes left without any edge are dropped.
pub fn mutualize(edges: &EdgeList) -> Graph {
    let set: HashSet<(u64, u64)> = edges.pairs.iter().copied().collect();
    let kept = edges
        .pairs
        .iter()
        .copied()
        .filter(|&(u, v)| u < v && set.contains(&(v, u)));
    Graph::from_edges(kept)
}

/// Treats every pair as an undirected edge.
pub fn symmetrize(edges: &EdgeList) -> Graph {
    Graph::from_edges(edges.pairs.iter().copied())
}

/// Node/edge counts before and after preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub name: String,
    pub semantics: EdgeSemantics,
    pub nodes_before: usize,
    pub edges_before: usize,
    pub nodes_after: usize,
    pub edges_after: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Applies the reciprocity filter (or symmetrization for undirected listings)
/// and reports the counts.
pub fn preprocess(name: &str, edges: &EdgeList, semantics: EdgeSemantics) -> (Graph, DatasetMeta) {
    let graph = match semantics {
        EdgeSemantics::Directed => mutualize(edges),
        EdgeSemantics::Undirected => symmetrize(edges),
    };
    let meta = DatasetMeta {
        name: name.to_string(),
        semantics,
        nodes_before: edges.node_count(),
        edges_before: edges.pairs.len(),
        nodes_after: graph.node_count(),
        edges_after: graph.edge_count(),
        self_loops_dropped: edges.self_loops_dropped,
        duplicates_dropped: edges.duplicates_dropped,
    };
    (graph, meta)
}

/// Induced subgraph on `k` nodes picked by breadth-first snowball sampling.
///
/// A seeded permutation of all nodes supplies the start node and, whenever a
/// component is exhausted before `k` nodes are collected, the next unvisited
/// restart node. Neighbours are expanded in ascending id order.
pub fn subsample(g: &Graph, k: usize, seed: u64) -> Result<Graph> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "subsample size {k} must be in 1..={n}"
        )));
    }
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut visited = vec![false; n];
    let mut picked: Vec<NodeId> = Vec::with_capacity(k);
    let mut queue = VecDeque::new();
    let mut restarts = order.into_iter();

    while picked.len() < k {
        if queue.is_empty() {
            let start = restarts
                .by_ref()
                .find(|&v| !visited[v as usize])
                .expect("fewer unvisited nodes than requested");
            visited[start as usize] = true;
            picked.push(start);
            queue.push_back(start);
            continue;
        }
        let v = queue.pop_front().unwrap();
        for &w in g.adj(v) {
            if picked.len() == k {
                break;
            }
            if !visited[w as usize] {
                visited[w as usize] = true;
                picked.push(w);
                queue.push_back(w);
            }
        }
    }
    Ok(g.induced_subgraph(&picked))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<EdgeList> {
        parse_edge_list(s.as_bytes())
    }

    #[test]
    fn parses_comments_and_pairs() {
        let e = parse("# c\n0 1\n1 0\n").unwrap();
        assert_eq!(e.pairs, vec![(0, 1), (1, 0)]);
        assert_eq!(e.comment_lines, 1);
    }

    #[test]
    fn drops_self_loops_and_duplicates() {
        let e = parse("0 0\n0 1\n0 1\n").unwrap();
        assert_eq!(e.pairs, vec![(0, 1)]);
        assert_eq!(e.self_loops_dropped, 1);
        assert_eq!(e.duplicates_dropped, 1);
    }

    #[test]
    fn malformed_line_names_its_number() {
        match parse("0 1\n# x\n2 b\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("-1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse(""), Err(Error::EmptyInput)));
        assert!(matches!(parse("# only\n\n"), Err(Error::EmptyInput)));
    }

    #[test]
    fn mutualize_drops_one_way_pairs_and_isolated_nodes() {
        let e = parse("1 2\n2 1\n1 3\n").unwrap();
        let g = mutualize(&e);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let (a, b) = (g.index_of(1).unwrap(), g.index_of(2).unwrap());
        assert!(g.has_edge(a, b));
        assert!(matches!(g.index_of(3), Err(Error::UnknownNode(3))));
    }

    #[test]
    fn mutualize_of_nothing_reciprocated_is_empty() {
        let g = mutualize(&parse("0 1\n1 2\n").unwrap());
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn semantics_detection() {
        assert_eq!(
            EdgeSemantics::detect(&parse("0 1\n1 2\n").unwrap()),
            EdgeSemantics::Undirected
        );
        assert_eq!(
            EdgeSemantics::detect(&parse("0 1\n1 0\n").unwrap()),
            EdgeSemantics::Directed
        );
    }

    #[test]
    fn path_neighbors_and_degree() {
        let g = Graph::from_edges([(10, 11), (11, 12)]);
        let b = g.index_of(11).unwrap();
        let nb: Vec<u64> = g
            .neighbors(b)
            .unwrap()
            .iter()
            .map(|&v| g.original_id(v))
            .collect();
        assert_eq!(nb, vec![10, 12]);
        assert_eq!(g.degree(b).unwrap(), 2);
        assert!(g.neighbors(3).is_err());
    }

    #[test]
    fn subsample_full_and_single() {
        let g = Graph::from_edges([(0, 1), (1, 2), (2, 3), (5, 6)]);
        assert_eq!(subsample(&g, g.node_count(), 7).unwrap(), g);
        let one = subsample(&g, 1, 7).unwrap();
        assert_eq!((one.node_count(), one.edge_count()), (1, 0));
        assert!(subsample(&g, 7, 0).is_err());
        assert!(subsample(&g, 0, 0).is_err());
    }

    #[test]
    fn subsample_of_triangle_keeps_induced_edge() {
        let g = Graph::from_edges([(0, 1), (1, 2), (0, 2)]);
        for seed in 0..20 {
            let s = subsample(&g, 2, seed).unwrap();
            assert_eq!((s.node_count(), s.edge_count()), (2, 1));
        }
    }

    #[test]
    fn subsample_restarts_across_components() {
        let g = Graph::from_edges([(0, 1), (2, 3), (4, 5)]);
        for seed in 0..10 {
            let s = subsample(&g, 5, seed).unwrap();
            assert_eq!(s.node_count(), 5);
            assert_eq!(s.edge_count(), 2);
        }
    }

    #[test]
    fn without_edges_keeps_nodes() {
        let g = Graph::from_edges([(0, 1), (1, 2)]);
        let h = g.without_edges(&[(1, 0)]);
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.edge_count(), 1);
        assert!(!h.has_edge(0, 1));
        assert!(h.has_edge(1, 2));
    }
}
