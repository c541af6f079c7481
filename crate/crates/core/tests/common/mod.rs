//! Helpers shared by the integration tests: seeded random graphs and
//! brute-force reference implementations that only use an adjacency matrix.

#![allow(dead_code, clippy::needless_range_loop)]

use linkpred::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn random(n: usize, p: f64, seed: u64) -> Dense {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        Dense { n, adj }
    }

    pub fn graph(&self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[i][j] {
                    edges.push((i as u64, j as u64));
                }
            }
        }
        Graph::from_parts(0..self.n as u64, edges)
    }

    pub fn deg(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    pub fn nbrs(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| self.adj[v][w]).collect()
    }

    pub fn common(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&w| self.adj[u][w] && self.adj[v][w])
            .collect()
    }

    pub fn either(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&w| self.adj[u][w] || self.adj[v][w])
            .collect()
    }

    pub fn density(&self, set: &[usize]) -> f64 {
        let k = set.len();
        if k < 2 {
            return 0.0;
        }
        let mut e = 0;
        for a in 0..k {
            for b in a + 1..k {
                if self.adj[set[a]][set[b]] {
                    e += 1;
                }
            }
        }
        e as f64 / (k * (k - 1) / 2) as f64
    }

    pub fn sam(&self, u: usize, v: usize) -> f64 {
        let c = self.common(u, v).len() as f64;
        let part = |x: usize| {
            let d = self.deg(x);
            if d == 0 {
                0.0
            } else {
                c / d as f64
            }
        };
        (part(u) + part(v)) / 2.0
    }

    fn s(&self, a: usize, b: usize) -> f64 {
        1.0 / (self.deg(a) + self.deg(b) - 1) as f64
    }

    /// Enumerates every simple path from `u` to `v`, keeps those with the
    /// fewest hops, and returns (hops, best product). `None` when unreachable.
    pub fn min_hop_paths(&self, u: usize, v: usize) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut path = vec![u];
        let mut on = vec![false; self.n];
        on[u] = true;
        self.walk(v, &mut path, &mut on, &mut best);
        best
    }

    fn walk(
        &self,
        v: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
        best: &mut Option<(usize, f64)>,
    ) {
        let last = *path.last().unwrap();
        if last == v {
            let hops = path.len() - 1;
            let mut prod = 1.0;
            for w in path.windows(2) {
                prod *= self.s(w[0], w[1]);
            }
            *best = match *best {
                None => Some((hops, prod)),
                Some((h, _)) if hops < h => Some((hops, prod)),
                Some((h, p)) if hops == h && prod > p => Some((hops, prod)),
                keep => keep,
            };
            return;
        }
        if let Some((h, _)) = *best {
            if path.len() > h {
                return;
            }
        }
        for w in 0..self.n {
            if self.adj[last][w] && !on[w] {
                on[w] = true;
                path.push(w);
                self.walk(v, path, on, best);
                path.pop();
                on[w] = false;
            }
        }
    }

    /// Reference global index: direct similarity for edges, best minimum-hop
    /// product otherwise, 0 when disconnected.
    pub fn i4(&self, u: usize, v: usize) -> f64 {
        if self.adj[u][v] {
            return self.s(u, v);
        }
        self.min_hop_paths(u, v).map(|(_, p)| p).unwrap_or(0.0)
    }
}

/// Brute-force optimal depth-1 stump error: every feature, every threshold
/// between consecutive distinct values (plus the all-one-side split), both
/// leaf labellings.
pub fn best_stump_error(x: &[Vec<f64>], y: &[i8], w: &[f64]) -> f64 {
    let total_pos: f64 = y
        .iter()
        .zip(w)
        .filter(|(l, _)| **l > 0)
        .map(|(_, w)| w)
        .sum();
    let total_neg: f64 = w.iter().sum::<f64>() - total_pos;
    let mut best = total_pos.min(total_neg);
    for f in 0..x[0].len() {
        let mut vals: Vec<f64> = x.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let t = pair[0] * 0.5 + pair[1] * 0.5;
            for (left, right) in [(1i8, -1i8), (-1, 1), (1, 1), (-1, -1)] {
                let err: f64 = x
                    .iter()
                    .zip(y)
                    .zip(w)
                    .filter(|((r, &l), _)| (if r[f] <= t { left } else { right }) != l)
                    .map(|(_, w)| w)
                    .sum();
                best = best.min(err);
            }
        }
    }
    best
}
