//! Labelled example construction, featurisation and k-fold splits.
//!
//! Positives are edges held out of the graph; negatives are non-edges of the
//! original graph. Every feature is computed on the training graph with the
//! positives removed, so no index can see the edge it is asked to predict.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::BaselineRegistry;
use crate::boost::Label;
use crate::error::{Error, Result};
use crate::globalsim::{SimCache, SimConfig};
use crate::graph::{Graph, NodeId};
use crate::indices::{local_features, DensityConvention};

/// Where negative (non-link) pairs are drawn from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidatePolicy {
    /// Friend-of-friend pairs: distance exactly two in the training graph.
    #[default]
    #[serde(rename = "distance-2", alias = "distance-two")]
    DistanceTwo,
    /// Any non-adjacent pair.
    UniformNonedge,
}

impl FromStr for CandidatePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distance-2" | "distance-two" => Ok(CandidatePolicy::DistanceTwo),
            "uniform-nonedge" => Ok(CandidatePolicy::UniformNonedge),
            _ => Err(Error::Config(format!("unknown candidate policy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub positive_fraction: f64,
    pub negative_ratio: f64,
    pub candidate_policy: CandidatePolicy,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            positive_fraction: 0.1,
            negative_ratio: 1.0,
            candidate_policy: CandidatePolicy::DistanceTwo,
            seed: 0,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.positive_fraction > 0.0 && self.positive_fraction < 1.0) {
            return Err(Error::Config(format!(
                "positive_fraction must lie in (0, 1), got {}",
                self.positive_fraction
            )));
        }
        if !(self.negative_ratio > 0.0 && self.negative_ratio.is_finite()) {
            return Err(Error::Config(format!(
                "negative_ratio must be positive, got {}",
                self.negative_ratio
            )));
        }
        Ok(())
    }
}

/// A node pair (dense ids, `u < v`) with its label, before featurisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub u: NodeId,
    pub v: NodeId,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    /// Dense ids in the training graph, `u < v`.
    pub pair: (NodeId, NodeId),
    /// The same pair as original input ids.
    pub ids: (u64, u64),
    pub features: Vec<f64>,
    pub label: Label,
}

/// `ceil(x)` that ignores floating-point noise just above an integer.
fn ceil_count(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

const HOLDOUT_RETRIES: usize = 100;

/// Holds out positive edges and draws negatives. Returns the training graph
/// (same node set, positives removed) and positives followed by negatives.
pub fn generate_examples(g: &Graph, cfg: &SamplingConfig) -> Result<(Graph, Vec<LabeledPair>)> {
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::Sampling("graph has no edges to hold out".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_pos = ceil_count(cfg.positive_fraction * g.edge_count() as f64);

    let mut degree: Vec<usize> = g.nodes().map(|v| g.adj(v).len()).collect();
    let mut remaining: Vec<(NodeId, NodeId)> = g.edges().collect();
    let mut positives = Vec::with_capacity(n_pos);
    while positives.len() < n_pos {
        let mut taken = false;
        for _ in 0..HOLDOUT_RETRIES {
            if remaining.is_empty() {
                break;
            }
            let i = rng.gen_range(0..remaining.len());
            let (u, v) = remaining[i];
            if degree[u as usize] > 1 && degree[v as usize] > 1 {
                remaining.swap_remove(i);
                degree[u as usize] -= 1;
                degree[v as usize] -= 1;
                positives.push((u, v));
                taken = true;
                break;
            }
        }
        if !taken {
            return Err(Error::Sampling(format!(
                "holding out {n_pos} of {} edges would leave a node without neighbours \
                 (gave up after {HOLDOUT_RETRIES} draws at positive {})",
                g.edge_count(),
                positives.len() + 1
            )));
        }
    }
    let train = g.without_edges(&positives);

    let n_neg = ceil_count(cfg.negative_ratio * n_pos as f64);
    let negatives = draw_negatives(g, &train, n_neg, cfg.candidate_policy, &mut rng)?;

    let mut out: Vec<LabeledPair> = positives
        .into_iter()
        .map(|(u, v)| LabeledPair {
            u,
            v,
            label: Label::Positive,
        })
        .collect();
    out.extend(negatives.into_iter().map(|(u, v)| LabeledPair {
        u,
        v,
        label: Label::Negative,
    }));
    Ok((train, out))
}

fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    (a.min(b), a.max(b))
}

/// Rejection-samples candidate pairs, falling back to exhaustive enumeration
/// when draws keep colliding so that scarcity is reported exactly.
fn draw_negatives(
    full: &Graph,
    train: &Graph,
    n_neg: usize,
    policy: CandidatePolicy,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(NodeId, NodeId)>> {
    let n = train.node_count() as NodeId;
    let active: Vec<NodeId> = train
        .nodes()
        .filter(|&v| !train.adj(v).is_empty())
        .collect();
    let is_candidate = |a: NodeId, b: NodeId| a != b && !full.has_edge(a, b);

    let mut chosen: Vec<(NodeId, NodeId)> = Vec::with_capacity(n_neg);
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(n_neg);
    let budget = (50 * n_neg).max(10_000);
    let mut attempts = 0;
    while chosen.len() < n_neg && attempts < budget && n >= 2 {
        attempts += 1;
        let (a, b) = match policy {
            CandidatePolicy::DistanceTwo => {
                if active.is_empty() {
                    break;
                }
                let a = active[rng.gen_range(0..active.len())];
                let mid = train.adj(a)[rng.gen_range(0..train.adj(a).len())];
                let b = train.adj(mid)[rng.gen_range(0..train.adj(mid).len())];
                (a, b)
            }
            CandidatePolicy::UniformNonedge => (rng.gen_range(0..n), rng.gen_range(0..n)),
        };
        if is_candidate(a, b) && seen.insert(ordered(a, b)) {
            chosen.push(ordered(a, b));
        }
    }
    if chosen.len() == n_neg {
        return Ok(chosen);
    }

    let mut pool: Vec<(NodeId, NodeId)> = match policy {
        CandidatePolicy::DistanceTwo => {
            let mut set = HashSet::new();
            for mid in train.nodes() {
                let nb = train.adj(mid);
                for (i, &a) in nb.iter().enumerate() {
                    for &b in &nb[i + 1..] {
                        if is_candidate(a, b) {
                            set.insert(ordered(a, b));
                        }
                    }
                }
            }
            set.into_iter().collect()
        }
        CandidatePolicy::UniformNonedge => (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| is_candidate(a, b))
            .collect(),
    };
    pool.retain(|p| !seen.contains(p));
    pool.sort_unstable();
    let missing = n_neg - chosen.len();
    if pool.len() < missing {
        return Err(Error::Sampling(format!(
            "requested {n_neg} negative pairs but only {} candidates exist",
            chosen.len() + pool.len()
        )));
    }
    pool.shuffle(rng);
    chosen.extend(pool.into_iter().take(missing));
    Ok(chosen)
}

/// Which features make up an example's vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selector {
    First,
    Second,
    Third,
    Fourth,
    Total,
    Baseline(String),
}

impl Selector {
    pub const INDEX_SETS: [Selector; 5] = [
        Selector::First,
        Selector::Second,
        Selector::Third,
        Selector::Fourth,
        Selector::Total,
    ];

    pub fn feature_names(&self) -> Vec<String> {
        match self {
            Selector::First => vec!["i1".into()],
            Selector::Second => vec!["i2".into()],
            Selector::Third => vec!["i3".into()],
            Selector::Fourth => vec!["i4".into()],
            Selector::Total => ["i1", "i2", "i3", "i4"].map(String::from).to_vec(),
            Selector::Baseline(name) => vec![name.clone()],
        }
    }

    fn needs_local(&self) -> bool {
        matches!(
            self,
            Selector::First | Selector::Second | Selector::Third | Selector::Total
        )
    }

    fn needs_global(&self) -> bool {
        matches!(self, Selector::Fourth | Selector::Total)
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Selector::First => "first",
            Selector::Second => "second",
            Selector::Third => "third",
            Selector::Fourth => "fourth",
            Selector::Total => "total",
            Selector::Baseline(name) => name,
        };
        f.pad(s)
    }
}

impl FromStr for Selector {
    type Err = Error;
    /// Index sets by name; anything else is taken as a baseline name and
    /// checked against the registry when features are computed.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "first" => Selector::First,
            "second" => Selector::Second,
            "third" => Selector::Third,
            "fourth" => Selector::Fourth,
            "total" => Selector::Total,
            "" => return Err(Error::UnknownSelector(String::new())),
            other => Selector::Baseline(other.to_string()),
        })
    }
}

impl Serialize for Selector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Selector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Index settings shared by every featurisation call.
#[derive(Debug, Clone, Default)]
pub struct FeatureContext {
    pub density: DensityConvention,
    pub sim: SimConfig,
    pub baselines: BaselineRegistry,
}

impl FeatureContext {
    pub fn check(&self, selector: &Selector) -> Result<()> {
        match selector {
            Selector::Baseline(name) if self.baselines.get(name).is_none() => {
                Err(Error::UnknownSelector(name.clone()))
            }
            _ => Ok(()),
        }
    }
}

/// Feature vector of a single pair, in [`Selector::feature_names`] order.
pub fn featurize(
    g_train: &Graph,
    pair: (NodeId, NodeId),
    selector: &Selector,
    ctx: &FeatureContext,
) -> Result<Vec<f64>> {
    let mut v = featurize_batch(g_train, &[pair], selector, ctx)?;
    Ok(v.pop().expect("one pair in, one vector out"))
}

/// Feature vectors for many pairs; the global index shares one search per
/// first node across the batch.
pub fn featurize_batch(
    g_train: &Graph,
    pairs: &[(NodeId, NodeId)],
    selector: &Selector,
    ctx: &FeatureContext,
) -> Result<Vec<Vec<f64>>> {
    ctx.check(selector)?;
    let global = if selector.needs_global() {
        Some(SimCache::new().compute(g_train, pairs, &ctx.sim)?)
    } else {
        None
    };
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let local = if selector.needs_local() {
                Some(local_features(g_train, u, v, ctx.density)?)
            } else {
                None
            };
            let i4 = || global.as_ref().map(|s| s[i].value).unwrap_or(0.0);
            Ok(match selector {
                Selector::First => vec![local.unwrap().i1 as f64],
                Selector::Second => vec![local.unwrap().i2],
                Selector::Third => vec![local.unwrap().i3],
                Selector::Fourth => vec![i4()],
                Selector::Total => {
                    let l = local.unwrap();
                    vec![l.i1 as f64, l.i2, l.i3, i4()]
                }
                Selector::Baseline(name) => {
                    let index = ctx.baselines.get(name).expect("checked above");
                    vec![index.score(g_train, u, v)?]
                }
            })
        })
        .collect()
}

/// Featurises labelled pairs against the training graph.
pub fn featurize_examples(
    g_train: &Graph,
    pairs: &[LabeledPair],
    selector: &Selector,
    ctx: &FeatureContext,
) -> Result<Vec<LabeledExample>> {
    let raw: Vec<(NodeId, NodeId)> = pairs.iter().map(|p| (p.u, p.v)).collect();
    let features = featurize_batch(g_train, &raw, selector, ctx)?;
    Ok(pairs
        .iter()
        .zip(features)
        .map(|(p, features)| LabeledExample {
            pair: (p.u, p.v),
            ids: (g_train.original_id(p.u), g_train.original_id(p.v)),
            features,
            label: p.label,
        })
        .collect())
}

/// Disjoint example-index folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub folds: Vec<Vec<usize>>,
}

impl FoldAssignment {
    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }

    /// Every example index outside fold `f`, ascending.
    pub fn training_indices(&self, f: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != f)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        idx.sort_unstable();
        idx
    }
}

/// Seeded shuffle followed by round-robin assignment into `k` folds.
pub fn kfold_split(n_examples: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    if k > n_examples {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n_examples} examples into {k} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n_examples).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::with_capacity(n_examples / k + 1); k];
    for (i, ex) in order.into_iter().enumerate() {
        folds[i % k].push(ex);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldAssignment { folds })
}
