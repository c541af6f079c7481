//! Precision / recall / fitness, k-fold cross-validation and the
//! dataset × K × selector experiment grid.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boost::{fit, BoostConfig, BoostModel, Label, TrainingSet};
use crate::error::{Error, Result};
use crate::globalsim::{SimConfig, TieBreak};
use crate::graph::{subsample, DatasetMeta, Graph};
use crate::indices::DensityConvention;
use crate::sampling::{
    featurize_examples, generate_examples, kfold_split, CandidatePolicy, FeatureContext,
    FoldAssignment, LabeledExample, SamplingConfig, Selector,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn confusion(predictions: &[Label], labels: &[Label]) -> Result<ConfusionCounts> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: predictions.len(),
        });
    }
    let mut c = ConfusionCounts::default();
    for (p, y) in predictions.iter().zip(labels) {
        match (p, y) {
            (Label::Positive, Label::Positive) => c.tp += 1,
            (Label::Positive, Label::Negative) => c.fp += 1,
            (Label::Negative, Label::Positive) => c.fn_ += 1,
            (Label::Negative, Label::Negative) => c.tn += 1,
        }
    }
    Ok(c)
}

/// `tp / (tp + fp)`, or 0 when nothing was predicted positive.
pub fn precision(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fp)
}

/// `tp / (tp + fn)`, or 0 when there are no positives.
pub fn recall(c: &ConfusionCounts) -> f64 {
    ratio(c.tp, c.tp + c.fn_)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn fitness(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub fitness: f64,
}

impl Metrics {
    pub fn from_counts(c: &ConfusionCounts) -> Self {
        let (p, r) = (precision(c), recall(c));
        Metrics {
            precision: p,
            recall: r,
            fitness: fitness(p, r),
        }
    }

    /// Component-wise arithmetic mean.
    pub fn mean(items: &[Metrics]) -> Metrics {
        let n = items.len().max(1) as f64;
        let sum = |f: fn(&Metrics) -> f64| items.iter().map(f).sum::<f64>() / n;
        Metrics {
            precision: sum(|m| m.precision),
            recall: sum(|m| m.recall),
            fitness: sum(|m| m.fitness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub counts: ConfusionCounts,
    pub metrics: Metrics,
    pub rounds_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub folds: Vec<FoldResult>,
    /// Macro average over folds.
    pub mean: Metrics,
}

pub fn training_set(examples: &[LabeledExample]) -> Result<TrainingSet> {
    TrainingSet::new(
        examples.iter().map(|e| e.features.clone()).collect(),
        examples.iter().map(|e| e.label).collect(),
    )
}

/// Trains on all folds but one and tests on the held-out fold, for every fold.
pub fn cross_validate(
    examples: &[LabeledExample],
    folds: &FoldAssignment,
    cfg: &BoostConfig,
) -> Result<CvResult> {
    if folds.len() < 2 {
        return Err(Error::InvalidArgument(
            "cross-validation needs at least 2 folds".into(),
        ));
    }
    let all = training_set(examples)?;
    let results: Vec<FoldResult> = (0..folds.len())
        .into_par_iter()
        .map(|f| {
            let train = all.subset(&folds.training_indices(f));
            if !(train.labels.contains(&Label::Positive) && train.labels.contains(&Label::Negative))
            {
                return Err(Error::Fold {
                    fold: f,
                    message: "training portion contains a single class".into(),
                });
            }
            let model = fit(&train, cfg).map_err(|e| Error::Fold {
                fold: f,
                message: e.to_string(),
            })?;
            let test = all.subset(&folds.folds[f]);
            let predictions = test
                .features
                .iter()
                .map(|x| model.predict(x).map(|(label, _)| label))
                .collect::<Result<Vec<_>>>()?;
            let counts = confusion(&predictions, &test.labels)?;
            Ok(FoldResult {
                fold: f,
                counts,
                metrics: Metrics::from_counts(&counts),
                rounds_used: model.rounds.len(),
            })
        })
        .collect::<Result<_>>()?;
    let per_fold: Vec<Metrics> = results.iter().map(|r| r.metrics).collect();
    Ok(CvResult {
        mean: Metrics::mean(&per_fold),
        folds: results,
    })
}

/// Stable child seed for one purpose within the grid.
pub fn derive_seed(master: u64, purpose: &str, k: usize, selector: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(purpose.as_bytes());
    h.update([0]);
    h.update((k as u64).to_le_bytes());
    h.update(selector.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k_values: Vec<usize>,
    pub selectors: Vec<Selector>,
    pub positive_fraction: f64,
    pub negative_ratio: f64,
    pub candidate_policy: CandidatePolicy,
    pub rounds: usize,
    pub max_depth: usize,
    pub folds: usize,
    pub seed: u64,
    pub density_convention: DensityConvention,
    pub tie_break: TieBreak,
    pub max_hops: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let s = SamplingConfig::default();
        let b = BoostConfig::default();
        let g = SimConfig::default();
        ExperimentConfig {
            k_values: vec![1000],
            selectors: Selector::INDEX_SETS.to_vec(),
            positive_fraction: s.positive_fraction,
            negative_ratio: s.negative_ratio,
            candidate_policy: s.candidate_policy,
            rounds: b.rounds,
            max_depth: b.max_depth,
            folds: 10,
            seed: 0,
            density_convention: DensityConvention::Standard,
            tie_break: g.tie_break,
            max_hops: g.max_hops,
        }
    }
}

impl ExperimentConfig {
    pub fn sim(&self) -> SimConfig {
        SimConfig {
            max_hops: self.max_hops,
            tie_break: self.tie_break,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(Error::Config(
                "k_values must be a non-empty list of positive counts".into(),
            ));
        }
        if self.selectors.is_empty() {
            return Err(Error::Config("selectors must not be empty".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if self.max_hops < 2 {
            return Err(Error::Config("max_hops must be at least 2".into()));
        }
        SamplingConfig {
            positive_fraction: self.positive_fraction,
            negative_ratio: self.negative_ratio,
            candidate_policy: self.candidate_policy,
            seed: 0,
        }
        .validate()
    }
}

/// Effective settings of a run, including the protocol choices that are not
/// configurable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(flatten)]
    pub config: ExperimentConfig,
    pub subsample_method: String,
    pub feature_graph: String,
    pub averaging: String,
    pub single_feature_protocol: String,
}

impl ConfigEcho {
    pub fn new(config: ExperimentConfig) -> Self {
        ConfigEcho {
            config,
            subsample_method: "bfs-snowball".into(),
            feature_graph: "training graph with held-out positives removed".into(),
            averaging: "macro over folds".into(),
            single_feature_protocol: "boosted trees on a one-dimensional feature".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSeeds {
    pub subsample: u64,
    pub examples: u64,
    pub folds: u64,
    pub boost: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub k: usize,
    pub selector: Selector,
    pub nodes: usize,
    pub edges: usize,
    pub n_examples: usize,
    pub n_positive: usize,
    pub seeds: CellSeeds,
    pub mean: Metrics,
    pub folds: Vec<FoldResult>,
    pub wall_clock_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub dataset: DatasetMeta,
    pub config: ConfigEcho,
    pub rows: Vec<ReportRow>,
}

/// Per-cell artefacts kept alongside the report.
#[derive(Debug, Clone)]
pub struct CellOutput {
    pub k: usize,
    pub selector: Selector,
    pub feature_names: Vec<String>,
    pub examples: Vec<LabeledExample>,
    /// Ensemble fitted on every example of the cell.
    pub model: Option<BoostModel>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub cells: Vec<CellOutput>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Keep {
    pub examples: bool,
    pub models: bool,
}

fn tag(k: usize, selector: &Selector, e: Error) -> Error {
    Error::Cell {
        k,
        selector: selector.to_string(),
        source: Box::new(e),
    }
}

/// Runs every (K, selector) cell on an already preprocessed graph.
///
/// For each K the subsample, held-out positives, negatives and folds are
/// shared by all selectors, so selectors are compared on identical examples.
pub fn run_experiment(
    graph: &Graph,
    dataset: &DatasetMeta,
    cfg: &ExperimentConfig,
    ctx: &FeatureContext,
    keep: Keep,
) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    for s in &cfg.selectors {
        ctx.check(s)?;
    }
    let mut rows = Vec::new();
    let mut cells = Vec::new();

    for &k in &cfg.k_values {
        if k > graph.node_count() {
            return Err(Error::Config(format!(
                "k={k} exceeds the {} nodes left after preprocessing",
                graph.node_count()
            )));
        }
        let sub_seed = derive_seed(cfg.seed, "subsample", k, "");
        let ex_seed = derive_seed(cfg.seed, "examples", k, "");
        let fold_seed = derive_seed(cfg.seed, "folds", k, "");
        let shared = Selector::Total;
        let sub = subsample(graph, k, sub_seed).map_err(|e| tag(k, &shared, e))?;
        let sampling = SamplingConfig {
            positive_fraction: cfg.positive_fraction,
            negative_ratio: cfg.negative_ratio,
            candidate_policy: cfg.candidate_policy,
            seed: ex_seed,
        };
        let (train, pairs) = generate_examples(&sub, &sampling).map_err(|e| tag(k, &shared, e))?;
        let folds =
            kfold_split(pairs.len(), cfg.folds, fold_seed).map_err(|e| tag(k, &shared, e))?;
        let n_positive = pairs.iter().filter(|p| p.label == Label::Positive).count();

        let results: Vec<(ReportRow, CellOutput)> = cfg
            .selectors
            .par_iter()
            .map(|selector| {
                let started = Instant::now();
                let boost = BoostConfig {
                    rounds: cfg.rounds,
                    max_depth: cfg.max_depth,
                    seed: derive_seed(cfg.seed, "boost", k, &selector.to_string()),
                };
                let run = || -> Result<_> {
                    let examples = featurize_examples(&train, &pairs, selector, ctx)?;
                    let cv = cross_validate(&examples, &folds, &boost)?;
                    let model = if keep.models {
                        Some(fit(&training_set(&examples)?, &boost)?)
                    } else {
                        None
                    };
                    Ok((examples, cv, model))
                };
                let (examples, cv, model) = run().map_err(|e| tag(k, selector, e))?;
                let row = ReportRow {
                    k,
                    selector: selector.clone(),
                    nodes: sub.node_count(),
                    edges: sub.edge_count(),
                    n_examples: examples.len(),
                    n_positive,
                    seeds: CellSeeds {
                        subsample: sub_seed,
                        examples: ex_seed,
                        folds: fold_seed,
                        boost: boost.seed,
                    },
                    mean: cv.mean,
                    folds: cv.folds,
                    wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
                };
                let cell = CellOutput {
                    k,
                    selector: selector.clone(),
                    feature_names: selector.feature_names(),
                    examples: if keep.examples { examples } else { Vec::new() },
                    model,
                };
                Ok((row, cell))
            })
            .collect::<Result<_>>()?;
        for (row, cell) in results {
            rows.push(row);
            cells.push(cell);
        }
    }

    Ok(ExperimentOutcome {
        report: ExperimentReport {
            schema_version: SCHEMA_VERSION,
            dataset: dataset.clone(),
            config: ConfigEcho::new(cfg.clone()),
            rows,
        },
        cells,
    })
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON with every wall-clock field zeroed; identical inputs give identical bytes.
    pub fn to_canonical_json(&self) -> Result<String> {
        let mut copy = self.clone();
        for row in &mut copy.rows {
            row.wall_clock_ms = 0.0;
        }
        copy.to_json()
    }

    pub fn row(&self, k: usize, selector: &Selector) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.k == k && &r.selector == selector)
    }

    /// `dataset,k,selector,fold,precision,recall,fitness`; one line per fold
    /// plus a `mean` line per cell.
    pub fn write_metrics_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "dataset,k,selector,fold,precision,recall,fitness")?;
        for row in &self.rows {
            for f in &row.folds {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    self.dataset.name,
                    row.k,
                    row.selector,
                    f.fold,
                    f.metrics.precision,
                    f.metrics.recall,
                    f.metrics.fitness
                )?;
            }
            writeln!(
                w,
                "{},{},{},mean,{},{},{}",
                self.dataset.name,
                row.k,
                row.selector,
                row.mean.precision,
                row.mean.recall,
                row.mean.fitness
            )?;
        }
        Ok(())
    }

    /// Plot table for one metric: one line per K, one column per selector.
    pub fn write_plot_csv<W: Write>(&self, metric: PlotMetric, mut w: W) -> std::io::Result<()> {
        let selectors = &self.config.config.selectors;
        let names: Vec<String> = selectors.iter().map(Selector::to_string).collect();
        writeln!(w, "k,{}", names.join(","))?;
        for &k in &self.config.config.k_values {
            let values: Vec<String> = selectors
                .iter()
                .map(|s| {
                    self.row(k, s)
                        .map(|r| metric.pick(&r.mean).to_string())
                        .unwrap_or_default()
                })
                .collect();
            writeln!(w, "{k},{}", values.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    Precision,
    Recall,
    Fitness,
}

impl PlotMetric {
    pub const ALL: [PlotMetric; 3] = [
        PlotMetric::Precision,
        PlotMetric::Recall,
        PlotMetric::Fitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlotMetric::Precision => "precision",
            PlotMetric::Recall => "recall",
            PlotMetric::Fitness => "fitness",
        }
    }

    fn pick(self, m: &Metrics) -> f64 {
        match self {
            PlotMetric::Precision => m.precision,
            PlotMetric::Recall => m.recall,
            PlotMetric::Fitness => m.fitness,
        }
    }
}
