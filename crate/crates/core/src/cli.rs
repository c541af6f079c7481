//! `linkpred` command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime error.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::baselines::BaselineRegistry;
use crate::boost::BoostModel;
use crate::config::{RunConfig, SemanticsChoice};
use crate::datasets::{self, Cache, Http};
use crate::error::{Error, Result};
use crate::eval::{run_experiment, ExperimentReport, Keep, PlotMetric};
use crate::export::{write_arff, write_features_csv};
use crate::globalsim::{i4, SimConfig, TieBreak};
use crate::graph::{preprocess, read_edge_list, DatasetMeta, EdgeSemantics, Graph};
use crate::indices::{local_features, DensityConvention};
use crate::sampling::{
    featurize_examples, generate_examples, CandidatePolicy, FeatureContext, SamplingConfig,
    Selector,
};

/// `println!` that tolerates a closed stdout (e.g. piped into `head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Debug, Parser)]
#[command(
    name = "linkpred",
    version,
    about = "Link prediction from local and global pair indices"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalOpts {
    /// Master seed (overrides the config file's `seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Never touch the network.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Dataset cache directory (default: $LINKPRED_CACHE or ~/.cache/linkpred).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download (or import) a known dataset into the local cache.
    Fetch {
        /// One of: facebook, hepth, brightkite.
        dataset: String,
        /// Import this local file instead of downloading.
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Apply the reciprocity filter and report node/edge counts.
    Preprocess {
        /// Dataset name or edge-list path.
        dataset: String,
        #[arg(long, value_enum, default_value = "auto")]
        semantics: SemanticsArg,
        /// Write the preprocessed undirected edge list here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the pair indices of two nodes (original ids).
    Score {
        graph: String,
        u: u64,
        v: u64,
        #[arg(long, value_enum, default_value = "auto")]
        semantics: SemanticsArg,
        /// Comma-separated baseline names to print as well.
        #[arg(long, value_delimiter = ',')]
        baselines: Vec<String>,
        /// Trained model (JSON) to classify the pair with.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        index: IndexOpts,
    },
    /// Run an experiment grid described by a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Build a labelled example set and write it as ARFF.
    ExportArff {
        graph: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "total")]
        selector: String,
        #[arg(long, default_value = "linkpred")]
        relation: String,
        #[arg(long, value_enum, default_value = "auto")]
        semantics: SemanticsArg,
        #[arg(long, default_value_t = 0.1)]
        positive_fraction: f64,
        #[arg(long, default_value_t = 1.0)]
        negative_ratio: f64,
        #[arg(long, default_value = "distance-2")]
        candidate_policy: String,
        #[command(flatten)]
        index: IndexOpts,
    },
}

#[derive(Debug, Args, Clone)]
pub struct IndexOpts {
    #[arg(long, value_enum, default_value = "standard")]
    pub density_convention: DensityArg,
    #[arg(long, value_enum, default_value = "max-product")]
    pub tie_break: TieBreakArg,
    #[arg(long, default_value_t = 6)]
    pub max_hops: u32,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum SemanticsArg {
    Auto,
    Directed,
    Undirected,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum DensityArg {
    Standard,
    Literal,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum TieBreakArg {
    MaxProduct,
    FirstFound,
}

impl From<SemanticsArg> for SemanticsChoice {
    fn from(a: SemanticsArg) -> Self {
        match a {
            SemanticsArg::Auto => SemanticsChoice::Auto,
            SemanticsArg::Directed => SemanticsChoice::Directed,
            SemanticsArg::Undirected => SemanticsChoice::Undirected,
        }
    }
}

impl IndexOpts {
    fn context(&self, baselines: BaselineRegistry) -> FeatureContext {
        FeatureContext {
            density: match self.density_convention {
                DensityArg::Standard => DensityConvention::Standard,
                DensityArg::Literal => DensityConvention::Literal,
            },
            sim: SimConfig {
                max_hops: self.max_hops,
                tie_break: match self.tie_break {
                    TieBreakArg::MaxProduct => TieBreak::MaxProduct,
                    TieBreakArg::FirstFound => TieBreak::FirstFound,
                },
            },
            baselines,
        }
    }
}

impl GlobalOpts {
    fn cache(&self) -> Cache {
        Cache::new(self.cache.clone().unwrap_or_else(Cache::default_root))
    }
}

/// Loads a manifest dataset (through the cache) or an edge-list path and
/// preprocesses it.
pub fn load_dataset(
    dataset: &str,
    semantics: SemanticsChoice,
    cache: &Cache,
    offline: bool,
) -> Result<(Graph, DatasetMeta)> {
    let (path, name, default_semantics) = match datasets::lookup(dataset) {
        Some(spec) => {
            let fetched = cache.fetch(spec, offline, &Http)?;
            (fetched.path, spec.name.to_string(), Some(spec.semantics))
        }
        None => {
            let p = PathBuf::from(dataset);
            let name = p
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| dataset.to_string());
            (p, name, None)
        }
    };
    let edges = read_edge_list(&path)?;
    let semantics = semantics
        .fixed()
        .or(default_semantics)
        .unwrap_or_else(|| EdgeSemantics::detect(&edges));
    Ok(preprocess(&name, &edges, semantics))
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    let pool = b
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(format!("creating {}", path.display()), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn cell_stem(k: usize, selector: &Selector) -> String {
    format!("k{k}_{selector}")
}

/// Files written by [`cmd_run`].
#[derive(Debug, Clone, Default)]
pub struct RunOutputs {
    pub report: PathBuf,
    pub metrics_csv: PathBuf,
    pub plots: Vec<PathBuf>,
    pub arff: Vec<PathBuf>,
    pub features_csv: Vec<PathBuf>,
    pub models: Vec<PathBuf>,
}

/// Runs a config end to end and writes every requested output.
pub fn cmd_run(
    mut cfg: RunConfig,
    global: &GlobalOpts,
    output_dir: Option<PathBuf>,
) -> Result<(ExperimentReport, RunOutputs)> {
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    let registry = BaselineRegistry::with_defaults();
    cfg.validate(&registry)?;
    let experiment = cfg.experiment()?;

    let (graph, meta) = load_dataset(&cfg.dataset, cfg.semantics, &global.cache(), global.offline)?;
    let ctx = FeatureContext {
        density: cfg.density_convention,
        sim: experiment.sim(),
        baselines: registry,
    };
    let keep = Keep {
        examples: cfg.export_arff || cfg.export_features_csv,
        models: cfg.save_models,
    };
    let outcome = with_pool(global.jobs, || {
        run_experiment(&graph, &meta, &experiment, &ctx, keep)
    })??;

    let dir = &cfg.output_dir;
    let mut out = RunOutputs {
        report: dir.join("report.json"),
        metrics_csv: dir.join("metrics.csv"),
        ..Default::default()
    };
    write_text(&out.report, &outcome.report.to_json()?)?;
    let io = |p: &Path| {
        let p = p.to_path_buf();
        move |e| Error::io(format!("writing {}", p.display()), e)
    };
    outcome
        .report
        .write_metrics_csv(create(&out.metrics_csv)?)
        .map_err(io(&out.metrics_csv))?;
    for metric in PlotMetric::ALL {
        let path = dir.join(format!("plot_{}.csv", metric.name()));
        outcome
            .report
            .write_plot_csv(metric, create(&path)?)
            .map_err(io(&path))?;
        out.plots.push(path);
    }
    for cell in &outcome.cells {
        let stem = cell_stem(cell.k, &cell.selector);
        if cfg.export_arff {
            let path = dir.join("features").join(format!("{stem}.arff"));
            let relation = format!("{}_{stem}", meta.name);
            write_arff(
                create(&path)?,
                &relation,
                &cell.feature_names,
                &cell.examples,
            )?;
            out.arff.push(path);
        }
        if cfg.export_features_csv {
            let path = dir.join("features").join(format!("{stem}.csv"));
            write_features_csv(create(&path)?, &cell.feature_names, &cell.examples)?;
            out.features_csv.push(path);
        }
        if let Some(model) = &cell.model {
            let mut model = model.clone();
            model.feature_names = cell.feature_names.clone();
            let path = dir.join("models").join(format!("{stem}.json"));
            write_text(&path, &model.to_json()?)?;
            out.models.push(path);
        }
    }
    Ok((outcome.report, out))
}

/// Named index values of one pair on `g`.
pub fn score_pair(
    g: &Graph,
    u: u64,
    v: u64,
    ctx: &FeatureContext,
    baselines: &[String],
) -> Result<serde_json::Value> {
    let (a, b) = (g.index_of(u)?, g.index_of(v)?);
    let local = local_features(g, a, b, ctx.density)?;
    let global = i4(g, a, b, &ctx.sim)?;
    let mut named: BTreeMap<String, f64> = BTreeMap::new();
    named.insert("i1".into(), local.i1 as f64);
    named.insert("i2".into(), local.i2);
    named.insert("i3".into(), local.i3);
    named.insert("i4".into(), global.value);
    let mut base = serde_json::Map::new();
    for name in baselines {
        let index = ctx
            .baselines
            .get(name)
            .ok_or_else(|| Error::UnknownSelector(name.clone()))?;
        let s = index.score(g, a, b)?;
        named.insert(name.clone(), s);
        base.insert(name.clone(), json!(s));
    }
    Ok(json!({
        "u": u,
        "v": v,
        "vector": [local.i1 as f64, local.i2, local.i3, global.value],
        "i1": local.i1,
        "i2": local.i2,
        "i3": local.i3,
        "i4": global.value,
        "i4_route": global.route,
        "baselines": base,
        "named": named,
    }))
}

/// Classifies a scored pair; the model's feature names pick the inputs
/// (a nameless 4-feature model is read as `i1..i4`).
pub fn classify_scored(
    model: &BoostModel,
    scored: &serde_json::Value,
) -> Result<serde_json::Value> {
    let names: Vec<String> = if model.feature_names.is_empty() && model.n_features == 4 {
        ["i1", "i2", "i3", "i4"].map(String::from).to_vec()
    } else {
        model.feature_names.clone()
    };
    let x = names
        .iter()
        .map(|n| {
            scored["named"][n]
                .as_f64()
                .ok_or_else(|| Error::UnknownSelector(n.clone()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (label, margin) = model.predict(&x)?;
    Ok(json!({ "label": label, "margin": margin, "features": names }))
}

fn run_command(cli: Cli) -> Result<()> {
    let global = cli.global;
    match cli.command {
        Command::Fetch { dataset, from } => {
            let spec = datasets::lookup(&dataset).ok_or_else(|| {
                Error::Config(format!(
                    "unknown dataset {dataset:?} (known: {})",
                    datasets::MANIFEST
                        .iter()
                        .map(|d| d.name)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
            let cache = global.cache();
            let fetched = match from {
                Some(file) => cache.import(spec, &file)?,
                None => cache.fetch(spec, global.offline, &Http)?,
            };
            outln!(
                "{}",
                json!({
                    "dataset": spec.name,
                    "path": fetched.path,
                    "sha256": fetched.sha256,
                    "cache_hit": fetched.cache_hit,
                })
            );
        }
        Command::Preprocess {
            dataset,
            semantics,
            out,
        } => {
            let (graph, meta) =
                load_dataset(&dataset, semantics.into(), &global.cache(), global.offline)?;
            if let Some(path) = out {
                let mut w = create(&path)?;
                let io = |e| Error::io(format!("writing {}", path.display()), e);
                for (u, v) in graph.edges() {
                    writeln!(w, "{}\t{}", graph.original_id(u), graph.original_id(v))
                        .map_err(io)?;
                }
                w.flush().map_err(io)?;
            }
            outln!("{}", serde_json::to_string_pretty(&meta)?);
        }
        Command::Score {
            graph,
            u,
            v,
            semantics,
            baselines,
            model,
            index,
        } => {
            let (g, _) = load_dataset(&graph, semantics.into(), &global.cache(), global.offline)?;
            let ctx = index.context(BaselineRegistry::with_defaults());
            let mut scored = score_pair(&g, u, v, &ctx, &baselines)?;
            if let Some(path) = model {
                let text = fs::read_to_string(&path)
                    .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
                let model = BoostModel::from_json(&text)?;
                scored["prediction"] = classify_scored(&model, &scored)?;
            }
            if let Some(obj) = scored.as_object_mut() {
                obj.remove("named");
            }
            outln!("{}", serde_json::to_string_pretty(&scored)?);
        }
        Command::Run { config, output_dir } => {
            let cfg = RunConfig::load(&config)?;
            let (report, outputs) = cmd_run(cfg, &global, output_dir)?;
            for row in &report.rows {
                outln!(
                    "k={:<6} {:<8} precision={:.4} recall={:.4} fitness={:.4}",
                    row.k,
                    row.selector,
                    row.mean.precision,
                    row.mean.recall,
                    row.mean.fitness
                );
            }
            eprintln!("report written to {}", outputs.report.display());
        }
        Command::ExportArff {
            graph,
            out,
            selector,
            relation,
            semantics,
            positive_fraction,
            negative_ratio,
            candidate_policy,
            index,
        } => {
            let (g, _) = load_dataset(&graph, semantics.into(), &global.cache(), global.offline)?;
            let ctx = index.context(BaselineRegistry::with_defaults());
            let selector: Selector = selector.parse()?;
            ctx.check(&selector)
                .map_err(|e| Error::Config(e.to_string()))?;
            let sampling = SamplingConfig {
                positive_fraction,
                negative_ratio,
                candidate_policy: candidate_policy.parse::<CandidatePolicy>()?,
                seed: global.seed.unwrap_or(0),
            };
            sampling.validate()?;
            let examples = with_pool(global.jobs, || -> Result<_> {
                let (train, pairs) = generate_examples(&g, &sampling)?;
                featurize_examples(&train, &pairs, &selector, &ctx)
            })??;
            write_arff(
                create(&out)?,
                &relation,
                &selector.feature_names(),
                &examples,
            )?;
            eprintln!("{} examples written to {}", examples.len(), out.display());
        }
    }
    Ok(())
}

/// Parses arguments, runs, and returns the process exit code. Errors go to
/// standard error as one JSON object.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_command(cli) {
        Ok(()) => 0,
        Err(e) => {
            let kind = match e.kind() {
                crate::error::ErrorKind::Config => "config",
                crate::error::ErrorKind::Data => "data",
                crate::error::ErrorKind::Runtime => "runtime",
            };
            eprintln!(
                "{}",
                json!({ "error": { "kind": kind, "message": e.to_string() } })
            );
            e.exit_code()
        }
    }
}
