// A seeded (K, selector) grid with report, metrics CSV and plot series.

use linkpred::eval::{run_experiment, ExperimentConfig, Keep, PlotMetric};
use linkpred::graph::{preprocess, read_edge_list, EdgeSemantics};
use linkpred::sampling::{FeatureContext, Selector};

pub fn run_example() -> linkpred::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/community.txt");
    let (g, meta) = preprocess(
        "community",
        &read_edge_list(path.as_ref())?,
        EdgeSemantics::Undirected,
    );
    let mut selectors = Selector::INDEX_SETS.to_vec();
    selectors.push(Selector::Baseline("sam".into()));
    let cfg = ExperimentConfig {
        k_values: vec![200, 400],
        selectors,
        rounds: 20,
        folds: 5,
        seed: 42,
        ..Default::default()
    };
    let ctx = FeatureContext {
        baselines: linkpred::baselines::BaselineRegistry::with_defaults(),
        ..Default::default()
    };
    let outcome = run_experiment(&g, &meta, &cfg, &ctx, Keep::default())?;
    let mut csv = Vec::new();
    outcome
        .report
        .write_plot_csv(PlotMetric::Fitness, &mut csv)
        .map_err(|e| linkpred::Error::io("plot", e))?;
    print!("{}", String::from_utf8_lossy(&csv));
    let canonical = outcome.report.to_canonical_json()?;
    println!(
        "report: {} rows, {} bytes of canonical JSON",
        outcome.report.rows.len(),
        canonical.len()
    );
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
