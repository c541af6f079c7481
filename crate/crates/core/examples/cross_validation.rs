// Hold out links, draw friend-of-friend non-links, featurise on the training
// graph and cross-validate a boosted model.

use linkpred::boost::BoostConfig;
use linkpred::eval::cross_validate;
use linkpred::graph::{read_edge_list, symmetrize};
use linkpred::sampling::{
    featurize_examples, generate_examples, kfold_split, FeatureContext, SamplingConfig, Selector,
};

pub fn run_example() -> linkpred::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/community.txt");
    let g = symmetrize(&read_edge_list(path.as_ref())?);
    let (train, pairs) = generate_examples(
        &g,
        &SamplingConfig {
            seed: 3,
            ..Default::default()
        },
    )?;
    println!(
        "{} nodes, {} edges; {} labelled pairs",
        g.node_count(),
        g.edge_count(),
        pairs.len()
    );

    let folds = kfold_split(pairs.len(), 10, 3)?;
    let boost = BoostConfig {
        rounds: 20,
        ..Default::default()
    };
    for selector in [Selector::First, Selector::Fourth, Selector::Total] {
        let examples = featurize_examples(&train, &pairs, &selector, &FeatureContext::default())?;
        let cv = cross_validate(&examples, &folds, &boost)?;
        println!(
            "{selector:>6}: precision {:.3} recall {:.3} fitness {:.3}",
            cv.mean.precision, cv.mean.recall, cv.mean.fitness
        );
    }
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
