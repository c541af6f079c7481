// Writing a labelled feature table as ARFF and reading it back.

use linkpred::export::{read_arff, write_arff};
use linkpred::graph::{read_edge_list, symmetrize};
use linkpred::sampling::{
    featurize_examples, generate_examples, FeatureContext, SamplingConfig, Selector,
};

pub fn run_example() -> linkpred::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/social.txt");
    let g = symmetrize(&read_edge_list(path.as_ref())?);
    let cfg = SamplingConfig {
        positive_fraction: 0.25,
        seed: 1,
        ..Default::default()
    };
    let (train, pairs) = generate_examples(&g, &cfg)?;
    let examples =
        featurize_examples(&train, &pairs, &Selector::Total, &FeatureContext::default())?;

    let mut buf = Vec::new();
    write_arff(
        &mut buf,
        "social",
        &Selector::Total.feature_names(),
        &examples,
    )?;
    let text = String::from_utf8(buf).expect("ARFF is UTF-8");
    print!("{text}");

    let table = read_arff(text.as_bytes())?;
    assert_eq!(table.rows.len(), examples.len());
    assert!(table
        .rows
        .iter()
        .zip(&examples)
        .all(|(r, e)| r == &e.features));
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
