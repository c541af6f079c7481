// AdaBoost over shallow weighted decision trees on an XOR pattern, which no
// single split can separate.

use linkpred::boost::{fit_traced, BoostConfig, BoostModel, Label, TrainingSet};

pub fn run_example() -> linkpred::Result<()> {
    let set = TrainingSet::new(
        vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ],
        vec![
            Label::Negative,
            Label::Negative,
            Label::Positive,
            Label::Positive,
        ],
    )?;
    for max_depth in [1, 2] {
        let cfg = BoostConfig {
            rounds: 20,
            max_depth,
            seed: 0,
        };
        let (model, trace) = fit_traced(&set, &cfg)?;
        let correct = set
            .features
            .iter()
            .zip(&set.labels)
            .filter(|(x, y)| model.predict(x).map(|p| p.0 == **y).unwrap_or(false))
            .count();
        println!(
            "depth {max_depth}: {} rounds, {correct}/4 correct, first-round weights {:?}",
            model.rounds.len(),
            trace.weights[0].as_slice()
        );
        for r in &model.rounds {
            println!("    epsilon {:.3} theta {:.3}", r.epsilon, r.theta);
        }
        let back = BoostModel::from_json(&model.to_json()?)?;
        assert_eq!(back, model);
    }
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
