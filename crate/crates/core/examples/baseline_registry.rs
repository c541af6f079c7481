// Registering a custom comparison index next to the built-in one.

use linkpred::baselines::{BaselineIndex, BaselineRegistry};
use linkpred::Graph;

pub fn run_example() -> linkpred::Result<()> {
    let mut registry = BaselineRegistry::with_defaults();
    registry.register(BaselineIndex::new("jaccard", |g: &Graph, u, v| {
        let (a, b) = (g.neighbors(u)?, g.neighbors(v)?);
        let common = a.iter().filter(|x| b.contains(x)).count();
        let union = a.len() + b.len() - common;
        Ok(if union == 0 {
            0.0
        } else {
            common as f64 / union as f64
        })
    }))?;

    let g = Graph::from_edges([(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 5)]);
    let (u, v) = (g.index_of(0)?, g.index_of(4)?);
    for name in registry.names() {
        let score = registry.get(name).unwrap().score(&g, u, v)?;
        println!("{name:>8}: {score:.4}");
    }
    assert!(registry
        .register(BaselineIndex::new("sam", |_, _, _| Ok(0.0)))
        .is_err());
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
