// Degree-based edge similarity multiplied along minimum-hop paths, one pair
// at a time and in a batch that shares searches.

use linkpred::globalsim::{i4, SimCache, SimConfig, TieBreak};
use linkpred::Graph;

pub fn run_example() -> linkpred::Result<()> {
    // Two 2-hop routes from 0 to 3: through a hub (1) and through a quiet node (2).
    let g = Graph::from_edges([(0, 1), (1, 3), (0, 2), (2, 3), (1, 4), (1, 5), (3, 6)]);
    for tie_break in [TieBreak::MaxProduct, TieBreak::FirstFound] {
        let cfg = SimConfig {
            tie_break,
            ..SimConfig::default()
        };
        let s = i4(&g, g.index_of(0)?, g.index_of(3)?, &cfg)?;
        println!("{tie_break:?}: I4(0, 3) = {:.4} via {:?}", s.value, s.route);
    }

    let pairs: Vec<_> = [(0, 3), (0, 6), (0, 1), (4, 6)]
        .iter()
        .map(|&(a, b)| Ok((g.index_of(a)?, g.index_of(b)?)))
        .collect::<linkpred::Result<_>>()?;
    let cache = SimCache::new();
    let scores = cache.compute(&g, &pairs, &SimConfig::default())?;
    for (&(a, b), s) in pairs.iter().zip(&scores) {
        println!(
            "  ({}, {}) -> {:.4} {:?}",
            g.original_id(a),
            g.original_id(b),
            s.value,
            s.route
        );
    }
    println!("breadth-first searches: {}", cache.searches());
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
