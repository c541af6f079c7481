// Common neighbours and the densities of the common and combined
// neighbourhoods of a pair.

use linkpred::indices::{local_features, set_density, DensityConvention};
use linkpred::Graph;

pub fn run_example() -> linkpred::Result<()> {
    // Two friends (1, 5) who share friend 2; 1's circle is tightly knit.
    let g = Graph::from_edges([
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (3, 4),
        (2, 5),
        (5, 6),
        (5, 7),
    ]);
    let (u, v) = (g.index_of(1)?, g.index_of(5)?);
    for conv in [DensityConvention::Standard, DensityConvention::Literal] {
        let f = local_features(&g, u, v, conv)?;
        println!(
            "{conv:?}: I1 = {}, I2 = {:.3}, I3 = {:.3}",
            f.i1, f.i2, f.i3
        );
    }
    let circle: Vec<_> = [1, 2, 3, 4]
        .iter()
        .map(|&x| g.index_of(x))
        .collect::<Result<_, _>>()?;
    println!(
        "density of {{1,2,3,4}} = {:.3}",
        set_density(&g, &circle, DensityConvention::Standard)?
    );
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
