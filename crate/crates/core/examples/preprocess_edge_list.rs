// Parse a directed SNAP-style edge list and keep only reciprocated links.

use linkpred::graph::{parse_edge_list, preprocess, EdgeSemantics};

const EDGES: &str = "\
# follower list
1 2
2 1
2 3
3 2
3 4
4 1
";

pub fn run_example() -> linkpred::Result<()> {
    let edges = parse_edge_list(EDGES.as_bytes())?;
    let (graph, meta) = preprocess("toy", &edges, EdgeSemantics::detect(&edges));
    println!(
        "{:?}: {} nodes / {} pairs -> {} nodes / {} edges",
        meta.semantics, meta.nodes_before, meta.edges_before, meta.nodes_after, meta.edges_after
    );
    for (u, v) in graph.edges() {
        println!("  {} -- {}", graph.original_id(u), graph.original_id(v));
    }
    assert_eq!(meta.semantics, EdgeSemantics::Directed);
    assert_eq!(graph.edge_count(), 2);
    Ok(())
}

fn main() -> linkpred::Result<()> {
    run_example()
}
