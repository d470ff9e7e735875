//! Decodes a coding tree back into its graph, then recovers an induced
//! subgraph through the tree of a vertex subset.

use rado_ramsey::rado::graph6;
use rado_ramsey::{build_sr, decode_graph, tree_of_subgraph, AdjacencyOracle};

fn main() -> rado_ramsey::Result<()> {
    let oracle = AdjacencyOracle::parse_spec("seed:42")?;
    let s = build_sr(&oracle, 10)?;
    let g = decode_graph(&s);
    println!("G on 10 vertices: {} ({} edges)", graph6::encode(&g), g.edge_count());

    let u = [1, 4, 5, 8];
    let t = tree_of_subgraph(&u, &s)?;
    let h = decode_graph(&t);
    assert_eq!(h, g.induced(&u));
    println!("subset {u:?}: tree with {} nodes decodes to {:?}", t.len(), h.edges());
    Ok(())
}
