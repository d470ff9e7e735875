//! Builds `r_k(𝕊_ℝ)` for the BIT graph and prints its coding nodes and DOT.

use rado_ramsey::{build_sr, AdjacencyOracle};

fn main() -> rado_ramsey::Result<()> {
    let tree = build_sr(&AdjacencyOracle::Bit, 5)?;
    for (n, c) in tree.coding().iter().enumerate() {
        println!("c_{n} = {c}");
    }
    println!("{} nodes on levels {:?}", tree.len(), tree.levels());
    print!("{}", tree.to_dot());
    Ok(())
}
