//! Audits the one-point extension property of two oracles on a finite window.

use rado_ramsey::rado::check_extension_property;
use rado_ramsey::AdjacencyOracle;

fn main() -> rado_ramsey::Result<()> {
    for oracle in [AdjacencyOracle::Bit, AdjacencyOracle::SeededRandom(7)] {
        for (depth, pool, size) in [(16, 6, 1), (64, 6, 2), (64, 6, 3)] {
            let r = check_extension_property(&oracle, depth, pool, size)?;
            println!(
                "{oracle:?}: depth {depth}, pool {pool}, |U|+|V| <= {size}: {} pairs, {} without a witness",
                r.pairs_checked, r.failure_count
            );
        }
    }
    Ok(())
}
