//! Big Ramsey degrees of small graphs, with the ordered copies that realize them.

use rado_ramsey::degrees::{big_ramsey_degree, enumerate_diagonal_types};
use rado_ramsey::{FiniteGraph, SimKind};

fn main() -> rado_ramsey::Result<()> {
    for name in ["K1", "K2", "E2", "P3", "K3", "E3"] {
        let g = FiniteGraph::named(name)?;
        let d = big_ramsey_degree(&g)?;
        let per_copy: Vec<u64> = d.ordered.iter().map(|c| c.count).collect();
        println!("T({name}) = {} over ordered copies {per_copy:?}", d.count);
    }
    for n in 1..=4 {
        println!("{n} vertices: {} diagonal types", enumerate_diagonal_types(n, SimKind::Full)?.len());
    }
    Ok(())
}
