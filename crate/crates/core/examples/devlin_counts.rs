//! Order-only diagonal types: the big Ramsey degrees of the rationals.

use rado_ramsey::degrees::devlin_count;

fn main() -> rado_ramsey::Result<()> {
    for n in 1..=5 {
        println!("n = {n}: {}", devlin_count(n)?);
    }
    Ok(())
}
