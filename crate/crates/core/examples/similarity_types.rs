//! Canonical forms decide strong similarity in both kinds.

use rado_ramsey::{canonical_form, MarkedSet, Node, SimKind};

fn set(nodes: &[&str]) -> MarkedSet {
    MarkedSet::new(nodes.iter().map(|s| s.parse::<Node>().unwrap()))
}

fn main() -> rado_ramsey::Result<()> {
    let pairs = [
        (set(&["", "0", "1"]), set(&["0", "00", "01"])),
        (set(&["", "0", "11"]), set(&["", "0", "10"])),
        (set(&["", "0", "00", "011"]), set(&["", "1", "10", "111"])),
    ];
    for (a, b) in &pairs {
        for kind in [SimKind::Full, SimKind::OrderOnly] {
            let fa = canonical_form(a, kind)?;
            let fb = canonical_form(b, kind)?;
            println!("{kind:?}: {} vs {} similar = {}", fa.digest(), fb.digest(), fa == fb);
        }
    }
    Ok(())
}
