//! Searches for a chain on which a coloring of the extensions is constant,
//! then checks the certificate independently.

use rado_ramsey::ramsey::context::extensions_within;
use rado_ramsey::ramsey::{search_with, verify_certificate, Coloring, ExtensionContext, SearchOptions};
use rado_ramsey::AdjacencyOracle;

fn main() -> rado_ramsey::Result<()> {
    let ctx = ExtensionContext::worked(AdjacencyOracle::Bit, 16)?;
    for spec in ["parity-level", "hash:1:2", "hash:2:3"] {
        let h = Coloring::parse_spec(spec)?;
        let out = search_with(&ctx, &h, 2, 16, &SearchOptions::default())?;
        let Some(cert) = out.certificate else {
            println!("{spec}: nothing below 16 after {} visits", out.visits);
            continue;
        };
        let u = cert.last();
        let verdict = verify_certificate(&cert, &h);
        println!(
            "{spec}: color {} on levels {:?}, {} extensions, verified = {} ({} visits)",
            cert.color,
            u.levels(),
            extensions_within(&ctx, u)?.len(),
            verdict.valid,
            out.visits
        );
    }
    Ok(())
}
