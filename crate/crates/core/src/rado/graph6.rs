//! graph6 encoding: `N(n)` followed by the upper triangle, column by column,
//! packed six bits per printable byte (value + 63).

use crate::error::{Error, Result};
use crate::rado::graph::FiniteGraph;

const HEADER: &str = ">>graph6<<";

fn size_prefix(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn encode(g: &FiniteGraph) -> String {
    let mut out = Vec::new();
    size_prefix(g.n(), &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..g.n() {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn decode(text: &str) -> Result<FiniteGraph> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse(format!("graph6: byte {b} outside 63..=126")));
    }
    let digits = |s: &[u8]| s.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    let (n, body) = match bytes {
        [] => return Err(Error::Parse("graph6: empty input".into())),
        [126, 126, rest @ ..] if rest.len() >= 6 => (digits(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 && rest[0] != 126 => (digits(&rest[..3]), &rest[3..]),
        [126, ..] => return Err(Error::Parse("graph6: truncated size field".into())),
        [b, rest @ ..] => ((b - 63) as usize, rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if body.len() != need {
        return Err(Error::Parse(format!(
            "graph6: {n} vertices need {need} data bytes, found {}",
            body.len()
        )));
    }
    let mut g = FiniteGraph::empty(n);
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[idx / 6] - 63;
            if (byte >> (5 - idx % 6)) & 1 == 1 {
                g.add_edge(u, v)?;
            }
            idx += 1;
        }
    }
    if bits % 6 != 0 {
        let pad = 6 - bits % 6;
        if (body[need - 1] - 63) & ((1 << pad) - 1) != 0 {
            return Err(Error::Parse("graph6: nonzero padding bits".into()));
        }
    }
    Ok(g)
}
