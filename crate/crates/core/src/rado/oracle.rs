//! Adjacency oracles on the vertex set `ω`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rado::graph::FiniteGraph;
use crate::rado::graph6;

/// `m < n` are adjacent iff bit `m` of `n` is 1.
pub fn bit_adjacent(m: usize, n: usize) -> Result<bool> {
    if m == n {
        return Err(Error::Domain(format!("vertex {m} is not adjacent to itself")));
    }
    let (lo, hi) = (m.min(n), m.max(n));
    Ok(lo < usize::BITS as usize && (hi >> lo) & 1 == 1)
}

#[inline]
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A deterministic source of adjacency on `ω`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum AdjacencyOracle {
    /// The BIT predicate.
    Bit,
    /// A finite graph; queries beyond its vertex count are errors.
    Explicit(Arc<FiniteGraph>),
    /// Edge `{m, n}` present iff a keyed hash of `(seed, min, max)` is odd.
    SeededRandom(u64),
}

impl AdjacencyOracle {
    pub fn explicit(g: FiniteGraph) -> AdjacencyOracle {
        AdjacencyOracle::Explicit(Arc::new(g))
    }

    pub fn adjacent(&self, m: usize, n: usize) -> Result<bool> {
        if m == n {
            return Err(Error::Domain(format!("vertex {m} is not adjacent to itself")));
        }
        match self {
            AdjacencyOracle::Bit => bit_adjacent(m, n),
            AdjacencyOracle::Explicit(g) => {
                if m.max(n) >= g.n() {
                    Err(Error::Depth(format!(
                        "explicit graph has {} vertices, vertex {} requested",
                        g.n(),
                        m.max(n)
                    )))
                } else {
                    Ok(g.has_edge(m, n))
                }
            }
            AdjacencyOracle::SeededRandom(seed) => {
                let (lo, hi) = (m.min(n) as u64, m.max(n) as u64);
                let key = splitmix64((lo << 32) ^ hi ^ (hi >> 32));
                Ok(splitmix64(seed ^ key) & 1 == 1)
            }
        }
    }

    /// Number of vertices the oracle can answer for, if bounded.
    pub fn vertex_bound(&self) -> Option<usize> {
        match self {
            AdjacencyOracle::Explicit(g) => Some(g.n()),
            _ => None,
        }
    }

    /// The graph on `0..n`.
    pub fn graph(&self, n: usize) -> Result<FiniteGraph> {
        let mut g = FiniteGraph::empty(n);
        for v in 1..n {
            for u in 0..v {
                if self.adjacent(u, v)? {
                    g.add_edge(u, v)?;
                }
            }
        }
        Ok(g)
    }

    /// Parses `bit`, `seed:<u64>`, `g6:<graph6>` or `file:<path to graph6>`.
    pub fn parse_spec(spec: &str) -> Result<AdjacencyOracle> {
        if spec == "bit" {
            return Ok(AdjacencyOracle::Bit);
        }
        if let Some(s) = spec.strip_prefix("seed:") {
            let seed = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad seed {s:?}")))?;
            return Ok(AdjacencyOracle::SeededRandom(seed));
        }
        if let Some(s) = spec.strip_prefix("g6:") {
            return Ok(AdjacencyOracle::explicit(graph6::decode(s)?));
        }
        if let Some(path) = spec.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{path}: {e}")))?;
            return Ok(AdjacencyOracle::explicit(graph6::decode(&text)?));
        }
        Err(Error::Parse(format!("unknown oracle {spec:?}")))
    }
}

impl fmt::Display for AdjacencyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjacencyOracle::Bit => f.write_str("bit"),
            AdjacencyOracle::Explicit(g) => write!(f, "g6:{}", graph6::encode(g)),
            AdjacencyOracle::SeededRandom(s) => write!(f, "seed:{s}"),
        }
    }
}

impl fmt::Debug for AdjacencyOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdjacencyOracle({self})")
    }
}

impl FromStr for AdjacencyOracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<AdjacencyOracle> {
        AdjacencyOracle::parse_spec(s)
    }
}

impl Serialize for AdjacencyOracle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AdjacencyOracle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<AdjacencyOracle, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
