//! Coloring oracles `h` on finite approximations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rado::oracle::splitmix64;
use crate::similarity::{canonical_form, FormDigest, MarkedSet, SimKind};
use crate::tree::{CodingTree, FiniteApprox};

/// A pure coloring of approximations.
pub trait ColorOracle: Sync {
    fn color(&self, c: &FiniteApprox) -> Result<u32>;
}

impl<F> ColorOracle for F
where
    F: Fn(&FiniteApprox) -> Result<u32> + Sync,
{
    fn color(&self, c: &FiniteApprox) -> Result<u32> {
        self(c)
    }
}

/// The coloring oracles the command line can name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coloring {
    Const(u32),
    /// Length of the top level, mod 2.
    ParityLevel,
    /// Seeded hash of the concrete tree.
    Hash { seed: u64, colors: u32 },
    /// Lookup by concrete digest, then Full canonical digest, then default.
    Table {
        colors: BTreeMap<FormDigest, u32>,
        default: Option<u32>,
    },
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    colors: BTreeMap<FormDigest, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<u32>,
}

impl Coloring {
    /// `const:<c>`, `parity-level`, `hash:<seed>:<colors>` or `file:<path>`.
    pub fn parse_spec(spec: &str) -> Result<Coloring> {
        let bad = || Error::Parse(format!("unknown coloring {spec:?}"));
        let num = |s: &str| s.parse::<u64>().map_err(|_| bad());
        let parts: Vec<&str> = spec.splitn(3, ':').collect();
        match parts.as_slice() {
            ["const", c] => Ok(Coloring::Const(u32::try_from(num(c)?).map_err(|_| bad())?)),
            ["parity-level"] => Ok(Coloring::ParityLevel),
            ["hash", seed, colors] => {
                let colors = u32::try_from(num(colors)?).map_err(|_| bad())?;
                if colors == 0 {
                    return Err(Error::Parse("hash coloring needs at least one color".into()));
                }
                Ok(Coloring::Hash { seed: num(seed)?, colors })
            }
            ["file", ..] => {
                let path = &spec["file:".len()..];
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                Coloring::from_json(&text)
            }
            _ => Err(bad()),
        }
    }

    pub fn from_json(text: &str) -> Result<Coloring> {
        let t: TableFile = serde_json::from_str(text)?;
        Ok(Coloring::Table {
            colors: t.colors,
            default: t.default,
        })
    }

    pub fn to_json(&self) -> Option<String> {
        match self {
            Coloring::Table { colors, default } => serde_json::to_string_pretty(&TableFile {
                colors: colors.clone(),
                default: *default,
            })
            .ok(),
            _ => None,
        }
    }
}

impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Coloring> {
        Coloring::parse_spec(s)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coloring::Const(c) => write!(f, "const:{c}"),
            Coloring::ParityLevel => f.write_str("parity-level"),
            Coloring::Hash { seed, colors } => write!(f, "hash:{seed}:{colors}"),
            Coloring::Table { colors, .. } => write!(f, "table[{}]", colors.len()),
        }
    }
}

impl ColorOracle for Coloring {
    fn color(&self, c: &FiniteApprox) -> Result<u32> {
        match self {
            Coloring::Const(k) => Ok(*k),
            Coloring::ParityLevel => Ok(c.top_length().unwrap_or(0) as u32 % 2),
            Coloring::Hash { seed, colors } => {
                let d = concrete_digest(c).0;
                let key = u64::from_le_bytes(d[..8].try_into().expect("8 bytes"));
                Ok((splitmix64(seed ^ key) % *colors as u64) as u32)
            }
            Coloring::Table { colors, default } => {
                if let Some(&k) = colors.get(&concrete_digest(c)) {
                    return Ok(k);
                }
                let canon = canonical_form(&MarkedSet::from_tree(c), SimKind::Full)?.digest();
                colors
                    .get(&canon)
                    .copied()
                    .or(*default)
                    .ok_or_else(|| Error::Coloring(format!("no color for approximation {}", concrete_digest(c))))
            }
        }
    }
}

/// Digest of the tree itself (levels, nodes, coding nodes), unlike the
/// canonical digest which only sees its similarity type.
pub fn concrete_digest(t: &CodingTree) -> FormDigest {
    let mut h = Sha256::new();
    h.update(b"TREE");
    h.update((t.levels().len() as u32).to_le_bytes());
    for &l in t.levels() {
        h.update((l as u32).to_le_bytes());
    }
    for list in [t.nodes().iter().copied().collect::<Vec<_>>(), t.coding().to_vec()] {
        h.update((list.len() as u32).to_le_bytes());
        for n in list {
            h.update([n.len() as u8]);
            h.update(n.raw().to_le_bytes());
        }
    }
    let mut d = [0u8; 16];
    d.copy_from_slice(&h.finalize()[..16]);
    FormDigest(d)
}
