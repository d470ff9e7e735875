//! Ordinals below `ω^ω` in Cantor normal form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// `Σ ω^e · c` with finitely many exponents `e < ω` and coefficients `c > 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrdinalCnf {
    terms: BTreeMap<u32, u64>,
}

impl OrdinalCnf {
    pub fn zero() -> OrdinalCnf {
        OrdinalCnf::default()
    }

    pub fn finite(n: u64) -> OrdinalCnf {
        OrdinalCnf::from_terms([(0, n)])
    }

    pub fn omega_pow(n: u32) -> OrdinalCnf {
        OrdinalCnf::from_terms([(n, 1)])
    }

    /// Zero coefficients are dropped; repeated exponents are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> OrdinalCnf {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            if c > 0 {
                *out.entry(e).or_insert(0) += c;
            }
        }
        OrdinalCnf { terms: out }
    }

    /// Terms by decreasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.terms.iter().rev().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.keys().next_back() {
            None => Some(0),
            Some(0) => Some(self.terms[&0]),
            Some(_) => None,
        }
    }

    /// Ordinal sum: terms of `self` below the leading exponent of `rhs` are absorbed.
    pub fn add(&self, rhs: &OrdinalCnf) -> OrdinalCnf {
        let Some((&lead, _)) = rhs.terms.iter().next_back() else {
            return self.clone();
        };
        let mut terms: BTreeMap<u32, u64> = self.terms.range(lead..).map(|(&e, &c)| (e, c)).collect();
        for (&e, &c) in &rhs.terms {
            *terms.entry(e).or_insert(0) += c;
        }
        OrdinalCnf { terms }
    }
}

impl Ord for OrdinalCnf {
    fn cmp(&self, other: &OrdinalCnf) -> Ordering {
        let mut a = self.terms();
        let mut b = other.terms();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }
}

impl PartialOrd for OrdinalCnf {
    fn partial_cmp(&self, other: &OrdinalCnf) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let base = match e {
                    0 => return c.to_string(),
                    1 => "ω".to_string(),
                    _ => format!("ω^{e}"),
                };
                if c == 1 {
                    base
                } else {
                    format!("{base}·{c}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
