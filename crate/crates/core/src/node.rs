//! Finite binary sequences and the orders defined on them.
//!
//! A [`Node`] is a sequence `⟨s(0), …, s(n-1)⟩` of bits packed into one
//! machine word: coordinate 0 sits in the least significant bit. Storage bits
//! at positions `>= len` are always zero, so two nodes are equal exactly when
//! their packed words and lengths are equal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Hard storage limit: a node is one `u64` plus a length byte.
pub const MAX_DEPTH: usize = 64;

/// Environment variable that lowers the effective maximum depth.
pub const MAX_DEPTH_ENV: &str = "RADO_MAX_DEPTH";

/// Effective maximum depth: `RADO_MAX_DEPTH` when set and valid, clamped to [`MAX_DEPTH`].
pub fn max_depth() -> usize {
    std::env::var(MAX_DEPTH_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|d| d.min(MAX_DEPTH))
        .unwrap_or(MAX_DEPTH)
}

/// A finite 0/1 sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Node {
    bits: u64,
    len: u8,
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Node {
    /// The empty sequence `⟨⟩`.
    pub const EMPTY: Node = Node { bits: 0, len: 0 };

    /// Builds a node from a packed word; bits at or above `len` must be zero.
    pub fn from_raw(bits: u64, len: usize) -> Result<Node> {
        if len > MAX_DEPTH {
            return Err(Error::Depth(format!("node length {len} exceeds {MAX_DEPTH}")));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::Domain(format!("bits set beyond length {len}")));
        }
        Ok(Node { bits, len: len as u8 })
    }

    /// Builds a node from explicit bits, coordinate 0 first.
    pub fn from_bits(bits: &[u8]) -> Result<Node> {
        let mut n = Node::EMPTY;
        for &b in bits {
            n = n.child(b)?;
        }
        Ok(n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The packed word (coordinate 0 in the least significant bit).
    #[inline]
    pub fn raw(&self) -> u64 {
        self.bits
    }

    /// `s(i)`, or `None` when `i >= |s|`.
    #[inline]
    pub fn bit(&self, i: usize) -> Option<u8> {
        (i < self.len()).then(|| ((self.bits >> i) & 1) as u8)
    }

    /// `s(i)` for an index known to be in range.
    #[inline]
    pub(crate) fn bit_unchecked(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.bits >> i) & 1) as u8
    }

    /// `s⌢b`.
    pub fn child(&self, b: u8) -> Result<Node> {
        if self.len() >= MAX_DEPTH {
            return Err(Error::Depth(format!("cannot extend a node of length {MAX_DEPTH}")));
        }
        Ok(Node {
            bits: self.bits | (((b & 1) as u64) << self.len),
            len: self.len + 1,
        })
    }

    /// `s↾m`, the length-`m` initial segment.
    pub fn restrict(&self, m: usize) -> Result<Node> {
        if m > self.len() {
            return Err(Error::Domain(format!(
                "cannot truncate a node of length {} to {m}",
                self.len()
            )));
        }
        Ok(self.truncate(m))
    }

    /// `s↾m` for `m <= |s|` known in advance.
    #[inline]
    pub(crate) fn truncate(&self, m: usize) -> Node {
        debug_assert!(m <= self.len());
        Node {
            bits: self.bits & low_mask(m),
            len: m as u8,
        }
    }

    /// Length of the longest common initial segment.
    #[inline]
    pub fn meet_len(&self, other: &Node) -> usize {
        let common = self.len().min(other.len());
        let diff = (self.bits ^ other.bits) & low_mask(common);
        if diff == 0 {
            common
        } else {
            diff.trailing_zeros() as usize
        }
    }

    /// `s ∧ t`.
    #[inline]
    pub fn meet(&self, other: &Node) -> Node {
        self.truncate(self.meet_len(other))
    }

    /// `s ⊑ t`: `self` is an initial segment of `other` (possibly equal).
    #[inline]
    pub fn is_prefix_of(&self, other: &Node) -> bool {
        self.len() <= other.len() && other.truncate(self.len()) == *self
    }

    /// `s ⊂ t`: proper initial segment.
    #[inline]
    pub fn is_proper_prefix_of(&self, other: &Node) -> bool {
        self.len() < other.len() && other.truncate(self.len()) == *self
    }

    #[inline]
    pub fn comparable(&self, other: &Node) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Bits as a vector, coordinate 0 first.
    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.bit_unchecked(i)).collect()
    }

    /// Lexicographic comparison for incomparable nodes; `Comparable` when one
    /// is an initial segment of the other.
    pub fn lex_cmp(&self, other: &Node) -> LexOrder {
        let m = self.meet_len(other);
        if m == self.len().min(other.len()) {
            return LexOrder::Comparable;
        }
        if self.bit_unchecked(m) < other.bit_unchecked(m) {
            LexOrder::Less
        } else {
            LexOrder::Greater
        }
    }

    /// The extended lexicographic order making all of `2^{<ω}` a dense total order.
    pub fn lex_ext_cmp(&self, other: &Node) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.lex_cmp(other) {
            LexOrder::Less => Ordering::Less,
            LexOrder::Greater => Ordering::Greater,
            LexOrder::Comparable => {
                if self.len() < other.len() {
                    // s ⊂ t: s < t iff t(|s|) = 1
                    if other.bit_unchecked(self.len()) == 1 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                } else if self.bit_unchecked(other.len()) == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// The order `⊲`: shorter nodes first, lexicographic among equal lengths.
    /// Order type ω. This is also the [`Ord`] instance of [`Node`].
    pub fn tri_cmp(&self, other: &Node) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            let diff = self.bits ^ other.bits;
            if diff == 0 {
                Ordering::Equal
            } else if (self.bits >> diff.trailing_zeros()) & 1 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }

    /// All nodes of length exactly `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Node> {
        assert!(len < 32, "refusing to enumerate 2^{len} nodes");
        (0u64..(1u64 << len)).map(move |v| {
            // v read with coordinate 0 as most significant digit gives lex order
            let mut bits = 0u64;
            for i in 0..len {
                bits |= ((v >> (len - 1 - i)) & 1) << i;
            }
            Node { bits, len: len as u8 }
        })
    }

    /// All nodes of length `< depth`, shortest first.
    pub fn all_below(depth: usize) -> impl Iterator<Item = Node> {
        (0..depth).flat_map(Node::all_of_length)
    }

    /// Lexicographic rank among nodes of the same length (the bits read as a
    /// binary numeral with coordinate 0 most significant).
    pub fn lex_rank(&self) -> u64 {
        (0..self.len()).fold(0u64, |acc, i| (acc << 1) | self.bit_unchecked(i) as u64)
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tri_cmp(other)
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit_unchecked(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Node> {
        let mut n = Node::EMPTY;
        for c in s.chars() {
            let b = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Parse(format!("invalid bit {c:?} in node {s:?}"))),
            };
            n = n.child(b)?;
        }
        Ok(n)
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Node, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`Node::lex_cmp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexOrder {
    Less,
    Greater,
    /// One node is an initial segment of the other.
    Comparable,
}

/// A set of nodes of one common length, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LevelSet {
    nodes: Vec<Node>,
    length: usize,
}

impl LevelSet {
    /// Collects nodes into a level set; duplicates are merged.
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> Result<LevelSet> {
        let mut nodes: Vec<Node> = nodes.into_iter().collect();
        nodes.sort();
        nodes.dedup();
        let length = nodes.first().map_or(0, Node::len);
        if let Some(bad) = nodes.iter().find(|n| n.len() != length) {
            return Err(Error::Structure(format!(
                "level set mixes lengths {length} and {}",
                bad.len()
            )));
        }
        Ok(LevelSet { nodes, length })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Common length `l_X` (0 for the empty set).
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn card(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Whether `self` end-extends `base`: same cardinality and every node of
    /// `base` has exactly one extension in `self`.
    pub fn end_extends(&self, base: &LevelSet) -> bool {
        if self.card() != base.card() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        if self.length < base.length {
            return false;
        }
        // both sides are lex-sorted and the truncation map preserves lex order
        self.nodes
            .iter()
            .zip(&base.nodes)
            .all(|(y, x)| x.is_prefix_of(y))
    }
}

/// Order on level sets: by length; then proper initial sequence first; then
/// `⊲` at the first disagreement.
pub fn level_set_cmp(x: &LevelSet, y: &LevelSet) -> Ordering {
    match (x.is_empty(), y.is_empty()) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    x.length
        .cmp(&y.length)
        .then_with(|| x.nodes.as_slice().cmp(y.nodes.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(n("110").restrict(2).unwrap(), n("11"));
        assert_eq!(n("01").restrict(0).unwrap(), Node::EMPTY);
        assert!(matches!(n("01").restrict(3), Err(Error::Domain(_))));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(n("011").meet(&n("0101")), n("01"));
        assert_eq!(n("0").meet(&n("10")), Node::EMPTY);
        let s = n("10110");
        assert_eq!(s.meet(&s), s);
    }

    #[test]
    fn lex_cmp_examples() {
        assert_eq!(n("01").lex_cmp(&n("1")), LexOrder::Less);
        assert_eq!(n("01").lex_cmp(&n("001")), LexOrder::Greater);
        assert_eq!(n("0").lex_cmp(&n("01")), LexOrder::Comparable);
    }

    #[test]
    fn lex_ext_examples() {
        assert_eq!(n("0").lex_ext_cmp(&n("01")), Ordering::Less);
        assert_eq!(n("00").lex_ext_cmp(&n("0")), Ordering::Less);
        assert_eq!(n("1").lex_ext_cmp(&n("1")), Ordering::Equal);
    }

    #[test]
    fn tri_cmp_examples() {
        assert_eq!(n("1").tri_cmp(&n("00")), Ordering::Less);
        assert_eq!(n("01").tri_cmp(&n("10")), Ordering::Less);
        assert_eq!(Node::EMPTY.tri_cmp(&Node::EMPTY), Ordering::Equal);
    }

    #[test]
    fn level_set_examples() {
        let ls = |v: &[&str]| LevelSet::new(v.iter().map(|s| n(s))).unwrap();
        assert_eq!(level_set_cmp(&ls(&["0"]), &ls(&["00"])), Ordering::Less);
        assert_eq!(level_set_cmp(&ls(&["0"]), &ls(&["0", "1"])), Ordering::Less);
        assert_eq!(
            level_set_cmp(&ls(&["00", "10"]), &ls(&["00", "11"])),
            Ordering::Less
        );
        assert!(LevelSet::new([n("0"), n("01")]).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(n("").to_string(), "");
        assert_eq!(n("0110").to_string(), "0110");
        assert_eq!(n("0110").to_bits(), vec![0, 1, 1, 0]);
        assert!("012".parse::<Node>().is_err());
        let long: String = "1".repeat(65);
        assert!(matches!(long.parse::<Node>(), Err(Error::Depth(_))));
        let full: Node = "1".repeat(64).parse().unwrap();
        assert_eq!(full.len(), 64);
        assert_eq!(full.raw(), u64::MAX);
    }

    #[test]
    fn enumeration_is_lex_sorted() {
        let v: Vec<Node> = Node::all_of_length(3).collect();
        assert_eq!(v.len(), 8);
        assert!(v.windows(2).all(|w| w[0].lex_cmp(&w[1]) == LexOrder::Less));
        assert_eq!(v[3].lex_rank(), 3);
        assert_eq!(Node::all_below(4).count(), 15);
    }

    #[test]
    fn end_extension() {
        let base = LevelSet::new([n("0"), n("1")]).unwrap();
        let up = LevelSet::new([n("011"), n("100")]).unwrap();
        let bad = LevelSet::new([n("011"), n("010")]).unwrap();
        assert!(up.end_extends(&base));
        assert!(!bad.end_extends(&base));
        assert!(base.end_extends(&base));
    }
}
