//! Strong similarity of meet-closed node sets.
//!
//! [`canonical_form`] is the fast route: collapse the distinct lengths to
//! ranks and record each node's values at the lower ranks. The slow route is
//! [`brute_force_similarity`], a search over bijections checked clause by
//! clause with [`is_strong_similarity`]; the two are kept independent so that
//! one can audit the other.
//!
//! Why the fast route is exact: in a meet-closed set two distinct nodes of
//! one length part at their meet, which is a member, so traces are pairwise
//! distinct and determine every relation the clauses mention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};

use crate::error::{Error, Result};
use crate::node::{LexOrder, Node};
use crate::rado::{rado_coding_node, AdjacencyOracle, RadoCoding, MATERIALIZE_LIMIT};
use crate::tree::{is_meet_closed, lengths_of, meet_closure, CodingTree, FiniteApprox};

/// Which clauses a similarity must respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimKind {
    /// Order, initial segments, meets, relative lengths, passing numbers, coding nodes.
    Full,
    /// As `Full` without passing numbers.
    OrderOnly,
}

/// A meet-closed set with optional coding nodes and an optional member subset
/// (the antichain inside its closure).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MarkedSet {
    pub nodes: BTreeSet<Node>,
    #[serde(default)]
    pub coding: Vec<Node>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<BTreeSet<Node>>,
}

impl MarkedSet {
    pub fn new(nodes: impl IntoIterator<Item = Node>) -> MarkedSet {
        MarkedSet {
            nodes: nodes.into_iter().collect(),
            coding: Vec::new(),
            members: None,
        }
    }

    pub fn with_coding(mut self, coding: Vec<Node>) -> MarkedSet {
        self.coding = coding;
        self
    }

    /// The meet closure of an antichain, members flagged.
    pub fn antichain(a: &BTreeSet<Node>) -> MarkedSet {
        MarkedSet {
            nodes: meet_closure(a),
            coding: Vec::new(),
            members: Some(a.clone()),
        }
    }

    pub fn from_tree(t: &CodingTree) -> MarkedSet {
        MarkedSet::new(t.nodes().iter().copied()).with_coding(t.coding().to_vec())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn is_member(&self, t: &Node) -> bool {
        self.members.as_ref().is_none_or(|m| m.contains(t))
    }

    fn coding_index(&self, t: &Node) -> Option<usize> {
        self.coding.iter().position(|c| c == t)
    }

    fn validate(&self) -> Result<()> {
        if !is_meet_closed(&self.nodes) {
            return Err(Error::Structure("set is not meet-closed".into()));
        }
        if self.coding.windows(2).any(|w| w[0].len() >= w[1].len()) {
            return Err(Error::Structure("coding node lengths must strictly increase".into()));
        }
        if let Some(c) = self.coding.iter().find(|c| !self.nodes.contains(c)) {
            return Err(Error::Structure(format!("coding node {c} not in the set")));
        }
        if let Some(m) = &self.members {
            if !m.is_subset(&self.nodes) {
                return Err(Error::Structure("members must lie in the set".into()));
            }
        }
        Ok(())
    }
}

/// One symbol of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Zero,
    One,
    /// The initial segment at this rank is a member that does not split.
    Inert,
    /// No member sits below the node at this rank.
    Absent,
}

impl Sym {
    fn ascii(self) -> u8 {
        match self {
            Sym::Zero => b'0',
            Sym::One => b'1',
            Sym::Inert => b'A',
            Sym::Absent => b'*',
        }
    }

    fn from_ascii(c: char) -> Option<Sym> {
        match c {
            '0' => Some(Sym::Zero),
            '1' => Some(Sym::One),
            'A' => Some(Sym::Inert),
            '*' => Some(Sym::Absent),
            _ => None,
        }
    }

    fn bit(b: u8) -> Sym {
        if b == 0 {
            Sym::Zero
        } else {
            Sym::One
        }
    }
}

/// One node of a canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub rank: u32,
    pub trace: Vec<Sym>,
    pub coding_index: Option<u32>,
    pub member: bool,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    rank: u32,
    trace: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coding: Option<u32>,
    member: bool,
}

impl Serialize for Entry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EntryRepr {
            rank: self.rank,
            trace: self.trace.iter().map(|x| x.ascii() as char).collect(),
            coding: self.coding_index,
            member: self.member,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Entry, D::Error> {
        let r = EntryRepr::deserialize(d)?;
        let trace = r
            .trace
            .chars()
            .map(|c| Sym::from_ascii(c).ok_or_else(|| serde::de::Error::custom(format!("bad trace symbol {c:?}"))))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Entry {
            rank: r.rank,
            trace,
            coding_index: r.coding,
            member: r.member,
        })
    }
}

/// Level-collapsed invariant: equal forms iff strongly similar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub kind: SimKind,
    /// Number of distinct lengths.
    pub k: usize,
    /// Sorted, one per node.
    pub entries: Vec<Entry>,
}

/// 128-bit digest of a [`CanonicalForm`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormDigest(pub [u8; 16]);

impl fmt::Display for FormDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for FormDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormDigest({self})")
    }
}

impl std::str::FromStr for FormDigest {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormDigest> {
        let bytes = hex::decode(s).map_err(|e| Error::Parse(format!("digest {s:?}: {e}")))?;
        let arr: [u8; 16] = bytes
            .try_into()
            .map_err(|_| Error::Parse(format!("digest {s:?} is not 16 bytes")))?;
        Ok(FormDigest(arr))
    }
}

impl Serialize for FormDigest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormDigest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<FormDigest, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl CanonicalForm {
    /// Byte layout, all integers little-endian:
    ///
    /// ```text
    /// "RCF1" kind:u8 (0 full, 1 order-only) k:u32 count:u32
    /// per entry: rank:u32 trace_len:u32 trace:ASCII coding:u32 (u32::MAX = none) member:u8
    /// ```
    ///
    /// The digest is the first 16 bytes of SHA-256 over that layout.
    pub fn bytes(&self) -> Vec<u8> {
        let mut out = b"RCF1".to_vec();
        out.push(match self.kind {
            SimKind::Full => 0,
            SimKind::OrderOnly => 1,
        });
        out.extend((self.k as u32).to_le_bytes());
        out.extend((self.entries.len() as u32).to_le_bytes());
        for e in &self.entries {
            out.extend(e.rank.to_le_bytes());
            out.extend((e.trace.len() as u32).to_le_bytes());
            out.extend(e.trace.iter().map(|s| s.ascii()));
            out.extend(e.coding_index.unwrap_or(u32::MAX).to_le_bytes());
            out.push(e.member as u8);
        }
        out
    }

    pub fn digest(&self) -> FormDigest {
        let h = Sha256::digest(self.bytes());
        let mut d = [0u8; 16];
        d.copy_from_slice(&h[..16]);
        FormDigest(d)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Members of `s` that are meets of two incomparable members.
fn splitting_nodes(nodes: &BTreeSet<Node>) -> BTreeSet<Node> {
    let v: Vec<&Node> = nodes.iter().collect();
    let mut out = BTreeSet::new();
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            if !a.comparable(b) {
                out.insert(a.meet(b));
            }
        }
    }
    out
}

pub fn canonical_form(set: &MarkedSet, kind: SimKind) -> Result<CanonicalForm> {
    set.validate()?;
    let lengths = lengths_of(&set.nodes);
    let split = match kind {
        SimKind::OrderOnly => splitting_nodes(&set.nodes),
        SimKind::Full => BTreeSet::new(),
    };
    let mut entries: Vec<Entry> = set
        .nodes
        .iter()
        .map(|t| {
            let rank = lengths.partition_point(|&l| l < t.len());
            let trace = lengths[..rank]
                .iter()
                .map(|&l| match kind {
                    SimKind::Full => Sym::bit(t.bit_unchecked(l)),
                    SimKind::OrderOnly => {
                        let u = t.truncate(l);
                        if !set.nodes.contains(&u) {
                            Sym::Absent
                        } else if split.contains(&u) {
                            Sym::bit(t.bit_unchecked(l))
                        } else {
                            Sym::Inert
                        }
                    }
                })
                .collect();
            Entry {
                rank: rank as u32,
                trace,
                coding_index: set.coding_index(t).map(|i| i as u32),
                member: set.is_member(t),
            }
        })
        .collect();
    entries.sort();
    debug_assert!(entries.windows(2).all(|w| (w[0].rank, &w[0].trace) != (w[1].rank, &w[1].trace)));
    Ok(CanonicalForm {
        kind,
        k: lengths.len(),
        entries,
    })
}

pub fn are_strongly_similar(s: &MarkedSet, t: &MarkedSet, kind: SimKind) -> Result<bool> {
    Ok(canonical_form(s, kind)? == canonical_form(t, kind)?)
}

#[inline]
fn lex_less(a: &Node, b: &Node) -> bool {
    a.lex_cmp(b) == LexOrder::Less
}

/// Checks every clause for every tuple of nodes, exactly as quantified.
pub fn is_strong_similarity(
    f: &BTreeMap<Node, Node>,
    s: &MarkedSet,
    t: &MarkedSet,
    kind: SimKind,
) -> Result<bool> {
    s.validate()?;
    t.validate()?;
    if s.len() != t.len() || f.len() != s.len() || !s.nodes.iter().all(|x| f.contains_key(x)) {
        return Ok(false);
    }
    let image: BTreeSet<Node> = f.values().copied().collect();
    if image != t.nodes {
        return Ok(false);
    }
    let xs: Vec<Node> = s.nodes.iter().copied().collect();
    let fx: Vec<Node> = xs.iter().map(|x| f[x]).collect();
    let n = xs.len();
    let mut meet = vec![Node::EMPTY; n * n];
    let mut fmeet = vec![Node::EMPTY; n * n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (xs[i], xs[j]);
            // (1) lexicographic order
            if lex_less(&a, &b) != lex_less(&fx[i], &fx[j]) {
                return Ok(false);
            }
            // (3) meets
            let m = a.meet(&b);
            if f.get(&m) != Some(&fx[i].meet(&fx[j])) {
                return Ok(false);
            }
            meet[i * n + j] = m;
            fmeet[i * n + j] = fx[i].meet(&fx[j]);
            // (5) passing numbers
            if kind == SimKind::Full && a.len() < b.len() {
                if fx[i].len() >= fx[j].len() || fx[j].bit_unchecked(fx[i].len()) != b.bit_unchecked(a.len()) {
                    return Ok(false);
                }
            }
        }
    }
    // (2) initial segments and (4) relative lengths, over all quadruples
    for p in 0..n * n {
        for q in 0..n * n {
            let (m1, m2) = (meet[p], meet[q]);
            let (g1, g2) = (fmeet[p], fmeet[q]);
            if m1.is_prefix_of(&m2) != g1.is_prefix_of(&g2) {
                return Ok(false);
            }
            if (m1.len() < m2.len()) != (g1.len() < g2.len()) {
                return Ok(false);
            }
        }
    }
    // (6) coding nodes, then members
    for x in &xs {
        if s.coding.contains(x) != t.coding.contains(&f[x]) || s.is_member(x) != t.is_member(&f[x]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Size cap for [`brute_force_similarity`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Searches bijections in a fixed order (nodes of `s` in `⊲` order, each
/// tried against nodes of `t` in `⊲` order) and returns the first strong
/// similarity, if any.
pub fn brute_force_similarity(
    s: &MarkedSet,
    t: &MarkedSet,
    kind: SimKind,
) -> Result<Option<BTreeMap<Node, Node>>> {
    s.validate()?;
    t.validate()?;
    if s.len() != t.len() {
        return Ok(None);
    }
    if s.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Budget(format!(
            "brute force is capped at {BRUTE_FORCE_LIMIT} nodes, got {}",
            s.len()
        )));
    }
    let xs: Vec<Node> = s.nodes.iter().copied().collect();
    let ys: Vec<Node> = t.nodes.iter().copied().collect();
    let mut assign: Vec<usize> = Vec::with_capacity(xs.len());
    let mut used = vec![false; ys.len()];

    // pairwise consequences of the clauses, used only to prune
    let compatible = |i: usize, yi: usize, j: usize, yj: usize| -> bool {
        let (a, b, fa, fb) = (xs[i], xs[j], ys[yi], ys[yj]);
        a.len().cmp(&b.len()) == fa.len().cmp(&fb.len())
            && a.is_prefix_of(&b) == fa.is_prefix_of(&fb)
            && b.is_prefix_of(&a) == fb.is_prefix_of(&fa)
            && lex_less(&a, &b) == lex_less(&fa, &fb)
            && lex_less(&b, &a) == lex_less(&fb, &fa)
            && (kind == SimKind::OrderOnly
                || match a.len().cmp(&b.len()) {
                    std::cmp::Ordering::Less => b.bit_unchecked(a.len()) == fb.bit_unchecked(fa.len()),
                    std::cmp::Ordering::Greater => a.bit_unchecked(b.len()) == fa.bit_unchecked(fb.len()),
                    std::cmp::Ordering::Equal => true,
                })
    };

    fn go(
        i: usize,
        xs: &[Node],
        ys: &[Node],
        s: &MarkedSet,
        t: &MarkedSet,
        kind: SimKind,
        assign: &mut Vec<usize>,
        used: &mut [bool],
        compatible: &dyn Fn(usize, usize, usize, usize) -> bool,
    ) -> Result<Option<BTreeMap<Node, Node>>> {
        if i == xs.len() {
            let f: BTreeMap<Node, Node> = xs.iter().zip(assign.iter()).map(|(x, &y)| (*x, ys[y])).collect();
            return Ok(is_strong_similarity(&f, s, t, kind)?.then_some(f));
        }
        for y in 0..ys.len() {
            if used[y]
                || s.coding.contains(&xs[i]) != t.coding.contains(&ys[y])
                || s.is_member(&xs[i]) != t.is_member(&ys[y])
                || !(0..i).all(|j| compatible(j, assign[j], i, y))
            {
                continue;
            }
            // meets among assigned nodes: xs is in ⊲ order, so a meet is
            // assigned no later than the pair producing it
            let ok = (0..i).all(|j| {
                let m = xs[j].meet(&xs[i]);
                let mi = xs.binary_search(&m).expect("meet-closed");
                mi > i || ys[if mi == i { y } else { assign[mi] }] == ys[assign[j]].meet(&ys[y])
            });
            if !ok {
                continue;
            }
            used[y] = true;
            assign.push(y);
            if let Some(f) = go(i + 1, xs, ys, s, t, kind, assign, used, compatible)? {
                return Ok(Some(f));
            }
            assign.pop();
            used[y] = false;
        }
        Ok(None)
    }
    go(0, &xs, &ys, s, t, kind, &mut assign, &mut used, &compatible)
}

/// Whether an antichain is strongly diagonal: its meet closure has no two
/// nodes of one length, and each member passes 0 at every splitting node of
/// the closure that it does not extend.
pub fn is_strongly_diagonal(a: &BTreeSet<Node>) -> Result<bool> {
    let v: Vec<&Node> = a.iter().collect();
    for (i, x) in v.iter().enumerate() {
        if let Some(y) = v[i + 1..].iter().find(|y| x.comparable(y)) {
            return Err(Error::Structure(format!("{x} and {y} are comparable; not an antichain")));
        }
    }
    let closure = meet_closure(a);
    if lengths_of(&closure).len() != closure.len() {
        return Ok(false);
    }
    let splitting: Vec<&Node> = closure.iter().filter(|m| !a.contains(m)).collect();
    Ok(a.iter().all(|t| {
        splitting
            .iter()
            .all(|m| m.len() >= t.len() || m.is_prefix_of(t) || t.bit_unchecked(m.len()) == 0)
    }))
}

/// Canonical form of `r_k(𝕊_ℝ)`, computed without materializing a tree.
pub fn rado_approx_form(oracle: &AdjacencyOracle, k: usize) -> Result<CanonicalForm> {
    if k > MATERIALIZE_LIMIT {
        return Err(Error::Budget(format!("r_{k} has 2^{k}-1 nodes; limit is {MATERIALIZE_LIMIT} levels")));
    }
    let coding = (0..k).map(|n| rado_coding_node(oracle, n)).collect::<Result<Vec<_>>>()?;
    let mut entries: Vec<Entry> = Node::all_below(k)
        .map(|t| Entry {
            rank: t.len() as u32,
            trace: t.to_bits().into_iter().map(Sym::bit).collect(),
            coding_index: (coding[t.len()] == t).then_some(t.len() as u32),
            member: true,
        })
        .collect();
    entries.sort();
    Ok(CanonicalForm {
        kind: SimKind::Full,
        k,
        entries,
    })
}

/// `Some(k)` iff `a` is strongly similar to `r_k(𝕊_ℝ)` for `k` its number of
/// coding nodes.
pub fn is_approximation(a: &CodingTree, oracle: &AdjacencyOracle) -> Result<Option<usize>> {
    ApproximationChecker::new(oracle.clone()).check(a)
}

/// Bits of `t` at the given lengths (all below `|t|`), packed as a node.
pub fn trace_at(t: &Node, lengths: &[usize]) -> Node {
    let bits = lengths
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &l)| acc | (t.bit_unchecked(l) as u64) << i);
    Node::from_raw(bits, lengths.len()).expect("trace fits a node")
}

/// Structural route to [`is_approximation`]: one coding node per level,
/// level `j` holds `2^j` nodes with pairwise distinct traces, and the coding
/// node of level `j` has trace `c_j`. Tree closure makes this equivalent to
/// canonical-form equality with `r_k(𝕊_ℝ)`.
pub fn is_approximation_structural(a: &CodingTree, coding: &RadoCoding) -> Result<Option<usize>> {
    let levels = a.levels();
    let k = levels.len();
    if a.coding().len() != k {
        return Ok(None);
    }
    for (j, &l) in levels.iter().enumerate() {
        let c = a.coding()[j];
        if c.len() != l || trace_at(&c, &levels[..j]) != coding.coding(j)? {
            return Ok(None);
        }
        let traces: BTreeSet<Node> = a.level_nodes(l).map(|t| trace_at(t, &levels[..j])).collect();
        if j >= 64 || traces.len() != 1 << j || a.level_nodes(l).count() != 1 << j {
            return Ok(None);
        }
    }
    Ok(Some(k))
}

/// [`is_approximation`] with the reference forms cached per `k`.
#[derive(Debug)]
pub struct ApproximationChecker {
    oracle: AdjacencyOracle,
    forms: Vec<OnceLock<Result<CanonicalForm>>>,
}

impl ApproximationChecker {
    pub fn new(oracle: AdjacencyOracle) -> ApproximationChecker {
        ApproximationChecker {
            oracle,
            forms: (0..=MATERIALIZE_LIMIT).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn oracle(&self) -> &AdjacencyOracle {
        &self.oracle
    }

    pub fn reference(&self, k: usize) -> Result<&CanonicalForm> {
        match self.forms.get(k) {
            Some(cell) => cell
                .get_or_init(|| rado_approx_form(&self.oracle, k))
                .as_ref()
                .map_err(Clone::clone),
            None => Err(Error::Budget(format!("r_{k} is beyond {MATERIALIZE_LIMIT} levels"))),
        }
    }

    pub fn check(&self, a: &CodingTree) -> Result<Option<usize>> {
        let k = a.coding().len();
        if a.len() + 1 != 1usize.checked_shl(k as u32).unwrap_or(0) {
            return Ok(None);
        }
        let set = MarkedSet::from_tree(a);
        let form = match canonical_form(&set, SimKind::Full) {
            Ok(f) => f,
            Err(Error::Structure(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok((&form == self.reference(k)?).then_some(k))
    }

    pub fn approximation(&self, a: CodingTree) -> Result<Option<FiniteApprox>> {
        Ok(self.check(&a)?.map(|_| FiniteApprox::assume(a)))
    }
}

impl Clone for ApproximationChecker {
    fn clone(&self) -> ApproximationChecker {
        ApproximationChecker::new(self.oracle.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rado::build_sr;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    fn set(v: &[&str]) -> BTreeSet<Node> {
        v.iter().map(|s| n(s)).collect()
    }

    fn ms(v: &[&str]) -> MarkedSet {
        MarkedSet::new(set(v))
    }

    #[test]
    fn form_example() {
        let f = canonical_form(&ms(&["0", "00", "01"]), SimKind::Full).unwrap();
        assert_eq!(f.k, 2);
        let traces: Vec<(u32, Vec<Sym>)> = f.entries.iter().map(|e| (e.rank, e.trace.clone())).collect();
        assert_eq!(traces, vec![(0, vec![]), (1, vec![Sym::Zero]), (1, vec![Sym::One])]);
        let single = canonical_form(&ms(&[""]), SimKind::Full).unwrap();
        assert_eq!((single.k, single.entries.len()), (1, 1));
        let empty = canonical_form(&MarkedSet::default(), SimKind::Full).unwrap();
        assert_eq!((empty.k, empty.entries.len()), (0, 0));
    }

    #[test]
    fn similar_pair() {
        let s = ms(&["0", "00", "01"]);
        let t = ms(&["1", "100", "110"]);
        for kind in [SimKind::Full, SimKind::OrderOnly] {
            assert!(are_strongly_similar(&s, &t, kind).unwrap());
            assert!(are_strongly_similar(&s, &s, kind).unwrap());
        }
        let f: BTreeMap<Node, Node> = [("0", "1"), ("00", "100"), ("01", "110")].iter().map(|(a, b)| (n(a), n(b))).collect();
        assert!(is_strong_similarity(&f, &s, &t, SimKind::Full).unwrap());
        let swapped: BTreeMap<Node, Node> = [("0", "1"), ("00", "110"), ("01", "100")].iter().map(|(a, b)| (n(a), n(b))).collect();
        assert!(!is_strong_similarity(&swapped, &s, &t, SimKind::Full).unwrap());
        let found = brute_force_similarity(&s, &t, SimKind::Full).unwrap().unwrap();
        assert_eq!(found, f);
    }

    #[test]
    fn dissimilar_pair() {
        // stretching the gap between levels changes nothing
        let s = ms(&["0", "00", "01"]);
        assert!(are_strongly_similar(&s, &ms(&["0", "000", "011"]), SimKind::Full).unwrap());
        // an extra closure node is a new collapsed level
        let t = ms(&["0", "00", "000", "011"]);
        assert!(!are_strongly_similar(&s, &t, SimKind::Full).unwrap());
        assert!(brute_force_similarity(&s, &t, SimKind::Full).unwrap().is_none());
    }

    #[test]
    fn passing_data_separates_modes() {
        let s = ms(&["", "0", "11"]);
        let t = ms(&["", "0", "10"]);
        assert!(!are_strongly_similar(&s, &t, SimKind::Full).unwrap());
        assert!(brute_force_similarity(&s, &t, SimKind::Full).unwrap().is_none());
        assert!(are_strongly_similar(&s, &t, SimKind::OrderOnly).unwrap());
        assert!(brute_force_similarity(&s, &t, SimKind::OrderOnly).unwrap().is_some());
    }

    #[test]
    fn not_meet_closed_is_rejected() {
        assert!(matches!(canonical_form(&ms(&["00", "11"]), SimKind::Full), Err(Error::Structure(_))));
    }

    #[test]
    fn brute_force_limits() {
        assert!(brute_force_similarity(&ms(&["0"]), &ms(&["0", "00", "01"]), SimKind::Full).unwrap().is_none());
        let big = MarkedSet::new(Node::all_below(4));
        assert!(big.len() == 15);
        assert!(matches!(brute_force_similarity(&big, &big, SimKind::Full), Err(Error::Budget(_))));
    }

    #[test]
    fn diagonal_examples() {
        assert!(is_strongly_diagonal(&set(&["01", "111"])).unwrap());
        assert!(!is_strongly_diagonal(&set(&["00", "10"])).unwrap());
        // meets ⟨⟩ and ⟨0⟩; ⟨1,1,1,1,1⟩ passes 1 at the foreign splitting node ⟨0⟩
        assert!(!is_strongly_diagonal(&set(&["00", "0110", "11111"])).unwrap());
        assert!(is_strongly_diagonal(&set(&["00", "0110", "10111"])).unwrap());
        assert!(matches!(is_strongly_diagonal(&set(&["0", "01"])), Err(Error::Structure(_))));
    }

    #[test]
    fn approximation_examples() {
        let bit = AdjacencyOracle::Bit;
        for k in 0..=8 {
            let r = build_sr(&bit, 8).unwrap().restriction(k).unwrap();
            assert_eq!(is_approximation(&r, &bit).unwrap(), Some(k));
        }
        let a = CodingTree::from_nodes(set(&["0", "00", "01"]), vec![n("0"), n("01")]).unwrap();
        assert_eq!(is_approximation(&a, &bit).unwrap(), Some(2));
        let b = CodingTree::from_nodes(set(&["0", "00", "01"]), vec![n("0"), n("00")]).unwrap();
        assert_eq!(is_approximation(&b, &bit).unwrap(), None);
    }

    #[test]
    fn structural_route_agrees() {
        let bit = AdjacencyOracle::Bit;
        let coding = RadoCoding::new(bit.clone());
        let checker = ApproximationChecker::new(bit.clone());
        let full = build_sr(&bit, 5).unwrap();
        for k in 0..=5 {
            let r = full.restriction(k).unwrap();
            assert_eq!(is_approximation_structural(&r, &coding).unwrap(), Some(k));
            assert_eq!(checker.check(&r).unwrap(), Some(k));
        }
        let a = CodingTree::from_nodes(set(&["0", "00", "01"]), vec![n("0"), n("01")]).unwrap();
        let b = CodingTree::from_nodes(set(&["0", "00", "01"]), vec![n("0"), n("00")]).unwrap();
        assert_eq!(is_approximation_structural(&a, &coding).unwrap(), Some(2));
        assert_eq!(is_approximation_structural(&b, &coding).unwrap(), None);
    }

    #[test]
    fn digest_is_stable() {
        let f = canonical_form(&ms(&["0", "00", "01"]), SimKind::Full).unwrap();
        let g = canonical_form(&ms(&["1", "100", "110"]), SimKind::Full).unwrap();
        assert_eq!(f.digest(), g.digest());
        assert_eq!(f.digest().to_string().len(), 32);
        let o = canonical_form(&ms(&["0", "00", "01"]), SimKind::OrderOnly).unwrap();
        assert_ne!(f.digest(), o.digest());
        let json = serde_json::to_string(&f).unwrap();
        let back: CanonicalForm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
