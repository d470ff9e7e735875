//! Finite trees with explicit level sets and designated coding nodes.
//!
//! A tree here is closed under initial segments *whose lengths are levels*,
//! not under all initial segments, so `{⟨⟩, ⟨0,0⟩, ⟨1,1⟩}` with levels `{0, 2}`
//! is a legitimate tree.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::Node;

/// A finite tree with levels `L`, node set and coding nodes `c_0, c_1, …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct CodingTree {
    levels: Vec<usize>,
    nodes: BTreeSet<Node>,
    coding: Vec<Node>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    levels: Vec<usize>,
    nodes: Vec<Node>,
    coding: Vec<Node>,
}

impl TryFrom<TreeRepr> for CodingTree {
    type Error = Error;

    fn try_from(r: TreeRepr) -> Result<CodingTree> {
        CodingTree::new(r.levels, r.nodes, r.coding)
    }
}

impl From<CodingTree> for TreeRepr {
    fn from(t: CodingTree) -> TreeRepr {
        TreeRepr {
            levels: t.levels,
            nodes: t.nodes.into_iter().collect(),
            coding: t.coding,
        }
    }
}

impl CodingTree {
    /// Validating constructor.
    pub fn new(
        levels: Vec<usize>,
        nodes: impl IntoIterator<Item = Node>,
        coding: Vec<Node>,
    ) -> Result<CodingTree> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Structure("levels must be strictly increasing".into()));
        }
        for t in &nodes {
            if levels.binary_search(&t.len()).is_err() {
                return Err(Error::Structure(format!(
                    "node {t} has length {} which is not a level",
                    t.len()
                )));
            }
            for &l in levels.iter().take_while(|&&l| l < t.len()) {
                if !nodes.contains(&t.truncate(l)) {
                    return Err(Error::Structure(format!(
                        "node {t} lacks its initial segment of length {l}"
                    )));
                }
            }
        }
        if coding.windows(2).any(|w| w[0].len() >= w[1].len()) {
            return Err(Error::Structure("coding node lengths must strictly increase".into()));
        }
        if let Some(c) = coding.iter().find(|c| !nodes.contains(c)) {
            return Err(Error::Structure(format!("coding node {c} is not a tree node")));
        }
        Ok(CodingTree { levels, nodes, coding })
    }

    /// Tree whose levels are exactly the lengths occurring in `nodes`.
    pub fn from_nodes(nodes: impl IntoIterator<Item = Node>, coding: Vec<Node>) -> Result<CodingTree> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        let levels = lengths_of(&nodes);
        CodingTree::new(levels, nodes, coding)
    }

    pub(crate) fn from_parts_unchecked(
        levels: Vec<usize>,
        nodes: BTreeSet<Node>,
        coding: Vec<Node>,
    ) -> CodingTree {
        debug_assert!(CodingTree::new(levels.clone(), nodes.clone(), coding.clone()).is_ok());
        CodingTree { levels, nodes, coding }
    }

    pub fn empty() -> CodingTree {
        CodingTree::default()
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Nodes in `⊲` order.
    pub fn nodes(&self) -> &BTreeSet<Node> {
        &self.nodes
    }

    pub fn coding(&self) -> &[Node] {
        &self.coding
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, t: &Node) -> bool {
        self.nodes.contains(t)
    }

    pub fn is_coding(&self, t: &Node) -> bool {
        self.coding_index(t).is_some()
    }

    pub fn coding_index(&self, t: &Node) -> Option<usize> {
        self.coding.binary_search_by(|c| c.len().cmp(&t.len())).ok().filter(|&i| self.coding[i] == *t)
    }

    /// The coding node of length `l`, if any.
    pub fn coding_at_length(&self, l: usize) -> Option<Node> {
        self.coding
            .binary_search_by(|c| c.len().cmp(&l))
            .ok()
            .map(|i| self.coding[i])
    }

    /// Nodes of length exactly `l`, lexicographically increasing.
    pub fn level_nodes(&self, l: usize) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter().skip_while(move |t| t.len() < l).take_while(move |t| t.len() == l)
    }

    /// Greatest length present, if any node exists.
    pub fn top_length(&self) -> Option<usize> {
        self.nodes.iter().next_back().map(Node::len)
    }

    /// `max(T)`: the nodes of greatest length, in lex order.
    pub fn max_nodes(&self) -> Vec<Node> {
        match self.top_length() {
            Some(l) => self.level_nodes(l).copied().collect(),
            None => Vec::new(),
        }
    }

    /// Whether some node of the tree has `s` as an initial segment.
    pub fn has_extension(&self, s: &Node) -> bool {
        self.nodes.iter().any(|t| s.is_prefix_of(t))
    }

    /// `r_k(T)`: nodes of length `< l_k`, with coding nodes `c_0 … c_{k-1}`.
    ///
    /// When `k` equals the number of coding nodes the whole tree up to the last
    /// coding level is returned; the next coding length lies beyond the truncation.
    pub fn restriction(&self, k: usize) -> Result<FiniteApprox> {
        let n = self.coding.len();
        if k > n {
            return Err(Error::Depth(format!(
                "restriction r_{k} requested from a tree with {n} coding nodes"
            )));
        }
        let bound = if k == n {
            self.coding.last().map_or(0, |c| c.len() + 1)
        } else {
            self.coding[k].len()
        };
        let levels: Vec<usize> = self.levels.iter().copied().filter(|&l| l < bound).collect();
        let nodes: BTreeSet<Node> = self.nodes.iter().copied().take_while(|t| t.len() < bound).collect();
        let coding = self.coding[..k].to_vec();
        Ok(FiniteApprox {
            tree: CodingTree { levels, nodes, coding },
            k,
        })
    }

    /// Graphviz rendering; coding nodes are double-circled and edges join a
    /// node to its extensions on the next level.
    pub fn to_dot(&self) -> String {
        let id = |t: &Node| format!("\"n{t}\"");
        let mut out = String::from("digraph tree {\n  rankdir=TB;\n");
        for t in &self.nodes {
            let label = if t.is_empty() { "⟨⟩".to_string() } else { t.to_string() };
            let shape = if self.is_coding(t) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {} [label=\"{label}\", shape={shape}];", id(t));
        }
        for w in self.levels.windows(2) {
            for t in self.level_nodes(w[1]) {
                let parent = t.truncate(w[0]);
                if self.nodes.contains(&parent) {
                    let _ = writeln!(out, "  {} -> {};", id(&parent), id(t));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A member of `𝒜𝒯_k`: a tree tagged with its number of coding levels.
///
/// Only [`CodingTree::restriction`] and the recognizers in
/// [`crate::similarity`] produce checked values; [`FiniteApprox::assume`]
/// skips the check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "CodingTree", into = "CodingTree")]
pub struct FiniteApprox {
    tree: CodingTree,
    k: usize,
}

impl From<CodingTree> for FiniteApprox {
    fn from(tree: CodingTree) -> FiniteApprox {
        FiniteApprox::assume(tree)
    }
}

impl From<FiniteApprox> for CodingTree {
    fn from(a: FiniteApprox) -> CodingTree {
        a.tree
    }
}

impl FiniteApprox {
    /// Tags a tree without checking it against `r_k(𝕊_ℝ)`.
    pub fn assume(tree: CodingTree) -> FiniteApprox {
        let k = tree.coding.len();
        FiniteApprox { tree, k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tree(&self) -> &CodingTree {
        &self.tree
    }

    pub fn into_tree(self) -> CodingTree {
        self.tree
    }

    /// `F(m) = max(r_{m+1}(F))`, the `m`-th level as a lex-sorted vector.
    pub fn level(&self, m: usize) -> Vec<Node> {
        match self.tree.coding.get(m) {
            Some(c) => self.tree.level_nodes(c.len()).copied().collect(),
            None => Vec::new(),
        }
    }

    /// `r_m(F)` for `m <= k`.
    pub fn initial(&self, m: usize) -> Result<FiniteApprox> {
        self.tree.restriction(m)
    }

    /// `self ⊑ other`: `self = r_j(other)` for some `j`.
    pub fn is_initial_segment_of(&self, other: &FiniteApprox) -> bool {
        self.k <= other.k
            && other.tree.restriction(self.k).map(|r| r.tree == self.tree).unwrap_or(false)
    }
}

impl Deref for FiniteApprox {
    type Target = CodingTree;

    fn deref(&self) -> &CodingTree {
        &self.tree
    }
}

/// Distinct lengths of a node set, increasing.
pub fn lengths_of<'a>(nodes: impl IntoIterator<Item = &'a Node>) -> Vec<usize> {
    let set: BTreeSet<usize> = nodes.into_iter().map(Node::len).collect();
    set.into_iter().collect()
}

/// Smallest superset closed under pairwise meets.
///
/// Every meet of meets is itself a meet of two original nodes, so one pass
/// over pairs suffices.
pub fn meet_closure<'a>(s: impl IntoIterator<Item = &'a Node>) -> BTreeSet<Node> {
    let v: Vec<Node> = s.into_iter().copied().collect();
    let mut out: BTreeSet<Node> = v.iter().copied().collect();
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            out.insert(a.meet(b));
        }
    }
    out
}

pub fn is_meet_closed(s: &BTreeSet<Node>) -> bool {
    let v: Vec<&Node> = s.iter().collect();
    v.iter()
        .enumerate()
        .all(|(i, a)| v[i + 1..].iter().all(|b| s.contains(&a.meet(b))))
}

/// `A≀l = {t ∈ A : |t| < l} ∪ {t↾l : t ∈ A, |t| ≥ l}`.
pub fn cut<'a>(a: impl IntoIterator<Item = &'a Node>, l: usize) -> BTreeSet<Node> {
    a.into_iter()
        .map(|t| if t.len() < l { *t } else { t.truncate(l) })
        .collect()
}

/// Nodes of greatest length in a set, lex order.
pub fn max_of(a: &BTreeSet<Node>) -> Vec<Node> {
    match a.iter().next_back() {
        Some(top) => a.iter().filter(|t| t.len() == top.len()).copied().collect(),
        None => Vec::new(),
    }
}

/// `A⁺` without consulting an ambient tree.
pub fn plus_unchecked(a: &BTreeSet<Node>) -> Result<BTreeSet<Node>> {
    let mut out = a.clone();
    for s in max_of(a) {
        out.insert(s.child(0)?);
        out.insert(s.child(1)?);
    }
    Ok(out)
}

/// `A⁺ = A ∪ {s⌢0, s⌢1 : s ∈ max(A)}`; both successors must lie below some
/// node of `ambient`.
pub fn plus(a: &BTreeSet<Node>, ambient: &CodingTree) -> Result<BTreeSet<Node>> {
    for s in max_of(a) {
        for b in 0..2 {
            let succ = s.child(b)?;
            if !ambient.has_extension(&succ) {
                return Err(Error::Structure(format!(
                    "{s} does not split in the ambient tree (no node above {succ})"
                )));
            }
        }
    }
    plus_unchecked(a)
}

/// `A ≤_fin B`: `A` is a subtree of `B` and `max(A) ⊆ max(B)`.
pub fn le_fin(a: &CodingTree, b: &CodingTree) -> bool {
    if a.is_empty() {
        return true;
    }
    a.nodes.is_subset(&b.nodes)
        && a.levels.iter().all(|l| b.levels.binary_search(l).is_ok())
        && a.coding.iter().all(|c| b.is_coding(c))
        && {
            let mb: BTreeSet<Node> = b.max_nodes().into_iter().collect();
            a.max_nodes().iter().all(|t| mb.contains(t))
        }
}

/// Outcome of [`depth_in`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

/// `depth_T(A)`: the least `k` with `A ≤_fin r_k(T)`, else [`Depth::Infinite`].
pub fn depth_in(t: &CodingTree, a: &CodingTree) -> Depth {
    (0..=t.coding.len())
        .find(|&k| t.restriction(k).map(|r| le_fin(a, &r)).unwrap_or(false))
        .map_or(Depth::Infinite, Depth::Finite)
}

/// Passing number of `t` at `s`, namely `t(|s|)`.
pub fn passing_number(t: &Node, s: &Node) -> Result<u8> {
    t.bit(s.len()).filter(|_| s.len() < t.len()).ok_or_else(|| {
        Error::Domain(format!(
            "passing number needs |s| < |t|, got |s|={} and |t|={}",
            s.len(),
            t.len()
        ))
    })
}

/// Whether `s` is a strong subtree of `t`: `S ⊆ T` on common levels, and each
/// node below the last level of `S` is extended in `S` through both of its
/// immediate successors at the next level of `S`.
pub fn is_strong_subtree(s: &CodingTree, t: &CodingTree) -> bool {
    if !s.nodes.is_subset(&t.nodes) || !s.levels.iter().all(|l| t.levels.binary_search(l).is_ok()) {
        return false;
    }
    for w in s.levels.windows(2) {
        let next: Vec<&Node> = s.level_nodes(w[1]).collect();
        for u in s.level_nodes(w[0]) {
            for b in 0..2u8 {
                let through = |x: &&Node| u.is_prefix_of(x) && x.bit_unchecked(u.len()) == b;
                if !next.iter().any(through) {
                    return false;
                }
            }
        }
    }
    true
}
