//! Concrete Rado graphs, the coding tree `𝕊_ℝ`, and the passage between
//! subgraphs and the trees induced by their coding nodes.

pub mod graph;
pub mod graph6;
pub mod oracle;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::node::{max_depth, Node, MAX_DEPTH};
use crate::similarity;
use crate::tree::CodingTree;

pub use graph::{find_isomorphism, is_isomorphic, FiniteGraph};
pub use oracle::{bit_adjacent, AdjacencyOracle};

/// Trees with more levels than this are not materialized node by node.
pub const MATERIALIZE_LIMIT: usize = 20;

/// `c_n` of `𝕊_ℝ`: the length-`n` node with `c_n(m) = 1` iff `m E n`.
pub fn rado_coding_node(oracle: &AdjacencyOracle, n: usize) -> Result<Node> {
    if n > MAX_DEPTH {
        return Err(Error::Depth(format!("coding node c_{n} exceeds depth {MAX_DEPTH}")));
    }
    let mut bits = 0u64;
    for m in 0..n {
        if oracle.adjacent(m, n)? {
            bits |= 1 << m;
        }
    }
    Node::from_raw(bits, n)
}

/// Memoized coding nodes of `𝕊_ℝ`; the infinite tree is implicit (every node
/// of length below the bound belongs to it).
#[derive(Debug)]
pub struct RadoCoding {
    oracle: AdjacencyOracle,
    cache: Vec<OnceLock<Result<Node>>>,
}

impl RadoCoding {
    pub fn new(oracle: AdjacencyOracle) -> RadoCoding {
        RadoCoding {
            oracle,
            cache: (0..=MAX_DEPTH).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn oracle(&self) -> &AdjacencyOracle {
        &self.oracle
    }

    /// `c_n`.
    pub fn coding(&self, n: usize) -> Result<Node> {
        match self.cache.get(n) {
            Some(cell) => cell.get_or_init(|| rado_coding_node(&self.oracle, n)).clone(),
            None => Err(Error::Depth(format!("coding node c_{n} exceeds depth {MAX_DEPTH}"))),
        }
    }

    pub fn is_coding(&self, t: &Node) -> bool {
        self.coding(t.len()).map(|c| c == *t).unwrap_or(false)
    }
}

impl Clone for RadoCoding {
    fn clone(&self) -> RadoCoding {
        RadoCoding::new(self.oracle.clone())
    }
}

/// The depth-`k` truncation of `𝕊_ℝ`: every node of length `< k`, with
/// `c_0 … c_{k-1}` designated.
pub fn build_sr(oracle: &AdjacencyOracle, k: usize) -> Result<CodingTree> {
    let limit = max_depth();
    if k > limit {
        return Err(Error::Depth(format!("depth {k} exceeds the maximum {limit}")));
    }
    if k > MATERIALIZE_LIMIT {
        return Err(Error::Budget(format!(
            "materializing {k} levels needs 2^{k} nodes; the limit is {MATERIALIZE_LIMIT} levels"
        )));
    }
    let coding = (0..k).map(|n| rado_coding_node(oracle, n)).collect::<Result<Vec<_>>>()?;
    let nodes: BTreeSet<Node> = Node::all_below(k).collect();
    Ok(CodingTree::from_parts_unchecked((0..k).collect(), nodes, coding))
}

/// Graph on coding indices: `m < n` adjacent iff `c_n(|c_m|) = 1`.
pub fn decode_graph(t: &CodingTree) -> FiniteGraph {
    decode_coding(t.coding())
}

fn decode_coding(coding: &[Node]) -> FiniteGraph {
    let mut g = FiniteGraph::empty(coding.len());
    for (n, cn) in coding.iter().enumerate() {
        for (m, cm) in coding[..n].iter().enumerate() {
            if cn.bit(cm.len()) == Some(1) {
                g.add_edge(m, n).expect("indices in range");
            }
        }
    }
    g
}

/// The tree induced by a list of coding nodes of increasing length:
/// nodes `c_n↾l_m` for `l_m ≤ l_n`, levels `{l_n}`.
pub fn induced_by_coding(coding: &[Node]) -> Result<CodingTree> {
    let levels: Vec<usize> = coding.iter().map(Node::len).collect();
    let mut nodes = BTreeSet::new();
    for c in coding {
        for &l in levels.iter().take_while(|&&l| l <= c.len()) {
            nodes.insert(c.truncate(l));
        }
    }
    CodingTree::new(levels, nodes, coding.to_vec())
}

/// `T_𝔾` for the vertices `universe` (indices into the coding nodes of `s`).
pub fn tree_of_subgraph(universe: &[usize], s: &CodingTree) -> Result<CodingTree> {
    let idx: BTreeSet<usize> = universe.iter().copied().collect();
    if let Some(&bad) = idx.iter().find(|&&i| i >= s.coding().len()) {
        return Err(Error::Depth(format!(
            "vertex {bad} is beyond the {} coding nodes of the tree",
            s.coding().len()
        )));
    }
    let coding: Vec<Node> = idx.iter().map(|&i| s.coding()[i]).collect();
    induced_by_coding(&coding)
}

/// Diagnostic outcome of [`roundtrip_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub ok: bool,
    pub notes: Vec<String>,
}

/// Round trip `S → 𝔾_S → T_{𝔾_S}` through the ambient `𝕊_ℝ`.
///
/// `S` must be an approximation whose coding nodes are coding nodes of
/// `𝕊_ℝ`; the vertices it represents are their lengths. The tree induced in
/// `𝕊_ℝ` by those vertices must equal the part of `S` spanned by its coding
/// nodes, and both must decode to the induced subgraph of the oracle.
pub fn roundtrip_check(s: &CodingTree, oracle: &AdjacencyOracle) -> Result<RoundTrip> {
    let mut notes = Vec::new();
    if similarity::is_approximation(s, oracle)? != Some(s.coding().len()) {
        notes.push("not strongly similar to r_k of the ambient tree".to_string());
        return Ok(RoundTrip { ok: false, notes });
    }
    let amb = RadoCoding::new(oracle.clone());
    let vertices: Vec<usize> = s.coding().iter().map(Node::len).collect();
    for c in s.coding() {
        if !amb.is_coding(c) {
            notes.push(format!("coding node {c} is not the ambient coding node of its length"));
        }
    }
    if !notes.is_empty() {
        return Ok(RoundTrip { ok: false, notes });
    }
    let ambient: Vec<Node> = vertices.iter().map(|&v| amb.coding(v)).collect::<Result<_>>()?;
    let t_g = induced_by_coding(&ambient)?;
    let spanned = induced_by_coding(s.coding())?;
    if t_g != spanned {
        notes.push("induced tree differs from the coding-spanned part".to_string());
    }
    if !spanned.nodes().is_subset(s.nodes()) {
        notes.push("coding-spanned nodes missing from the tree".to_string());
    }
    let g_s = decode_graph(s);
    if decode_graph(&t_g) != g_s {
        notes.push("decoded graphs differ".to_string());
    }
    let mut want = FiniteGraph::empty(vertices.len());
    for j in 0..vertices.len() {
        for i in 0..j {
            if oracle.adjacent(vertices[i], vertices[j])? {
                want.add_edge(i, j)?;
            }
        }
    }
    if g_s != want {
        notes.push("decoded graph is not the induced subgraph of the oracle".to_string());
    }
    Ok(RoundTrip { ok: notes.is_empty(), notes })
}

/// Outcome of [`check_extension_property`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub pairs_checked: usize,
    /// The first few `(U, V)` pairs without a witness.
    pub failures: Vec<(Vec<usize>, Vec<usize>)>,
    pub failure_count: usize,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.failure_count == 0
    }
}

/// For every disjoint `U, V ⊆ {0..pool}` with `|U| + |V| ≤ max_size`, looks
/// for a vertex `w < depth` outside `U ∪ V` adjacent to all of `U` and none of `V`.
pub fn check_extension_property(
    oracle: &AdjacencyOracle,
    depth: usize,
    pool: usize,
    max_size: usize,
) -> Result<ExtensionReport> {
    let pool = pool.min(depth);
    let mut report = ExtensionReport {
        pairs_checked: 0,
        failures: Vec::new(),
        failure_count: 0,
    };
    let mut subset = Vec::new();
    fn subsets(
        start: usize,
        pool: usize,
        max_size: usize,
        subset: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        f(subset)?;
        if subset.len() == max_size {
            return Ok(());
        }
        for v in start..pool {
            subset.push(v);
            subsets(v + 1, pool, max_size, subset, f)?;
            subset.pop();
        }
        Ok(())
    }
    subsets(0, pool, max_size, &mut subset, &mut |w| {
        if w.is_empty() && max_size == 0 {
            return Ok(());
        }
        for mask in 0u32..(1 << w.len()) {
            let (u, v): (Vec<usize>, Vec<usize>) = (0..w.len())
                .map(|i| (mask >> i & 1 == 1, w[i]))
                .fold((Vec::new(), Vec::new()), |(mut u, mut v), (inside, x)| {
                    if inside { u.push(x) } else { v.push(x) }
                    (u, v)
                });
            report.pairs_checked += 1;
            let mut found = false;
            for cand in (0..depth).filter(|c| !w.contains(c)) {
                let mut ok = true;
                for &x in &u {
                    ok &= oracle.adjacent(cand, x)?;
                }
                for &x in &v {
                    ok &= !oracle.adjacent(cand, x)?;
                }
                if ok {
                    found = true;
                    break;
                }
            }
            if !found {
                report.failure_count += 1;
                if report.failures.len() < 16 {
                    report.failures.push((u, v));
                }
            }
        }
        Ok(())
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn bit_coding_nodes() {
        let t = build_sr(&AdjacencyOracle::Bit, 5).unwrap();
        assert_eq!(t.coding()[3], n("110"));
        assert_eq!(t.coding()[4], n("0010"));
        assert_eq!(build_sr(&AdjacencyOracle::Bit, 1).unwrap().coding()[0], Node::EMPTY);
        assert_eq!(t.len(), 31);
    }

    #[test]
    fn build_limits() {
        assert!(matches!(build_sr(&AdjacencyOracle::Bit, 65), Err(Error::Depth(_))));
        assert!(matches!(build_sr(&AdjacencyOracle::Bit, 40), Err(Error::Budget(_))));
        let small = AdjacencyOracle::explicit(FiniteGraph::complete(3));
        assert!(matches!(build_sr(&small, 4), Err(Error::Depth(_))));
    }

    #[test]
    fn decode_path() {
        let t = build_sr(&AdjacencyOracle::Bit, 3).unwrap();
        assert_eq!(decode_graph(&t).edges(), vec![(0, 1), (1, 2)]);
        let one = build_sr(&AdjacencyOracle::Bit, 1).unwrap();
        assert_eq!(decode_graph(&one).n(), 1);
    }

    #[test]
    fn subgraph_tree_example() {
        let s = build_sr(&AdjacencyOracle::Bit, 6).unwrap();
        let t = tree_of_subgraph(&[1, 3], &s).unwrap();
        assert_eq!(t.coding(), &[n("1"), n("110")]);
        assert_eq!(t.levels(), &[1, 3]);
        assert_eq!(decode_graph(&t).edges(), vec![(0, 1)]);
        assert!(tree_of_subgraph(&[], &s).unwrap().is_empty());
        assert!(matches!(tree_of_subgraph(&[6], &s), Err(Error::Depth(_))));
    }

    #[test]
    fn subgraph_tree_identity_on_spanned_trees() {
        let s = build_sr(&AdjacencyOracle::Bit, 7).unwrap();
        let t = tree_of_subgraph(&[0, 2, 5], &s).unwrap();
        assert_eq!(tree_of_subgraph(&[0, 1, 2], &t).unwrap(), t);
    }

    #[test]
    fn extension_property_examples() {
        let bit = check_extension_property(&AdjacencyOracle::Bit, 1024, 10, 3).unwrap();
        assert!(bit.holds());
        let k3 = AdjacencyOracle::explicit(FiniteGraph::complete(3));
        let r = check_extension_property(&k3, 3, 3, 3).unwrap();
        assert!(r.failures.contains(&(vec![], vec![0, 1, 2])));
        let vacuous = check_extension_property(&AdjacencyOracle::Bit, 2, 2, 0).unwrap();
        assert!(vacuous.holds());
        assert_eq!(vacuous.pairs_checked, 0);
    }

    #[test]
    fn lazy_coding_matches_tree() {
        let amb = RadoCoding::new(AdjacencyOracle::SeededRandom(3));
        let t = build_sr(amb.oracle(), 9).unwrap();
        for (i, c) in t.coding().iter().enumerate() {
            assert_eq!(amb.coding(i).unwrap(), *c);
            assert!(amb.is_coding(c));
        }
    }
}
