//! Strong similarity types of strongly diagonal antichains.
//!
//! Primary route: a depth-free walk over collapsed shapes. The meet closure
//! of a diagonal antichain of size `n` has `2n - 1` distinct lengths, one
//! event per length: a live thread either splits or ends in a leaf. At a
//! split every other thread must pass 0; at a leaf the other threads pass a
//! free bit, which is the only passing data left. Placing the event of rank
//! `r` at length `r` realizes each type by exactly one antichain.
//!
//! Oracle route: [`brute_force_types`] scans every antichain below a depth.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::node::Node;
use crate::rado::{find_isomorphism, graph6, rado_coding_node, AdjacencyOracle, FiniteGraph};
use crate::similarity::{canonical_form, is_strongly_diagonal, CanonicalForm, FormDigest, MarkedSet, SimKind};

/// Largest `n` for catalog enumeration, per mode.
pub const FULL_LIMIT: usize = 4;
pub const ORDER_LIMIT: usize = 6;
/// Largest graph for [`big_ramsey_degree`].
pub const DEGREE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeEntry {
    pub form: CanonicalForm,
    /// Realizations met while enumerating.
    pub count: u64,
    /// Least realization found, as the antichain's members in `⊲` order.
    pub witness: Option<Vec<Node>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeCatalog {
    pub n: usize,
    pub kind: SimKind,
    pub entries: BTreeMap<FormDigest, TypeEntry>,
}

impl TypeCatalog {
    fn new(n: usize, kind: SimKind) -> TypeCatalog {
        TypeCatalog {
            n,
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn digests(&self) -> BTreeSet<FormDigest> {
        self.entries.keys().copied().collect()
    }

    fn insert(&mut self, form: CanonicalForm, witness: Vec<Node>) {
        let e = self.entries.entry(form.digest()).or_insert_with(|| TypeEntry {
            form,
            count: 0,
            witness: None,
        });
        e.count += 1;
        if e.witness.as_ref().is_none_or(|w| witness < *w) {
            e.witness = Some(witness);
        }
    }

    fn merge(mut self, other: TypeCatalog) -> TypeCatalog {
        for (d, e) in other.entries {
            match self.entries.get_mut(&d) {
                None => {
                    self.entries.insert(d, e);
                }
                Some(mine) => {
                    mine.count += e.count;
                    if let Some(w) = e.witness {
                        if mine.witness.as_ref().is_none_or(|m| w < *m) {
                            mine.witness = Some(w);
                        }
                    }
                }
            }
        }
        self
    }
}

pub fn antichain_form(a: &[Node], kind: SimKind) -> Result<CanonicalForm> {
    canonical_form(&MarkedSet::antichain(&a.iter().copied().collect()), kind)
}

#[derive(Clone)]
struct Walk {
    threads: Vec<Node>,
    leaves: Vec<Node>,
    splits_left: usize,
    leaves_left: usize,
}

impl Walk {
    fn start(n: usize) -> Walk {
        Walk {
            threads: if n == 0 { vec![] } else { vec![Node::EMPTY] },
            leaves: vec![],
            splits_left: n.saturating_sub(1),
            leaves_left: n,
        }
    }

    /// Successor states after the event at the current rank.
    fn step(&self, full: bool) -> Vec<Walk> {
        let mut out = Vec::new();
        let live = self.threads.len();
        for i in 0..live {
            if self.splits_left > 0 {
                let mut threads = Vec::with_capacity(live + 1);
                for (j, t) in self.threads.iter().enumerate() {
                    if j == i {
                        threads.push(t.child(0).expect("shape depth"));
                        threads.push(t.child(1).expect("shape depth"));
                    } else {
                        threads.push(t.child(0).expect("shape depth"));
                    }
                }
                out.push(Walk {
                    threads,
                    leaves: self.leaves.clone(),
                    splits_left: self.splits_left - 1,
                    leaves_left: self.leaves_left,
                });
            }
            if live > 1 || self.splits_left == 0 {
                let others: Vec<Node> = self.threads.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| *t).collect();
                let free = if full { others.len() } else { 0 };
                for mask in 0u32..(1 << free) {
                    let threads = others
                        .iter()
                        .enumerate()
                        .map(|(j, t)| t.child((mask >> j & 1) as u8).expect("shape depth"))
                        .collect();
                    let mut leaves = self.leaves.clone();
                    leaves.push(self.threads[i]);
                    out.push(Walk {
                        threads,
                        leaves,
                        splits_left: self.splits_left,
                        leaves_left: self.leaves_left - 1,
                    });
                }
            }
        }
        out
    }

    fn finish(self, full: bool, emit: &mut dyn FnMut(Vec<Node>)) {
        if self.threads.is_empty() {
            emit(self.leaves);
            return;
        }
        for w in self.step(full) {
            w.finish(full, emit);
        }
    }
}

/// Collapsed realizations, leaves listed by increasing length.
fn collapsed_antichains(n: usize, full: bool) -> Vec<Vec<Node>> {
    // fan out over the first two ranks
    let mut frontier = vec![Walk::start(n)];
    for _ in 0..2 {
        frontier = frontier
            .into_iter()
            .flat_map(|w| if w.threads.is_empty() { vec![w] } else { w.step(full) })
            .collect();
    }
    frontier
        .into_par_iter()
        .map(|w| {
            let mut out = Vec::new();
            w.finish(full, &mut |leaves| out.push(leaves));
            out
        })
        .flatten()
        .collect()
}

fn check_budget(n: usize, kind: SimKind) -> Result<()> {
    let limit = match kind {
        SimKind::Full => FULL_LIMIT,
        SimKind::OrderOnly => ORDER_LIMIT,
    };
    if n > limit {
        return Err(Error::Budget(format!("{kind:?} type enumeration is capped at n = {limit}")));
    }
    Ok(())
}

pub fn enumerate_diagonal_types(n: usize, kind: SimKind) -> Result<TypeCatalog> {
    check_budget(n, kind)?;
    let realizations = collapsed_antichains(n, kind == SimKind::Full);
    realizations
        .into_par_iter()
        .map(|leaves| {
            let mut members = leaves;
            members.sort();
            let form = antichain_form(&members, kind)?;
            let mut c = TypeCatalog::new(n, kind);
            c.insert(form, members);
            Ok(c)
        })
        .try_reduce(|| TypeCatalog::new(n, kind), |a, b| Ok(a.merge(b)))
}

/// Caps for [`brute_force_types`].
pub const BRUTE_N_LIMIT: usize = 4;
pub const BRUTE_DEPTH_LIMIT: usize = 7;

/// Every strongly diagonal antichain of size `n` among nodes of length `< depth`.
pub fn brute_force_types(n: usize, depth: usize, kind: SimKind) -> Result<TypeCatalog> {
    if n > BRUTE_N_LIMIT || depth > BRUTE_DEPTH_LIMIT {
        return Err(Error::Budget(format!(
            "brute force is capped at n = {BRUTE_N_LIMIT}, depth = {BRUTE_DEPTH_LIMIT}"
        )));
    }
    let pool: Vec<Node> = Node::all_below(depth).collect();
    if n == 0 {
        let mut c = TypeCatalog::new(0, kind);
        c.insert(antichain_form(&[], kind)?, vec![]);
        return Ok(c);
    }

    fn go(start: usize, pool: &[Node], n: usize, chosen: &mut Vec<Node>, kind: SimKind, cat: &mut TypeCatalog) -> Result<()> {
        if chosen.len() == n {
            let set: BTreeSet<Node> = chosen.iter().copied().collect();
            if is_strongly_diagonal(&set)? {
                cat.insert(antichain_form(chosen, kind)?, chosen.clone());
            }
            return Ok(());
        }
        for i in start..pool.len() {
            let t = pool[i];
            if chosen.iter().any(|c| c.comparable(&t)) {
                continue;
            }
            chosen.push(t);
            go(i + 1, pool, n, chosen, kind, cat)?;
            chosen.pop();
        }
        Ok(())
    }

    (0..pool.len())
        .into_par_iter()
        .map(|first| {
            let mut cat = TypeCatalog::new(n, kind);
            let mut chosen = vec![pool[first]];
            go(first + 1, &pool, n, &mut chosen, kind, &mut cat)?;
            Ok(cat)
        })
        .try_reduce(|| TypeCatalog::new(n, kind), |a, b| Ok(a.merge(b)))
}

/// The graph an antichain codes: leaves ordered by length, `i < j` adjacent
/// iff leaf `j` passes 1 at the length of leaf `i`.
pub fn decode_antichain(a: &[Node]) -> Result<FiniteGraph> {
    let mut leaves = a.to_vec();
    leaves.sort_by_key(|t| t.len());
    if leaves.windows(2).any(|w| w[0].len() == w[1].len()) {
        return Err(Error::Structure("leaves of a diagonal antichain have distinct lengths".into()));
    }
    let mut g = FiniteGraph::empty(leaves.len());
    for j in 0..leaves.len() {
        for i in 0..j {
            if leaves[j].bit_unchecked(leaves[i].len()) == 1 {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedCopy {
    pub graph6: String,
    pub edges: Vec<(usize, usize)>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub count: u64,
    /// Per copy of the graph with vertices ordered by leaf length.
    pub ordered: Vec<OrderedCopy>,
}

/// Number of Full diagonal types whose coded graph is isomorphic to `g`.
///
/// Counts without canonicalizing: a type is an order shape plus the free
/// passing bits, and the bit a thread passes at a leaf is shared by every
/// later leaf on that thread. So an ordered copy `H` is realized on a shape
/// iff `H` is constant on each such group, and then in exactly one way.
pub fn big_ramsey_degree(g: &FiniteGraph) -> Result<DegreeReport> {
    let n = g.n();
    if n > DEGREE_LIMIT {
        return Err(Error::Budget(format!("degrees are computed for at most {DEGREE_LIMIT} vertices")));
    }
    let copies = ordered_copies(g);
    let groups: Vec<Vec<(usize, usize, usize)>> = collapsed_antichains(n, false).iter().map(|l| thread_groups(l)).collect();
    let counts: Vec<u64> = copies
        .par_iter()
        .map(|h| {
            groups
                .iter()
                .filter(|cs| cs.iter().all(|&(i, j, k)| h.has_edge(i, j) == h.has_edge(i, k)))
                .count() as u64
        })
        .collect();
    let ordered: Vec<OrderedCopy> = copies
        .iter()
        .zip(counts)
        .map(|(h, count)| OrderedCopy {
            graph6: graph6::encode(h),
            edges: h.edges(),
            count,
        })
        .collect();
    Ok(DegreeReport {
        count: ordered.iter().map(|c| c.count).sum(),
        ordered,
    })
}

/// Distinct relabellings of `g`, sorted by graph6.
pub fn ordered_copies(g: &FiniteGraph) -> Vec<FiniteGraph> {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut seen: BTreeMap<String, FiniteGraph> = BTreeMap::new();
    loop {
        let h = g.permuted(&perm);
        seen.entry(graph6::encode(&h)).or_insert(h);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    seen.into_values().collect()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Constraints `(i, j, k)`: leaves `j` and `k` share a thread when leaf `i`
/// ends, so they pass the same bit there. Leaves are listed by length and the
/// shape's free bits are all 0.
fn thread_groups(leaves: &[Node]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..leaves.len() {
        let mut first: BTreeMap<Node, usize> = BTreeMap::new();
        for j in i + 1..leaves.len() {
            let rep = *first.entry(leaves[j].truncate(leaves[i].len())).or_insert(j);
            if rep != j {
                out.push((i, rep, j));
            }
        }
    }
    out
}

pub const DEVLIN_LIMIT: usize = 5;

/// Number of OrderOnly diagonal types of size `n`.
pub fn devlin_count(n: usize) -> Result<usize> {
    if n > DEVLIN_LIMIT {
        return Err(Error::Budget(format!("devlin counts are computed for n ≤ {DEVLIN_LIMIT}")));
    }
    Ok(enumerate_diagonal_types(n, SimKind::OrderOnly)?.len())
}

/// Visit cap for [`realize_witness`].
pub const WITNESS_VISIT_LIMIT: u64 = 5_000_000;

/// Searches `2^{<depth}` for a strongly diagonal antichain with canonical
/// form `form`. With an oracle, leaves are restricted to the coding nodes
/// `c_0..c_{depth-1}` of `𝕊_ℝ`.
///
/// Leaves are chosen by increasing length, each new leaf longer than all
/// previous ones; every partial choice must stay a strongly diagonal
/// antichain, since subsets of diagonal antichains are diagonal.
pub fn realize_witness(form: &CanonicalForm, oracle: Option<&AdjacencyOracle>, depth: usize) -> Result<Option<Vec<Node>>> {
    let n = form.entries.iter().filter(|e| e.member).count();
    let pool: Vec<Node> = match oracle {
        Some(o) => (0..depth).map(|m| rado_coding_node(o, m)).collect::<Result<_>>()?,
        None => {
            if depth > 24 {
                return Err(Error::Budget("free witness search is capped at depth 24".into()));
            }
            let mut v: Vec<Node> = Node::all_below(depth).collect();
            v.sort_by_key(|t| (t.len(), t.lex_rank()));
            v
        }
    };
    let target = form.digest();
    let kind = form.kind;
    let mut visits = 0u64;

    fn go(
        start: usize,
        pool: &[Node],
        n: usize,
        chosen: &mut Vec<Node>,
        kind: SimKind,
        target: FormDigest,
        visits: &mut u64,
    ) -> Result<Option<Vec<Node>>> {
        *visits += 1;
        if *visits > WITNESS_VISIT_LIMIT {
            return Ok(None);
        }
        if chosen.len() == n {
            let mut members = chosen.clone();
            members.sort();
            return Ok((antichain_form(&members, kind)?.digest() == target).then_some(members));
        }
        let min_len = chosen.last().map_or(0, |t| t.len() + 1);
        for i in start..pool.len() {
            let t = pool[i];
            if t.len() < min_len || chosen.iter().any(|c| c.comparable(&t)) {
                continue;
            }
            chosen.push(t);
            let set: BTreeSet<Node> = chosen.iter().copied().collect();
            if is_strongly_diagonal(&set)? {
                if let Some(w) = go(i + 1, pool, n, chosen, kind, target, visits)? {
                    return Ok(Some(w));
                }
            }
            chosen.pop();
        }
        Ok(None)
    }
    go(0, &pool, n, &mut Vec::new(), kind, target, &mut visits)
}

/// Graph isomorphism check used by the degree filters.
pub fn codes_graph(a: &[Node], g: &FiniteGraph) -> Result<bool> {
    Ok(find_isomorphism(&decode_antichain(a)?, g).is_some())
}
