//! Finite simple graphs on vertices `0..n`.

use std::fmt;

use crate::error::{Error, Result};

/// Symmetric, irreflexive adjacency over `0..n`, stored as a flat bit matrix.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteGraph {
    n: usize,
    words: Vec<u64>,
}

impl FiniteGraph {
    pub fn empty(n: usize) -> FiniteGraph {
        FiniteGraph {
            n,
            words: vec![0; (n * n).div_ceil(64)],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<FiniteGraph> {
        let mut g = FiniteGraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> FiniteGraph {
        let mut g = FiniteGraph::empty(n);
        for v in 1..n {
            for u in 0..v {
                g.set(u, v, true);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize, on: bool) {
        for (a, b) in [(u, v), (v, u)] {
            let i = a * self.n + b;
            if on {
                self.words[i / 64] |= 1 << (i % 64);
            } else {
                self.words[i / 64] &= !(1 << (i % 64));
            }
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::Domain(format!("loop at vertex {u}")));
        }
        if u.max(v) >= self.n {
            return Err(Error::Domain(format!("edge ({u},{v}) outside 0..{}", self.n)));
        }
        self.set(u, v, true);
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let i = u * self.n + v;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Edges `(u, v)` with `u < v`, ordered by `v` then `u`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.n)
            .flat_map(|v| (0..v).map(move |u| (u, v)))
            .filter(|&(u, v)| self.has_edge(u, v))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_edge(u, v)).count()
    }

    /// Induced subgraph on `vertices`, relabelled `0..` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> FiniteGraph {
        let mut g = FiniteGraph::empty(vertices.len());
        for (j, &b) in vertices.iter().enumerate() {
            for (i, &a) in vertices[..j].iter().enumerate() {
                if self.has_edge(a, b) {
                    g.set(i, j, true);
                }
            }
        }
        g
    }

    pub fn complement(&self) -> FiniteGraph {
        let mut g = FiniteGraph::empty(self.n);
        for v in 1..self.n {
            for u in 0..v {
                if !self.has_edge(u, v) {
                    g.set(u, v, true);
                }
            }
        }
        g
    }

    /// Graph with vertex `i` of `self` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteGraph {
        let mut g = FiniteGraph::empty(self.n);
        for (u, v) in self.edges() {
            g.set(perm[u], perm[v], true);
        }
        g
    }

    /// Named small graphs: `K<n>` complete, `E<n>` edgeless, `P<n>` path,
    /// `C<n>` cycle (n ≥ 3). `K1`, `P1` and `E1` all denote one vertex.
    pub fn named(name: &str) -> Result<FiniteGraph> {
        let bad = || Error::Parse(format!("unknown graph name {name:?}"));
        let (kind, rest) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
        let n: usize = rest.parse().map_err(|_| bad())?;
        match kind {
            "K" => Ok(FiniteGraph::complete(n)),
            "E" => Ok(FiniteGraph::empty(n)),
            "P" => FiniteGraph::from_edges(n, (1..n).map(|v| (v - 1, v))),
            "C" if n >= 3 => FiniteGraph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))),
            _ => Err(bad()),
        }
    }
}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Permutation search with degree-sequence pruning; returns `perm` such that
/// `a.permuted(perm) == b`.
pub fn find_isomorphism(a: &FiniteGraph, b: &FiniteGraph) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.edge_count() != b.edge_count() {
        return None;
    }
    let da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &FiniteGraph,
        b: &FiniteGraph,
        da: &[usize],
        db: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == a.n() {
            return true;
        }
        for j in 0..a.n() {
            if used[j] || da[i] != db[j] {
                continue;
            }
            if (0..i).any(|p| a.has_edge(p, i) != b.has_edge(perm[p], j)) {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            if go(i + 1, a, b, da, db, perm, used) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    go(0, a, b, &da, &db, &mut perm, &mut used).then_some(perm)
}

pub fn is_isomorphic(a: &FiniteGraph, b: &FiniteGraph) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs() {
        assert_eq!(FiniteGraph::named("K3").unwrap().edge_count(), 3);
        assert_eq!(FiniteGraph::named("P3").unwrap().edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(FiniteGraph::named("C4").unwrap().edge_count(), 4);
        assert_eq!(FiniteGraph::named("E2").unwrap().edge_count(), 0);
        assert!(FiniteGraph::named("C2").is_err());
        assert!(FiniteGraph::named("Q3").is_err());
    }

    #[test]
    fn rejects_loops() {
        let mut g = FiniteGraph::empty(2);
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(0, 2).is_err());
    }

    #[test]
    fn isomorphism_of_paths() {
        let p = FiniteGraph::named("P3").unwrap();
        let q = FiniteGraph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        let perm = find_isomorphism(&p, &q).unwrap();
        assert_eq!(p.permuted(&perm), q);
        assert!(!is_isomorphic(&p, &FiniteGraph::named("K3").unwrap()));
        assert!(is_isomorphic(&FiniteGraph::named("C4").unwrap(), &FiniteGraph::from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap()));
    }

    #[test]
    fn complement_and_induced() {
        let k = FiniteGraph::complete(4);
        assert_eq!(k.complement().edge_count(), 0);
        let p = FiniteGraph::named("P4").unwrap();
        assert_eq!(p.induced(&[0, 2, 3]).edges(), vec![(1, 2)]);
    }
}
