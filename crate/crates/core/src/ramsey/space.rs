//! The ambient tree `T` in which extensions are sought.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::{max_depth, Node};
use crate::rado::{AdjacencyOracle, RadoCoding};
use crate::tree::{CodingTree, FiniteApprox};

/// `𝕊_ℝ` truncated to nodes of length `< depth` (never materialized), or an
/// explicit finite tree from `𝒯_ℝ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ambient {
    Rado { depth: usize },
    Tree { tree: CodingTree },
}

/// An ambient tree together with the oracle fixing `𝕊_ℝ`'s coding nodes.
#[derive(Debug, Clone)]
pub struct Space {
    ambient: Ambient,
    coding: RadoCoding,
}

impl PartialEq for Space {
    fn eq(&self, other: &Space) -> bool {
        self.ambient == other.ambient && self.coding.oracle() == other.coding.oracle()
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(oracle: AdjacencyOracle, ambient: Ambient) -> Result<Space> {
        let coding = RadoCoding::new(oracle);
        match &ambient {
            Ambient::Rado { depth } => {
                if *depth > max_depth() {
                    return Err(Error::Depth(format!("ambient depth {depth} exceeds {}", max_depth())));
                }
            }
            Ambient::Tree { tree } => {
                // coding nodes of trees in 𝒯_ℝ are coding nodes of 𝕊_ℝ
                for c in tree.coding() {
                    if coding.coding(c.len())? != *c {
                        return Err(Error::Structure(format!("ambient coding node {c} is not c_{}", c.len())));
                    }
                }
                if tree.levels().len() != tree.coding().len() {
                    return Err(Error::Structure("ambient tree needs one coding node per level".into()));
                }
            }
        }
        Ok(Space { ambient, coding })
    }

    pub fn rado(oracle: AdjacencyOracle, depth: usize) -> Result<Space> {
        Space::new(oracle, Ambient::Rado { depth })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn oracle(&self) -> &AdjacencyOracle {
        self.coding.oracle()
    }

    /// The same ambient cut below length `bound`.
    pub fn truncated(&self, bound: usize) -> Result<Space> {
        let ambient = match &self.ambient {
            Ambient::Rado { depth } => Ambient::Rado {
                depth: (*depth).min(bound),
            },
            Ambient::Tree { tree } => {
                let k = tree.coding().iter().take_while(|c| c.len() < bound).count();
                Ambient::Tree {
                    tree: tree.restriction(k)?.into_tree(),
                }
            }
        };
        Ok(Space {
            ambient,
            coding: self.coding.clone(),
        })
    }

    /// `c_j` of `𝕊_ℝ`.
    pub fn sr_coding(&self, j: usize) -> Result<Node> {
        self.coding.coding(j)
    }

    pub fn rado_coding(&self) -> &RadoCoding {
        &self.coding
    }

    pub fn levels(&self) -> Vec<usize> {
        match &self.ambient {
            Ambient::Rado { depth } => (0..*depth).collect(),
            Ambient::Tree { tree } => tree.levels().to_vec(),
        }
    }

    pub fn is_level(&self, l: usize) -> bool {
        match &self.ambient {
            Ambient::Rado { depth } => l < *depth,
            Ambient::Tree { tree } => tree.levels().binary_search(&l).is_ok(),
        }
    }

    /// Number of coding nodes available.
    pub fn coding_depth(&self) -> usize {
        match &self.ambient {
            Ambient::Rado { depth } => *depth,
            Ambient::Tree { tree } => tree.coding().len(),
        }
    }

    pub fn contains(&self, t: &Node) -> bool {
        match &self.ambient {
            Ambient::Rado { depth } => t.len() < *depth,
            Ambient::Tree { tree } => tree.contains(t),
        }
    }

    /// The coding node of the ambient tree at length `l`.
    pub fn coding_at(&self, l: usize) -> Result<Option<Node>> {
        match &self.ambient {
            Ambient::Rado { depth } => {
                if l < *depth {
                    Ok(Some(self.coding.coding(l)?))
                } else {
                    Ok(None)
                }
            }
            Ambient::Tree { tree } => Ok(tree.coding_at_length(l)),
        }
    }

    /// Ambient nodes of length `level` extending `s`, lex order.
    pub fn extensions_of(&self, s: &Node, level: usize) -> Vec<Node> {
        if level < s.len() || !self.is_level(level) {
            return Vec::new();
        }
        match &self.ambient {
            Ambient::Rado { .. } => {
                let free = level - s.len();
                (0u64..1 << free)
                    .map(|v| {
                        let mut t = *s;
                        for i in (0..free).rev() {
                            t = t.child((v >> i & 1) as u8).expect("level below max depth");
                        }
                        t
                    })
                    .collect()
            }
            Ambient::Tree { tree } => tree.level_nodes(level).filter(|t| s.is_prefix_of(t)).copied().collect(),
        }
    }

    /// Lex-least ambient node of length `level` extending `s`.
    pub fn first_extension_of(&self, s: &Node, level: usize) -> Option<Node> {
        if level < s.len() || !self.is_level(level) {
            return None;
        }
        match &self.ambient {
            Ambient::Rado { .. } => {
                let mut t = *s;
                while t.len() < level {
                    t = t.child(0).ok()?;
                }
                Some(t)
            }
            Ambient::Tree { tree } => tree.level_nodes(level).find(|t| s.is_prefix_of(t)).copied(),
        }
    }

    /// `r_d(T)`.
    pub fn restriction(&self, d: usize) -> Result<FiniteApprox> {
        match &self.ambient {
            Ambient::Rado { depth } => {
                if d > *depth {
                    return Err(Error::Depth(format!("r_{d} of an ambient of depth {depth}")));
                }
                if d > crate::rado::MATERIALIZE_LIMIT {
                    return Err(Error::Budget(format!("r_{d} has 2^{d}-1 nodes")));
                }
                let coding = (0..d).map(|j| self.coding.coding(j)).collect::<Result<Vec<_>>>()?;
                let nodes: BTreeSet<Node> = Node::all_below(d).collect();
                Ok(FiniteApprox::assume(CodingTree::new((0..d).collect(), nodes, coding)?))
            }
            Ambient::Tree { tree } => tree.restriction(d),
        }
    }

    /// Whether `a` lies in the ambient with its coding nodes among the ambient's.
    pub fn holds(&self, a: &CodingTree) -> bool {
        a.nodes().iter().all(|t| self.contains(t))
            && a.levels().iter().all(|&l| self.is_level(l))
            && a.coding().iter().all(|c| self.coding_at(c.len()).ok().flatten() == Some(*c))
    }
}
