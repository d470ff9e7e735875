//! Extension contexts `(T, D, A, B, k)` and the sets `r_{k+1}[B,T]*`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::{LevelSet, Node};
use crate::rado::AdjacencyOracle;
use crate::ramsey::space::{Ambient, Space};
use crate::similarity::{is_approximation_structural, trace_at, ApproximationChecker};
use crate::tree::{lengths_of, max_of, meet_closure, plus_unchecked, CodingTree, FiniteApprox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `A ∈ 𝒜𝒯_k(T)` and `B = A⁺`.
    A,
    /// Each node of `max(A)` has exactly one extension in `B`.
    B,
}

/// Hypotheses of the pigeonhole theorem, at finite depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionContext {
    pub space: Space,
    pub d: usize,
    pub a: CodingTree,
    pub b: BTreeSet<Node>,
    pub k: usize,
    pub case: Case,
}

#[derive(Serialize, Deserialize)]
struct ContextRepr {
    oracle: AdjacencyOracle,
    ambient: Ambient,
    d: usize,
    a: CodingTree,
    b: Vec<Node>,
    k: usize,
    case: Case,
}

impl Serialize for ExtensionContext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ContextRepr {
            oracle: self.space.oracle().clone(),
            ambient: self.space.ambient().clone(),
            d: self.d,
            a: self.a.clone(),
            b: self.b.iter().copied().collect(),
            k: self.k,
            case: self.case,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtensionContext {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<ExtensionContext, D::Error> {
        let r = ContextRepr::deserialize(d)?;
        Ok(ExtensionContext {
            space: Space::new(r.oracle, r.ambient).map_err(serde::de::Error::custom)?,
            d: r.d,
            a: r.a,
            b: r.b.into_iter().collect(),
            k: r.k,
            case: r.case,
        })
    }
}

/// Outcome of [`validate_context`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextReport {
    pub valid: bool,
    pub violations: Vec<String>,
    pub s_d: Option<Node>,
}

impl ExtensionContext {
    /// Case (a) with `B = A⁺` and `D = r_d(T)` for the least `d` with
    /// `max(A) ⊆ max(D)`.
    pub fn case_a(space: Space, a: CodingTree) -> Result<ExtensionContext> {
        let k = a.coding().len();
        let b = plus_unchecked(a.nodes())?;
        let d = a.levels().len();
        let ctx = ExtensionContext {
            space,
            d,
            a,
            b,
            k,
            case: Case::A,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// The worked context: `A = {⟨⟩}`, `B = A⁺`, `k = 1` in `𝕊_ℝ` of the given depth.
    pub fn worked(oracle: AdjacencyOracle, depth: usize) -> Result<ExtensionContext> {
        let space = Space::rado(oracle, depth)?;
        let a = space.restriction(1)?.into_tree();
        ExtensionContext::case_a(space, a)
    }

    pub fn max_b(&self) -> Vec<Node> {
        max_of(&self.b)
    }

    /// `l_B`.
    pub fn l_b(&self) -> usize {
        self.b.iter().next_back().map_or(0, Node::len)
    }

    /// The node of `max(B)` that every extension's coding node extends.
    pub fn s_d(&self) -> Result<Node> {
        let max_b = self.max_b();
        let slot = coding_slot(&self.space, self.k + 1)?;
        max_b
            .get(slot)
            .copied()
            .ok_or_else(|| Error::Context(vec![format!("max(B) has {} nodes, need 2^k = {}", max_b.len(), 1usize << self.k)]))
    }

    pub fn cone(&self) -> Cone {
        Cone {
            base: self.max_b(),
            k: self.k + 1,
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let sp = &self.space;
        let a_nodes = self.a.nodes();
        if self.d > sp.coding_depth() {
            v.push(format!("d = {} exceeds the ambient's {} coding levels", self.d, sp.coding_depth()));
            return v;
        }
        let dtree = match sp.restriction(self.d) {
            Ok(t) => t,
            Err(e) => {
                v.push(format!("r_d(T): {e}"));
                return v;
            }
        };
        if let Some(t) = a_nodes.iter().find(|t| !sp.contains(t)) {
            v.push(format!("A has node {t} outside T"));
        }
        let max_a = self.a.max_nodes();
        let max_d: BTreeSet<Node> = dtree.max_nodes().into_iter().collect();
        if !max_a.iter().all(|t| max_d.contains(t)) {
            v.push("max(A) ⊆ max(D) fails".into());
        }
        if !a_nodes.is_subset(&self.b) {
            v.push("A ⊆ B fails".into());
        }
        let children: BTreeSet<Node> = max_a.iter().flat_map(|s| [s.child(0), s.child(1)]).filter_map(Result::ok).collect();
        let extra: BTreeSet<Node> = self.b.difference(a_nodes).copied().collect();
        if extra.is_empty() || !extra.is_subset(&children) {
            v.push("max(B) must be a nonempty subset of max(A⁺)".into());
        }
        if let Some(t) = extra.iter().find(|t| !sp.levels().iter().any(|&l| sp.first_extension_of(t, l).is_some())) {
            v.push(format!("{t} has no extension in T"));
        }
        match self.case {
            Case::A => {
                if self.k < 1 {
                    v.push("case (a) needs k ≥ 1".into());
                }
                let checker = ApproximationChecker::new(sp.oracle().clone());
                match checker.check(&self.a) {
                    Ok(Some(k)) if k == self.k => {}
                    Ok(_) => v.push(format!("A is not in 𝒜𝒯_{}", self.k)),
                    Err(e) => v.push(format!("A: {e}")),
                }
                if !sp.holds(&self.a) {
                    v.push("A is not a subtree of T with T's coding nodes".into());
                }
                if extra != children {
                    v.push("case (a) needs B = A⁺".into());
                }
            }
            Case::B => {
                if a_nodes.is_empty() {
                    v.push("case (b) needs A nonempty".into());
                }
                for s in &max_a {
                    let n = extra.iter().filter(|t| s.is_prefix_of(t)).count();
                    if n != 1 {
                        v.push(format!("{s} has {n} extensions in B, need exactly one"));
                    }
                }
                if max_a.len() != 1usize << self.k.min(63) {
                    v.push(format!("card(max(A)) = {} is not 2^k = 2^{}", max_a.len(), self.k));
                }
            }
        }
        if v.is_empty() {
            if let Err(e) = self.s_d() {
                v.push(e.to_string());
            }
        }
        v
    }

    /// Every hypothesis, each violation reported separately.
    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Context(v))
        }
    }

    /// `r_d(T)`.
    pub fn d_tree(&self) -> Result<FiniteApprox> {
        self.space.restriction(self.d)
    }
}

pub fn validate_context(ctx: &ExtensionContext) -> ContextReport {
    let violations = ctx.violations();
    let valid = violations.is_empty();
    ContextReport {
        valid,
        s_d: if valid { ctx.s_d().ok() } else { None },
        violations,
    }
}

/// Lex position of the top coding node inside any member of `𝒜𝒯_k`.
pub fn coding_slot(space: &Space, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::Domain("𝒜𝒯_0 has no coding node".into()));
    }
    Ok(space.sr_coding(k - 1)?.lex_rank() as usize)
}

/// `{C ∈ 𝒜𝒯_k(T) : max(C) ⊒ base}` for a lex-sorted level set `base` of
/// `2^{k-1}` nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub base: Vec<Node>,
    pub k: usize,
}

impl Cone {
    /// The cone of alternates `r_k[B,T]*` of an approximation `B ∈ 𝒜𝒯_k`.
    pub fn of_approx(b: &FiniteApprox) -> Cone {
        Cone {
            base: b.max_nodes(),
            k: b.k(),
        }
    }

    /// One-level extensions of `u ∈ 𝒜𝒯_j`: the cone above `max(u⁺)`.
    pub fn above(u: &CodingTree) -> Result<Cone> {
        let base = u
            .max_nodes()
            .iter()
            .flat_map(|s| [s.child(0), s.child(1)])
            .collect::<Result<Vec<_>>>()?;
        Ok(Cone {
            base,
            k: u.coding().len() + 1,
        })
    }

    pub fn base_length(&self) -> usize {
        self.base.first().map_or(0, Node::len)
    }

    /// Members whose top level has length `level`.
    pub fn at_level(&self, space: &Space, level: usize) -> Result<Vec<FiniteApprox>> {
        end_extensions(&self.base, self.k, space, level)
    }

    /// All members with top level below `bound` (and inside the ambient).
    pub fn members(&self, space: &Space, bound: usize) -> Result<Vec<FiniteApprox>> {
        let mut out = Vec::new();
        for l in space.levels() {
            if l >= self.base_length() && l < bound {
                out.extend(self.at_level(space, l)?);
            }
        }
        Ok(out)
    }
}

/// Lower part shared by every member of a cone: the nodes `x↾l` for `l` a
/// meet length of the base, with their coding nodes.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub levels: Vec<usize>,
    pub nodes: BTreeSet<Node>,
    pub coding: Vec<Node>,
    pub slot: usize,
}

/// `None` when no member of `𝒜𝒯_k(T)` can end-extend `base`.
pub fn skeleton(base: &[Node], k: usize, space: &Space) -> Result<Option<Skeleton>> {
    if k == 0 || base.len() != 1usize << (k - 1).min(63) {
        return Ok(None);
    }
    let base_set: BTreeSet<Node> = base.iter().copied().collect();
    if base_set.len() != base.len() || lengths_of(&base_set).len() > 1 {
        return Err(Error::Structure("cone base must be a level set".into()));
    }
    let meets: BTreeSet<Node> = meet_closure(&base_set).difference(&base_set).copied().collect();
    let levels = lengths_of(&meets);
    if levels.len() != k - 1 {
        return Ok(None);
    }
    let nodes: BTreeSet<Node> = base.iter().flat_map(|x| levels.iter().map(move |&l| x.truncate(l))).collect();
    let mut coding = Vec::with_capacity(k - 1);
    for (j, &l) in levels.iter().enumerate() {
        let Some(c) = space.coding_at(l)? else {
            return Ok(None);
        };
        if !nodes.contains(&c) || trace_at(&c, &levels[..j]) != space.sr_coding(j)? {
            return Ok(None);
        }
        coding.push(c);
    }
    // traces at the top level follow the base, so one check covers every member
    let slot = coding_slot(space, k)?;
    let traces: BTreeSet<Node> = base.iter().map(|x| trace_at(x, &levels)).collect();
    if traces.len() != base.len() || trace_at(&base[slot], &levels) != space.sr_coding(k - 1)? {
        return Ok(None);
    }
    for (j, &l) in levels.iter().enumerate() {
        let at: BTreeSet<Node> = nodes.iter().filter(|t| t.len() == l).map(|t| trace_at(t, &levels[..j])).collect();
        if at.len() != 1 << j || nodes.iter().filter(|t| t.len() == l).count() != 1 << j {
            return Ok(None);
        }
    }
    if !nodes.iter().all(|t| space.contains(t)) {
        return Ok(None);
    }
    Ok(Some(Skeleton { levels, nodes, coding, slot }))
}

impl Skeleton {
    /// `C_X` for a top level `x` (lex order, coding node at `slot`).
    pub fn complete(&self, x: &[Node]) -> FiniteApprox {
        let mut levels = self.levels.clone();
        levels.push(x[0].len());
        let mut nodes = self.nodes.clone();
        nodes.extend(x.iter().copied());
        let mut coding = self.coding.clone();
        coding.push(x[self.slot]);
        FiniteApprox::assume(CodingTree::from_parts_unchecked(levels, nodes, coding))
    }
}

/// Members of `𝒜𝒯_k(T)` whose top level sits at `level` and end-extends
/// `base`, in lex order of their top levels. Fast route: the skeleton is
/// checked once, after which any choice of top nodes with the ambient coding
/// node in the coding slot is a member.
pub fn end_extensions(base: &[Node], k: usize, space: &Space, level: usize) -> Result<Vec<FiniteApprox>> {
    let Some(sk) = skeleton(base, k, space)? else {
        return Ok(Vec::new());
    };
    let lb = base[0].len();
    if level < lb || !space.is_level(level) {
        return Ok(Vec::new());
    }
    let Some(c) = space.coding_at(level)? else {
        return Ok(Vec::new());
    };
    if !base[sk.slot].is_prefix_of(&c) {
        return Ok(Vec::new());
    }
    let choices: Vec<Vec<Node>> = base
        .iter()
        .enumerate()
        .map(|(i, s)| if i == sk.slot { vec![c] } else { space.extensions_of(s, level) })
        .collect();
    let mut out = Vec::new();
    for_each_product(&choices, &mut |x| out.push(sk.complete(x)));
    debug_assert!(out
        .iter()
        .all(|c| is_approximation_structural(c, space.rado_coding()).ok().flatten() == Some(k)));
    Ok(out)
}

/// Calls `f` on each element of the product, first factor most significant.
pub(crate) fn for_each_product(choices: &[Vec<Node>], f: &mut dyn FnMut(&[Node])) {
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut cur: Vec<Node> = choices.iter().map(|c| c[0]).collect();
    loop {
        f(&cur);
        let mut i = choices.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                cur[i] = choices[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = choices[i][0];
        }
    }
}

/// `r_{k+1}[B,T]*` members at `level`.
pub fn extensions(ctx: &ExtensionContext, level: usize) -> Result<Vec<FiniteApprox>> {
    ctx.validate()?;
    end_extensions(&ctx.max_b(), ctx.k + 1, &ctx.space, level)
}

/// `r_{k+1}[B,T]*` members with top level at most `bound`.
pub fn extensions_upto(ctx: &ExtensionContext, bound: usize) -> Result<Vec<FiniteApprox>> {
    ctx.validate()?;
    ctx.cone().members(&ctx.space, bound + 1)
}

/// `{C ∈ r_{k+1}[B,T]* : C ⊆ U}` for a finite tree `U`, by the fast route.
pub fn extensions_within(ctx: &ExtensionContext, u: &CodingTree) -> Result<Vec<FiniteApprox>> {
    let inner = Space::new(ctx.space.oracle().clone(), Ambient::Tree { tree: u.clone() })?;
    ctx.cone().members(&inner, usize::MAX)
}

/// The same set by the slow route: every level set of `U` end-extending
/// `max(B)`, closed under meets and accepted by canonical-form comparison.
pub fn extensions_within_canonical(ctx: &ExtensionContext, u: &CodingTree) -> Result<Vec<FiniteApprox>> {
    let base = LevelSet::new(ctx.max_b())?;
    let checker = ApproximationChecker::new(ctx.space.oracle().clone());
    let mut out = Vec::new();
    for &l in u.levels().iter().filter(|&&l| l >= base.length()) {
        let choices: Vec<Vec<Node>> = base
            .nodes()
            .iter()
            .map(|s| u.level_nodes(l).filter(|t| s.is_prefix_of(t)).copied().collect())
            .collect();
        let mut err = None;
        for_each_product(&choices, &mut |x| {
            if err.is_some() {
                return;
            }
            match induced_tree(x, |l| u.coding_at_length(l)).and_then(|c| Ok((checker.check(&c)?, c))) {
                Ok((Some(k), c)) if k == ctx.k + 1 && c.nodes().is_subset(u.nodes()) => out.push(FiniteApprox::assume(c)),
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out)
}

/// The tree induced by the meet closure of a level set `x`: every `t↾l` for
/// `t ∈ x` and `l` a length in the closure, with the coding nodes `coding_at`
/// reports at those lengths (where they are tree nodes).
pub fn induced_tree(x: &[Node], coding_at: impl Fn(usize) -> Option<Node>) -> Result<CodingTree> {
    let set: BTreeSet<Node> = x.iter().copied().collect();
    let levels = lengths_of(&meet_closure(&set));
    let nodes: BTreeSet<Node> = x
        .iter()
        .flat_map(|t| levels.iter().filter(|&&l| l <= t.len()).map(move |&l| t.truncate(l)))
        .collect();
    let coding: Vec<Node> = levels.iter().filter_map(|&l| coding_at(l)).filter(|c| nodes.contains(c)).collect();
    CodingTree::new(levels, nodes, coding)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn worked_context_is_valid() {
        let ctx = ExtensionContext::worked(AdjacencyOracle::Bit, 9).unwrap();
        let r = validate_context(&ctx);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.s_d, Some(n("1")));
        assert_eq!(ctx.l_b(), 1);
    }

    #[test]
    fn invalid_contexts() {
        let ctx = ExtensionContext::worked(AdjacencyOracle::Bit, 9).unwrap();
        let mut partial = ctx.clone();
        partial.b.remove(&n("0"));
        assert!(!validate_context(&partial).valid);
        partial.case = Case::B;
        assert!(!validate_context(&partial).valid);
        partial.k = 0;
        let r = validate_context(&partial);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.s_d, Some(n("1")));

        // case (b) with two extensions of one max(A) node
        let space = Space::rado(AdjacencyOracle::Bit, 9).unwrap();
        let a = space.restriction(2).unwrap().into_tree();
        let bad = ExtensionContext {
            space,
            d: 2,
            b: a.nodes().iter().copied().chain([n("00"), n("01"), n("10")]).collect(),
            a,
            k: 1,
            case: Case::B,
        };
        let r = validate_context(&bad);
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| v.contains("exactly one")), "{:?}", r.violations);
    }

    #[test]
    fn worked_extension_counts() {
        let ctx = ExtensionContext::worked(AdjacencyOracle::Bit, 9).unwrap();
        let counts: Vec<usize> = (0..9).map(|l| extensions(&ctx, l).unwrap().len()).collect();
        assert_eq!(counts, vec![0, 1, 0, 4, 0, 16, 0, 64, 0]);
        for c in extensions(&ctx, 3).unwrap() {
            assert_eq!(c.coding()[1], n("110"));
            assert!(c.level(1).iter().all(|t| t.len() == 3));
        }
    }

    #[test]
    fn fast_and_canonical_routes_agree() {
        let bit = AdjacencyOracle::Bit;
        let ctx = ExtensionContext::worked(bit.clone(), 8).unwrap();
        let u = crate::rado::build_sr(&bit, 8).unwrap();
        let fast = extensions_within(&ctx, &u).unwrap();
        let slow = extensions_within_canonical(&ctx, &u).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast.len(), 1 + 4 + 16 + 64);
    }

    #[test]
    fn alternates_of_a_single_node() {
        let space = Space::rado(AdjacencyOracle::Bit, 6).unwrap();
        let b = space.restriction(1).unwrap();
        let cone = Cone::of_approx(&b);
        let roots = cone.members(&space, 6).unwrap();
        // {c_l} for each level l
        assert_eq!(roots.len(), 6);
        assert!(roots.iter().all(|r| r.k() == 1 && r.len() == 1));
    }

    #[test]
    fn product_order() {
        let choices = vec![vec![n("0"), n("1")], vec![n("00"), n("01")]];
        let mut seen = Vec::new();
        for_each_product(&choices, &mut |x| seen.push(x.to_vec()));
        assert_eq!(seen.len(), 4);
        assert_eq!(seen[1], vec![n("0"), n("01")]);
    }
}
