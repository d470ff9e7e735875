//! Finite monochromatization: build a chain `r_d(T) = U_0 ⊏ U_1 ⊏ …` one
//! level at a time so that `h` is constant on every member of
//! `r_{k+1}[B,U]*`, and check such chains independently.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::Node;
use crate::ramsey::coloring::ColorOracle;
use crate::ramsey::context::{
    extensions_within_canonical, for_each_product, skeleton, validate_context, ExtensionContext, Skeleton,
};
use crate::ramsey::space::Space;
use crate::similarity::ApproximationChecker;
use crate::tree::{CodingTree, FiniteApprox};

/// First-level branches evaluated together; fixed so that reported visit
/// counts do not depend on the worker count.
const BRANCH_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Node assignments tried per first-level branch before giving up on it.
    pub visit_cap: u64,
    /// Count only levels that carry extensions towards the target.
    pub active_only: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            visit_cap: 1_000_000,
            active_only: false,
        }
    }
}

/// A finite witness that `h` is monochromatic on `r_{k+1}[B,U]*` for the last
/// tree `U` of the chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub context: ExtensionContext,
    pub color: u32,
    /// Levels of `U` above `l_B`; at least one level carries an extension.
    pub target_levels: usize,
    /// Whether `target_levels` counts only levels carrying extensions.
    #[serde(default)]
    pub active_only: bool,
    /// Every level of `U` lies below this length.
    pub depth_budget: usize,
    pub chain: Vec<CodingTree>,
}

impl Certificate {
    pub fn last(&self) -> &CodingTree {
        self.chain.last().expect("a certificate chain is never empty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub certificate: Option<Certificate>,
    pub visits: u64,
    /// Some branch ran out of visits before the answer was settled.
    pub exhausted: bool,
}

/// [`search_with`] under default options, keeping only the certificate.
pub fn search_monochromatic(
    ctx: &ExtensionContext,
    h: &dyn ColorOracle,
    target_levels: usize,
    depth_budget: usize,
) -> Result<Option<Certificate>> {
    Ok(search_with(ctx, h, target_levels, depth_budget, &SearchOptions::default())?.certificate)
}

/// Levels ascend; within a level, nodes are tried slot by slot in lex order.
/// The first certificate in that order is returned whatever the pool size.
pub fn search_with(
    ctx: &ExtensionContext,
    h: &dyn ColorOracle,
    target_levels: usize,
    depth_budget: usize,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    ctx.validate()?;
    if target_levels == 0 {
        return Err(Error::Domain("target_levels must be at least 1".into()));
    }
    let space = ctx.space.truncated(depth_budget)?;
    let max_b = ctx.max_b();
    let none = SearchOutcome {
        certificate: None,
        visits: 0,
        exhausted: false,
    };
    let Some(sk) = skeleton(&max_b, ctx.k + 1, &space)? else {
        return Ok(none);
    };
    let d = ctx.d_tree()?.into_tree();
    let codes = (0..depth_budget).map(|l| space.coding_at(l)).collect::<Result<_>>()?;
    let s = Searcher {
        h,
        codes,
        space,
        sk,
        max_b,
        l_b: ctx.l_b(),
        target: target_levels,
        budget: depth_budget,
        cap: opts.visit_cap,
        active_only: opts.active_only,
    };
    let start = State {
        chain: vec![d],
        color: None,
        counted: 0,
    };

    let mut branches = Vec::new();
    for plan in s.plans(&start)? {
        match plan.slots.iter().position(|sl| sl.relevant) {
            Some(r) => {
                for &v in &plan.slots[r].cands {
                    let mut p = plan.clone();
                    p.slots[r].cands = vec![v];
                    branches.push(p);
                }
            }
            None => branches.push(plan),
        }
    }

    let mut visits = 0u64;
    let mut exhausted = false;
    for chunk in branches.chunks(BRANCH_CHUNK) {
        let results: Vec<(Step, u64)> = chunk
            .par_iter()
            .map(|p| {
                let mut v = 0u64;
                let r = s.run_plan(&start, p, &mut v);
                (r, v)
            })
            .collect();
        for (r, v) in results {
            visits += v;
            match r {
                Ok(Some((chain, color))) => {
                    return Ok(SearchOutcome {
                        certificate: Some(Certificate {
                            context: ctx.clone(),
                            color,
                            target_levels,
                            active_only: opts.active_only,
                            depth_budget,
                            chain,
                        }),
                        visits,
                        exhausted,
                    })
                }
                Ok(None) => {}
                Err(Stop::Cap) => exhausted = true,
                Err(Stop::Fail(e)) => return Err(e),
            }
        }
    }
    Ok(SearchOutcome {
        certificate: None,
        visits,
        exhausted,
    })
}

struct Searcher<'a> {
    h: &'a dyn ColorOracle,
    space: Space,
    sk: Skeleton,
    max_b: Vec<Node>,
    l_b: usize,
    target: usize,
    budget: usize,
    cap: u64,
    active_only: bool,
    /// Ambient coding node at each length below the budget.
    codes: Vec<Option<Node>>,
}

#[derive(Clone)]
struct State {
    chain: Vec<CodingTree>,
    color: Option<u32>,
    counted: usize,
}

impl State {
    fn last(&self) -> &CodingTree {
        self.chain.last().expect("chain starts at r_d(T)")
    }
}

/// How to fill one new level: one slot per immediate successor of a top node.
#[derive(Clone)]
struct Plan {
    level: usize,
    slots: Vec<Slot>,
    /// The new coding node extends `s_d`, so the level carries extensions.
    active: bool,
    coding: Node,
}

#[derive(Clone)]
struct Slot {
    group: Option<usize>,
    relevant: bool,
    cands: Vec<Node>,
}

enum Stop {
    Cap,
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Stop {
        Stop::Fail(e)
    }
}

type Step = std::result::Result<Option<(Vec<CodingTree>, u32)>, Stop>;

impl Searcher<'_> {
    fn plans(&self, st: &State) -> Result<Vec<Plan>> {
        let top_len = st.last().top_length().unwrap_or(0);
        let mut out = Vec::new();
        for level in top_len + 1..self.budget {
            if let Some(p) = self.plan(st, level)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Whether some later level below the budget has its coding node above `x`.
    fn reachable(&self, x: &Node) -> bool {
        self.codes[x.len()..].iter().flatten().any(|c| x.is_prefix_of(c))
    }

    fn plan(&self, st: &State, level: usize) -> Result<Option<Plan>> {
        let u = st.last();
        if !self.space.is_level(level) {
            return Ok(None);
        }
        let Some(coding) = self.space.coding_at(level)? else {
            return Ok(None);
        };
        let p = self.space.sr_coding(u.coding().len())?.lex_rank() as usize;
        let prefixes: Vec<Node> = u
            .max_nodes()
            .iter()
            .flat_map(|y| [y.child(0), y.child(1)])
            .collect::<Result<_>>()?;
        if !prefixes.get(p).is_some_and(|x| x.is_prefix_of(&coding)) {
            return Ok(None);
        }
        let group_of = |x: &Node| self.max_b.iter().position(|s| s.is_prefix_of(x));
        let active = group_of(&prefixes[p]) == Some(self.sk.slot);
        // unless this level finishes the chain, the next coding node must fit
        // above the node chosen for slot `next >> 1`
        let last = st.counted + self.counts(active, level) == self.target;
        let next = self.space.sr_coding(u.coding().len() + 1)?.lex_rank() as usize;
        let mut slots = Vec::with_capacity(prefixes.len());
        for (i, x) in prefixes.iter().enumerate() {
            let group = group_of(x);
            let relevant = active && i != p && group.is_some_and(|g| g != self.sk.slot);
            let mut cands = if i == p || relevant || (!last && i == next >> 1) {
                if i == p {
                    vec![coding]
                } else {
                    self.space.extensions_of(x, level)
                }
            } else {
                self.space.first_extension_of(x, level).into_iter().collect()
            };
            if !last && i == next >> 1 {
                cands.retain(|v| v.child((next & 1) as u8).is_ok_and(|y| self.reachable(&y)));
                if !relevant {
                    cands.truncate(1);
                }
            }
            if cands.is_empty() {
                return Ok(None);
            }
            slots.push(Slot { group, relevant, cands });
        }
        Ok(Some(Plan {
            level,
            slots,
            active,
            coding,
        }))
    }

    fn counts(&self, active: bool, level: usize) -> usize {
        usize::from((active || !self.active_only) && level > self.l_b)
    }

    fn extend(&self, st: &State, visits: &mut u64) -> Step {
        if st.counted == self.target {
            return Ok(st.color.map(|c| (st.chain.clone(), c)));
        }
        for plan in self.plans(st)? {
            if let Some(found) = self.run_plan(st, &plan, visits)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn run_plan(&self, st: &State, plan: &Plan, visits: &mut u64) -> Step {
        let mut groups: Vec<Vec<Node>> = vec![Vec::new(); self.max_b.len()];
        let mut color = st.color;
        if plan.active {
            groups[self.sk.slot].push(plan.coding);
            if self.max_b.len() == 1 && !self.agree(&[plan.coding], &mut color)? {
                return Ok(None);
            }
        }
        let mut chosen = Vec::with_capacity(plan.slots.len());
        self.fill(st, plan, &mut chosen, &mut groups, color, visits)
    }

    /// Colors `C_X`, fixing the chain color on first use.
    fn agree(&self, x: &[Node], color: &mut Option<u32>) -> Result<bool> {
        let c = self.h.color(&self.sk.complete(x))?;
        Ok(match color {
            None => {
                *color = Some(c);
                true
            }
            Some(k) => *k == c,
        })
    }

    fn fill(
        &self,
        st: &State,
        plan: &Plan,
        chosen: &mut Vec<Node>,
        groups: &mut Vec<Vec<Node>>,
        color: Option<u32>,
        visits: &mut u64,
    ) -> Step {
        let i = chosen.len();
        if i == plan.slots.len() {
            let u = st.last();
            let mut levels = u.levels().to_vec();
            levels.push(plan.level);
            let mut nodes = u.nodes().clone();
            nodes.extend(chosen.iter().copied());
            let mut coding = u.coding().to_vec();
            coding.push(plan.coding);
            let mut chain = st.chain.clone();
            chain.push(CodingTree::from_parts_unchecked(levels, nodes, coding));
            let next = State {
                chain,
                color,
                counted: st.counted + self.counts(plan.active, plan.level),
            };
            return self.extend(&next, visits);
        }
        let slot = &plan.slots[i];
        for &v in &slot.cands {
            *visits += 1;
            if *visits > self.cap {
                return Err(Stop::Cap);
            }
            let mut col = color;
            if slot.relevant {
                let g = slot.group.expect("relevant slots have a group");
                let mut choices = groups.clone();
                choices[g] = vec![v];
                let mut ok = true;
                let mut err = None;
                for_each_product(&choices, &mut |x| {
                    if ok {
                        match self.agree(x, &mut col) {
                            Ok(a) => ok = a,
                            Err(e) => {
                                ok = false;
                                err = Some(e);
                            }
                        }
                    }
                });
                if let Some(e) = err {
                    return Err(e.into());
                }
                if !ok {
                    continue;
                }
                groups[g].push(v);
            }
            chosen.push(v);
            let r = self.fill(st, plan, chosen, groups, col, visits);
            chosen.pop();
            if let Some(g) = slot.group.filter(|_| slot.relevant) {
                groups[g].pop();
            }
            if let Some(found) = r? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Result of [`verify_certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub diagnosis: Vec<String>,
    pub extensions_checked: usize,
}

/// Rechecks a certificate from scratch: the context, the chain's shape and
/// membership in `𝒜𝒯` by canonical forms, and `h` on every extension of `B`
/// inside the last tree, found by brute force over its level sets.
pub fn verify_certificate(cert: &Certificate, h: &dyn ColorOracle) -> Verdict {
    let mut diag = Vec::new();
    let mut checked = 0;
    let done = |diag: Vec<String>, checked| Verdict {
        valid: diag.is_empty(),
        diagnosis: diag,
        extensions_checked: checked,
    };
    let ctx = &cert.context;
    let report = validate_context(ctx);
    if !report.valid {
        diag.extend(report.violations.into_iter().map(|v| format!("context: {v}")));
        return done(diag, 0);
    }
    let Some(first) = cert.chain.first() else {
        diag.push("empty chain".into());
        return done(diag, 0);
    };
    match ctx.d_tree() {
        Ok(d) if d.tree() == first => {}
        Ok(_) => diag.push("chain does not start at r_d(T)".into()),
        Err(e) => diag.push(format!("r_d(T): {e}")),
    }
    let space = match ctx.space.truncated(cert.depth_budget) {
        Ok(s) => s,
        Err(e) => {
            diag.push(e.to_string());
            return done(diag, 0);
        }
    };
    let checker = ApproximationChecker::new(ctx.space.oracle().clone());
    for (i, u) in cert.chain.iter().enumerate() {
        match checker.check(u) {
            Ok(Some(k)) if k == u.coding().len() => {}
            Ok(_) => diag.push(format!("chain[{i}] is not strongly similar to r_k of the Rado tree")),
            Err(e) => diag.push(format!("chain[{i}]: {e}")),
        }
        if !space.holds(u) {
            diag.push(format!("chain[{i}] leaves the ambient tree or its depth budget"));
        }
        if i > 0 {
            let prev = &cert.chain[i - 1];
            let k = prev.coding().len();
            if u.coding().len() != k + 1 || u.levels().len() != prev.levels().len() + 1 {
                diag.push(format!("chain[{i}] does not add exactly one level"));
            } else if u.restriction(k).map(|r| r.tree() != prev).unwrap_or(true) {
                diag.push(format!("chain[{}] is not an initial segment of chain[{i}]", i - 1));
            }
        }
    }
    if !diag.is_empty() {
        return done(diag, 0);
    }
    let exts = match extensions_within_canonical(ctx, cert.last()) {
        Ok(e) => e,
        Err(e) => {
            diag.push(format!("enumerating extensions: {e}"));
            return done(diag, 0);
        }
    };
    let mut per_level: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &exts {
        checked += 1;
        *per_level.entry(c.top_length().unwrap_or(0)).or_default() += 1;
        match h.color(c) {
            Ok(k) if k == cert.color => {}
            Ok(k) => diag.push(format!(
                "extension at level {} has color {k}, not {}",
                c.top_length().unwrap_or(0),
                cert.color
            )),
            Err(e) => diag.push(format!("coloring failed: {e}")),
        }
    }
    if exts.is_empty() {
        diag.push("no extension of B inside the last tree".into());
    }
    let above = |l: &usize| *l > ctx.l_b();
    let counted = if cert.active_only {
        per_level.keys().filter(|l| above(l)).count()
    } else {
        cert.last().levels().iter().filter(|l| above(l)).count()
    };
    if counted != cert.target_levels {
        diag.push(format!(
            "{counted} counted levels above l_B, certificate claims {}",
            cert.target_levels
        ));
    }
    done(diag, checked)
}

/// The extensions a certificate covers, for reporting.
pub fn certified_extensions(cert: &Certificate) -> Result<Vec<FiniteApprox>> {
    extensions_within_canonical(&cert.context, cert.last())
}
