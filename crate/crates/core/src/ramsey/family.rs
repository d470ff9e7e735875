//! Nash-Williams families, fronts and their ranks.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::node::{LevelSet, Node};
use crate::ramsey::context::{Cone, ExtensionContext};
use crate::ramsey::order::prec_cmp;
use crate::ramsey::ordinal::OrdinalCnf;
use crate::ramsey::space::Space;
use crate::tree::{max_of, FiniteApprox};

/// Node budget for the depth-bounded growth tree behind [`is_front`].
pub const GROWTH_LIMIT: usize = 200_000;

/// A family no member of which is an initial segment of another.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FiniteApprox>", into = "Vec<FiniteApprox>")]
pub struct NWFamily {
    members: Vec<FiniteApprox>,
}

impl TryFrom<Vec<FiniteApprox>> for NWFamily {
    type Error = Error;

    fn try_from(v: Vec<FiniteApprox>) -> Result<NWFamily> {
        NWFamily::new(v)
    }
}

impl From<NWFamily> for Vec<FiniteApprox> {
    fn from(f: NWFamily) -> Vec<FiniteApprox> {
        f.members
    }
}

impl NWFamily {
    /// Members are kept in `≺` order, duplicates merged.
    pub fn new(members: Vec<FiniteApprox>) -> Result<NWFamily> {
        let mut members = members;
        members.sort_by(prec_cmp);
        members.dedup();
        if let Some((a, b)) = related_pair(&members) {
            return Err(Error::Structure(format!(
                "not Nash-Williams: the member with {} coding levels is an initial segment of one with {}",
                a.k(),
                b.k()
            )));
        }
        Ok(NWFamily { members })
    }

    pub fn members(&self) -> &[FiniteApprox] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: &FiniteApprox) -> bool {
        self.members.binary_search_by(|m| prec_cmp(m, c)).is_ok()
    }
}

fn related_pair(fam: &[FiniteApprox]) -> Option<(&FiniteApprox, &FiniteApprox)> {
    for (i, a) in fam.iter().enumerate() {
        for b in &fam[i + 1..] {
            if a.is_initial_segment_of(b) {
                return Some((a, b));
            }
            if b.is_initial_segment_of(a) {
                return Some((b, a));
            }
        }
    }
    None
}

/// No member is a `⊑`-initial segment of another (a repeated member counts).
pub fn is_nash_williams(fam: &[FiniteApprox]) -> bool {
    related_pair(fam).is_none()
}

/// `ℱ_B`, `ℱ|T` and `ℱ̃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyOps {
    pub over_b: Vec<FiniteApprox>,
    pub within: Vec<FiniteApprox>,
    pub closure: Vec<FiniteApprox>,
}

/// Whether some level `F(m)` end-extends `max(B)`.
pub fn passes_through(f: &FiniteApprox, max_b: &LevelSet) -> bool {
    (0..f.k()).any(|m| LevelSet::new(f.level(m)).is_ok_and(|x| x.end_extends(max_b)))
}

pub fn family_ops(fam: &NWFamily, b: &BTreeSet<Node>, space: &Space) -> Result<FamilyOps> {
    let max_b = LevelSet::new(max_of(b))?;
    let over_b = fam.members.iter().filter(|f| passes_through(f, &max_b)).cloned().collect();
    let within = fam.members.iter().filter(|f| space.holds(f)).cloned().collect();
    let mut closure = Vec::new();
    for f in &fam.members {
        for j in 0..=f.k() {
            closure.push(f.initial(j)?);
        }
    }
    closure.sort_by(prec_cmp);
    closure.dedup();
    Ok(FamilyOps { over_b, within, closure })
}

/// Order type of `(ℱ, ≺)`: a finite family is a finite linear order.
pub fn rank(fam: &NWFamily) -> OrdinalCnf {
    debug_assert!(fam.members.windows(2).all(|w| prec_cmp(&w[0], &w[1]) == Ordering::Less));
    OrdinalCnf::finite(fam.len() as u64)
}

/// Order type of the cylinder `r_{k+n}[B,𝕊]`.
pub fn symbolic_rank(b: &FiniteApprox, n: u32) -> OrdinalCnf {
    let _ = b;
    OrdinalCnf::omega_pow(n)
}

/// 0 if `C ∈ ℱ`, 1 if `C ∉ ℱ̃`, 2 if `C ∈ ℱ̃ \ ℱ`.
pub fn classify(c: &FiniteApprox, fam: &NWFamily) -> u8 {
    if fam.contains(c) {
        0
    } else if fam.members.iter().any(|f| c.is_initial_segment_of(f)) {
        2
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "snake_case")]
pub enum FrontOutcome {
    Front,
    NotFront(String),
    Undecided(String),
}

/// Every approximation reachable from `cone` one level at a time with all
/// levels below `depth`, in `≺`-respecting preorder (parent before children).
pub fn growth_tree(cone: &Cone, space: &Space, depth: usize) -> Result<Vec<(FiniteApprox, bool)>> {
    let mut out = Vec::new();
    let mut stack: Vec<FiniteApprox> = cone.members(space, depth)?;
    stack.reverse();
    while let Some(u) = stack.pop() {
        if out.len() >= GROWTH_LIMIT {
            return Err(Error::Budget(format!("growth tree exceeds {GROWTH_LIMIT} approximations below depth {depth}")));
        }
        let mut kids = Cone::above(&u)?.members(space, depth)?;
        let leaf = kids.is_empty();
        kids.reverse();
        stack.extend(kids);
        out.push((u, leaf));
    }
    Ok(out)
}

/// Front test on the cone, exhaustive below `depth`. A dead end of the
/// growth tree that no member covers is a counterexample unless some member
/// extends it beyond the depth, in which case the test is inconclusive.
pub fn is_front_in(fam: &NWFamily, cone: &Cone, space: &Space, depth: usize) -> Result<FrontOutcome> {
    if let Some((a, b)) = related_pair(&fam.members) {
        return Ok(FrontOutcome::NotFront(format!(
            "Nash-Williams fails: a {}-level member is an initial segment of a {}-level member",
            a.k(),
            b.k()
        )));
    }
    let base = LevelSet::new(cone.base.clone())?;
    for f in &fam.members {
        let root_ok = f.k() >= cone.k
            && f.initial(cone.k).is_ok_and(|r| LevelSet::new(r.level(cone.k - 1)).is_ok_and(|x| x.end_extends(&base)))
            && space.holds(f);
        if !root_ok {
            return Ok(FrontOutcome::NotFront("a member lies outside the cone".into()));
        }
    }
    for (s, leaf) in growth_tree(cone, space, depth)? {
        if !leaf || fam.members.iter().any(|f| f.is_initial_segment_of(&s)) {
            continue;
        }
        let where_ = format!("uncovered approximation with top level {}", s.top_length().unwrap_or(0));
        return Ok(if fam.members.iter().any(|f| s.is_initial_segment_of(f)) {
            FrontOutcome::Undecided(where_)
        } else {
            FrontOutcome::NotFront(where_)
        });
    }
    Ok(FrontOutcome::Front)
}

/// Front test on `[B,T]*`.
pub fn is_front(fam: &NWFamily, ctx: &ExtensionContext, depth: usize) -> Result<FrontOutcome> {
    ctx.validate()?;
    is_front_in(fam, &ctx.cone(), &ctx.space, depth)
}

/// The one-step front: all of `r_{k+1}[B,T]*` below `depth`.
pub fn one_step_front(ctx: &ExtensionContext, depth: usize) -> Result<NWFamily> {
    ctx.validate()?;
    NWFamily::new(ctx.cone().members(&ctx.space, depth)?)
}
