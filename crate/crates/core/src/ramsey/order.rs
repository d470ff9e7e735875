//! The well-order `≺` on finite approximations.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::node::{level_set_cmp, LevelSet};
use crate::ramsey::context::{extensions_upto, ExtensionContext};
use crate::tree::FiniteApprox;

/// `F ≺ G` iff `F ⊏ G`, or `F(m) <_lex G(m)` for the largest `m` with
/// `r_m(F) = r_m(G)`.
pub fn prec_cmp(f: &FiniteApprox, g: &FiniteApprox) -> Ordering {
    if f == g {
        return Ordering::Equal;
    }
    if f.is_initial_segment_of(g) {
        return Ordering::Less;
    }
    if g.is_initial_segment_of(f) {
        return Ordering::Greater;
    }
    let m = agreement(f, g);
    let (x, y) = (level(f, m), level(g, m));
    level_set_cmp(&x, &y)
        .then_with(|| f.coding().get(m).cmp(&g.coding().get(m)))
        // unreachable for approximations; keeps the order total on arbitrary trees
        .then_with(|| f.nodes().iter().cmp(g.nodes().iter()))
        .then_with(|| f.levels().cmp(g.levels()))
}

/// Largest `m` with `r_m(F) = r_m(G)`.
fn agreement(f: &FiniteApprox, g: &FiniteApprox) -> usize {
    let top = f.k().min(g.k());
    (0..=top)
        .rev()
        .find(|&m| match (f.initial(m), g.initial(m)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        })
        .unwrap_or(0)
}

fn level(f: &FiniteApprox, m: usize) -> LevelSet {
    LevelSet::new(f.level(m)).expect("a level of a tree is a level set")
}

/// `r_{k+1}[B,T]*` up to new level `bound`, in strictly `≺`-increasing order.
pub fn enumerate_prec(ctx: &ExtensionContext, bound: usize) -> Result<Vec<FiniteApprox>> {
    let mut out = extensions_upto(ctx, bound)?;
    out.sort_by(prec_cmp);
    if let Some(w) = out.windows(2).find(|w| prec_cmp(&w[0], &w[1]) != Ordering::Less) {
        return Err(Error::Structure(format!(
            "≺ fails to separate two extensions at level {}",
            w[0].top_length().unwrap_or(0)
        )));
    }
    Ok(out)
}
