//! Generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rado_ramsey::ramsey::context::{Case, Cone, ExtensionContext};
use rado_ramsey::ramsey::family::NWFamily;
use rado_ramsey::ramsey::Space;
use rado_ramsey::tree::{is_meet_closed, plus_unchecked, CodingTree, FiniteApprox};
use rado_ramsey::{AdjacencyOracle, Node};
use rand::Rng;
use rayon::prelude::*;

/// Every meet-closed set of at most `max_size` nodes of length `<= max_len`.
pub fn meet_closed_sets(max_len: usize, max_size: usize) -> Vec<BTreeSet<Node>> {
    let pool: Vec<Node> = Node::all_below(max_len + 1).collect();
    let mut out: Vec<BTreeSet<Node>> = vec![BTreeSet::new()];
    let per_first: Vec<Vec<BTreeSet<Node>>> = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            let mut found = Vec::new();
            let mut cur = vec![pool[i]];
            extend(&pool, i + 1, max_size, &mut cur, &mut found);
            found
        })
        .collect();
    out.extend(per_first.into_iter().flatten());
    out
}

fn extend(pool: &[Node], start: usize, max: usize, cur: &mut Vec<Node>, out: &mut Vec<BTreeSet<Node>>) {
    let set: BTreeSet<Node> = cur.iter().copied().collect();
    if is_meet_closed(&set) {
        out.push(set);
    }
    if cur.len() == max {
        return;
    }
    for j in start..pool.len() {
        cur.push(pool[j]);
        extend(pool, j + 1, max, cur, out);
        cur.pop();
    }
}

/// A random front on the cone below `depth`: each approximation is either
/// taken or, when it has children, replaced by all of them.
pub fn random_front(cone: &Cone, space: &Space, depth: usize, expand: f64, max_size: usize, rng: &mut impl Rng) -> Option<NWFamily> {
    let mut members = Vec::new();
    let mut stack: Vec<FiniteApprox> = cone.members(space, depth).ok()?;
    while let Some(u) = stack.pop() {
        let kids = Cone::above(&u).ok()?.members(space, depth).ok()?;
        if !kids.is_empty() && rng.gen_bool(expand) {
            stack.extend(kids);
        } else {
            members.push(u);
        }
        if members.len() + stack.len() > max_size {
            return None;
        }
    }
    NWFamily::new(members).ok()
}

/// Tangent numbers `T_1, T_3, T_5, …` from the derivative polynomials of tan:
/// `P_0 = x`, `P_{n+1} = (1 + x²) P_n'`, `T_n = P_n(0)`.
pub fn tangent_numbers(count: usize) -> Vec<u64> {
    let mut p: Vec<u64> = vec![0, 1];
    let mut out = Vec::new();
    for n in 1..=2 * count {
        let d: Vec<u64> = (1..p.len()).map(|i| p[i] * i as u64).collect();
        let mut next = vec![0u64; d.len() + 2];
        for (i, c) in d.iter().enumerate() {
            next[i] += c;
            next[i + 2] += c;
        }
        p = next;
        if n % 2 == 1 {
            out.push(p[0]);
        }
    }
    out
}

/// Valid contexts in `𝕊_ℝ` of the given depth: case (a) over every
/// approximation with at most `max_k` coding levels and room above its top,
/// and case (b) over `A = r_d`, `d <= 3`, with one successor per top node.
pub fn contexts(depth: usize, max_k: usize) -> Vec<ExtensionContext> {
    let space = Space::rado(AdjacencyOracle::Bit, depth).unwrap();
    let mut approx: Vec<FiniteApprox> = Vec::new();
    let mut frontier = Cone { base: vec![Node::EMPTY], k: 1 }.members(&space, depth - 1).unwrap();
    while let Some(a) = frontier.pop() {
        if a.k() < max_k {
            frontier.extend(Cone::above(&a).unwrap().members(&space, depth - 1).unwrap());
        }
        approx.push(a);
    }
    let mut out = Vec::new();
    for a in approx {
        let d = a.top_length().unwrap() + 1;
        let ctx = ExtensionContext {
            space: space.clone(),
            d,
            b: plus_unchecked(a.nodes()).unwrap(),
            k: a.k(),
            a: a.into_tree(),
            case: Case::A,
        };
        if ctx.validate().is_ok() {
            out.push(ctx);
        }
    }
    for d in 1..=3usize {
        let a: CodingTree = space.restriction(d).unwrap().into_tree();
        let top = a.max_nodes();
        for mask in 0u32..1 << top.len() {
            let mut b = a.nodes().clone();
            for (i, s) in top.iter().enumerate() {
                b.insert(s.child((mask >> i & 1) as u8).unwrap());
            }
            let ctx = ExtensionContext {
                space: space.clone(),
                d,
                a: a.clone(),
                b,
                k: d - 1,
                case: Case::B,
            };
            if ctx.validate().is_ok() {
                out.push(ctx);
            }
        }
    }
    out
}
