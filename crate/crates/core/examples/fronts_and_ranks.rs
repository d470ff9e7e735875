//! The one-step front of the worked context, its operations and rank.

use rado_ramsey::ramsey::family::{classify, family_ops, is_front, one_step_front, rank, symbolic_rank};
use rado_ramsey::ramsey::ExtensionContext;
use rado_ramsey::AdjacencyOracle;

fn main() -> rado_ramsey::Result<()> {
    let ctx = ExtensionContext::worked(AdjacencyOracle::Bit, 7)?;
    let front = one_step_front(&ctx, 6)?;
    println!("one-step front below 6: {} members, rank {}", front.len(), rank(&front));
    println!("front check: {:?}", is_front(&front, &ctx, 6)?);

    let ops = family_ops(&front, &ctx.b, &ctx.space)?;
    println!("through max(B): {}, closure: {}", ops.over_b.len(), ops.closure.len());
    let first = &front.members()[0];
    println!("classify(first member) = {}", classify(first, &front));
    println!("classify(its base) = {}", classify(&first.initial(ctx.k)?, &front));

    let b = ctx.space.restriction(1)?;
    for n in 0..4 {
        println!("order type of r_(k+{n})[B,S]: {}", symbolic_rank(&b, n));
    }
    Ok(())
}
