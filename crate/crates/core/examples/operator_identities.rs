//! Assemble the linear operators and check their algebraic identities.

use nonlocal_diffusion::fourier::BasisLayout;
use nonlocal_diffusion::operators::{assemble, EpsilonSequence, Operator};

fn main() -> nonlocal_diffusion::Result<()> {
    let layout = BasisLayout::new(32)?;
    let get = |op: Operator| assemble(&op, layout);
    let j = get(Operator::J)?;
    let b = get(Operator::B)?;
    let d = get(Operator::D)?;
    let eps = EpsilonSequence::new(0.05, 0.5)?;
    let k = get(Operator::K(eps))?;

    let refl_g = get(Operator::Reflection)?.compose(&get(Operator::Hilbert)?);
    println!("|R G - J|        = {:.1e}", refl_g.max_abs_diff(&j));
    println!("|B - B^T|        = {:.1e}", b.max_abs_diff(&b.transpose()));
    println!("|K + K^T|        = {:.1e}", (k.entries() + k.entries().transpose()).amax());
    println!("|K|_2            = {:.6} (eps0 = {})", k.norm2(), eps.eps0());
    let db = d.compose(&b);
    println!("(D B)[1..N] vs J = {:.1e}", {
        let n = layout.dim();
        (db.entries().columns(1, n - 2) - j.entries().columns(1, n - 2)).amax()
    });
    Ok(())
}
