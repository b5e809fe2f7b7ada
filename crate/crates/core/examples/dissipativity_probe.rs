//! Empirical absorbing ball from random large seeds, against the closed-form radius.

use nonlocal_diffusion::nonlinearity::ModelParams;
use nonlocal_diffusion::semiflow::{absorbing_radius, dissipativity_probe, random_seeds};

fn main() -> nonlocal_diffusion::Result<()> {
    let p = ModelParams::defaults().with_order(32)?;
    let probe = dissipativity_probe(&random_seeds(6, 10.0), &p, 10.0, 20.0, 1.0)?;
    for o in &probe.outcomes {
        println!("{:<14} |u0| = {:.2}  tail max = {:?}", o.seed, o.initial_norm, o.tail_max);
    }
    println!("a_emp = {:.4}, a_formula = {:.4}", probe.a_emp, probe.a_formula);
    println!("closed form a(1, 1, 1, 1/2) = {:.12} (sqrt(pi) = {:.12})", absorbing_radius(1.0, 1.0, 1.0, 0.5)?, std::f64::consts::PI.sqrt());
    Ok(())
}
