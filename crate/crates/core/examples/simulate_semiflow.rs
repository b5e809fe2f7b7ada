//! Integrate the semiflow from a seed and print the theta-norm history.

use nonlocal_diffusion::nonlinearity::ModelParams;
use nonlocal_diffusion::semiflow::{integrate_with, IntegrateOptions, SeedSpec};

fn main() -> nonlocal_diffusion::Result<()> {
    let p = ModelParams::defaults().with_order(32)?.with_time(1e-3, 5.0)?;
    let seed: SeedSpec = "10*cos1+2*sin3".parse()?;
    let u0 = seed.build(p.layout(), p.theta())?;
    let opts = IntegrateOptions {
        record_every: 500,
        ..IntegrateOptions::default()
    };
    let traj = integrate_with(&u0, &p, &opts)?;
    for (t, n) in traj.times.iter().zip(&traj.theta_norm_history) {
        println!("t = {t:5.2}  |u|_theta = {n:.6}");
    }
    Ok(())
}
