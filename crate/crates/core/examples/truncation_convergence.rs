//! Stability of the low spectrum of T(u1) under truncation refinement.

use nonlocal_diffusion::fourier::TrigVector;
use nonlocal_diffusion::nonlinearity::ModelParams;
use nonlocal_diffusion::spectra::{convergence_study, ClassifyOptions};

fn main() -> nonlocal_diffusion::Result<()> {
    let p = ModelParams::defaults().with_order(16)?;
    let u1 = TrigVector::constant(p.layout(), 1.0);
    let s = convergence_study(&u1, &p, &[16, 32, 64, 128], &ClassifyOptions::default(), 6)?;
    for row in &s.rows {
        println!("N = {:>3}: real {:?}, l = {}", row.order, row.real_eigs, row.l_count);
    }
    println!("max relative drift {:?}, flags {:?}, clean {}", s.max_rel_drift, s.flags, s.is_clean(1e-6));
    Ok(())
}
