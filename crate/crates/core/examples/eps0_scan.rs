//! Count real eigenvalues of T(u1) across a range of source amplitudes.

use nonlocal_diffusion::nonlinearity::ModelParams;
use nonlocal_diffusion::spectra::{eps0_threshold_scan, ClassifyOptions};

fn main() -> nonlocal_diffusion::Result<()> {
    let p = ModelParams::defaults().with_order(48)?;
    let list = [0.001, 0.01, 0.05, 0.1, 0.2, 0.4];
    let scan = eps0_threshold_scan(&p, &list, &ClassifyOptions::default())?;
    for r in &scan.rows {
        println!("eps0 = {:<6} real = {} {:?}  l = {}", r.eps0, r.real_count, r.real_eigs, r.l_count);
    }
    println!("largest eps0 with a single real eigenvalue: {:?}", scan.largest_single_real);
    Ok(())
}
