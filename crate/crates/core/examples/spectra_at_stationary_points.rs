//! Linearised spectra at u0 = 0 and u1 = 1 with real-eigenvalue classification.

use nonlocal_diffusion::fourier::TrigVector;
use nonlocal_diffusion::nonlinearity::ModelParams;
use nonlocal_diffusion::spectra::{spectrum_at, ClassifyOptions, PointLabel};

fn main() -> nonlocal_diffusion::Result<()> {
    let p = ModelParams::defaults().with_order(64)?;
    let opts = ClassifyOptions::default();
    for (label, u) in [
        (PointLabel::U0, TrigVector::zeros(p.layout())),
        (PointLabel::U1, TrigVector::constant(p.layout(), 1.0)),
    ] {
        let r = spectrum_at(&u, label, &p, &opts)?;
        println!(
            "{label:?}: {} eigenvalues, resolved real {:?}, edge {:?}, l = {}, dist to imaginary axis {:.3e}",
            r.eigenvalues.len(),
            r.real_eigs,
            r.edge_real_eigs,
            r.l_count,
            r.dist_imag_axis
        );
    }
    Ok(())
}
