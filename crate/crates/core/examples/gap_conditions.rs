//! Spectral gap ratios of the linear part in the theta-norm.

use nonlocal_diffusion::spectra::gap_check;

fn main() -> nonlocal_diffusion::Result<()> {
    for theta in [0.0, 0.25, 0.5, 0.875] {
        let g = gap_check(theta, 1.0, 1.0, 2000)?;
        println!(
            "theta = {theta:<5} max ratio {:>10.4} at index {:>5}, jump condition {}, running max by n=50: {:.4}",
            g.sup_estimate,
            g.argmax,
            g.satisfies_jump(),
            g.running_max_by_mode(50)
        );
    }
    Ok(())
}
