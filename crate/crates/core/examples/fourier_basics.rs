//! Truncated trigonometric vectors: synthesis, analysis, derivatives and theta-norms.

use nonlocal_diffusion::fourier::{analyze, differentiate, synth, theta_norm, BasisLayout, Mode, TrigVector};

fn main() -> nonlocal_diffusion::Result<()> {
    let layout = BasisLayout::new(8)?;
    println!("order {} -> dim {}, grid {}", layout.order(), layout.dim(), layout.grid_size());

    let mut u = TrigVector::constant(layout, 0.5);
    u.set(Mode::Cos(1), 1.0);
    u.set(Mode::Sin(3), -0.25);

    let samples = synth(&u);
    let back = analyze(&samples);
    println!("round-trip error {:.1e}", back.max_abs_diff(&u));

    let du = differentiate(&u);
    println!("d/dx: cos1 -> sin1 coeff {}, sin3 -> cos3 coeff {}", du.coeff(Mode::Sin(1)), du.coeff(Mode::Cos(3)));
    for alpha in [0.0, 0.5, 0.875] {
        println!("|u|_{alpha} = {:.6}", theta_norm(&u, alpha));
    }
    println!("u(0.3) = {:.6}", u.eval(0.3));
    Ok(())
}
