//! The nonlinearity, its partial derivatives and sup bounds on a grid.

use nonlocal_diffusion::nonlinearity::{f, f_p, f_s, scan_bounds, ModelParams};

fn main() {
    let p = ModelParams::defaults();
    println!("{:>6} {:>10} {:>10} {:>10}", "s", "f", "f_s", "f_p");
    for i in 0..=8 {
        let s = -2.0 + 0.5 * i as f64;
        let x = 0.7;
        println!("{s:>6.2} {:>10.5} {:>10.5} {:>10.5}", f(x, s, 0.3, &p), f_s(x, s, 0.3, &p), f_p(x, s, 0.3, &p));
    }
    let b = scan_bounds(&p, 4.0, 32, 160);
    println!(
        "sup|s+f| = {:.4} (bound {:.4}), sup|f_s| = {:.4}, sup|f_p| = {:.4}",
        b.sup_s_plus_f, b.analytic_bound_s_plus_f, b.sup_f_s, b.sup_f_p
    );
}
