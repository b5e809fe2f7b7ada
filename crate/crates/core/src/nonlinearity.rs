//! Smooth cutoffs and the nonlinear term
//! `f(x,s,p) = kappa w(s) w(p) + eps0 gamma(s) + eps0 eta(s) (1 - sin x) + mu(s)`.
//!
//! All profiles are blends through the `C^inf` plateau function [`CutoffSuite::chi`]:
//! they equal their polynomial form for `|z| <= 1` and vanish (or become
//! `-z` for `mu`) for `|z| >= 2`. `w` is taken equal to `omega`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{
    analyze, differentiate, synth, BasisLayout, GridSamples, TrigVector,
};
use crate::operators::{apply_jdx, apply_k, check_kappa, EpsilonSequence};

fn psi(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn psi_prime(t: f64) -> f64 {
    if t > 0.0 {
        psi(t) / (t * t)
    } else {
        0.0
    }
}

/// The cutoff profiles. Stateless; plateau radii are 1 and 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CutoffSuite;

impl CutoffSuite {
    pub const INNER: f64 = 1.0;
    pub const OUTER: f64 = 2.0;

    /// `chi(z) = psi(2-|z|) / (psi(2-|z|) + psi(|z|-1))`, `psi(t) = exp(-1/t)` for `t > 0`.
    pub fn chi(&self, z: f64) -> f64 {
        let r = z.abs();
        if r <= Self::INNER {
            return 1.0;
        }
        if r >= Self::OUTER {
            return 0.0;
        }
        let p = psi(Self::OUTER - r);
        let q = psi(r - Self::INNER);
        p / (p + q)
    }

    pub fn chi_prime(&self, z: f64) -> f64 {
        let r = z.abs();
        if r <= Self::INNER || r >= Self::OUTER {
            return 0.0;
        }
        let p = psi(Self::OUTER - r);
        let q = psi(r - Self::INNER);
        let dp = -psi_prime(Self::OUTER - r);
        let dq = psi_prime(r - Self::INNER);
        let d = (dp * q - p * dq) / ((p + q) * (p + q));
        d * z.signum()
    }

    pub fn omega(&self, z: f64) -> f64 {
        self.chi(z) * z
    }

    pub fn omega_prime(&self, z: f64) -> f64 {
        self.chi_prime(z) * z + self.chi(z)
    }

    pub fn gamma(&self, z: f64) -> f64 {
        self.chi(z) * (2.0 * z * z * z - 3.0 * z * z)
    }

    pub fn gamma_prime(&self, z: f64) -> f64 {
        self.chi_prime(z) * (2.0 * z * z * z - 3.0 * z * z) + self.chi(z) * (6.0 * z * z - 6.0 * z)
    }

    pub fn eta(&self, z: f64) -> f64 {
        self.chi(z) * (2.0 * z * z - z * z * z)
    }

    pub fn eta_prime(&self, z: f64) -> f64 {
        self.chi_prime(z) * (2.0 * z * z - z * z * z) + self.chi(z) * (4.0 * z - 3.0 * z * z)
    }

    pub fn mu(&self, z: f64) -> f64 {
        -(1.0 - self.chi(z)) * z
    }

    pub fn mu_prime(&self, z: f64) -> f64 {
        self.chi_prime(z) * z - (1.0 - self.chi(z))
    }

    pub fn w(&self, p: f64) -> f64 {
        self.omega(p)
    }

    pub fn w_prime(&self, p: f64) -> f64 {
        self.omega_prime(p)
    }
}

/// Scalars of the model: `kappa`, the `eps_n` sequence, the exponent `theta`,
/// the truncation, and time-stepping controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    kappa: f64,
    eps: EpsilonSequence,
    theta: f64,
    layout: BasisLayout,
    dt: f64,
    t_final: f64,
    theta_warning: bool,
}

impl ModelParams {
    pub const DEFAULT_KAPPA: f64 = 1.25;
    pub const DEFAULT_EPS0: f64 = 0.05;
    pub const DEFAULT_RHO: f64 = 0.5;
    pub const DEFAULT_THETA: f64 = 0.875;
    pub const DEFAULT_ORDER: usize = 128;
    pub const DEFAULT_DT: f64 = 1e-3;
    pub const DEFAULT_T_FINAL: f64 = 50.0;

    /// Validated parameters; `theta` must lie in `(3/4, 1)`.
    pub fn new(kappa: f64, eps: EpsilonSequence, theta: f64, layout: BasisLayout) -> Result<Self> {
        if !(theta > 0.75 && theta < 1.0) {
            return Err(Error::param(
                "theta",
                format!("{theta} is outside (3/4, 1); pass an explicit override to use it"),
            ));
        }
        Self::build(kappa, eps, theta, layout, false)
    }

    /// Like [`ModelParams::new`] but accepts any `theta` in `[0, 1)`, raising
    /// the warning flag when it leaves `(3/4, 1)`.
    pub fn with_theta_override(
        kappa: f64,
        eps: EpsilonSequence,
        theta: f64,
        layout: BasisLayout,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::param("theta", format!("{theta} is outside [0, 1)")));
        }
        let warn = !(theta > 0.75 && theta < 1.0);
        Self::build(kappa, eps, theta, layout, warn)
    }

    fn build(
        kappa: f64,
        eps: EpsilonSequence,
        theta: f64,
        layout: BasisLayout,
        theta_warning: bool,
    ) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(Self {
            kappa,
            eps,
            theta,
            layout,
            dt: Self::DEFAULT_DT,
            t_final: Self::DEFAULT_T_FINAL,
            theta_warning,
        })
    }

    /// `kappa = 1.25`, `eps_n = 0.05 * 0.5^n`, `theta = 0.875`, `N = 128`.
    pub fn defaults() -> Self {
        Self::new(
            Self::DEFAULT_KAPPA,
            EpsilonSequence::new(Self::DEFAULT_EPS0, Self::DEFAULT_RHO).expect("valid default"),
            Self::DEFAULT_THETA,
            BasisLayout::new(Self::DEFAULT_ORDER).expect("valid default"),
        )
        .expect("valid default")
    }

    pub fn with_time(mut self, dt: f64, t_final: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", format!("{dt} must be positive")));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::param("t_final", format!("{t_final} must be positive")));
        }
        self.dt = dt;
        self.t_final = t_final;
        Ok(self)
    }

    pub fn with_layout(mut self, layout: BasisLayout) -> Self {
        self.layout = layout;
        self
    }

    pub fn with_order(self, order: usize) -> Result<Self> {
        Ok(self.with_layout(BasisLayout::new(order)?))
    }

    pub fn with_eps(mut self, eps: EpsilonSequence) -> Self {
        self.eps = eps;
        self
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eps(&self) -> &EpsilonSequence {
        &self.eps
    }

    pub fn eps0(&self) -> f64 {
        self.eps.eps0()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn theta_warning(&self) -> bool {
        self.theta_warning
    }

    /// `d = sqrt(kappa^2 - 1)`.
    pub fn d(&self) -> f64 {
        (self.kappa * self.kappa - 1.0).sqrt()
    }
}

const CUTOFFS: CutoffSuite = CutoffSuite;

pub fn f(x: f64, s: f64, p: f64, params: &ModelParams) -> f64 {
    let c = CUTOFFS;
    let e = params.eps0();
    params.kappa * c.omega(s) * c.w(p) + e * c.gamma(s) + e * c.eta(s) * (1.0 - x.sin()) + c.mu(s)
}

pub fn f_s(x: f64, s: f64, p: f64, params: &ModelParams) -> f64 {
    let c = CUTOFFS;
    let e = params.eps0();
    params.kappa * c.omega_prime(s) * c.w(p)
        + e * c.gamma_prime(s)
        + e * c.eta_prime(s) * (1.0 - x.sin())
        + c.mu_prime(s)
}

pub fn f_p(_x: f64, s: f64, p: f64, params: &ModelParams) -> f64 {
    let c = CUTOFFS;
    params.kappa * c.omega(s) * c.w_prime(p)
}

/// Grid samples of `u` and `u_x` (derivative truncated to the layout).
pub fn state_on_grid(u: &TrigVector) -> (GridSamples, GridSamples) {
    (synth(u), synth(&differentiate(u)))
}

fn sample_with(
    u: &TrigVector,
    params: &ModelParams,
    g: impl Fn(f64, f64, f64, &ModelParams) -> f64,
) -> GridSamples {
    let (us, ux) = state_on_grid(u);
    let layout = u.layout();
    let values = layout
        .grid_points()
        .iter()
        .zip(us.values().iter().zip(ux.values()))
        .map(|(&x, (&s, &p))| g(x, s, p, params))
        .collect();
    GridSamples::new(layout, values).expect("grid length")
}

/// `f(x_j, u(x_j), u_x(x_j))` on the collocation grid.
pub fn f_on_grid(u: &TrigVector, params: &ModelParams) -> GridSamples {
    sample_with(u, params, f)
}

/// `(f_s, f_p)` frozen at the state `u`, on the collocation grid.
pub fn partials_on_grid(u: &TrigVector, params: &ModelParams) -> (GridSamples, GridSamples) {
    (sample_with(u, params, f_s), sample_with(u, params, f_p))
}

/// `f(x, u, u_x)` projected onto the layout.
pub fn f_term(u: &TrigVector, params: &ModelParams) -> TrigVector {
    analyze(&f_on_grid(u, params))
}

/// `F(u) = u + (B u_x)_x + f(x,u,u_x) + K u`, with `(B u_x)_x = J u_x`.
pub fn evaluate_f(u: &TrigVector, params: &ModelParams) -> TrigVector {
    let mut out = u.clone();
    out.axpy(1.0, &apply_jdx(u));
    out.axpy(1.0, &f_term(u, params));
    out.axpy(1.0, &apply_k(u, params.eps()));
    out
}

/// Suprema found by a dense scan of `Gamma x [-R, R]^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityBounds {
    pub range: f64,
    pub sup_s_plus_f: f64,
    /// `(x, s, p)` where the scan maximum of `|s + f|` was found.
    pub argmax_s_plus_f: (f64, f64, f64),
    pub sup_f_s: f64,
    pub sup_f_p: f64,
    /// Closed-form majorant `sup|omega| (1 + |kappa| sup|w|) + eps0 (sup|gamma| + 2 sup|eta|)`
    /// built from one-dimensional profile suprema.
    pub analytic_bound_s_plus_f: f64,
}

impl NonlinearityBounds {
    /// `L^2` bound of `F_1(u) = u + f(x,u,u_x)`: `sqrt(2 pi) sup|s + f|`.
    pub fn f1_l2_bound(&self) -> f64 {
        (2.0 * std::f64::consts::PI).sqrt() * self.sup_s_plus_f
    }
}

fn sup_1d(g: impl Fn(f64) -> f64) -> f64 {
    let n = 40_000;
    (0..=n)
        .map(|i| g(-2.0 + 4.0 * i as f64 / n as f64).abs())
        .fold(0.0, f64::max)
}

/// Scans `|s + f|`, `|f_s|`, `|f_p|` over `x` in the circle and `s, p` in `[-range, range]`.
pub fn scan_bounds(params: &ModelParams, range: f64, nx: usize, ns: usize) -> NonlinearityBounds {
    let c = CUTOFFS;
    let xs: Vec<f64> = (0..nx)
        .map(|i| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / nx as f64)
        .collect();
    let ss: Vec<f64> = (0..=ns)
        .map(|i| -range + 2.0 * range * i as f64 / ns as f64)
        .collect();
    let mut best = (0.0, (0.0, 0.0, 0.0));
    let mut sup_fs = 0.0f64;
    let mut sup_fp = 0.0f64;
    for &x in &xs {
        for &s in &ss {
            for &p in &ss {
                let v = (s + f(x, s, p, params)).abs();
                if v > best.0 {
                    best = (v, (x, s, p));
                }
                sup_fs = sup_fs.max(f_s(x, s, p, params).abs());
                sup_fp = sup_fp.max(f_p(x, s, p, params).abs());
            }
        }
    }
    let om = sup_1d(|z| c.omega(z));
    let analytic = om * (1.0 + params.kappa.abs() * om)
        + params.eps0() * (sup_1d(|z| c.gamma(z)) + 2.0 * sup_1d(|z| c.eta(z)));
    NonlinearityBounds {
        range,
        sup_s_plus_f: best.0,
        argmax_s_plus_f: best.1,
        sup_f_s: sup_fs,
        sup_f_p: sup_fp,
        analytic_bound_s_plus_f: analytic,
    }
}

/// `sup |w|`, used by the time-step guard.
pub fn sup_w() -> f64 {
    sup_1d(|z| CUTOFFS.w(z))
}

/// The stationary states `u0 = 0` and `u1 = 1`.
pub fn stationary_points(layout: BasisLayout) -> (TrigVector, TrigVector) {
    (TrigVector::zeros(layout), TrigVector::constant(layout, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::Mode;

    const C: CutoffSuite = CutoffSuite;

    fn params() -> ModelParams {
        ModelParams::defaults().with_order(8).unwrap()
    }

    #[test]
    fn chi_plateaus_and_midpoint() {
        assert_eq!(C.chi(0.5), 1.0);
        assert_eq!(C.chi(-1.0), 1.0);
        assert_eq!(C.chi(3.0), 0.0);
        assert_eq!(C.chi(-2.0), 0.0);
        assert!((C.chi(1.5) - 0.5).abs() < 1e-15);
        assert!((C.chi(-1.5) - 0.5).abs() < 1e-15);
        for i in 0..=400 {
            let z = -4.0 + 8.0 * i as f64 / 400.0;
            assert!((0.0..=1.0).contains(&C.chi(z)));
        }
    }

    #[test]
    fn plateau_formulas() {
        assert_eq!(C.gamma(1.0), -1.0);
        assert_eq!(C.eta(1.0), 1.0);
        assert_eq!(C.mu(2.0), -2.0);
        assert_eq!(C.omega(1.0), 1.0);
        assert_eq!(C.w(0.0), 0.0);
        assert_eq!(C.w_prime(0.0), 1.0);
        for z in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert_eq!(C.omega(z), z);
            assert_eq!(C.mu(z), 0.0);
        }
        for z in [-3.5f64, -2.0, 2.0, 2.5] {
            assert_eq!(C.omega(z), 0.0);
            assert_eq!(C.gamma(z), 0.0);
            assert_eq!(C.eta(z), 0.0);
            assert_eq!(C.mu(z), -z);
        }
    }

    #[test]
    fn stationary_relations() {
        let p = params();
        let e = p.eps0();
        for i in 0..16 {
            let x = -3.0 + 0.4 * i as f64;
            assert_eq!(f(x, 0.0, 0.0, &p), 0.0);
            assert!((f(x, 1.0, 0.0, &p) + e * x.sin()).abs() < 1e-15);
            assert_eq!(f_s(x, 0.0, 0.0, &p), 0.0);
            assert_eq!(f_p(x, 0.0, 0.0, &p), 0.0);
            assert!((f_s(x, 1.0, 0.0, &p) - e * (1.0 - x.sin())).abs() < 1e-15);
            assert_eq!(f_p(x, 1.0, 0.0, &p), p.kappa());
        }
        assert_eq!(f(0.3, 3.0, 7.0, &p), -3.0);
    }

    #[test]
    fn f_at_stationary_states() {
        let p = params();
        let (u0, u1) = stationary_points(p.layout());
        assert_eq!(evaluate_f(&u0, &p).max_abs(), 0.0);
        assert!(evaluate_f(&u1, &p).max_abs_diff(&u1) < 1e-15);
    }

    #[test]
    fn theta_range_is_enforced() {
        let eps = EpsilonSequence::new(0.05, 0.5).unwrap();
        let l = BasisLayout::new(8).unwrap();
        assert!(ModelParams::new(1.25, eps, 0.5, l).is_err());
        let p = ModelParams::with_theta_override(1.25, eps, 0.5, l).unwrap();
        assert!(p.theta_warning());
        assert!(!ModelParams::new(1.25, eps, 0.8, l).unwrap().theta_warning());
        assert!(ModelParams::new(1.0, eps, 0.8, l).is_err());
        assert!(ModelParams::with_theta_override(1.25, eps, 1.0, l).is_err());
    }

    #[test]
    fn f_term_of_cosine_matches_direct_sum() {
        let p = params();
        let u = TrigVector::mode(p.layout(), Mode::Cos(1), 2.0);
        let g = f_on_grid(&u, &p);
        for (&x, &v) in p.layout().grid_points().iter().zip(g.values()) {
            let direct = f(x, 2.0 * x.cos(), -2.0 * x.sin(), &p);
            assert!((v - direct).abs() < 1e-12);
        }
    }
}
