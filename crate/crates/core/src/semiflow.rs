//! Time integration of `u_t = Q u + f(x, u, u_x) + K u` and dissipativity probes.
//!
//! The stepper is first-order IMEX: `Q` (diagonal, nonpositive) is implicit,
//! `f + K u` is explicit and evaluated pseudospectrally.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::fourier::{theta_norm, BasisLayout, Mode, TrigVector};
use crate::nonlinearity::{evaluate_f, f_term, scan_bounds, sup_w, ModelParams};
use crate::operators::{apply_a, apply_k};
use crate::quadrature;

/// Which explicit terms the stepper includes. Turning both off leaves the
/// linear problem `u_t = Q u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Forcing {
    pub nonlinear: bool,
    pub source: bool,
}

impl Forcing {
    pub const FULL: Forcing = Forcing {
        nonlinear: true,
        source: true,
    };
    pub const LINEAR: Forcing = Forcing {
        nonlinear: false,
        source: false,
    };
}

impl Default for Forcing {
    fn default() -> Self {
        Self::FULL
    }
}

fn implicit_q_solve(rhs: &mut TrigVector, dt: f64) {
    rhs.map_modes(|mode, x| {
        let q = match mode {
            Mode::Cos(n) => -((n * n + n) as f64),
            Mode::Sin(n) => -((n * n - n) as f64),
        };
        x / (1.0 - dt * q)
    });
}

pub fn step_imex_with(
    u: &TrigVector,
    dt: f64,
    params: &ModelParams,
    forcing: Forcing,
) -> TrigVector {
    let mut rhs = u.clone();
    if forcing.nonlinear {
        rhs.axpy(dt, &f_term(u, params));
    }
    if forcing.source {
        rhs.axpy(dt, &apply_k(u, params.eps()));
    }
    implicit_q_solve(&mut rhs, dt);
    rhs
}

/// One step `u+ = (I - dt Q)^-1 (u + dt (f + K u))`.
pub fn step_imex(u: &TrigVector, dt: f64, params: &ModelParams) -> Result<TrigVector> {
    if !(dt > 0.0) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let next = step_imex_with(u, dt, params, Forcing::FULL);
    if !next.is_finite() {
        return Err(Error::Unstable {
            step: 1,
            time: dt,
            dt,
        });
    }
    Ok(next)
}

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    /// Keep every `record_every`-th state (the first and last are always kept).
    pub record_every: usize,
    pub cfl_bound: f64,
    pub forcing: Forcing,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            record_every: 100,
            cfl_bound: 1.0,
            forcing: Forcing::FULL,
        }
    }
}

/// Recorded solution of the semiflow.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: ModelParams,
    pub times: Vec<f64>,
    pub states: Vec<TrigVector>,
    pub theta_norm_history: Vec<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &TrigVector {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Largest recorded theta-norm for `t >= from`.
    pub fn tail_max(&self, from: f64) -> f64 {
        self.times
            .iter()
            .zip(&self.theta_norm_history)
            .filter(|(t, _)| **t >= from)
            .map(|(_, n)| *n)
            .fold(0.0, f64::max)
    }
}

/// `dt (N+1) (|kappa| sup|w| + 1)`.
pub fn cfl_number(params: &ModelParams) -> f64 {
    params.dt() * (params.layout().order() + 1) as f64 * (params.kappa().abs() * sup_w() + 1.0)
}

pub fn integrate(u0: &TrigVector, params: &ModelParams) -> Result<Trajectory> {
    integrate_with(u0, params, &IntegrateOptions::default())
}

pub fn integrate_with(
    u0: &TrigVector,
    params: &ModelParams,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if u0.layout() != params.layout() {
        return Err(Error::LayoutMismatch {
            expected: params.layout().order(),
            found: u0.layout().order(),
        });
    }
    let cfl = cfl_number(params);
    if cfl > opts.cfl_bound {
        return Err(Error::CflViolation {
            value: cfl,
            bound: opts.cfl_bound,
        });
    }
    let dt = params.dt();
    let steps = (params.t_final() / dt).round().max(1.0) as usize;
    let stride = opts.record_every.max(1);
    let theta = params.theta();

    let mut traj = Trajectory {
        params: params.clone(),
        times: vec![0.0],
        states: vec![u0.clone()],
        theta_norm_history: vec![theta_norm(u0, theta)],
    };
    let mut u = u0.clone();
    for step in 1..=steps {
        u = step_imex_with(&u, dt, params, opts.forcing);
        if !u.is_finite() {
            return Err(Error::Unstable {
                step,
                time: step as f64 * dt,
                dt,
            });
        }
        if step % stride == 0 || step == steps {
            traj.times.push(step as f64 * dt);
            traj.theta_norm_history.push(theta_norm(&u, theta));
            traj.states.push(u.clone());
        }
    }
    Ok(traj)
}

/// theta-norm of the right-hand side `-A u + F(u)`.
pub fn stationary_residual(u: &TrigVector, params: &ModelParams) -> f64 {
    let mut r = evaluate_f(u, params);
    r.axpy(-1.0, &apply_a(u));
    theta_norm(&r, params.theta())
}

fn check_radius_args(c: f64, m: f64, delta: f64, theta: f64) -> Result<()> {
    for (name, v) in [("C", c), ("M", m), ("delta", delta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, format!("{v} must be positive")));
        }
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::param(
            "theta",
            format!("{theta} is outside [0, 1); the radius integral diverges"),
        ));
    }
    Ok(())
}

/// Radius of the absorbing ball, `C M int_0^inf e^{-delta s} s^{-theta} ds
/// = C M Gamma(1 - theta) delta^(theta - 1)`.
pub fn absorbing_radius(c: f64, m: f64, delta: f64, theta: f64) -> Result<f64> {
    check_radius_args(c, m, delta, theta)?;
    Ok(c * m * gamma(1.0 - theta) * delta.powf(theta - 1.0))
}

/// The same radius by adaptive quadrature. The substitution `s = t^(1/(1-theta))`
/// removes the endpoint singularity:
/// `int_0^inf e^{-delta s} s^{-theta} ds = (1/(1-theta)) int_0^inf exp(-delta t^(1/(1-theta))) dt`.
pub fn absorbing_radius_quadrature(c: f64, m: f64, delta: f64, theta: f64) -> Result<f64> {
    check_radius_args(c, m, delta, theta)?;
    let q = 1.0 / (1.0 - theta);
    // exp(-delta t^q) < 1e-300 beyond t_max
    let t_max = (700.0 / delta).powf(1.0 / q);
    let (v, _) = quadrature::integrate(|t| (-delta * t.powf(q)).exp(), 0.0, t_max, 1e-14, 10_000);
    Ok(c * m * q * v)
}

/// Initial condition description, e.g. `10*cos1`, `5*1+5*sin2`, `1+1e-6*1`,
/// `zero`, `one`, or `random:<seed>:<theta-norm>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SeedSpec {
    Modes(Vec<(f64, Mode)>),
    Random { seed: u64, norm: f64 },
}

impl SeedSpec {
    /// Realizes the seed in `layout`; `random` seeds are scaled to the
    /// `theta`-norm given in the spec.
    pub fn build(&self, layout: BasisLayout, theta: f64) -> Result<TrigVector> {
        match self {
            SeedSpec::Modes(terms) => {
                let mut v = TrigVector::zeros(layout);
                for &(c, mode) in terms {
                    if layout.index(mode).is_none() {
                        return Err(Error::SeedSpec {
                            spec: self.to_string(),
                            reason: format!("{mode} is outside the layout"),
                        });
                    }
                    v.set(mode, v.coeff(mode) + c);
                }
                Ok(v)
            }
            SeedSpec::Random { seed, norm } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut v = TrigVector::zeros(layout);
                v.map_modes(|mode, _| {
                    let n = mode.wavenumber() as f64;
                    rng.gen_range(-1.0..1.0) / (1.0 + n * n)
                });
                let current = theta_norm(&v, theta);
                v.scale(norm / current);
                Ok(v)
            }
        }
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Random { seed, norm } => write!(f, "random:{seed}:{norm}"),
            SeedSpec::Modes(terms) if terms.is_empty() => write!(f, "zero"),
            SeedSpec::Modes(terms) => {
                for (i, (c, mode)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    let basis = match mode {
                        Mode::Cos(0) => "1".to_string(),
                        Mode::Cos(n) => format!("cos{n}"),
                        Mode::Sin(n) => format!("sin{n}"),
                    };
                    write!(f, "{c}*{basis}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SeedSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::SeedSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let s = spec.trim();
        match s {
            "zero" | "0" => return Ok(SeedSpec::Modes(Vec::new())),
            "one" => return Ok(SeedSpec::Modes(vec![(1.0, Mode::Cos(0))])),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (seed, norm) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected random:<seed>:<norm>"))?;
            let seed = seed.parse().map_err(|_| bad("seed must be an integer"))?;
            let norm: f64 = norm.parse().map_err(|_| bad("norm must be a number"))?;
            if !(norm > 0.0) {
                return Err(bad("norm must be positive"));
            }
            return Ok(SeedSpec::Random { seed, norm });
        }
        let mut terms = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, basis) = match term.split_once('*') {
                Some((c, b)) => (c.parse::<f64>().map_err(|_| bad("bad coefficient"))?, b),
                None => (1.0, term),
            };
            let mode = if basis == "1" {
                Mode::Cos(0)
            } else if let Some(n) = basis.strip_prefix("cos") {
                Mode::Cos(n.parse().map_err(|_| bad("bad wavenumber"))?)
            } else if let Some(n) = basis.strip_prefix("sin") {
                let n: usize = n.parse().map_err(|_| bad("bad wavenumber"))?;
                if n == 0 {
                    return Err(bad("sin0 is not a basis function"));
                }
                Mode::Sin(n)
            } else if let Ok(c) = basis.parse::<f64>() {
                // bare constant term
                terms.push((coef * c, Mode::Cos(0)));
                continue;
            } else {
                return Err(bad("basis must be 1, cos<n> or sin<n>"));
            };
            terms.push((coef, mode));
        }
        Ok(SeedSpec::Modes(terms))
    }
}

impl TryFrom<String> for SeedSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SeedSpec> for String {
    fn from(s: SeedSpec) -> String {
        s.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: String,
    pub initial_norm: f64,
    /// Max theta-norm over the tail window; `None` if the run failed.
    pub tail_max: Option<f64>,
    /// Tail stayed inside the formula ball of radius `a_formula`.
    pub entered: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipativityReport {
    pub r_in: f64,
    pub horizon: f64,
    pub tail_window: (f64, f64),
    pub outcomes: Vec<SeedOutcome>,
    /// Max of the tail estimates over successful seeds.
    pub a_emp: f64,
    /// Scanned `sup|s + f|` times `sqrt(2 pi)`: the bound `M` on `||F_1(u)||`.
    pub m_bound: f64,
    /// `delta = 1 - eps0`, the spectral lower bound of `A - J d/dx - K`.
    pub delta: f64,
    /// User-supplied semigroup constant.
    pub semigroup_c: f64,
    pub a_formula: f64,
}

impl DissipativityReport {
    pub fn all_finite(&self) -> bool {
        self.outcomes
            .iter()
            .all(|o| o.tail_max.is_some_and(f64::is_finite))
    }
}

/// Integrates each seed to `horizon` and records `max ||u(t)||_theta` over `[horizon/2, horizon]`.
pub fn dissipativity_probe(
    seeds: &[SeedSpec],
    params: &ModelParams,
    r_in: f64,
    horizon: f64,
    semigroup_c: f64,
) -> Result<DissipativityReport> {
    if seeds.len() < 3 {
        return Err(Error::param("seeds", "a probe needs at least 3 seeds"));
    }
    let params = params.clone().with_time(params.dt(), horizon)?;
    let bounds = scan_bounds(&params, 4.0, 32, 160);
    let m_bound = bounds.f1_l2_bound();
    let delta = 1.0 - params.eps0();
    let a_formula = absorbing_radius(semigroup_c, m_bound, delta, params.theta())?;
    let from = 0.5 * horizon;

    let outcomes: Vec<SeedOutcome> = seeds
        .par_iter()
        .map(|spec| {
            let label = spec.to_string();
            let u0 = match spec.build(params.layout(), params.theta()) {
                Ok(u) => u,
                Err(e) => {
                    return SeedOutcome {
                        seed: label,
                        initial_norm: f64::NAN,
                        tail_max: None,
                        entered: false,
                        error: Some(e.to_string()),
                    }
                }
            };
            let initial_norm = theta_norm(&u0, params.theta());
            match integrate(&u0, &params) {
                Ok(traj) => {
                    let tail = traj.tail_max(from);
                    SeedOutcome {
                        seed: label,
                        initial_norm,
                        tail_max: Some(tail),
                        entered: tail <= a_formula,
                        error: None,
                    }
                }
                Err(e) => SeedOutcome {
                    seed: label,
                    initial_norm,
                    tail_max: None,
                    entered: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let a_emp = outcomes
        .iter()
        .filter_map(|o| o.tail_max)
        .fold(0.0, f64::max);
    Ok(DissipativityReport {
        r_in,
        horizon,
        tail_window: (from, horizon),
        outcomes,
        a_emp,
        m_bound,
        delta,
        semigroup_c,
        a_formula,
    })
}

/// `count` random seeds `random:1:<r_in>` .. `random:<count>:<r_in>`.
pub fn random_seeds(count: usize, r_in: f64) -> Vec<SeedSpec> {
    (1..=count as u64)
        .map(|seed| SeedSpec::Random { seed, norm: r_in })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::defaults().with_order(16).unwrap()
    }

    #[test]
    fn stationary_states_are_fixed_points() {
        let p = params();
        let zero = TrigVector::zeros(p.layout());
        assert_eq!(step_imex(&zero, 1e-3, &p).unwrap(), zero);
        let one = TrigVector::constant(p.layout(), 1.0);
        assert!(step_imex(&one, 1e-3, &p).unwrap().max_abs_diff(&one) < 1e-12);
        assert!(step_imex(&one, 0.0, &p).is_err());
    }

    #[test]
    fn residuals() {
        let p = params();
        let (u0, u1) = crate::nonlinearity::stationary_points(p.layout());
        assert!(stationary_residual(&u0, &p) <= 1e-12);
        assert!(stationary_residual(&u1, &p) <= 1e-12);
        let c = TrigVector::mode(p.layout(), Mode::Cos(1), 1.0);
        assert!(stationary_residual(&c, &p) > 0.1);
    }

    #[test]
    fn radius_closed_forms() {
        assert!((absorbing_radius(1.0, 1.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((absorbing_radius(1.0, 1.0, 1.0, 0.5).unwrap() - sqrt_pi).abs() < 1e-12);
        assert!(absorbing_radius(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(absorbing_radius(0.0, 1.0, 1.0, 0.5).is_err());
        assert!(absorbing_radius_quadrature(1.0, 1.0, 1.0, 1.2).is_err());
    }

    #[test]
    fn seed_spec_parsing() {
        let l = BasisLayout::new(8).unwrap();
        let s: SeedSpec = "5*1+5*sin2".parse().unwrap();
        let v = s.build(l, 0.875).unwrap();
        assert_eq!(v.mean(), 5.0);
        assert_eq!(v.coeff(Mode::Sin(2)), 5.0);
        let s: SeedSpec = "1+1e-6*1".parse().unwrap();
        assert_eq!(s.build(l, 0.875).unwrap().mean(), 1.0 + 1e-6);
        let s: SeedSpec = "10*cos1".parse().unwrap();
        assert_eq!(s.to_string().parse::<SeedSpec>().unwrap(), s);
        let s: SeedSpec = "random:3:10".parse().unwrap();
        let v = s.build(l, 0.875).unwrap();
        assert!((theta_norm(&v, 0.875) - 10.0).abs() < 1e-12);
        assert_eq!(v, s.build(l, 0.875).unwrap());
        assert!("sin0".parse::<SeedSpec>().is_err());
        assert!("3*tan2".parse::<SeedSpec>().is_err());
        assert!("random:x:1".parse::<SeedSpec>().is_err());
        assert!("cos40".parse::<SeedSpec>().unwrap().build(l, 0.875).is_err());
    }

    #[test]
    fn cfl_guard() {
        let p = params().with_time(1.0, 2.0).unwrap();
        let u = TrigVector::zeros(p.layout());
        assert!(matches!(integrate(&u, &p), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn probe_needs_three_seeds() {
        let p = params();
        let seeds = vec![SeedSpec::Modes(vec![])];
        assert!(dissipativity_probe(&seeds, &p, 1.0, 1.0, 1.0).is_err());
    }
}
