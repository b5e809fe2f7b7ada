//! Truncated real trigonometric basis on the circle.
//!
//! Functions are stored as coefficient vectors over the block-aligned basis
//!
//! ```text
//! cos 0x, sin 1x | cos 1x, sin 2x | ... | cos Nx, sin (N+1)x
//! ```
//!
//! so that the pair `{cos nx, sin (n+1)x}` occupies layout indices `2n` and
//! `2n + 1`. The dimension is `2N + 2`. Nonlinear terms are evaluated on an
//! oversampled collocation grid `x_j = -pi + 2 pi j / M`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// A single basis function of the layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Cos(usize),
    Sin(usize),
}

impl Mode {
    pub fn wavenumber(self) -> usize {
        match self {
            Mode::Cos(n) | Mode::Sin(n) => n,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Cos(0) => write!(f, "1"),
            Mode::Cos(n) => write!(f, "cos {n}x"),
            Mode::Sin(n) => write!(f, "sin {n}x"),
        }
    }
}

/// Truncation order `N` together with the collocation grid size `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLayout {
    order: usize,
    grid: usize,
}

impl BasisLayout {
    pub const MIN_ORDER: usize = 4;

    /// Layout of order `order` with the default oversampled grid `M = 4(N + 2)`.
    pub fn new(order: usize) -> Result<Self> {
        Self::with_grid(order, 4 * (order + 2))
    }

    pub fn with_grid(order: usize, grid: usize) -> Result<Self> {
        if order < Self::MIN_ORDER {
            return Err(Error::OrderTooSmall(order));
        }
        let needed = 4 * (order + 2);
        if grid < needed || !grid.is_multiple_of(2) {
            return Err(Error::GridTooSmall {
                order,
                grid,
                needed,
            });
        }
        Ok(Self { order, grid })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Collocation grid size `M`.
    pub fn grid_size(&self) -> usize {
        self.grid
    }

    /// Number of basis functions, `2N + 2`.
    pub fn dim(&self) -> usize {
        2 * self.order + 2
    }

    pub fn mode(&self, index: usize) -> Mode {
        assert!(index < self.dim(), "basis index {index} out of range");
        if index.is_multiple_of(2) {
            Mode::Cos(index / 2)
        } else {
            Mode::Sin(index / 2 + 1)
        }
    }

    /// Layout index of `mode`, or `None` when the mode lies outside the truncation.
    pub fn index(&self, mode: Mode) -> Option<usize> {
        match mode {
            Mode::Cos(n) if n <= self.order => Some(2 * n),
            Mode::Sin(n) if n >= 1 && n <= self.order + 1 => Some(2 * n - 1),
            _ => None,
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.dim()).map(move |i| self.mode(i))
    }

    pub fn grid_points(&self) -> Vec<f64> {
        let m = self.grid as f64;
        (0..self.grid)
            .map(|j| -PI + 2.0 * PI * j as f64 / m)
            .collect()
    }

    fn check_same(&self, other: &BasisLayout) -> Result<()> {
        if self != other {
            return Err(Error::LayoutMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }
}

/// Truncated trigonometric polynomial
/// `u(x) = a_0 + sum_{n=1}^{N} a_n cos nx + sum_{n=1}^{N+1} b_n sin nx`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigVector {
    layout: BasisLayout,
    // a[n] multiplies cos nx, n = 0..=N
    a: Vec<f64>,
    // b[k] multiplies sin (k+1)x, k = 0..=N
    b: Vec<f64>,
}

impl TrigVector {
    pub fn zeros(layout: BasisLayout) -> Self {
        let len = layout.order + 1;
        Self {
            layout,
            a: vec![0.0; len],
            b: vec![0.0; len],
        }
    }

    pub fn constant(layout: BasisLayout, value: f64) -> Self {
        let mut v = Self::zeros(layout);
        v.a[0] = value;
        v
    }

    /// The single basis function `mode` scaled by `amplitude`.
    ///
    /// Panics if the mode lies outside the layout.
    pub fn mode(layout: BasisLayout, mode: Mode, amplitude: f64) -> Self {
        let mut v = Self::zeros(layout);
        v.set(mode, amplitude);
        v
    }

    pub fn basis(layout: BasisLayout, index: usize) -> Self {
        Self::mode(layout, layout.mode(index), 1.0)
    }

    pub fn from_coefficients(layout: BasisLayout, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let len = layout.order + 1;
        for found in [a.len(), b.len()] {
            if found != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    found,
                });
            }
        }
        Ok(Self { layout, a, b })
    }

    /// Builds a vector from coefficients in layout enumeration order.
    pub fn from_flat(layout: BasisLayout, flat: &[f64]) -> Result<Self> {
        if flat.len() != layout.dim() {
            return Err(Error::LengthMismatch {
                expected: layout.dim(),
                found: flat.len(),
            });
        }
        let a = flat.iter().step_by(2).copied().collect();
        let b = flat.iter().skip(1).step_by(2).copied().collect();
        Ok(Self { layout, a, b })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .flat_map(|(&a, &b)| [a, b])
            .collect()
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_vec(self.to_flat())
    }

    pub fn from_dvector(layout: BasisLayout, v: &DVector<f64>) -> Result<Self> {
        Self::from_flat(layout, v.as_slice())
    }

    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    /// Cosine coefficients `a_0..a_N`.
    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    /// Sine coefficients `b_1..b_{N+1}`.
    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b
    }

    /// Coefficient of `mode`; zero for modes outside the layout.
    pub fn coeff(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Cos(n) => self.a.get(n).copied().unwrap_or(0.0),
            Mode::Sin(0) => 0.0,
            Mode::Sin(n) => self.b.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    pub fn set(&mut self, mode: Mode, value: f64) {
        match mode {
            Mode::Cos(n) if n <= self.layout.order => self.a[n] = value,
            Mode::Sin(n) if n >= 1 && n <= self.layout.order + 1 => self.b[n - 1] = value,
            _ => panic!("{mode} is outside the layout of order {}", self.layout.order),
        }
    }

    /// Same function in another layout: extra modes are zero, missing modes are cut.
    pub fn resized(&self, layout: BasisLayout) -> Self {
        let mut out = Self::zeros(layout);
        let len = self.a.len().min(out.a.len());
        out.a[..len].copy_from_slice(&self.a[..len]);
        out.b[..len].copy_from_slice(&self.b[..len]);
        out
    }

    /// Mean value over the circle.
    pub fn mean(&self) -> f64 {
        self.a[0]
    }

    pub fn max_abs_diff(&self, other: &TrigVector) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .chain(self.b.iter().zip(&other.b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().chain(&self.b).map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(&self.b).all(|x| x.is_finite())
    }

    pub fn scale(&mut self, factor: f64) {
        self.a.iter_mut().chain(self.b.iter_mut()).for_each(|x| *x *= factor);
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: f64, other: &TrigVector) {
        debug_assert_eq!(self.layout, other.layout);
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += alpha * y;
        }
        for (x, y) in self.b.iter_mut().zip(&other.b) {
            *x += alpha * y;
        }
    }

    /// Applies `f(mode, coefficient)` to every coefficient in place.
    pub fn map_modes(&mut self, mut f: impl FnMut(Mode, f64) -> f64) {
        for (n, x) in self.a.iter_mut().enumerate() {
            *x = f(Mode::Cos(n), *x);
        }
        for (k, x) in self.b.iter_mut().enumerate() {
            *x = f(Mode::Sin(k + 1), *x);
        }
    }

    /// Point evaluation (direct summation).
    pub fn eval(&self, x: f64) -> f64 {
        let mut s = self.a[0];
        for (n, &a) in self.a.iter().enumerate().skip(1) {
            s += a * (n as f64 * x).cos();
        }
        for (k, &b) in self.b.iter().enumerate() {
            s += b * ((k + 1) as f64 * x).sin();
        }
        s
    }
}

impl Add<&TrigVector> for &TrigVector {
    type Output = TrigVector;
    fn add(self, rhs: &TrigVector) -> TrigVector {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub<&TrigVector> for &TrigVector {
    type Output = TrigVector;
    fn sub(self, rhs: &TrigVector) -> TrigVector {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<f64> for &TrigVector {
    type Output = TrigVector;
    fn mul(self, rhs: f64) -> TrigVector {
        let mut out = self.clone();
        out.scale(rhs);
        out
    }
}

impl Neg for &TrigVector {
    type Output = TrigVector;
    fn neg(self) -> TrigVector {
        self * -1.0
    }
}

/// Samples on the collocation grid of a layout.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSamples {
    layout: BasisLayout,
    values: Vec<f64>,
}

impl GridSamples {
    pub fn new(layout: BasisLayout, values: Vec<f64>) -> Result<Self> {
        if values.len() != layout.grid {
            return Err(Error::LengthMismatch {
                expected: layout.grid,
                found: values.len(),
            });
        }
        Ok(Self { layout, values })
    }

    /// Samples a function on the grid.
    pub fn from_fn(layout: BasisLayout, f: impl Fn(f64) -> f64) -> Self {
        let values = layout.grid_points().into_iter().map(f).collect();
        Self { layout, values }
    }

    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Pointwise product of two sample sets on the same grid.
    pub fn hadamard(&self, other: &GridSamples) -> Result<GridSamples> {
        self.layout.check_same(&other.layout)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * y)
            .collect();
        Ok(GridSamples {
            layout: self.layout,
            values,
        })
    }
}

/// Result of projecting grid samples onto the layout.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub vector: TrigVector,
    /// l2 magnitude of the coefficients of modes that the grid resolves but
    /// the layout does not hold (`cos (N+1)x` and everything above `N+1`).
    pub out_of_band: f64,
}

impl Analysis {
    pub fn is_band_limited(&self, tol: f64) -> bool {
        self.out_of_band <= tol
    }
}

/// Evaluates `v` on the collocation grid.
pub fn synth(v: &TrigVector) -> GridSamples {
    let layout = v.layout;
    let m = layout.grid;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[0] = Complex64::new(v.a[0], 0.0);
    // x_j = -pi + y_j shifts mode n by (-1)^n
    #[allow(clippy::needless_range_loop)]
    for n in 1..=layout.order + 1 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = v.coeff(Mode::Cos(n));
        let b = v.coeff(Mode::Sin(n));
        buf[n] = Complex64::new(sign * a, -sign * b);
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
    fft.process(&mut buf);
    GridSamples {
        layout,
        values: buf.into_iter().map(|z| z.re).collect(),
    }
}

/// Projects grid samples onto the layout and reports the discarded content.
pub fn analyze_with_residual(g: &GridSamples) -> Analysis {
    let layout = g.layout;
    let m = layout.grid;
    let mut buf: Vec<Complex64> = g.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(m));
    fft.process(&mut buf);

    let scale = 2.0 / m as f64;
    let mut v = TrigVector::zeros(layout);
    v.a[0] = buf[0].re / m as f64;
    let mut out_of_band = 0.0;
    for (n, z) in buf.iter().enumerate().take(m / 2 + 1).skip(1) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (a, b) = if n == m / 2 {
            (sign * z.re / m as f64, 0.0)
        } else {
            (sign * scale * z.re, -sign * scale * z.im)
        };
        if n <= layout.order {
            v.a[n] = a;
        } else {
            out_of_band += a * a;
        }
        if n <= layout.order + 1 {
            v.b[n - 1] = b;
        } else {
            out_of_band += b * b;
        }
    }
    Analysis {
        vector: v,
        out_of_band: out_of_band.sqrt(),
    }
}

/// Trigonometric coefficients of grid samples, band-limited to the layout.
pub fn analyze(g: &GridSamples) -> TrigVector {
    analyze_with_residual(g).vector
}

/// Term-wise derivative. The top mode `sin (N+1)x` differentiates to
/// `cos (N+1)x`, which the layout cannot hold; its magnitude is returned as
/// the second component.
pub fn differentiate_with_loss(v: &TrigVector) -> (TrigVector, f64) {
    let order = v.layout.order;
    let mut out = TrigVector::zeros(v.layout);
    for n in 1..=order {
        let nf = n as f64;
        // cos nx -> -n sin nx, sin nx -> n cos nx
        out.b[n - 1] = -nf * v.a[n];
        out.a[n] = nf * v.b[n - 1];
    }
    let loss = (order + 1) as f64 * v.b[order].abs();
    (out, loss)
}

pub fn differentiate(v: &TrigVector) -> TrigVector {
    differentiate_with_loss(v).0
}

/// `||A^alpha u||` for `A = I - d^2/dx^2`, with `||1||^2 = 2 pi` and
/// `||cos nx||^2 = ||sin nx||^2 = pi`.
pub fn theta_norm(v: &TrigVector, alpha: f64) -> f64 {
    let mut sum = 2.0 * PI * v.a[0] * v.a[0];
    let weight = |n: usize| (1.0 + (n * n) as f64).powf(2.0 * alpha);
    for (n, &a) in v.a.iter().enumerate().skip(1) {
        sum += PI * weight(n) * a * a;
    }
    for (k, &b) in v.b.iter().enumerate() {
        sum += PI * weight(k + 1) * b * b;
    }
    sum.sqrt()
}

/// Band-limited product `analyze(synth(u) * synth(v))`. The grid holds
/// `M >= 4(N+2)` points, so products of two layout functions are alias-free.
pub fn pointwise_product(u: &TrigVector, v: &TrigVector) -> Result<TrigVector> {
    u.layout.check_same(&v.layout)?;
    Ok(analyze(&synth(u).hadamard(&synth(v))?))
}
