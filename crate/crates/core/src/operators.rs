//! Linear operators of the model on the truncated trigonometric basis.
//!
//! Every operator here is given by its exact action on Fourier modes. The
//! dense matrices produced by [`assemble`] are the column-by-column images of
//! the layout basis.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{BasisLayout, Mode, TrigVector};

/// Coefficients `eps_n = eps0 * rho^n` of the nonlocal source operator `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSequence {
    eps0: f64,
    rho: f64,
}

impl EpsilonSequence {
    pub fn new(eps0: f64, rho: f64) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 < 1.0) {
            return Err(Error::param("eps0", format!("{eps0} is not in (0, 1)")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::param("rho", format!("{rho} is not in (0, 1)")));
        }
        Ok(Self { eps0, rho })
    }

    /// The identically zero sequence (`K = 0`). Only for degenerate experiments;
    /// it violates the nonvanishing requirement on `eps_n`.
    pub fn zero() -> Self {
        Self { eps0: 0.0, rho: 0.5 }
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn get(&self, n: usize) -> f64 {
        self.eps0 * self.rho.powi(n as i32)
    }

    pub fn is_degenerate(&self) -> bool {
        self.eps0 == 0.0
    }
}

/// Dense matrix of a linear operator in the layout enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    layout: BasisLayout,
    entries: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn new(layout: BasisLayout, entries: DMatrix<f64>) -> Result<Self> {
        let dim = layout.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { layout, entries })
    }

    pub fn zeros(layout: BasisLayout) -> Self {
        let dim = layout.dim();
        Self {
            layout,
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(layout: BasisLayout) -> Self {
        let dim = layout.dim();
        Self {
            layout,
            entries: DMatrix::identity(dim, dim),
        }
    }

    /// Matrix whose columns are `op` applied to each basis vector.
    pub fn from_action(layout: BasisLayout, op: impl Fn(&TrigVector) -> TrigVector) -> Self {
        let dim = layout.dim();
        let mut entries = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let col = op(&TrigVector::basis(layout, j)).to_flat();
            entries.column_mut(j).copy_from_slice(&col);
        }
        Self { layout, entries }
    }

    pub fn layout(&self) -> BasisLayout {
        self.layout
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn apply(&self, v: &TrigVector) -> TrigVector {
        let out = &self.entries * v.to_dvector();
        TrigVector::from_dvector(self.layout, &out).expect("matrix matches its layout")
    }

    /// `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        Self {
            layout: self.layout,
            entries: &self.entries * &rhs.entries,
        }
    }

    pub fn add(&self, rhs: &OperatorMatrix) -> OperatorMatrix {
        Self {
            layout: self.layout,
            entries: &self.entries + &rhs.entries,
        }
    }

    pub fn scaled(&self, factor: f64) -> OperatorMatrix {
        Self {
            layout: self.layout,
            entries: &self.entries * factor,
        }
    }

    pub fn transpose(&self) -> OperatorMatrix {
        Self {
            layout: self.layout,
            entries: self.entries.transpose(),
        }
    }

    /// Spectral norm of the coefficient matrix (largest singular value).
    pub fn norm2(&self) -> f64 {
        largest_singular_value(self.entries.clone())
    }

    /// Operator norm on `L^2` of the circle. The layout basis is orthogonal
    /// but the constant has norm `sqrt(2 pi)` against `sqrt(pi)` for the other
    /// modes, so the coefficient matrix is rescaled before taking `norm2`.
    pub fn l2_norm(&self) -> f64 {
        let mut m = self.entries.clone();
        m.row_mut(0).scale_mut(std::f64::consts::SQRT_2);
        m.column_mut(0).scale_mut(std::f64::consts::FRAC_1_SQRT_2);
        largest_singular_value(m)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }
}

fn largest_singular_value(m: DMatrix<f64>) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

fn diagonal(v: &TrigVector, weight: impl Fn(Mode) -> f64) -> TrigVector {
    let mut out = v.clone();
    out.map_modes(|mode, x| weight(mode) * x);
    out
}

fn q_weight(mode: Mode) -> f64 {
    match mode {
        Mode::Cos(n) => -((n * n + n) as f64),
        Mode::Sin(n) => -((n * n - n) as f64),
    }
}

/// `A u = u - u_xx`.
pub fn apply_a(v: &TrigVector) -> TrigVector {
    diagonal(v, |m| 1.0 + (m.wavenumber() * m.wavenumber()) as f64)
}

/// Log-kernel operator `B`: `cos nx -> -cos nx / n`, `sin nx -> sin nx / n`.
/// On constants the kernel gives `B 1 = -2 ln 2`.
pub fn apply_b(v: &TrigVector) -> TrigVector {
    diagonal(v, |m| match m {
        Mode::Cos(0) => -2.0 * LN_2,
        Mode::Cos(n) => -1.0 / n as f64,
        Mode::Sin(n) => 1.0 / n as f64,
    })
}

/// Reflected Hilbert operator `J`: `cos nx -> sin nx`, `sin nx -> cos nx`,
/// `J 1 = 0`. The image of `sin (N+1)x` leaves the layout; its magnitude is
/// returned as the second component.
pub fn apply_j_with_loss(v: &TrigVector) -> (TrigVector, f64) {
    let layout = v.layout();
    let order = layout.order();
    let mut out = TrigVector::zeros(layout);
    for n in 1..=order {
        out.set(Mode::Sin(n), v.coeff(Mode::Cos(n)));
        out.set(Mode::Cos(n), v.coeff(Mode::Sin(n)));
    }
    (out, v.coeff(Mode::Sin(order + 1)).abs())
}

pub fn apply_j(v: &TrigVector) -> TrigVector {
    apply_j_with_loss(v).0
}

/// Hilbert operator `G`: `cos nx -> -sin nx`, `sin nx -> cos nx`, `G 1 = 0`.
pub fn apply_hilbert(v: &TrigVector) -> TrigVector {
    let layout = v.layout();
    let mut out = TrigVector::zeros(layout);
    for n in 1..=layout.order() {
        out.set(Mode::Sin(n), -v.coeff(Mode::Cos(n)));
        out.set(Mode::Cos(n), v.coeff(Mode::Sin(n)));
    }
    out
}

/// `h(x) -> h(-x)`.
pub fn apply_reflection(v: &TrigVector) -> TrigVector {
    diagonal(v, |m| match m {
        Mode::Cos(_) => 1.0,
        Mode::Sin(_) => -1.0,
    })
}

/// `J d/dx` as one operator: `cos nx -> -n cos nx`, `sin nx -> n sin nx`.
///
/// Composing the truncated `J` and derivative would lose `sin (N+1)x`, whose
/// image under `J d/dx` stays in the layout.
pub fn apply_jdx(v: &TrigVector) -> TrigVector {
    diagonal(v, |m| match m {
        Mode::Cos(n) => -(n as f64),
        Mode::Sin(n) => n as f64,
    })
}

/// Nonlocal source `K`: `cos nx -> eps_n sin (n+1)x`, `sin (n+1)x -> -eps_n cos nx`.
pub fn apply_k(v: &TrigVector, eps: &EpsilonSequence) -> TrigVector {
    let layout = v.layout();
    let mut out = TrigVector::zeros(layout);
    for n in 0..=layout.order() {
        let e = eps.get(n);
        let c = v.coeff(Mode::Cos(n));
        let s = v.coeff(Mode::Sin(n + 1));
        out.set(Mode::Sin(n + 1), e * c);
        out.set(Mode::Cos(n), -e * s);
    }
    out
}

/// `Q = d^2/dx^2 + J d/dx`: `cos nx -> -(n^2+n) cos nx`, `sin nx -> -(n^2-n) sin nx`.
pub fn apply_q(v: &TrigVector) -> TrigVector {
    diagonal(v, q_weight)
}

pub(crate) fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa.abs() > 1.0) || !kappa.is_finite() {
        return Err(Error::param(
            "kappa",
            format!("|kappa| must exceed 1, got {kappa}"),
        ));
    }
    Ok(())
}

/// `Q_kappa = Q + kappa d/dx`, acting on each `{cos nx, sin nx}` by
/// `[[-n^2-n, kappa n], [-kappa n, -n^2+n]]`.
pub fn apply_qkappa(v: &TrigVector, kappa: f64) -> Result<TrigVector> {
    check_kappa(kappa)?;
    let mut out = apply_q(v);
    out.axpy(kappa, &crate::fourier::differentiate(v));
    Ok(out)
}

/// `A - J d/dx`: `cos nx -> (1+n+n^2) cos nx`, `sin nx -> (1-n+n^2) sin nx`.
pub fn apply_a_minus_jdx(v: &TrigVector) -> TrigVector {
    diagonal(v, |m| match m {
        Mode::Cos(n) => (1 + n + n * n) as f64,
        Mode::Sin(n) => (1 - n as i64 + (n * n) as i64) as f64,
    })
}

/// Matrix of `h -> g h`, band-limited to the layout. Built from the
/// product-to-sum formulas, so it is the exact Galerkin projection.
pub fn mult_operator(g: &TrigVector) -> OperatorMatrix {
    let layout = g.layout();
    let dim = layout.dim();
    let mut entries = DMatrix::zeros(dim, dim);
    // target (kind, signed wavenumber) += val
    let mut put = |col: usize, cosine: bool, k: i64, val: f64| {
        let n = k.unsigned_abs() as usize;
        let (mode, val) = if cosine {
            (Mode::Cos(n), val)
        } else if k == 0 {
            return;
        } else {
            (Mode::Sin(n), if k < 0 { -val } else { val })
        };
        if let Some(row) = layout.index(mode) {
            entries[(row, col)] += val;
        }
    };
    for col in 0..dim {
        let h = layout.mode(col);
        for gm in layout.modes() {
            let c = g.coeff(gm);
            if c == 0.0 {
                continue;
            }
            let m = gm.wavenumber() as i64;
            let n = h.wavenumber() as i64;
            let half = 0.5 * c;
            match (gm, h) {
                (Mode::Cos(_), Mode::Cos(_)) => {
                    put(col, true, m - n, half);
                    put(col, true, m + n, half);
                }
                (Mode::Sin(_), Mode::Sin(_)) => {
                    put(col, true, m - n, half);
                    put(col, true, m + n, -half);
                }
                (Mode::Sin(_), Mode::Cos(_)) => {
                    put(col, false, m + n, half);
                    put(col, false, m - n, half);
                }
                (Mode::Cos(_), Mode::Sin(_)) => {
                    put(col, false, n + m, half);
                    put(col, false, n - m, half);
                }
            }
        }
    }
    OperatorMatrix { layout, entries }
}

/// Operators that [`assemble`] knows how to build.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    A,
    B,
    J,
    K(EpsilonSequence),
    Q,
    Qkappa(f64),
    AMinusJdx,
    /// `J d/dx` (exact diagonal).
    Jdx,
    /// Truncated derivative.
    D,
    Hilbert,
    Reflection,
    Mult(TrigVector),
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Operator::A => "A",
            Operator::B => "B",
            Operator::J => "J",
            Operator::K(_) => "K",
            Operator::Q => "Q",
            Operator::Qkappa(_) => "Qkappa",
            Operator::AMinusJdx => "A_minus_Jdx",
            Operator::Jdx => "Jdx",
            Operator::D => "D",
            Operator::Hilbert => "Hilbert",
            Operator::Reflection => "Reflection",
            Operator::Mult(_) => "mult",
        };
        f.write_str(name)
    }
}

/// Operator names accepted by [`assemble_named`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorName {
    A,
    B,
    J,
    K,
    Q,
    Qkappa,
    AMinusJdx,
    Jdx,
    D,
    Hilbert,
    Reflection,
    Mult,
}

impl FromStr for OperatorName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => OperatorName::A,
            "B" => OperatorName::B,
            "J" => OperatorName::J,
            "K" => OperatorName::K,
            "Q" => OperatorName::Q,
            "Qkappa" => OperatorName::Qkappa,
            "A_minus_Jdx" => OperatorName::AMinusJdx,
            "Jdx" => OperatorName::Jdx,
            "D" => OperatorName::D,
            "Hilbert" => OperatorName::Hilbert,
            "Reflection" => OperatorName::Reflection,
            "mult" => OperatorName::Mult,
            other => return Err(Error::UnknownOperator(other.to_string())),
        })
    }
}

/// Parameters some operators need when assembled by name.
#[derive(Clone, Debug, Default)]
pub struct OperatorParams {
    pub eps: Option<EpsilonSequence>,
    pub kappa: Option<f64>,
    pub multiplier: Option<TrigVector>,
}

pub fn assemble(op: &Operator, layout: BasisLayout) -> Result<OperatorMatrix> {
    Ok(match op {
        Operator::A => OperatorMatrix::from_action(layout, apply_a),
        Operator::B => OperatorMatrix::from_action(layout, apply_b),
        Operator::J => OperatorMatrix::from_action(layout, apply_j),
        Operator::K(eps) => OperatorMatrix::from_action(layout, |v| apply_k(v, eps)),
        Operator::Q => OperatorMatrix::from_action(layout, apply_q),
        Operator::Qkappa(kappa) => {
            check_kappa(*kappa)?;
            OperatorMatrix::from_action(layout, |v| {
                apply_qkappa(v, *kappa).expect("kappa checked")
            })
        }
        Operator::AMinusJdx => OperatorMatrix::from_action(layout, apply_a_minus_jdx),
        Operator::Jdx => OperatorMatrix::from_action(layout, apply_jdx),
        Operator::D => OperatorMatrix::from_action(layout, crate::fourier::differentiate),
        Operator::Hilbert => OperatorMatrix::from_action(layout, apply_hilbert),
        Operator::Reflection => OperatorMatrix::from_action(layout, apply_reflection),
        Operator::Mult(g) => {
            if g.layout() != layout {
                return Err(Error::LayoutMismatch {
                    expected: layout.order(),
                    found: g.layout().order(),
                });
            }
            mult_operator(g)
        }
    })
}

pub fn assemble_named(
    name: &str,
    layout: BasisLayout,
    params: &OperatorParams,
) -> Result<OperatorMatrix> {
    let missing = |what: &'static str| Error::param(what, format!("required by operator `{name}`"));
    let op = match name.parse::<OperatorName>()? {
        OperatorName::A => Operator::A,
        OperatorName::B => Operator::B,
        OperatorName::J => Operator::J,
        OperatorName::K => Operator::K(params.eps.ok_or_else(|| missing("eps"))?),
        OperatorName::Q => Operator::Q,
        OperatorName::Qkappa => Operator::Qkappa(params.kappa.ok_or_else(|| missing("kappa"))?),
        OperatorName::AMinusJdx => Operator::AMinusJdx,
        OperatorName::Jdx => Operator::Jdx,
        OperatorName::D => Operator::D,
        OperatorName::Hilbert => Operator::Hilbert,
        OperatorName::Reflection => Operator::Reflection,
        OperatorName::Mult => Operator::Mult(
            params
                .multiplier
                .clone()
                .ok_or_else(|| missing("multiplier"))?,
        ),
    };
    assemble(&op, layout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> BasisLayout {
        BasisLayout::new(8).unwrap()
    }

    fn mode(m: Mode, c: f64) -> TrigVector {
        TrigVector::mode(layout(), m, c)
    }

    #[test]
    fn diagonal_actions() {
        let one = TrigVector::constant(layout(), 1.0);
        assert_eq!(apply_a(&one), one);
        assert_eq!(apply_a(&mode(Mode::Cos(2), 1.0)), mode(Mode::Cos(2), 5.0));
        assert_eq!(apply_a(&mode(Mode::Sin(3), 1.0)), mode(Mode::Sin(3), 10.0));

        assert_eq!(apply_b(&mode(Mode::Cos(2), 1.0)), mode(Mode::Cos(2), -0.5));
        assert_eq!(apply_b(&mode(Mode::Sin(4), 1.0)), mode(Mode::Sin(4), 0.25));
        assert!((apply_b(&one).mean() + 1.386294361119891).abs() < 1e-15);

        assert_eq!(apply_q(&mode(Mode::Cos(2), 1.0)), mode(Mode::Cos(2), -6.0));
        assert_eq!(apply_q(&mode(Mode::Sin(2), 1.0)), mode(Mode::Sin(2), -2.0));
        assert_eq!(apply_q(&mode(Mode::Sin(1), 1.0)).max_abs(), 0.0);
    }

    #[test]
    fn j_swaps_and_kills_constants() {
        assert_eq!(apply_j(&mode(Mode::Cos(3), 1.0)), mode(Mode::Sin(3), 1.0));
        assert_eq!(apply_j(&TrigVector::constant(layout(), 1.0)).max_abs(), 0.0);
        let c5 = mode(Mode::Cos(5), 1.0);
        assert_eq!(apply_j(&apply_j(&c5)), c5);
        let (out, loss) = apply_j_with_loss(&mode(Mode::Sin(9), 3.0));
        assert_eq!(out.max_abs(), 0.0);
        assert_eq!(loss, 3.0);
    }

    #[test]
    fn k_pairs_within_blocks() {
        let eps = EpsilonSequence::new(0.05, 0.5).unwrap();
        let one = TrigVector::constant(layout(), 1.0);
        assert_eq!(apply_k(&one, &eps), mode(Mode::Sin(1), 0.05));
        assert_eq!(
            apply_k(&mode(Mode::Sin(1), 1.0), &eps),
            TrigVector::constant(layout(), -0.05)
        );
        assert_eq!(
            apply_k(&mode(Mode::Cos(3), 1.0), &eps),
            mode(Mode::Sin(4), 0.05 * 0.125)
        );
    }

    #[test]
    fn qkappa_action() {
        let kappa = 1.25;
        let one = TrigVector::constant(layout(), 1.0);
        assert_eq!(apply_qkappa(&one, kappa).unwrap().max_abs(), 0.0);
        let mut expect = mode(Mode::Cos(2), -6.0);
        expect.set(Mode::Sin(2), -2.0 * kappa);
        assert!(apply_qkappa(&mode(Mode::Cos(2), 1.0), kappa)
            .unwrap()
            .max_abs_diff(&expect)
            < 1e-15);
        assert!(apply_qkappa(&one, 1.0).is_err());
        assert!(apply_qkappa(&one, -0.5).is_err());
        assert!(apply_qkappa(&one, -1.5).is_ok());
    }

    #[test]
    fn epsilon_sequence_validation() {
        assert!(EpsilonSequence::new(0.0, 0.5).is_err());
        assert!(EpsilonSequence::new(1.0, 0.5).is_err());
        assert!(EpsilonSequence::new(0.05, 1.0).is_err());
        let eps = EpsilonSequence::new(0.05, 0.5).unwrap();
        assert_eq!(eps.get(0), 0.05);
        assert_eq!(eps.get(1), 0.025);
        assert!(EpsilonSequence::zero().is_degenerate());
    }

    #[test]
    fn mult_by_one_is_identity() {
        let l = layout();
        let m = mult_operator(&TrigVector::constant(l, 1.0));
        assert_eq!(m, OperatorMatrix::identity(l));
        let mut xi = TrigVector::constant(l, 1.0);
        xi.set(Mode::Sin(1), -1.0);
        let img = mult_operator(&xi).apply(&TrigVector::constant(l, 1.0));
        assert!(img.max_abs_diff(&xi) < 1e-15);
    }

    #[test]
    fn assemble_by_name() {
        let l = layout();
        let a = assemble_named("A", l, &OperatorParams::default()).unwrap();
        for i in 0..l.dim() {
            let n = l.mode(i).wavenumber();
            assert_eq!(a.entries()[(i, i)], (1 + n * n) as f64);
        }
        assert!(matches!(
            assemble_named("Z", l, &OperatorParams::default()),
            Err(Error::UnknownOperator(_))
        ));
        assert!(assemble_named("K", l, &OperatorParams::default()).is_err());
    }
}
