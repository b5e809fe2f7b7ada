//! Linearizations `T(u) = F'(u) - A`, their spectra, and the counting of
//! positive real eigenvalues `l(u)`.
//!
//! The dense eigensolver first splits a matrix into its exactly decoupled
//! diagonal blocks (connected components of the nonzero pattern). Blocks of
//! size one or two are solved in closed form and classified as real or
//! nonreal from the exact sign of the discriminant; larger blocks go through
//! the real Schur decomposition and are classified with the `tol_im` test.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{analyze, BasisLayout, TrigVector};
use crate::nonlinearity::{partials_on_grid, ModelParams};
use crate::operators::{
    assemble, check_kappa, mult_operator, EpsilonSequence, Operator, OperatorMatrix,
};

/// Eigenvalue together with the size of the decoupled block it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub component_size: usize,
    /// `n` when the block is exactly the layout pair `{cos nx, sin (n+1)x}`.
    pub block: Option<usize>,
}

impl Eigenvalue {
    /// Closed-form eigenvalue of a 1x1 or 2x2 block.
    pub fn is_exact(&self) -> bool {
        self.component_size <= 2
    }

    pub fn is_real(&self, tol_im: f64) -> bool {
        if self.is_exact() {
            self.value.im == 0.0
        } else {
            self.value.im.abs() < tol_im * (1.0 + self.value.norm())
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn components(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut uf = UnionFind((0..n).collect());
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != 0.0 {
                uf.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = uf.find(i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

fn eig_2x2(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 2] {
    let half_tr = 0.5 * (a + d);
    let half_diff = (0.5 * (a - d)).abs();
    // discriminant half_diff^2 + b c, evaluated without squaring small b, c
    let s = if b.abs() == c.abs() {
        b.abs()
    } else {
        b.abs().sqrt() * c.abs().sqrt()
    };
    if (b < 0.0) != (c < 0.0) && b != 0.0 && c != 0.0 && s > half_diff {
        let im = if half_diff == 0.0 {
            s
        } else {
            (s - half_diff).sqrt() * (s + half_diff).sqrt()
        };
        [Complex64::new(half_tr, im), Complex64::new(half_tr, -im)]
    } else {
        let root = if (b < 0.0) != (c < 0.0) {
            (half_diff - s).sqrt() * (half_diff + s).sqrt()
        } else {
            half_diff.hypot(s)
        };
        [Complex64::new(half_tr + root, 0.0), Complex64::new(half_tr - root, 0.0)]
    }
}

fn matrix_diagnostics(m: &DMatrix<f64>) -> Error {
    Error::EigenFailure {
        dim: m.nrows(),
        frobenius: m.norm(),
        max_entry: m.amax(),
    }
}

/// All eigenvalues of a square real matrix, sorted by real part (descending).
pub fn eigenvalues_dense(m: &DMatrix<f64>) -> Result<Vec<Eigenvalue>> {
    let bad = m.iter().filter(|x| !x.is_finite()).count();
    if bad > 0 {
        return Err(Error::NonFiniteMatrix(bad));
    }
    let mut out = Vec::with_capacity(m.nrows());
    for comp in components(m) {
        let size = comp.len();
        let block = (size == 2 && comp[0] % 2 == 0 && comp[1] == comp[0] + 1).then(|| comp[0] / 2);
        match size {
            1 => out.push(Eigenvalue {
                value: Complex64::new(m[(comp[0], comp[0])], 0.0),
                component_size: 1,
                block: None,
            }),
            2 => {
                let (i, j) = (comp[0], comp[1]);
                for value in eig_2x2(m[(i, i)], m[(i, j)], m[(j, i)], m[(j, j)]) {
                    out.push(Eigenvalue {
                        value,
                        component_size: 2,
                        block,
                    });
                }
            }
            _ => {
                let sub = DMatrix::from_fn(size, size, |r, c| m[(comp[r], comp[c])]);
                let schur = Schur::try_new(sub.clone(), f64::EPSILON, 500 * size)
                    .ok_or_else(|| matrix_diagnostics(&sub))?;
                for value in schur.complex_eigenvalues().iter() {
                    out.push(Eigenvalue {
                        value: *value,
                        component_size: size,
                        block: None,
                    });
                }
            }
        }
    }
    out.sort_by(|x, y| {
        y.value
            .re
            .total_cmp(&x.value.re)
            .then(y.value.im.total_cmp(&x.value.im))
    });
    Ok(out)
}

pub fn eigenvalues(m: &OperatorMatrix) -> Result<Vec<Eigenvalue>> {
    eigenvalues_dense(m.entries())
}

/// Largest distance from a nonreal eigenvalue to the nearest conjugate of another.
pub fn conjugate_defect(eigs: &[Eigenvalue]) -> f64 {
    eigs.iter()
        .filter(|e| e.value.im != 0.0)
        .map(|e| {
            eigs.iter()
                .map(|o| (o.value - e.value.conj()).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Linearization `T(u) h = h_xx + J h_x + f_s h + f_p h_x + K h` with `f_s`,
/// `f_p` frozen at `u` and projected onto the layout.
///
/// The principal part `h_xx + J h_x` is the exact diagonal `Q`.
pub fn assemble_t(u: &TrigVector, params: &ModelParams) -> Result<OperatorMatrix> {
    let layout = params.layout();
    let u = if u.layout() == layout {
        u.clone()
    } else {
        u.resized(layout)
    };
    let (fs, fp) = partials_on_grid(&u, params);
    let m_fs = mult_operator(&analyze(&fs));
    let m_fp = mult_operator(&analyze(&fp));
    let q = assemble(&Operator::Q, layout)?;
    let k = assemble(&Operator::K(*params.eps()), layout)?;
    let d = assemble(&Operator::D, layout)?;
    Ok(q.add(&k).add(&m_fs).add(&m_fp.compose(&d)))
}

/// `-(n^2+n) +- i eps_n`, the eigenvalues of `T(0)` on `{cos nx, sin (n+1)x}`.
pub fn block_spectrum_u0(n: usize, eps: &EpsilonSequence) -> [Complex64; 2] {
    let re = -((n * n + n) as f64);
    let e = eps.get(n);
    [Complex64::new(re, e), Complex64::new(re, -e)]
}

/// `-n^2 +- i d n` with `d = sqrt(kappa^2 - 1)`, the eigenvalues of `Q_kappa`
/// on `{cos nx, sin nx}`.
pub fn qkappa_spectrum(n: usize, kappa: f64) -> Result<[Complex64; 2]> {
    check_kappa(kappa)?;
    if n == 0 {
        return Err(Error::param("n", "the pair {cos nx, sin nx} needs n >= 1"));
    }
    let d = (kappa * kappa - 1.0).sqrt();
    let nf = n as f64;
    Ok([Complex64::new(-nf * nf, d * nf), Complex64::new(-nf * nf, -d * nf)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointLabel {
    U0,
    U1,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Relative imaginary-part threshold: `|Im| < tol_im (1 + |lambda|)` is real.
    pub tol_im: f64,
    /// Real eigenvalues with `lambda > tol_re` are positive; `|lambda| <= tol_re` is zero.
    pub tol_re: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol_im: 1e-8,
            tol_re: 1e-10,
        }
    }
}

/// Resolved part of a truncated spectrum: `|Re lambda| <= N^2 / 4`.
pub fn resolved_band(order: usize) -> f64 {
    (order * order) as f64 / 4.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub point: PointLabel,
    pub order: Option<usize>,
    pub eigenvalues: Vec<Eigenvalue>,
    pub tol_im: f64,
    pub tol_re: f64,
    /// Real eigenvalues outside this band are truncation-edge modes.
    pub resolved_band: Option<f64>,
    /// Real eigenvalues inside the resolved band, descending.
    pub real_eigs: Vec<f64>,
    /// Real eigenvalues outside the resolved band.
    pub edge_real_eigs: Vec<f64>,
    /// Number of positive real eigenvalues (with multiplicity) in the resolved band.
    pub l_count: usize,
    pub negative_real_count: usize,
    pub zero_real_count: usize,
    /// `min |Re lambda|`: distance of the spectrum to the imaginary axis.
    pub dist_imag_axis: f64,
    /// `min |lambda|`.
    pub dist_origin: f64,
    /// `min |Im lambda|` over nonreal eigenvalues.
    pub min_abs_im_nonreal: Option<f64>,
}

impl SpectrumReport {
    pub fn real_count(&self) -> usize {
        self.real_eigs.len()
    }
}

pub fn classify_and_count(
    eigenvalues: Vec<Eigenvalue>,
    opts: &ClassifyOptions,
    resolved_band: Option<f64>,
) -> SpectrumReport {
    let in_band = |e: &Eigenvalue| resolved_band.is_none_or(|b| e.value.re.abs() <= b);
    let mut real_eigs = Vec::new();
    let mut edge_real_eigs = Vec::new();
    let mut min_im: Option<f64> = None;
    for e in &eigenvalues {
        if e.is_real(opts.tol_im) {
            if in_band(e) {
                real_eigs.push(e.value.re);
            } else {
                edge_real_eigs.push(e.value.re);
            }
        } else {
            let im = e.value.im.abs();
            min_im = Some(min_im.map_or(im, |m| m.min(im)));
        }
    }
    let l_count = real_eigs.iter().filter(|&&x| x > opts.tol_re).count();
    let negative_real_count = real_eigs.iter().filter(|&&x| x < -opts.tol_re).count();
    let zero_real_count = real_eigs.iter().filter(|&&x| x.abs() <= opts.tol_re).count();
    let dist_imag_axis = eigenvalues
        .iter()
        .map(|e| e.value.re.abs())
        .fold(f64::INFINITY, f64::min);
    let dist_origin = eigenvalues
        .iter()
        .map(|e| e.value.norm())
        .fold(f64::INFINITY, f64::min);
    SpectrumReport {
        point: PointLabel::Custom,
        order: None,
        eigenvalues,
        tol_im: opts.tol_im,
        tol_re: opts.tol_re,
        resolved_band,
        real_eigs,
        edge_real_eigs,
        l_count,
        negative_real_count,
        zero_real_count,
        dist_imag_axis,
        dist_origin,
        min_abs_im_nonreal: min_im,
    }
}

/// Spectrum of `T(u)` classified with the resolved band of `params`' layout.
pub fn spectrum_at(
    u: &TrigVector,
    point: PointLabel,
    params: &ModelParams,
    opts: &ClassifyOptions,
) -> Result<SpectrumReport> {
    let t = assemble_t(u, params)?;
    let order = params.layout().order();
    let mut report = classify_and_count(eigenvalues(&t)?, opts, Some(resolved_band(order)));
    report.point = point;
    report.order = Some(order);
    Ok(report)
}

/// The stationary state for a label (`Custom` has none).
pub fn stationary_state(point: PointLabel, layout: BasisLayout) -> Option<TrigVector> {
    match point {
        PointLabel::U0 => Some(TrigVector::zeros(layout)),
        PointLabel::U1 => Some(TrigVector::constant(layout, 1.0)),
        PointLabel::Custom => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub order: usize,
    /// The `k` eigenvalues with smallest `|Re lambda|`.
    pub lowest: Vec<Complex64>,
    pub real_eigs: Vec<f64>,
    pub l_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// For each consecutive pair of orders, the largest relative change of an
    /// eigenvalue with `|Re| <= N^2/8` (matched to its nearest neighbour).
    pub max_rel_drift: Vec<f64>,
    /// Human-readable descriptions of classification flips between consecutive orders.
    pub flags: Vec<String>,
}

impl ConvergenceStudy {
    pub fn is_clean(&self, drift_tol: f64) -> bool {
        self.flags.is_empty() && self.max_rel_drift.iter().all(|&d| d <= drift_tol)
    }
}

/// Spectra of `T(u)` over increasing truncation orders.
pub fn convergence_study(
    u: &TrigVector,
    params: &ModelParams,
    orders: &[usize],
    opts: &ClassifyOptions,
    k: usize,
) -> Result<ConvergenceStudy> {
    if orders.len() < 2 || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param(
            "orders",
            "need at least two strictly increasing truncation orders",
        ));
    }
    let reports: Vec<SpectrumReport> = orders
        .par_iter()
        .map(|&order| {
            let p = params.clone().with_order(order)?;
            spectrum_at(&u.resized(p.layout()), PointLabel::Custom, &p, opts)
        })
        .collect::<Result<_>>()?;

    let rows = reports
        .iter()
        .zip(orders)
        .map(|(r, &order)| {
            let mut lowest: Vec<Complex64> = r.eigenvalues.iter().map(|e| e.value).collect();
            lowest.sort_by(|a, b| a.re.abs().total_cmp(&b.re.abs()).then(b.im.total_cmp(&a.im)));
            lowest.truncate(k);
            ConvergenceRow {
                order,
                lowest,
                real_eigs: r.real_eigs.clone(),
                l_count: r.l_count,
            }
        })
        .collect();

    let mut max_rel_drift = Vec::new();
    let mut flags = Vec::new();
    for (w, ords) in reports.windows(2).zip(orders.windows(2)) {
        let (coarse, fine) = (&w[0], &w[1]);
        let band = (ords[0] * ords[0]) as f64 / 8.0;
        let mut drift = 0.0f64;
        for e in coarse.eigenvalues.iter().filter(|e| e.value.re.abs() <= band) {
            let nearest = fine
                .eigenvalues
                .iter()
                .min_by(|a, b| {
                    (a.value - e.value)
                        .norm()
                        .total_cmp(&(b.value - e.value).norm())
                })
                .expect("nonempty spectrum");
            let rel = (nearest.value - e.value).norm() / e.value.norm().max(1e-12);
            drift = drift.max(rel);
            if e.is_real(opts.tol_im) != nearest.is_real(opts.tol_im) {
                flags.push(format!(
                    "eigenvalue {:.6e}{:+.6e}i changes real/nonreal class between N={} and N={}",
                    e.value.re, e.value.im, ords[0], ords[1]
                ));
            }
        }
        if coarse.real_count() != fine.real_count() || coarse.l_count != fine.l_count {
            flags.push(format!(
                "resolved real count / l changes from {}/{} (N={}) to {}/{} (N={})",
                coarse.real_count(),
                coarse.l_count,
                ords[0],
                fine.real_count(),
                fine.l_count,
                ords[1]
            ));
        }
        max_rel_drift.push(drift);
    }
    Ok(ConvergenceStudy {
        rows,
        max_rel_drift,
        flags,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eps0Row {
    pub eps0: f64,
    pub real_count: usize,
    pub real_eigs: Vec<f64>,
    pub l_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eps0Scan {
    pub rows: Vec<Eps0Row>,
    /// Largest scanned `eps0` for which `T(1)` has exactly one resolved real eigenvalue.
    pub largest_single_real: Option<f64>,
}

/// Counts resolved real eigenvalues of `T(1)` for each `eps0` (same `rho`).
pub fn eps0_threshold_scan(
    params: &ModelParams,
    eps0_list: &[f64],
    opts: &ClassifyOptions,
) -> Result<Eps0Scan> {
    let rho = params.eps().rho();
    let rows: Vec<Eps0Row> = eps0_list
        .par_iter()
        .map(|&eps0| {
            let p = params.clone().with_eps(EpsilonSequence::new(eps0, rho)?);
            let u1 = TrigVector::constant(p.layout(), 1.0);
            let r = spectrum_at(&u1, PointLabel::U1, &p, opts)?;
            Ok(Eps0Row {
                eps0,
                real_count: r.real_count(),
                real_eigs: r.real_eigs,
                l_count: r.l_count,
            })
        })
        .collect::<Result<_>>()?;
    let largest_single_real = rows
        .iter()
        .filter(|r| r.real_count == 1)
        .map(|r| r.eps0)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(Eps0Scan {
        rows,
        largest_single_real,
    })
}

/// Spectral gap ratios of `A = I - d^2/dx^2` on the circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub theta: f64,
    pub k: f64,
    pub lipschitz: f64,
    /// Highest Fourier mode included.
    pub n_max: usize,
    /// `1, 2, 2, 5, 5, 10, 10, ...` (`1 + n^2`, doubled for `n >= 1`).
    pub lambda_seq: Vec<f64>,
    /// `r_i = (lambda_{i+1} - lambda_i) / (lambda_{i+1}^theta + lambda_i^theta)`.
    pub ratios: Vec<f64>,
    pub sup_estimate: f64,
    /// 1-based sequence index of the largest ratio.
    pub argmax: usize,
    /// 1-based indices `i` at which the jump condition holds for `k L`.
    pub jump_indices: Vec<usize>,
}

impl GapReport {
    /// Ratio at the jump from `1 + n^2` to `1 + (n+1)^2`.
    pub fn mode_jump_ratio(&self, n: usize) -> f64 {
        // lambda_seq[2n] is the last copy of 1 + n^2
        self.ratios[2 * n]
    }

    /// Max ratio over jumps between modes `0..=n`.
    pub fn running_max_by_mode(&self, n: usize) -> f64 {
        (0..=n.min(self.n_max - 1))
            .map(|m| self.mode_jump_ratio(m))
            .fold(0.0, f64::max)
    }

    pub fn satisfies_jump(&self) -> bool {
        !self.jump_indices.is_empty()
    }
}

pub fn gap_check(theta: f64, k: f64, lipschitz: f64, n_max: usize) -> Result<GapReport> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::param("theta", format!("{theta} is outside [0, 1)")));
    }
    if n_max < 10 {
        return Err(Error::param("n_max", format!("{n_max} is below 10")));
    }
    let mut lambda_seq = Vec::with_capacity(2 * n_max + 1);
    lambda_seq.push(1.0);
    for n in 1..=n_max {
        let l = 1.0 + (n * n) as f64;
        lambda_seq.push(l);
        lambda_seq.push(l);
    }
    let mut ratios = Vec::with_capacity(lambda_seq.len() - 1);
    let mut jump_indices = Vec::new();
    for (i, w) in lambda_seq.windows(2).enumerate() {
        let denom = w[1].powf(theta) + w[0].powf(theta);
        let gap = w[1] - w[0];
        ratios.push(gap / denom);
        if gap > k * lipschitz * denom {
            jump_indices.push(i + 1);
        }
    }
    let (argmax, sup_estimate) = ratios
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(GapReport {
        theta,
        k,
        lipschitz,
        n_max,
        lambda_seq,
        ratios,
        sup_estimate,
        argmax: argmax + 1,
        jump_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(re: f64, im: f64, size: usize) -> Eigenvalue {
        Eigenvalue {
            value: Complex64::new(re, im),
            component_size: size,
            block: None,
        }
    }

    #[test]
    fn diagonal_matrix() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let e = eigenvalues_dense(&m).unwrap();
        let vals: Vec<f64> = e.iter().map(|x| x.value.re).collect();
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
        assert!(e.iter().all(|x| x.value.im == 0.0 && x.is_exact()));
    }

    #[test]
    fn rotation_block() {
        let eps = 0.05;
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -eps, eps, 0.0]);
        let e = eigenvalues_dense(&m).unwrap();
        assert_eq!(e[0].value, Complex64::new(0.0, eps));
        assert_eq!(e[1].value, Complex64::new(0.0, -eps));
        assert_eq!(e[0].block, Some(0));
    }

    #[test]
    fn tiny_rotation_stays_nonreal() {
        let eps = 0.05 * 0.5f64.powi(1000);
        let m = DMatrix::from_row_slice(2, 2, &[-1e6, -eps, eps, -1e6]);
        let e = eigenvalues_dense(&m).unwrap();
        assert!(e.iter().all(|x| !x.is_real(1e-8)));
        assert!((e[0].value.im - eps).abs() <= 1e-15 * eps);
    }

    #[test]
    fn real_2x2_blocks() {
        let e = eig_2x2(1.0, 2.0, 3.0, 4.0);
        // eigenvalues (5 +- sqrt(33)) / 2
        assert!((e[0].re - (5.0 + 33f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((e[1].re - (5.0 - 33f64.sqrt()) / 2.0).abs() < 1e-14);
        let e = eig_2x2(3.0, -1.0, 1.0, 1.0);
        assert_eq!(e[0], Complex64::new(2.0, 0.0));
        assert_eq!(e[1], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_non_finite() {
        let m = DMatrix::from_row_slice(2, 2, &[f64::NAN, 0.0, 0.0, 1.0]);
        assert!(matches!(eigenvalues_dense(&m), Err(Error::NonFiniteMatrix(1))));
    }

    #[test]
    fn count_positive_reals() {
        let eigs = vec![
            ev(3.0, 4.0, 4),
            ev(3.0, -4.0, 4),
            ev(2.0, 0.0, 4),
            ev(-1.0, 0.0, 4),
        ];
        let r = classify_and_count(eigs, &ClassifyOptions::default(), None);
        assert_eq!(r.l_count, 1);
        assert_eq!(r.real_eigs, vec![2.0, -1.0]);
        assert_eq!(r.negative_real_count, 1);
        assert_eq!(r.min_abs_im_nonreal, Some(4.0));
    }

    #[test]
    fn tolerance_applies_to_dense_only() {
        let split = ev(-5.0, 1e-9, 3);
        assert!(split.is_real(1e-8));
        let exact = ev(-5.0, 1e-30, 2);
        assert!(!exact.is_real(1e-8));
    }

    #[test]
    fn closed_form_blocks() {
        let eps = EpsilonSequence::new(0.05, 0.5).unwrap();
        assert_eq!(block_spectrum_u0(0, &eps)[0], Complex64::new(0.0, 0.05));
        assert_eq!(block_spectrum_u0(1, &eps)[1], Complex64::new(-2.0, -0.025));
        let q = qkappa_spectrum(2, 1.25).unwrap();
        assert!((q[0] - Complex64::new(-4.0, 1.5)).norm() < 1e-15);
        let q = qkappa_spectrum(1, 2f64.sqrt()).unwrap();
        assert!((q[1] - Complex64::new(-1.0, -1.0)).norm() < 1e-15);
        assert!(qkappa_spectrum(1, 0.9).is_err());
        assert!(qkappa_spectrum(0, 1.25).is_err());
    }

    #[test]
    fn gap_sequence_shape() {
        let g = gap_check(0.5, 1.0, 1.0, 10).unwrap();
        assert_eq!(&g.lambda_seq[..5], &[1.0, 2.0, 2.0, 5.0, 5.0]);
        assert_eq!(g.ratios[1], 0.0);
        let r0 = 1.0 / (2f64.sqrt() + 1.0);
        assert!((g.mode_jump_ratio(0) - r0).abs() < 1e-15);
        assert!(gap_check(1.0, 1.0, 1.0, 10).is_err());
        assert!(gap_check(0.5, 1.0, 1.0, 9).is_err());
    }
}
