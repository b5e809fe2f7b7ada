//! End-to-end verification: stationarity, spectra at both stationary states,
//! a truncation-doubling study, membership in the hyperbolic set `E`, and the
//! parity of `l(u1) - l(u0)`.
//!
//! An odd parity between two members of `E` rules out any smooth invariant
//! finite-dimensional manifold containing the attractor. Any failed stage
//! downgrades the verdict to `INCONCLUSIVE`; the pipeline never reports an
//! obstruction it has not checked.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;
use crate::nonlinearity::ModelParams;
use crate::semiflow::stationary_residual;
use crate::spectra::{
    convergence_study, gap_check, spectrum_at, stationary_state, ConvergenceStudy, GapReport,
    PointLabel, SpectrumReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    Inconclusive,
}

impl Verdict {
    /// Process exit code: 0 only when the obstruction is certified.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Obstructed => 0,
            Verdict::NotObstructed | Verdict::Inconclusive => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "OBSTRUCTED",
            Verdict::NotObstructed => "NOT_OBSTRUCTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Seconds since the Unix epoch; ignored by equality so reports from
/// identical configurations compare equal.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub u64);

impl Timestamp {
    pub fn now() -> Self {
        Timestamp(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    }
}

impl PartialEq for Timestamp {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stationarity {
    pub residual_u0: f64,
    pub residual_u1: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub stationary: bool,
    pub no_negative_real: bool,
    pub zero_not_real_eigenvalue: bool,
    pub member: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EMembership {
    pub u0: Membership,
    pub u1: Membership,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEvidence {
    pub orders: Vec<usize>,
    pub threshold: f64,
    pub u0: ConvergenceStudy,
    pub u1: ConvergenceStudy,
    pub clean: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub timestamp: Timestamp,
    pub config: RunConfig,
    pub params: ModelParams,
    pub stationarity: Stationarity,
    pub spectrum_u0: Option<SpectrumReport>,
    pub spectrum_u1: Option<SpectrumReport>,
    pub convergence_evidence: Option<ConvergenceEvidence>,
    pub e_membership: Option<EMembership>,
    pub l_values: Option<(usize, usize)>,
    pub parity: Option<u8>,
    pub gap_summary: Option<GapReport>,
    pub failures: Vec<StageFailure>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl VerdictReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn membership(stationary: bool, s: &SpectrumReport) -> Membership {
    let no_negative_real = s.negative_real_count == 0;
    let zero_not_real_eigenvalue = s.zero_real_count == 0;
    Membership {
        stationary,
        no_negative_real,
        zero_not_real_eigenvalue,
        member: stationary && no_negative_real && zero_not_real_eigenvalue,
    }
}

/// `(l1 - l0) mod 2`.
pub fn parity(l0: usize, l1: usize) -> u8 {
    (l1 as i64 - l0 as i64).rem_euclid(2) as u8
}

/// Highest mode of the gap summary embedded in the report.
pub const GAP_SUMMARY_NMAX: usize = 200;

/// Runs the full pipeline. Only an invalid configuration is an error; stage
/// failures are recorded in the report.
pub fn run_verify(config: &RunConfig) -> Result<VerdictReport> {
    config.validate()?;
    let params = config.params()?;
    let opts = config.classify_options();
    let layout = params.layout();
    let mut failures = Vec::new();
    let mut fail = |stage: &str, reason: String| {
        failures.push(StageFailure {
            stage: stage.to_string(),
            reason,
        })
    };
    let mut notes = Vec::new();
    if params.theta_warning() {
        notes.push(format!(
            "theta = {} is outside (3/4, 1) and was accepted by override",
            params.theta()
        ));
    }
    if params.eps().is_degenerate() {
        notes.push("eps0 = 0: the source operator K vanishes".to_string());
    }

    let u0 = stationary_state(PointLabel::U0, layout).expect("u0 is defined");
    let u1 = stationary_state(PointLabel::U1, layout).expect("u1 is defined");

    let residual_u0 = stationary_residual(&u0, &params);
    let residual_u1 = stationary_residual(&u1, &params);
    let threshold = config.stationarity_tol;
    let stationary0 = residual_u0 <= threshold;
    let stationary1 = residual_u1 <= threshold;
    if !(stationary0 && stationary1) {
        fail(
            "stationarity",
            format!("residuals {residual_u0:.3e} (u0), {residual_u1:.3e} (u1) against {threshold:.1e}"),
        );
    }
    let stationarity = Stationarity {
        residual_u0,
        residual_u1,
        threshold,
        passed: stationary0 && stationary1,
    };

    let spectrum_u0 = spectrum_at(&u0, PointLabel::U0, &params, &opts)
        .map_err(|e| fail("spectrum_u0", e.to_string()))
        .ok();
    let spectrum_u1 = spectrum_at(&u1, PointLabel::U1, &params, &opts)
        .map_err(|e| fail("spectrum_u1", e.to_string()))
        .ok();

    let orders = vec![layout.order(), 2 * layout.order()];
    let convergence_evidence = match (
        convergence_study(&u0, &params, &orders, &opts, 8),
        convergence_study(&u1, &params, &orders, &opts, 8),
    ) {
        (Ok(s0), Ok(s1)) => {
            let clean = s0.is_clean(config.convergence_tol) && s1.is_clean(config.convergence_tol);
            if !clean {
                let mut reasons: Vec<String> = s0.flags.iter().chain(&s1.flags).cloned().collect();
                let drift = s0
                    .max_rel_drift
                    .iter()
                    .chain(&s1.max_rel_drift)
                    .fold(0.0f64, |a, &b| a.max(b));
                if drift > config.convergence_tol {
                    reasons.push(format!(
                        "relative eigenvalue drift {drift:.3e} exceeds {:.1e}",
                        config.convergence_tol
                    ));
                }
                fail("convergence", reasons.join("; "));
            }
            Some(ConvergenceEvidence {
                orders,
                threshold: config.convergence_tol,
                u0: s0,
                u1: s1,
                clean,
            })
        }
        (Err(e), _) | (_, Err(e)) => {
            fail("convergence", e.to_string());
            None
        }
    };

    let (e_membership, l_values, parity_value) = match (&spectrum_u0, &spectrum_u1) {
        (Some(s0), Some(s1)) => {
            if s0.dist_imag_axis <= opts.tol_re {
                notes.push(format!(
                    "T(u0) has spectrum on the imaginary axis (min |Re| = {:.3e}); reported, not used in the verdict",
                    s0.dist_imag_axis
                ));
            }
            let m = EMembership {
                u0: membership(stationary0, s0),
                u1: membership(stationary1, s1),
            };
            for (name, mm) in [("u0", m.u0), ("u1", m.u1)] {
                if !mm.member {
                    fail(
                        "e_membership",
                        format!(
                            "{name}: stationary={}, no_negative_real={}, zero_not_real_eigenvalue={}",
                            mm.stationary, mm.no_negative_real, mm.zero_not_real_eigenvalue
                        ),
                    );
                }
            }
            let l = (s0.l_count, s1.l_count);
            (Some(m), Some(l), Some(parity(l.0, l.1)))
        }
        _ => (None, None, None),
    };

    let gap_summary = gap_check(params.theta(), 1.0, 1.0, GAP_SUMMARY_NMAX)
        .map_err(|e| fail("gap_summary", e.to_string()))
        .ok();

    let verdict = if !failures.is_empty() {
        Verdict::Inconclusive
    } else {
        match parity_value {
            Some(1) => Verdict::Obstructed,
            Some(_) => Verdict::NotObstructed,
            None => Verdict::Inconclusive,
        }
    };

    Ok(VerdictReport {
        timestamp: Timestamp::now(),
        config: config.clone(),
        params,
        stationarity,
        spectrum_u0,
        spectrum_u1,
        convergence_evidence,
        e_membership,
        l_values,
        parity: parity_value,
        gap_summary,
        failures,
        notes,
        verdict,
    })
}
