//! Run configuration: a flat TOML table, validated before any computation.
//!
//! ```toml
//! kappa = 1.25
//! eps0 = 0.05
//! rho = 0.5
//! theta = 0.875
//! N = 128
//! dt = 1e-3
//! T_final = 50.0
//! tol_im = 1e-8
//! tol_re = 1e-10
//! seeds = ["random:1:10", "random:2:10", "random:3:10"]
//! outdir = "out"
//! ```
//!
//! Every key is optional; missing keys take the defaults shown above (ten
//! random seeds by default). Further optional keys: `stationarity_tol`
//! (1e-10), `convergence_tol` (1e-6), `allow_theta_override` (false),
//! `allow_degenerate_eps` (false), `write_reports` (true).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::BasisLayout;
use crate::nonlinearity::ModelParams;
use crate::operators::EpsilonSequence;
use crate::semiflow::{random_seeds, SeedSpec};
use crate::spectra::ClassifyOptions;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub kappa: f64,
    pub eps0: f64,
    pub rho: f64,
    pub theta: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub dt: f64,
    #[serde(rename = "T_final")]
    pub t_final: f64,
    pub tol_im: f64,
    pub tol_re: f64,
    pub seeds: Vec<SeedSpec>,
    pub outdir: PathBuf,
    pub stationarity_tol: f64,
    pub convergence_tol: f64,
    pub allow_theta_override: bool,
    pub allow_degenerate_eps: bool,
    pub write_reports: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let tol = ClassifyOptions::default();
        Self {
            kappa: ModelParams::DEFAULT_KAPPA,
            eps0: ModelParams::DEFAULT_EPS0,
            rho: ModelParams::DEFAULT_RHO,
            theta: ModelParams::DEFAULT_THETA,
            order: ModelParams::DEFAULT_ORDER,
            dt: ModelParams::DEFAULT_DT,
            t_final: ModelParams::DEFAULT_T_FINAL,
            tol_im: tol.tol_im,
            tol_re: tol.tol_re,
            seeds: random_seeds(10, 10.0),
            outdir: PathBuf::from("out"),
            stationarity_tol: 1e-10,
            convergence_tol: 1e-6,
            allow_theta_override: false,
            allow_degenerate_eps: false,
            write_reports: true,
        }
    }
}

/// Command-line values that replace file values when present.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigOverrides {
    pub kappa: Option<f64>,
    pub eps0: Option<f64>,
    pub rho: Option<f64>,
    pub theta: Option<f64>,
    pub order: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub tol_im: Option<f64>,
    pub tol_re: Option<f64>,
    pub seeds: Option<Vec<SeedSpec>>,
    pub outdir: Option<PathBuf>,
    pub allow_theta_override: bool,
    pub allow_degenerate_eps: bool,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn apply(mut self, o: &ConfigOverrides) -> Result<Self> {
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = o.$field.clone() {
                    self.$field = v;
                }
            )*};
        }
        take!(kappa, eps0, rho, theta, order, dt, t_final, tol_im, tol_re, seeds, outdir);
        self.allow_theta_override |= o.allow_theta_override;
        self.allow_degenerate_eps |= o.allow_degenerate_eps;
        self.validate()?;
        Ok(self)
    }

    /// Checks every field by building the model parameters.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        for (name, v) in [
            ("tol_im", self.tol_im),
            ("tol_re", self.tol_re),
            ("stationarity_tol", self.stationarity_tol),
            ("convergence_tol", self.convergence_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("{v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn eps(&self) -> Result<EpsilonSequence> {
        if self.eps0 == 0.0 {
            if self.allow_degenerate_eps {
                return Ok(EpsilonSequence::zero());
            }
            return Err(Error::param(
                "eps0",
                "0 makes K vanish; set allow_degenerate_eps to run it anyway",
            ));
        }
        EpsilonSequence::new(self.eps0, self.rho)
    }

    pub fn params(&self) -> Result<ModelParams> {
        let layout = BasisLayout::new(self.order)?;
        let eps = self.eps()?;
        let p = if self.allow_theta_override {
            ModelParams::with_theta_override(self.kappa, eps, self.theta, layout)?
        } else {
            ModelParams::new(self.kappa, eps, self.theta, layout)?
        };
        p.with_time(self.dt, self.t_final)
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            tol_im: self.tol_im,
            tol_re: self.tol_re,
        }
    }
}
