//! Command-line front end. Exit codes: 0 on success (for `verify`: only when
//! the obstruction is certified), 2 when `verify` ends INCONCLUSIVE or
//! NOT_OBSTRUCTED, 1 on any error.

use std::ffi::OsString;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ConfigOverrides, RunConfig};
use crate::error::{Error, Result};
use crate::fourier::theta_norm;
use crate::report::emit_reports;
use crate::semiflow::{dissipativity_probe, integrate, SeedSpec};
use crate::spectra::{eps0_threshold_scan, gap_check, spectrum_at, stationary_state, PointLabel};
use crate::verdict::run_verify;

macro_rules! out {
    ($w:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(|e| Error::io("writing output", e))?
    };
}

#[derive(Debug, Parser)]
#[command(name = "nonlocal-verify", version, about = "Spectral verification of the parity obstruction")]
struct Cli {
    #[command(flatten)]
    model: ModelFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelFlags {
    /// TOML file with any of: kappa, eps0, rho, theta, N, dt, T_final, tol_im, tol_re, seeds, outdir
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    kappa: Option<f64>,
    #[arg(long, global = true)]
    eps0: Option<f64>,
    #[arg(long, global = true)]
    rho: Option<f64>,
    #[arg(long, global = true)]
    theta: Option<f64>,
    /// Truncation order
    #[arg(long = "N", global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long = "T-final", global = true)]
    t_final: Option<f64>,
    #[arg(long, global = true)]
    tol_im: Option<f64>,
    #[arg(long, global = true)]
    tol_re: Option<f64>,
    /// Comma-separated seed specs for the dissipativity probe
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<SeedSpec>>,
    #[arg(long, global = true)]
    outdir: Option<PathBuf>,
    /// Accept theta outside (3/4, 1)
    #[arg(long, global = true)]
    allow_theta_override: bool,
    /// Accept eps0 = 0 (K = 0)
    #[arg(long, global = true)]
    allow_degenerate_eps: bool,
}

impl ModelFlags {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            kappa: self.kappa,
            eps0: self.eps0,
            rho: self.rho,
            theta: self.theta,
            order: self.order,
            dt: self.dt,
            t_final: self.t_final,
            tol_im: self.tol_im,
            tol_re: self.tol_re,
            seeds: self.seeds.clone(),
            outdir: self.outdir.clone(),
            allow_theta_override: self.allow_theta_override,
            allow_degenerate_eps: self.allow_degenerate_eps,
        }
    }

    fn base(&self) -> Result<RunConfig> {
        match &self.config {
            Some(path) => RunConfig::load(path),
            None => Ok(RunConfig::default()),
        }
    }

    fn resolve(&self) -> Result<RunConfig> {
        self.base()?.apply(&self.overrides())
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum At {
    U0,
    U1,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full pipeline: stationarity, spectra, convergence, membership, parity
    Verify {
        /// Skip writing report files
        #[arg(long)]
        no_reports: bool,
    },
    /// Eigenvalues of the linearization at a stationary state
    Spectrum {
        #[arg(long, value_enum)]
        at: At,
    },
    /// Integrate from a seed and print the theta-norm history
    Simulate {
        #[arg(long)]
        seed_spec: SeedSpec,
        /// Model-time horizon
        #[arg(long = "T")]
        horizon: f64,
    },
    /// Spectral gap ratios of A = I - d^2/dx^2 (uses --theta)
    GapCheck {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long = "L", default_value_t = 1.0)]
        lipschitz: f64,
    },
    /// Count real eigenvalues of T(1) over a list of eps0 values
    ScanEps0 {
        #[arg(long, value_delimiter = ',', required = true)]
        list: Vec<f64>,
    },
    /// Long-time theta-norms of the configured seeds
    ProbeDissipativity {
        /// Semigroup constant C in the radius formula
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Horizon (defaults to T_final)
        #[arg(long = "T")]
        horizon: Option<f64>,
    },
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(Error::Io { source, .. }) if source.kind() == ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Verify { no_reports } => {
            let cfg = cli.model.resolve()?;
            let report = run_verify(&cfg)?;
            let (l0, l1) = report.l_values.unwrap_or_default();
            out!(out, "verdict: {}", report.verdict);
            if let Some(p) = report.parity {
                out!(out, "l(u0) = {l0}, l(u1) = {l1}, parity = {p}");
            }
            out!(out, 
                "stationarity residuals: u0 {:.3e}, u1 {:.3e}",
                report.stationarity.residual_u0, report.stationarity.residual_u1
            );
            for f in &report.failures {
                out!(out, "failed stage {}: {}", f.stage, f.reason);
            }
            for n in &report.notes {
                out!(out, "note: {n}");
            }
            if cfg.write_reports && !no_reports {
                for path in emit_reports(&report, &cfg.outdir)? {
                    out!(out, "wrote {}", path.display());
                }
            }
            Ok(report.verdict.exit_code())
        }
        Command::Spectrum { at } => {
            let cfg = cli.model.resolve()?;
            let params = cfg.params()?;
            let point = match at {
                At::U0 => PointLabel::U0,
                At::U1 => PointLabel::U1,
            };
            let u = stationary_state(point, params.layout()).expect("stationary point");
            let r = spectrum_at(&u, point, &params, &cfg.classify_options())?;
            out!(out, 
                "# {} eigenvalues at N = {}; resolved real: {:?}; edge real: {:?}; l = {}",
                r.eigenvalues.len(),
                params.layout().order(),
                r.real_eigs,
                r.edge_real_eigs,
                r.l_count
            );
            out!(out, "re,im,is_real");
            for e in &r.eigenvalues {
                out!(out, "{:.15e},{:.15e},{}", e.value.re, e.value.im, e.is_real(r.tol_im));
            }
            Ok(0)
        }
        Command::Simulate { seed_spec, horizon } => {
            let cfg = cli.model.resolve()?;
            let params = cfg.params()?.with_time(cfg.dt, *horizon)?;
            let u0 = seed_spec.build(params.layout(), params.theta())?;
            let traj = integrate(&u0, &params)?;
            out!(out, "t,theta_norm");
            for (t, n) in traj.times.iter().zip(&traj.theta_norm_history) {
                out!(out, "{t:.6},{n:.12e}");
            }
            out!(out, 
                "# final theta-norm {:.12e}",
                theta_norm(traj.last(), params.theta())
            );
            Ok(0)
        }
        Command::GapCheck { nmax, k, lipschitz } => {
            let theta = match cli.model.theta {
                Some(t) => t,
                None => cli.model.base()?.theta,
            };
            let g = gap_check(theta, *k, *lipschitz, *nmax)?;
            out!(out, "theta = {theta}, nmax = {nmax}");
            out!(out, "max ratio = {:.12} at index {}", g.sup_estimate, g.argmax);
            out!(out, 
                "jump condition for kL = {}: {}",
                k * lipschitz,
                if g.satisfies_jump() {
                    format!("holds at {} indices (first {})", g.jump_indices.len(), g.jump_indices[0])
                } else {
                    "never holds".to_string()
                }
            );
            Ok(0)
        }
        Command::ScanEps0 { list } => {
            let cfg = cli.model.resolve()?;
            let scan = eps0_threshold_scan(&cfg.params()?, list, &cfg.classify_options())?;
            out!(out, "eps0,real_count,l,real_eigs");
            for r in &scan.rows {
                let eigs: Vec<String> = r.real_eigs.iter().map(|x| format!("{x:.12e}")).collect();
                out!(out, "{},{},{},{}", r.eps0, r.real_count, r.l_count, eigs.join(" "));
            }
            match scan.largest_single_real {
                Some(e) => out!(out, "# largest eps0 with a single real eigenvalue: {e}"),
                None => out!(out, "# no scanned eps0 gives a single real eigenvalue"),
            }
            Ok(0)
        }
        Command::ProbeDissipativity { c, horizon } => {
            let cfg = cli.model.resolve()?;
            let params = cfg.params()?;
            let horizon = horizon.unwrap_or(cfg.t_final);
            let r_in = cfg
                .seeds
                .iter()
                .filter_map(|s| match s {
                    SeedSpec::Random { norm, .. } => Some(*norm),
                    SeedSpec::Modes(_) => None,
                })
                .fold(0.0, f64::max);
            let report = dissipativity_probe(&cfg.seeds, &params, r_in, horizon, *c)?;
            out!(out, "seed,initial_norm,tail_max,error");
            for o in &report.outcomes {
                out!(out, 
                    "{},{:.6e},{},{}",
                    o.seed,
                    o.initial_norm,
                    o.tail_max.map_or("-".to_string(), |t| format!("{t:.6e}")),
                    o.error.as_deref().unwrap_or("")
                );
            }
            out!(out, 
                "# tail window [{}, {}], a_emp = {:.6e}, M = {:.6e}, delta = {}, radius formula = {:.6e}",
                report.tail_window.0,
                report.tail_window.1,
                report.a_emp,
                report.m_bound,
                report.delta,
                report.a_formula
            );
            Ok(if report.all_finite() { 0 } else { 2 })
        }
    }
}
