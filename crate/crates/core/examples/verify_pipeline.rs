//! Full verification pipeline with report files written to a temporary directory.

use nonlocal_diffusion::config::RunConfig;
use nonlocal_diffusion::report::emit_reports;
use nonlocal_diffusion::verdict::run_verify;

fn main() -> nonlocal_diffusion::Result<()> {
    let cfg = RunConfig {
        order: 64,
        ..RunConfig::default()
    };
    let report = run_verify(&cfg)?;
    println!("verdict {}, l = {:?}, parity {:?}", report.verdict, report.l_values, report.parity);
    for f in &report.failures {
        println!("failure: {f:?}");
    }
    let dir = std::env::temp_dir().join("nonlocal-verify-example");
    for path in emit_reports(&report, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
