//! Command-line driver for `confgeom`: config ingestion, grid evaluation,
//! check suites and surface reconstruction.
//!
//! Exit codes: 0 ok, 1 check failed, 2 config error, 3 umbilic point,
//! 4 degenerate ambient point, 5 integrability failure, 6 Gram drift.

pub mod catalog;
pub mod check;
pub mod compute;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod recon;
pub mod transform;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{Format, RunConfig};
pub use error::{CliError, Result};

/// One command with its options resolved.
#[derive(Debug, Clone)]
pub enum Command {
    Compute,
    Check(check::Suite),
    Reconstruct,
    Catalog,
}

#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub seed_transform: Option<String>,
}

/// Where output goes: `--out`, else `output.path` in the config, else stdout.
struct Sink {
    path: Option<PathBuf>,
    format: Format,
}

impl Sink {
    fn open(&self) -> Result<Box<dyn Write>> {
        match &self.path {
            Some(p) => {
                let f = std::fs::File::create(p).map_err(|source| CliError::Io { path: p.clone(), source })?;
                Ok(Box::new(std::io::BufWriter::new(f)))
            }
            None => Ok(Box::new(std::io::stdout().lock())),
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let path = self.path.clone().unwrap_or_else(|| "<stdout>".into());
        let mut w = self.open()?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|source| CliError::Json { path: path.clone(), source })?;
        writeln!(w).and_then(|_| w.flush()).map_err(|source| CliError::Io { path, source })
    }
}

fn sink(inv: &Invocation, cfg: Option<&RunConfig>) -> Sink {
    let path = inv.out.clone().or_else(|| cfg.and_then(|c| c.output.path.clone()));
    let format = inv.format.or(cfg.map(|c| c.output.format)).unwrap_or_default();
    Sink { path, format }
}

fn check_csv<W: Write>(r: &check::CheckReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["fingerprint", "suite", "identity", "anchor", "residual", "tolerance", "pass", "counted"])?;
    for row in &r.rows {
        out.write_record([
            r.fingerprint.as_str(),
            r.suite,
            &row.identity,
            &row.anchor,
            &row.residual.to_string(),
            &row.tolerance.to_string(),
            &row.pass.to_string(),
            &row.counted.to_string(),
        ])?;
    }
    out.flush().map_err(|source| CliError::Io { path: "<output>".into(), source })?;
    Ok(())
}

fn load_config(path: Option<&Path>) -> Result<Option<RunConfig>> {
    path.map(RunConfig::from_path).transpose()
}

/// Runs one invocation. Check failures are reported through
/// [`CliError::CheckFailed`] after the report has been written.
pub fn run(inv: &Invocation) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(inv.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(inv))
}

fn run_in_pool(inv: &Invocation) -> Result<()> {
    if let Command::Catalog = inv.command {
        let s = sink(inv, None);
        return match inv.format {
            None => {
                let path = s.path.clone().unwrap_or_else(|| "<stdout>".into());
                let mut w = s.open()?;
                w.write_all(catalog::text().as_bytes())
                    .and_then(|_| w.flush())
                    .map_err(|source| CliError::Io { path, source })
            }
            Some(Format::Json) => s.json(&catalog::entries()),
            Some(Format::Csv) => {
                let mut out = csv::Writer::from_writer(s.open()?);
                out.write_record(["kind", "name", "detail"])?;
                for e in catalog::entries() {
                    out.write_record([e.kind, &e.name, &e.detail])?;
                }
                out.flush().map_err(|source| CliError::Io { path: "<output>".into(), source })?;
                Ok(())
            }
        };
    }
    let config = load_config(inv.config.as_deref())?;
    if config.is_none() && !matches!(inv.command, Command::Reconstruct | Command::Check(check::Suite::Integrability)) {
        return Err(CliError::Config("--config is required for this command".into()));
    }
    let seed = inv.seed_transform.as_deref().map(transform::parse_chain).transpose()?;
    let ctx = eval::Context::new(config, inv.data.as_ref(), seed)?;
    let s = sink(inv, ctx.config.as_ref());
    match &inv.command {
        Command::Compute => {
            let rs = compute::compute(&ctx)?;
            match s.format {
                Format::Json => s.json(&rs),
                Format::Csv => compute::write_csv(&rs, s.open()?),
            }
        }
        Command::Check(suite) => {
            let report = check::run(&ctx, *suite)?;
            match s.format {
                Format::Json => s.json(&report)?,
                Format::Csv => check_csv(&report, s.open()?)?,
            }
            if report.passed {
                Ok(())
            } else {
                let total = report.rows.iter().filter(|r| r.counted).count();
                Err(CliError::CheckFailed { failed: report.failed, total })
            }
        }
        Command::Reconstruct => {
            let r = recon::reconstruct(&ctx)?;
            match s.format {
                Format::Json => s.json(&r),
                Format::Csv => {
                    let d = r.deviation;
                    eprintln!(
                        "gram drift {:.3e}, path difference {:.3e}, deviation m {:.3e}, |II0|^2 E {:.3e}, willmore {}",
                        r.gram_drift,
                        r.path_difference,
                        d.m,
                        d.norm_ii,
                        d.willmore.map_or_else(|| "n/a".into(), |w| format!("{w:.3e}"))
                    );
                    recon::write_csv(&r, s.open()?)
                }
            }
        }
        Command::Catalog => unreachable!("handled above"),
    }
}
