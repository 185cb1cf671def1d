use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use confgeom_cli::check::Suite;
use confgeom_cli::{Command, Format, Invocation};

/// Conformal geometry of surfaces in the 3-sphere.
#[derive(Parser)]
#[command(name = "confgeom", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Worker threads for grid evaluation (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent and the config names none.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate scalars and invariants on every grid point.
    Compute(Common),
    /// Run a suite of identities and report residuals.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Tabulated conformal data instead of chart-derived data.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Lorentz map, e.g. boost:1,0,0,0,0.5 or rotation:1,2,0.3.
        #[arg(long)]
        seed_transform: Option<String>,
    },
    /// Rebuild a surface from conformal data.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        seed_transform: Option<String>,
    },
    /// List surfaces, conformal factors and invariants.
    Catalog {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let blank = |command, c: Common, data, seed_transform| Invocation {
        command,
        config: c.config,
        data,
        out: c.out,
        format: c.format,
        jobs: cli.jobs,
        seed_transform,
    };
    let inv = match cli.command {
        Cmd::Compute(c) => blank(Command::Compute, c, None, None),
        Cmd::Check { suite, common, data, seed_transform } => {
            blank(Command::Check(suite), common, data, seed_transform)
        }
        Cmd::Reconstruct { common, data, seed_transform } => blank(Command::Reconstruct, common, data, seed_transform),
        Cmd::Catalog { out, format } => blank(Command::Catalog, Common { config: None, out, format }, None, None),
    };
    match confgeom_cli::run(&inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("confgeom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
