use std::path::PathBuf;

use thiserror::Error;

/// Everything the CLI can fail with. [`CliError::exit_code`] maps each case
/// onto the documented process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("at grid point ({}, {}), u = ({:.6}, {:.6}): {source}", index[0], index[1], u[0], u[1])]
    AtPoint { index: [usize; 2], u: [f64; 2], source: confgeom::Error },
    #[error(transparent)]
    Core(#[from] confgeom::Error),
    #[error("check failed: {failed} of {total} identities over tolerance")]
    CheckFailed { failed: usize, total: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

fn core_code(e: &confgeom::Error) -> u8 {
    use confgeom::Error as E;
    match e {
        E::Umbilic(_) => 3,
        E::DegenerateAmbient(_) => 4,
        E::Integrability(..) => 5,
        E::GramDrift(..) | E::NonPositiveTime(_) => 6,
        _ => 2,
    }
}

impl CliError {
    /// 0 ok, 1 check failed, 2 config, 3 umbilic, 4 degenerate ambient,
    /// 5 integrability, 6 Gram drift.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed { .. } => 1,
            CliError::AtPoint { source, .. } => core_code(source),
            CliError::Core(e) => core_code(e),
            CliError::Config(_) | CliError::Io { .. } | CliError::Json { .. } | CliError::Csv(_) => 2,
        }
    }

    /// True when the reader of our output went away, as in `confgeom ... | head`.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io { source, .. } => Some(source),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    }

    pub fn at(index: [usize; 2], u: [f64; 2]) -> impl FnOnce(confgeom::Error) -> CliError {
        move |source| CliError::AtPoint { index, u, source }
    }
}
