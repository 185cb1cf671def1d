//! Shared evaluation context and ordered parallel maps.

use std::path::PathBuf;

use confgeom::frame::PointEval;
use confgeom::integrability::{ConformalData, Grid};
use confgeom::jets::{ConformalFactor, Layout, SurfaceChart};
use confgeom::mink5::LorentzMap;
use rayon::prelude::*;

use crate::config::{hex_digest, RunConfig};
use crate::data::TabulatedData;
use crate::error::{CliError, Result};

/// Everything a command needs, resolved from the config and flags.
pub struct Context {
    pub config: Option<RunConfig>,
    pub chart: Option<SurfaceChart>,
    pub factor: ConformalFactor,
    pub grid: Grid,
    /// Tabulated input given with `--data`.
    pub data: Option<ConformalData>,
    pub seed_map: Option<LorentzMap>,
    pub fingerprint: String,
}

impl Context {
    pub fn new(config: Option<RunConfig>, data_path: Option<&PathBuf>, seed_map: Option<LorentzMap>) -> Result<Self> {
        let mut data_bytes = Vec::new();
        let data = match data_path {
            Some(p) => {
                data_bytes = std::fs::read(p).map_err(|source| CliError::Io { path: p.clone(), source })?;
                Some(
                    TabulatedData::read(p)?
                        .into_data()
                        .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
                )
            }
            None => None,
        };
        let (chart, factor, grid) = match (&config, &data) {
            (Some(c), _) => (Some(c.chart()?), c.factor()?, c.grid()?),
            (None, Some(d)) => (None, ConformalFactor::round(), d.grid),
            (None, None) => return Err(CliError::Config("need --config or --data".into())),
        };
        if let (Some(d), Some(_)) = (&data, &config) {
            if d.grid.nu != grid.nu || d.grid.nv != grid.nv {
                return Err(CliError::Config("--data grid does not match the config grid".into()));
            }
        }
        let cfg_text =
            config.as_ref().map(|c| serde_json::to_string(c).expect("config serializes")).unwrap_or_default();
        let seed_text = seed_map.map(|m| format!("{:?}", m)).unwrap_or_default();
        let fingerprint = hex_digest(&[cfg_text.as_bytes(), &data_bytes, seed_text.as_bytes()]);
        Ok(Context { config, chart, factor, grid, data, seed_map, fingerprint })
    }

    pub fn config(&self) -> Result<&RunConfig> {
        self.config.as_ref().ok_or_else(|| CliError::Config("this command needs --config".into()))
    }

    pub fn chart(&self) -> Result<&SurfaceChart> {
        self.chart.as_ref().ok_or_else(|| CliError::Config("this command needs a surface from --config".into()))
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.config.as_ref().map_or(default, |c| c.tolerance(name, default))
    }

    pub fn surface_name(&self) -> String {
        self.chart.as_ref().map_or_else(|| "tabulated".into(), |c| c.name())
    }

    pub fn lambda_name(&self) -> String {
        self.config.as_ref().map_or_else(|| "unknown".into(), |c| c.lambda_name())
    }

    /// Grid index pair and parameter point of flat index `k`.
    pub fn site(&self, k: usize) -> ([usize; 2], [f64; 2]) {
        ([k % self.grid.nu, k / self.grid.nu], self.grid.point_of(k))
    }

    /// Point evaluation at flat index `k`, with errors tagged by the grid point.
    pub fn point(&self, k: usize, order: usize, factor: &ConformalFactor) -> Result<PointEval> {
        let (index, u) = self.site(k);
        let layout = Layout::new(2, order);
        PointEval::new(self.chart()?, factor, &layout, u, order, order).map_err(CliError::at(index, u))
    }

    /// Up to `count` flat indices spread over the grid, walking diagonally
    /// so both parameter directions vary.
    pub fn sample(&self, count: usize) -> Vec<usize> {
        let n = self.grid.len();
        let count = count.min(n);
        let mut out: Vec<usize> = (0..count)
            .map(|k| {
                let i = (k * self.grid.nu) / count;
                let j = (k * self.grid.nv * 3 / count + k) % self.grid.nv;
                self.grid.index(i, j)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Maps `f` over `items` in parallel and returns results in input order.
/// The first error in input order wins, so failures are reproducible.
pub fn ordered<I, T, F>(items: &[I], f: F) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync + Send,
{
    let out: Vec<Result<T>> = items.par_iter().map(f).collect();
    out.into_iter().collect()
}

/// max and mean of |v| over a sequence.
pub fn max_mean(v: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let (mut max, mut sum, mut n) = (0.0f64, 0.0, 0usize);
    for x in v {
        max = max.max(x.abs());
        sum += x.abs();
        n += 1;
    }
    (max, if n > 0 { sum / n as f64 } else { 0.0 })
}
