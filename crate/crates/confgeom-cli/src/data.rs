//! Tabulated conformal data: a grid header followed by row-major arrays.

use std::path::Path;

use confgeom::integrability::{ConformalData, Grid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridHeader {
    pub nu: usize,
    pub nv: usize,
    pub origin: [f64; 2],
    pub step: [f64; 2],
    pub periodic: [bool; 2],
}

impl From<Grid> for GridHeader {
    fn from(g: Grid) -> Self {
        GridHeader { nu: g.nu, nv: g.nv, origin: g.origin, step: g.step, periodic: g.periodic }
    }
}

impl GridHeader {
    pub fn to_grid(self) -> Result<Grid> {
        Ok(Grid::new(self.nu, self.nv, self.origin, self.step, self.periodic)?)
    }
}

/// On-disk form of [`ConformalData`]. Point (i, j) sits at index j·nu + i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedData {
    pub grid: GridHeader,
    pub m: Vec<f64>,
    pub omega: Vec<[f64; 2]>,
    pub big_omega: Vec<[[f64; 2]; 2]>,
    pub omega_star: Vec<[[f64; 2]; 2]>,
}

impl From<&ConformalData> for TabulatedData {
    fn from(d: &ConformalData) -> Self {
        TabulatedData {
            grid: d.grid.into(),
            m: d.m.clone(),
            omega: d.omega.clone(),
            big_omega: d.big_omega.clone(),
            omega_star: d.omega_star.clone(),
        }
    }
}

impl TabulatedData {
    pub fn into_data(self) -> Result<ConformalData> {
        let grid = self.grid.to_grid()?;
        Ok(ConformalData::tabulated(grid, self.m, self.omega, self.big_omega, self.omega_star)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|source| CliError::Json { path: path.into(), source })?;
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
    }
}
