//! Run configuration. See `docs/config.md` for the schema.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use confgeom::integrability::Grid;
use confgeom::jets::{ConformalFactor, SurfaceChart};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::transform::parse_chain;

/// Immersion jet orders accepted in `jet_order`. The upper end goes past
/// the default so the order-5 invariants, which need eighth derivatives of
/// the immersion, can be requested.
pub const JET_ORDER_RANGE: (usize, usize) = (3, 8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    /// `clifford` or `flat_torus`
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
    /// Optional Möbius map applied to the chart, same syntax as `--seed-transform`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaKind {
    #[default]
    Round,
    Constant,
    Affine,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    #[serde(default)]
    pub kind: LambdaKind,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    /// Defaults to one period of the chart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_range: Option<[f64; 2]>,
    #[serde(default = "both")]
    pub periodic: [bool; 2],
}

fn both() -> [bool; 2] {
    [true, true]
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Where to export chart-derived conformal data in tabulated form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
}

fn default_jet_order() -> usize {
    confgeom::jets::DEFAULT_J_MAX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub lambda: LambdaSpec,
    pub grid: GridSpec,
    #[serde(default = "default_jet_order")]
    pub jet_order: usize,
    /// (α, ρ) pairs for the associate 4-surface.
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub invariants: Vec<String>,
    /// Per-identity tolerance overrides.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.grid.nu < 8 || self.grid.nv < 8 {
            return bad(format!("grid needs nu, nv >= 8, got {} x {}", self.grid.nu, self.grid.nv));
        }
        let (lo, hi) = JET_ORDER_RANGE;
        if !(lo..=hi).contains(&self.jet_order) {
            return bad(format!("jet_order must lie in [{lo}, {hi}], got {}", self.jet_order));
        }
        for (name, tol) in &self.tolerances {
            if !(*tol > 0.0) {
                return bad(format!("tolerance for '{name}' must be positive"));
            }
        }
        for &[alpha, rho] in &self.points {
            if !(alpha > 0.0) || !(rho >= 0.0) {
                return bad(format!("point ({alpha}, {rho}) needs alpha > 0 and rho >= 0"));
            }
        }
        for r in [self.grid.u_range, self.grid.v_range].into_iter().flatten() {
            if !(r[1] > r[0]) {
                return bad(format!("empty range [{}, {}]", r[0], r[1]));
            }
        }
        self.chart()?;
        self.factor()?;
        Ok(())
    }

    pub fn chart(&self) -> Result<SurfaceChart> {
        let base = SurfaceChart::from_name(&self.surface.kind, &self.surface.params)
            .map_err(|e| CliError::Config(format!("surface '{}': {e}", self.surface.kind)))?;
        Ok(match &self.surface.transform {
            Some(t) => SurfaceChart::mobius_image(base, parse_chain(t)?),
            None => base,
        })
    }

    pub fn factor(&self) -> Result<ConformalFactor> {
        let p = &self.lambda.params;
        let r = match self.lambda.kind {
            LambdaKind::Round => Ok(ConformalFactor::round()),
            LambdaKind::Constant => match p.as_slice() {
                [c] => ConformalFactor::constant(*c),
                _ => return Err(CliError::Config("constant lambda takes one parameter".into())),
            },
            LambdaKind::Affine => match p.as_slice() {
                [a, b @ ..] if b.len() == 4 => ConformalFactor::affine(*a, [b[0], b[1], b[2], b[3]]),
                _ => return Err(CliError::Config("affine lambda takes a and four components of b".into())),
            },
        };
        r.map_err(|e| CliError::Config(format!("lambda: {e}")))
    }

    pub fn lambda_name(&self) -> String {
        let p: Vec<String> = self.lambda.params.iter().map(|v| v.to_string()).collect();
        match self.lambda.kind {
            LambdaKind::Round => "round".into(),
            LambdaKind::Constant => format!("constant({})", p.join(", ")),
            LambdaKind::Affine => format!("affine({})", p.join(", ")),
        }
    }

    /// The parameter grid. A periodic direction excludes its closing point.
    pub fn grid(&self) -> Result<Grid> {
        let periods = self.chart()?.periods();
        let g = &self.grid;
        let range = |r: Option<[f64; 2]>, p: f64| r.unwrap_or([0.0, p]);
        let (ru, rv) = (range(g.u_range, periods[0]), range(g.v_range, periods[1]));
        let step = |r: [f64; 2], n: usize, periodic: bool| (r[1] - r[0]) / if periodic { n } else { n - 1 } as f64;
        let grid = Grid::new(
            g.nu,
            g.nv,
            [ru[0], rv[0]],
            [step(ru, g.nu, g.periodic[0]), step(rv, g.nv, g.periodic[1])],
            g.periodic,
        )?;
        Ok(grid)
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex_digest(&[text.as_bytes()])
    }
}

/// Hex SHA-256 over the concatenation of `parts`.
pub fn hex_digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
