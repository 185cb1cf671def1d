//! `reconstruct`: integrate the frame equations from conformal data and
//! compare the result with its source.

use confgeom::integrability::ConformalData;
use confgeom::mink5::LorentzMap;
use confgeom::reconstruct::{self, FrameField, IntegrateOptions, InvariantField, Sweep};
use serde::Serialize;

use crate::data::{GridHeader, TabulatedData};
use crate::error::{CliError, Result};
use crate::eval::Context;

/// Jet limit for chart-derived data and exact seeds.
const CHART_J_MAX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub m: f64,
    pub norm_ii: f64,
    /// needs E, so only available against a chart
    pub willmore: Option<f64>,
}

impl Deviation {
    pub fn worst(&self) -> f64 {
        self.m.max(self.norm_ii).max(self.willmore.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub index: [usize; 2],
    pub u: [f64; 2],
    pub x: [f64; 4],
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub fingerprint: String,
    /// "chart" or "tabulated"
    pub source: &'static str,
    pub grid: GridHeader,
    pub gram_drift: f64,
    /// max difference between row-first and column-first sweeps
    pub path_difference: f64,
    pub deviation: Deviation,
    pub points: Vec<SurfacePoint>,
    #[serde(skip)]
    pub field: Option<FrameField>,
}

/// Conformal data for the run: `--data` if given, else sampled from the chart.
pub fn conformal_data(ctx: &Context) -> Result<ConformalData> {
    if let Some(d) = &ctx.data {
        return Ok(d.clone());
    }
    let d = ConformalData::from_chart(ctx.chart()?, &ctx.factor, ctx.grid, CHART_J_MAX)?;
    if let Some(path) = ctx.config.as_ref().and_then(|c| c.output.data.as_ref()) {
        TabulatedData::from(&d).write(path)?;
    }
    Ok(d)
}

fn reference(ctx: &Context, data: &ConformalData) -> Result<InvariantField> {
    match (&ctx.data, &ctx.chart) {
        (None, Some(chart)) => Ok(InvariantField::from_chart(chart, &ctx.factor, ctx.grid, CHART_J_MAX)?),
        _ => Ok(InvariantField {
            grid: data.grid,
            m: data.m.clone(),
            // |II̊_λ|²E_λ = ΣΩ²/E_λ = 2m
            norm_ii: data.m.iter().map(|m| 2.0 * m).collect(),
            willmore: Vec::new(),
        }),
    }
}

pub fn reconstruct(ctx: &Context) -> Result<Reconstruction> {
    reconstruct_with(ctx, ctx.seed_map.as_ref())
}

/// Reconstruction with an explicit seed transform in place of the context's.
pub fn reconstruct_with(ctx: &Context, seed_map: Option<&LorentzMap>) -> Result<Reconstruction> {
    let data = conformal_data(ctx)?;
    let from_chart = ctx.data.is_none();
    let mut seed = match (from_chart, &ctx.chart) {
        (true, Some(chart)) => reconstruct::exact_frame(chart, &ctx.factor, ctx.grid.point(0, 0), CHART_J_MAX)?,
        _ => reconstruct::canonical_seed(),
    };
    if let Some(l) = seed_map {
        seed = reconstruct::transform_frame(l, &seed);
    }
    let row = reconstruct::integrate_structure_equations(&data, &seed, IntegrateOptions::default())?;
    let opts = IntegrateOptions { sweep: Sweep::ColumnFirst, skip_precheck: true, ..Default::default() };
    let col = reconstruct::integrate_structure_equations(&data, &seed, opts)?;
    let rebuilt = InvariantField::from_frame(&row);
    let refs = reference(ctx, &data)?;
    let deviation = if refs.willmore.is_empty() {
        let dev = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        Deviation { m: dev(&refs.m, &rebuilt.m), norm_ii: dev(&refs.norm_ii, &rebuilt.norm_ii), willmore: None }
    } else {
        let r = reconstruct::compare_modulo_mobius(&refs, &rebuilt)?;
        Deviation { m: r.m, norm_ii: r.norm_ii, willmore: Some(r.willmore) }
    };
    let surface = reconstruct::extract_surface(&row)?;
    let points = surface
        .into_iter()
        .enumerate()
        .map(|(k, (x, lambda))| {
            let (index, u) = ctx.site(k);
            SurfacePoint { index, u, x, lambda }
        })
        .collect();
    Ok(Reconstruction {
        fingerprint: ctx.fingerprint.clone(),
        source: if from_chart { "chart" } else { "tabulated" },
        grid: ctx.grid.into(),
        gram_drift: row.max_gram_drift(),
        path_difference: row.max_difference(&col),
        deviation,
        points,
        field: Some(row),
    })
}

pub fn write_csv<W: std::io::Write>(r: &Reconstruction, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["fingerprint", "i", "j", "u1", "u2", "x1", "x2", "x3", "x4", "lambda"])?;
    for p in &r.points {
        let mut row = vec![r.fingerprint.clone(), p.index[0].to_string(), p.index[1].to_string()];
        row.extend(p.u.iter().chain(&p.x).chain([&p.lambda]).map(|v| v.to_string()));
        out.write_record(&row)?;
    }
    out.flush().map_err(|source| CliError::Io { path: "<output>".into(), source })?;
    Ok(())
}
