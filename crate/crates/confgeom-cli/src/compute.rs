//! `compute`: classical and conformal scalars plus requested invariants on
//! every grid point.

use confgeom::ambient::{self, AMBIENT_INVARIANTS, SURFACE_INVARIANTS};
use confgeom::frame;
use serde::Serialize;

use crate::data::GridHeader;
use crate::error::{CliError, Result};
use crate::eval::{max_mean, ordered, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Surface,
    Ambient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantInfo {
    pub name: &'static str,
    pub order: u32,
    pub scope: Scope,
}

/// Every invariant name known to `compute`, sorted.
pub fn known_invariants() -> Vec<InvariantInfo> {
    let mut v: Vec<InvariantInfo> = SURFACE_INVARIANTS
        .iter()
        .map(|&(name, order)| InvariantInfo { name, order, scope: Scope::Surface })
        .chain(AMBIENT_INVARIANTS.iter().map(|&(name, order)| InvariantInfo { name, order, scope: Scope::Ambient }))
        .chain(std::iter::once(InvariantInfo { name: "dlap_htilde", order: 5, scope: Scope::Ambient }))
        .collect();
    v.sort_by(|a, b| a.name.cmp(b.name));
    v
}

/// Immersion jet order an invariant needs.
fn needed_order(info: &InvariantInfo) -> usize {
    match (info.scope, info.name) {
        (_, "dlap_willmore" | "dlap_htilde") => 8,
        (Scope::Surface, "norm_grad") => 5,
        (Scope::Surface, _) => 4,
        (Scope::Ambient, _) => 6,
    }
}

fn resolve(names: &[String]) -> Result<Vec<InvariantInfo>> {
    let known = known_invariants();
    let mut out: Vec<InvariantInfo> = Vec::new();
    for n in names {
        let info = known
            .iter()
            .find(|k| k.name == n)
            .ok_or_else(|| CliError::Config(format!("unknown invariant '{n}' (see `confgeom catalog`)")))?;
        if !out.contains(info) {
            out.push(info.clone());
        }
    }
    out.sort_by(|a, b| a.name.cmp(b.name));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantValue {
    pub name: &'static str,
    pub order: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbientRecord {
    pub alpha: f64,
    pub rho: f64,
    /// mean curvature and metric determinant at (α, ρ)
    pub htilde: f64,
    pub det_g: f64,
    /// ambient invariants on the ρ = 0 slice at this α
    pub invariants: Vec<InvariantValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub fingerprint: String,
    pub index: [usize; 2],
    pub u: [f64; 2],
    /// E of I = E|du|²
    pub e: f64,
    pub h: f64,
    pub k: f64,
    /// |II̊|² = Σ II̊_ij²/E²
    pub norm_ii0: f64,
    pub m: f64,
    pub willmore: f64,
    /// only defined for the round metric
    pub a: Option<f64>,
    pub invariants: Vec<InvariantValue>,
    pub ambient: Vec<AmbientRecord>,
    #[serde(skip)]
    residuals: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub identity: &'static str,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultSet {
    pub fingerprint: String,
    pub surface: String,
    pub lambda: String,
    pub grid: GridHeader,
    pub jet_order: usize,
    pub invariants: Vec<InvariantInfo>,
    pub records: Vec<PointRecord>,
    /// frame identity residuals over the grid
    pub summary: Vec<SummaryRow>,
}

const SUMMARY_NAMES: [&str; 4] = ["enveloping", "mobius_metric", "y_star", "y_dagger"];

pub fn compute(ctx: &Context) -> Result<ResultSet> {
    let cfg = ctx.config()?;
    let invariants = resolve(&cfg.invariants)?;
    let needs_ambient = invariants.iter().any(|i| i.scope == Scope::Ambient);
    let mut points = cfg.points.clone();
    if needs_ambient && points.is_empty() {
        points.push([1.0, 0.0]);
    }
    let order = invariants.iter().map(needed_order).fold(4, usize::max);
    if order > cfg.jet_order {
        let worst = invariants.iter().find(|i| needed_order(i) == order).map_or("frame", |i| i.name);
        return Err(CliError::Config(format!("'{worst}' needs jet_order >= {order}, config has {}", cfg.jet_order)));
    }
    let factor = ctx.factor;
    let sites: Vec<usize> = (0..ctx.grid.len()).collect();
    let records = ordered(&sites, |&k| {
        let (index, u) = ctx.site(k);
        let p = ctx.point(k, order, &factor)?;
        let c = &p.classical;
        let e = c.metric.value();
        let norm_ii0 = c.ii0.iter().flatten().map(|v| v.value() * v.value()).sum::<f64>() / (e * e);
        let f = &p.frame;
        let checks = frame::frame_checks(&p).map_err(CliError::at(index, u))?;
        let mut inv = Vec::new();
        for i in invariants.iter().filter(|i| i.scope == Scope::Surface) {
            let value = ambient::surface_invariant(&p, i.name).map_err(CliError::at(index, u))?;
            inv.push(InvariantValue { name: i.name, order: i.order, value });
        }
        let mut amb = Vec::new();
        for &[alpha, rho] in &points {
            let forms = ambient::ambient_forms(&p, alpha, rho).map_err(CliError::at(index, u))?;
            let mut values = Vec::new();
            if needs_ambient {
                let suite = ambient::invariant_suite(&p, alpha, 1.0).map_err(CliError::at(index, u))?;
                for i in invariants.iter().filter(|i| i.scope == Scope::Ambient) {
                    let r = suite.iter().find(|r| r.name == i.name).expect("suite covers every ambient name");
                    // htilde is identically zero at ρ = 0; report the direct trace
                    let value = if i.name == "htilde" { r.oracle.unwrap_or(r.value) } else { r.value };
                    values.push(InvariantValue { name: i.name, order: i.order, value });
                }
            }
            amb.push(AmbientRecord { alpha, rho, htilde: forms.htilde, det_g: forms.det_g, invariants: values });
        }
        Ok(PointRecord {
            fingerprint: ctx.fingerprint.clone(),
            index,
            u,
            e,
            h: c.h.value(),
            k: c.k.value(),
            norm_ii0,
            m: f.m.value(),
            willmore: f.willmore.value(),
            a: factor.is_round().then(|| frame::what_a(f.omega_sq.value(), f.h.value())),
            invariants: inv,
            ambient: amb,
            residuals: [checks.enveloping, checks.mobius_metric, checks.y_star, checks.y_dagger],
        })
    })?;
    let summary = SUMMARY_NAMES
        .iter()
        .enumerate()
        .map(|(n, &identity)| {
            let (max, mean) = max_mean(records.iter().map(|r| r.residuals[n]));
            SummaryRow { identity, max, mean }
        })
        .collect();
    Ok(ResultSet {
        fingerprint: ctx.fingerprint.clone(),
        surface: ctx.surface_name(),
        lambda: ctx.lambda_name(),
        grid: ctx.grid.into(),
        jet_order: cfg.jet_order,
        invariants,
        records,
        summary,
    })
}

/// One CSV row per grid point, columns in a fixed order.
pub fn write_csv<W: std::io::Write>(rs: &ResultSet, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["fingerprint", "i", "j", "u1", "u2", "E", "H", "K", "normII0", "m", "willmore", "a"]
        .map(String::from)
        .to_vec();
    let surface: Vec<&InvariantInfo> = rs.invariants.iter().filter(|i| i.scope == Scope::Surface).collect();
    let ambient: Vec<&InvariantInfo> = rs.invariants.iter().filter(|i| i.scope == Scope::Ambient).collect();
    header.extend(surface.iter().map(|i| format!("inv_{}", i.name)));
    let n_points = rs.records.first().map_or(0, |r| r.ambient.len());
    for k in 0..n_points {
        header.extend(["alpha", "rho", "htilde", "det_g"].iter().map(|h| format!("{h}_{k}")));
        header.extend(ambient.iter().map(|i| format!("inv_{}_{k}", i.name)));
    }
    out.write_record(&header)?;
    for r in &rs.records {
        let mut row = vec![
            r.fingerprint.clone(),
            r.index[0].to_string(),
            r.index[1].to_string(),
            r.u[0].to_string(),
            r.u[1].to_string(),
            r.e.to_string(),
            r.h.to_string(),
            r.k.to_string(),
            r.norm_ii0.to_string(),
            r.m.to_string(),
            r.willmore.to_string(),
            r.a.map(|v| v.to_string()).unwrap_or_default(),
        ];
        row.extend(r.invariants.iter().map(|v| v.value.to_string()));
        for a in &r.ambient {
            row.extend([a.alpha, a.rho, a.htilde, a.det_g].iter().map(|v| v.to_string()));
            row.extend(a.invariants.iter().map(|v| v.value.to_string()));
        }
        out.write_record(&row)?;
    }
    out.flush().map_err(|source| CliError::Io { path: "<output>".into(), source })?;
    Ok(())
}
