//! `check`: named suites of identities, each reported with its residual
//! and tolerance.

use confgeom::ambient;
use confgeom::frame::{self, PointEval};
use confgeom::integrability::RESIDUAL_NAMES;
use confgeom::jets::ConformalFactor;
use confgeom::linalg;
use confgeom::mink5::LorentzMap;
use confgeom::reconstruct::MAX_RESIDUAL;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::eval::{ordered, Context};
use crate::recon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Frame,
    Integrability,
    #[value(name = "appendixA")]
    AppendixA,
    #[value(name = "appendixB")]
    AppendixB,
    ConformalScaling,
    Equivariance,
    Willmore,
    Reconstruction,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Frame => "frame",
            Suite::Integrability => "integrability",
            Suite::AppendixA => "appendixA",
            Suite::AppendixB => "appendixB",
            Suite::ConformalScaling => "conformal-scaling",
            Suite::Equivariance => "equivariance",
            Suite::Willmore => "willmore",
            Suite::Reconstruction => "reconstruction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub identity: String,
    /// the relation being tested, in words
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// informational rows do not affect the verdict
    pub counted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub fingerprint: String,
    pub suite: &'static str,
    pub surface: String,
    pub lambda: String,
    pub rows: Vec<CheckRow>,
    pub failed: usize,
    pub passed: bool,
}

struct Rows<'a> {
    ctx: &'a Context,
    rows: Vec<CheckRow>,
}

impl Rows<'_> {
    fn push(&mut self, identity: &str, anchor: &str, residual: f64, default_tol: f64, counted: bool) {
        let tolerance = self.ctx.tolerance(identity, default_tol);
        self.rows.push(CheckRow {
            identity: identity.into(),
            anchor: anchor.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            counted,
        });
    }

    fn add(&mut self, identity: &str, anchor: &str, residual: f64, default_tol: f64) {
        self.push(identity, anchor, residual, default_tol, true);
    }

    fn info(&mut self, identity: &str, anchor: &str, residual: f64, default_tol: f64) {
        self.push(identity, anchor, residual, default_tol, false);
    }
}

fn worst<const N: usize>(rows: &[[f64; N]]) -> [f64; N] {
    let mut out = [0.0f64; N];
    for r in rows {
        for k in 0..N {
            // NaN propagates so a broken evaluation cannot pass
            out[k] = if r[k].is_nan() || out[k].is_nan() { f64::NAN } else { out[k].max(r[k].abs()) };
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn point_at(ctx: &Context, k: usize, order: usize) -> Result<PointEval> {
    ctx.point(k, order, &ctx.factor)
}

fn tagged(ctx: &Context, k: usize, source: confgeom::Error) -> CliError {
    let (index, u) = ctx.site(k);
    CliError::AtPoint { index, u, source }
}

pub fn run(ctx: &Context, suite: Suite) -> Result<CheckReport> {
    let mut rows = Rows { ctx, rows: Vec::new() };
    match suite {
        Suite::Frame => frame_suite(ctx, &mut rows)?,
        Suite::Integrability => integrability_suite(ctx, &mut rows)?,
        Suite::AppendixA => appendix_a_suite(ctx, &mut rows)?,
        Suite::AppendixB => appendix_b_suite(ctx, &mut rows)?,
        Suite::ConformalScaling => scaling_suite(ctx, &mut rows)?,
        Suite::Equivariance => equivariance_suite(ctx, &mut rows)?,
        Suite::Willmore => willmore_suite(ctx, &mut rows)?,
        Suite::Reconstruction => reconstruction_suite(ctx, &mut rows)?,
    }
    let failed = rows.rows.iter().filter(|r| r.counted && !r.pass).count();
    Ok(CheckReport {
        fingerprint: ctx.fingerprint.clone(),
        suite: suite.name(),
        surface: ctx.surface_name(),
        lambda: ctx.lambda_name(),
        rows: rows.rows,
        failed,
        passed: failed == 0,
    })
}

fn all_sites(ctx: &Context) -> Vec<usize> {
    (0..ctx.grid.len()).collect()
}

fn frame_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let per = ordered(&all_sites(ctx), |&k| {
        let p = point_at(ctx, k, 5)?;
        let c = frame::frame_checks(&p).map_err(|e| tagged(ctx, k, e))?;
        let g = p.frame.gram_residual().map_err(|e| tagged(ctx, k, e))?;
        Ok([
            c.enveloping,
            c.mobius_metric,
            c.y_star,
            c.y_dagger,
            g,
            c.expansion,
            c.laplace_xi,
            c.trace_star,
            c.omega_star,
            c.div_omega,
            c.laplace_y,
            c.omega_sq,
        ])
    })?;
    let w = worst(&per);
    let table: [(&str, &str, f64); 12] = [
        ("enveloping", "<xi, xi> = 1 and xi is orthogonal to y and dy", 1e-9),
        ("mobius_metric", "<dxi, dxi> = m |du|^2 with m = E |II0|^2 / 2", 1e-9),
        ("y_star", "y* is null, <y*, y> = -1, y* is orthogonal to xi and dxi", 1e-9),
        ("y_dagger", "y-dagger is null, <y-dagger, y> = -1, orthogonal to dy and the lifted normal", 1e-9),
        ("frame_gram", "frame rows (y, y*, dxi/sqrt m, xi) have the constant Gram matrix", 1e-9),
        ("structure_equations", "derivatives of the frame rows expand through the structure matrices", 1e-8),
        ("laplace_xi", "Laplacian of xi + (tr Omega*) y + 2 m xi = 0", 1e-8),
        ("trace_star", "tr Omega* = -E times the Willmore operator", 1e-8),
        ("omega_star", "closed form of Omega* equals -<dxi, dy*>", 1e-8),
        ("div_omega", "Div omega = H^2 + 2 Omega.Omega* / |Omega|^2 + K^T", 1e-8),
        ("laplace_y", "Laplacian of y = 2 E H n + 2 E y-dagger - E K^T y", 1e-8),
        ("omega_sq", "|omega|^2 = (1/m) sum (dH - R_3i)^2", 1e-8),
    ];
    for (k, (name, anchor, tol)) in table.iter().enumerate() {
        rows.add(name, anchor, w[k], *tol);
    }
    Ok(())
}

fn integrability_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let data = recon::conformal_data(ctx)?;
    let s = data.residual_summary()?;
    let tol = if ctx.data.is_some() { MAX_RESIDUAL } else { 1e-9 };
    let anchors = [
        "Codazzi equation of y, first component (Omega, omega, m)",
        "Codazzi equation of y, second component (Omega, omega, m)",
        "Codazzi equation of y*, first component (Omega*, omega, m)",
        "Codazzi equation of y*, second component (Omega*, omega, m)",
        "mixed Codazzi relation between Omega and Omega*",
        "Gauss equation of xi with curvature -(1/2m) Laplacian of log m",
    ];
    for k in 0..6 {
        rows.add(RESIDUAL_NAMES[k], anchors[k], s.max[k], tol);
    }
    rows.info(
        "codazzi_ystar_2_alt_u2",
        "second y* Codazzi equation with +(tr Omega* / 2|Omega|^2)(|Omega|^2)_{u2} in place of the u1 term",
        s.ystar_2_alt_u2,
        tol,
    );
    rows.info(
        "codazzi_ystar_2_alt_u1",
        "second y* Codazzi equation with the (|Omega|^2)_{u1} term of opposite sign",
        s.ystar_2_alt_u1,
        tol,
    );
    Ok(())
}

fn ambient_points(ctx: &Context, fallback: &[[f64; 2]]) -> Vec<[f64; 2]> {
    match &ctx.config {
        Some(c) if !c.points.is_empty() => c.points.clone(),
        _ => fallback.to_vec(),
    }
}

fn appendix_a_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let points = ambient_points(ctx, &[[1.0, 0.0], [2.0, 0.1]]);
    let per = ordered(&ctx.sample(8), |&k| {
        let tag = |e| tagged(ctx, k, e);
        let p = point_at(ctx, k, 8)?;
        let willmore = p.frame.willmore.value();
        let mut w = [0.0f64; 14];
        let mut bump = |i: usize, v: f64| w[i] = if v.is_nan() { f64::NAN } else { w[i].max(v.abs()) };
        for &[alpha, rho] in &points {
            let f = ambient::ambient_forms(&p, alpha, rho).map_err(tag)?;
            let dg = linalg::matmul(&linalg::matmul(&f.ginv_numeric, &f.d_rho_g), &f.ginv_numeric);
            for a in 0..4 {
                for b in 0..4 {
                    bump(0, f.ginv[a][b] - f.ginv_numeric[a][b]);
                    bump(2, f.d_rho_ginv[a][b] + dg[a][b]);
                }
            }
            bump(1, (f.det_g - f.det_g_formula) / f.det_g_formula.abs().max(1e-300));
            bump(4, rel(f.htilde, f.htilde_formula));
            for v in ambient::normal_check(&p, alpha, rho) {
                bump(5, v);
            }
            let gam = ambient::christoffels(&p, alpha, rho).map_err(tag)?;
            for c in 0..4 {
                for j in 0..4 {
                    let expect = if c == j && c > 0 { 1.0 / alpha } else { 0.0 };
                    bump(6, gam[c][0][j] - expect);
                }
            }
            // ρ = 0 slice at this α
            let f0 = ambient::ambient_forms(&p, alpha, 0.0).map_err(tag)?;
            let closed = ambient::der_inverse_closed(&p, alpha);
            let jet =
                [f0.d_rho_ginv[1][0], f0.d_rho_ginv[1][1], f0.d_rho_ginv[1][2], f0.d_rho_ginv[1][3], f0.d2_rho_grr];
            for i in 0..5 {
                bump(3, closed[i] - jet[i]);
            }
            let h = ambient::co_derivative(&p, alpha);
            let phi = ambient::divergences(&h, &f0.ginv);
            let expect = [0.0, willmore / alpha, 0.0, 0.0];
            for i in 0..4 {
                bump(7, phi[i] - expect[i]);
            }
            let surface = alpha.powi(-4) * ambient::norm_co_der_surface(&p);
            bump(8, rel(ambient::contract_co_derivative(&h, &f0.ginv), surface));
            let hj = ambient::co_derivative_jets(&p, alpha, 0.0).map_err(tag)?;
            bump(9, rel(ambient::contract_co_derivative(&hj, &f0.ginv), surface));
            let (l1, l2) = ambient::laplace_oracle(&p, alpha, 1.0).map_err(tag)?;
            bump(10, rel(l1, 2.0 * alpha.powi(-3) * willmore));
            let l2 = l2.unwrap_or(f64::NAN);
            bump(11, rel(l2, 8.0 * alpha.powi(-5) * ambient::double_laplace_bracket(&p)));
        }
        for t in [-0.5, 0.0, 0.5] {
            let (r, _) = ambient::ruled_surface_forms(&p, t).map_err(tag)?;
            bump(12, rel(r.det_first, r.det_formula));
            bump(13, rel(r.h_plus, r.h_plus_formula));
        }
        Ok(w)
    })?;
    let w = worst(&per);
    let table: [(&str, &str, f64); 14] = [
        ("inverse_metric", "block formula for the inverse metric of the associate 4-surface", 1e-9),
        ("metric_determinant", "det G = -(alpha^6 / m^2)(pr - q^2)^2", 1e-9),
        ("d_rho_inverse", "d_rho G^-1 = -G^-1 (d_rho G) G^-1", 1e-8),
        ("rho0_closed_forms", "closed forms of d_rho g^{rho i} and d_rho^2 g^{rho rho} at rho = 0", 1e-8),
        (
            "htilde_formula",
            "mean curvature of the associate surface is proportional to rho det(Omega) times the Willmore operator",
            1e-9,
        ),
        ("normal_field", "the normal of the associate surface is orthogonal to its tangent frame", 1e-9),
        ("christoffel_alpha", "Gamma^k_{alpha j} = delta^k_j / alpha", 1e-9),
        ("divergence", "divergence of the second fundamental form is (0, Willmore/alpha, 0, 0)", 1e-9),
        (
            "co_derivative_norm",
            "closed-form components of the co-derivative give alpha^-4 times the surface norm",
            1e-6,
        ),
        ("co_derivative_jets", "jet components of the co-derivative give alpha^-4 times the surface norm", 1e-6),
        ("laplace_htilde", "ambient Laplacian of the mean curvature is 2 alpha^-3 times the Willmore operator", 1e-6),
        (
            "double_laplace_htilde",
            "double Laplacian of the mean curvature matches the surface closed form times 8 alpha^-5",
            1e-5,
        ),
        ("ruled_first_form_det", "det of the ruled-surface first form is det^2(Q) / (4 m^2)", 1e-9),
        (
            "ruled_mean_curvature",
            "ruled-surface mean curvature is proportional to det(Omega) times the Willmore operator",
            1e-9,
        ),
    ];
    for (k, (name, anchor, tol)) in table.iter().enumerate() {
        rows.add(name, anchor, w[k], *tol);
    }
    Ok(())
}

fn appendix_b_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let per = ordered(&all_sites(ctx), |&k| {
        let p = point_at(ctx, k, 5)?;
        let b = frame::appendix_b(&p, &ctx.factor).map_err(|e| tagged(ctx, k, e))?;
        Ok([b.n_dagger, b.i_dagger_j[0], b.i_dagger_j[1], b.i_dagger_j[2], b.coord_covar, b.gauss])
    })?;
    let w = worst(&per);
    let table: [(&str, &str); 6] = [
        ("n_dagger", "<n, d y-dagger> = -R_3i"),
        ("dagger_offdiagonal", "off-diagonal pairing of y-dagger derivatives with the tangent frame and curvature"),
        ("dagger_diagonal", "diagonal pairing of y-dagger derivatives with the tangent frame and curvature"),
        ("dagger_normal", "normal-normal pairing of y-dagger with the curvature of the ambient metric"),
        ("ricci_divergence", "covariant and coordinate divergence of Ric(N, .) agree"),
        ("gauss", "intrinsic curvature = det II / E^2 + K^T"),
    ];
    for (k, (name, anchor)) in table.iter().enumerate() {
        rows.add(name, anchor, w[k], 1e-7);
    }
    Ok(())
}

fn scaling_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let chart = ctx.chart()?;
    let pts: Vec<[f64; 2]> = ctx.sample(12).into_iter().map(|k| ctx.grid.point_of(k)).collect();
    let names: Vec<(&str, u32)> = ambient::SURFACE_INVARIANTS.to_vec();
    // a constant factor gives nothing to fit, so fall back to a fixed affine one
    let factor = match ctx.factor {
        ConformalFactor::Constant(_) => ConformalFactor::affine(1.4, [0.3, -0.2, 0.25, 0.1])?,
        f => f,
    };
    let fits =
        ordered(&names, |&(name, _)| Ok(ambient::conformal_invariance_check(chart, &factor, name, &pts, 8, 8)?))?;
    for ((name, order), fit) in names.iter().zip(fits) {
        let anchor = format!("{name} scales like lambda^-{order} under a change of metric in the conformal class");
        let (ex, fx) = (format!("exponent_{name}"), format!("fit_{name}"));
        if fit.vacuous {
            // identically zero under both metrics: the law holds but fixes no exponent
            rows.info(&ex, &format!("{anchor} (vanishes at every sample)"), 0.0, 0.01);
            rows.info(&fx, "log-linear fit residual of the scaling law", 0.0, 1e-6);
            continue;
        }
        rows.add(&ex, &anchor, (fit.exponent - *order as f64).abs(), 0.01);
        rows.add(&fx, "log-linear fit residual of the scaling law", fit.residual, 1e-6);
    }
    Ok(())
}

fn default_maps() -> Vec<LorentzMap> {
    let b = LorentzMap::boost([0.6, 0.0, 0.8, 0.0], 0.5).expect("unit direction");
    let r = LorentzMap::rotation(1, 3, 0.7).expect("valid axes");
    let b2 = LorentzMap::boost([0.0, 0.6, 0.0, -0.8], 0.9).expect("unit direction");
    vec![b, r, b2.compose(&r)]
}

fn equivariance_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let chart = ctx.chart()?;
    let maps = ctx.seed_map.map_or_else(default_maps, |m| vec![m]);
    let sites = ctx.sample(8);
    let per = ordered(&sites, |&k| {
        let u = ctx.grid.point_of(k);
        let mut w = [0.0f64; 3];
        for m in &maps {
            let e = frame::equivariance(chart, m, u, 6).map_err(|e| tagged(ctx, k, e))?;
            w = [w[0].max(e.xi), w[1].max(e.y_star), w[2].max(e.x_star)];
        }
        Ok(w)
    })?;
    let w = worst(&per);
    rows.add("xi", "conformal Gauss map of the image is L xi", w[0], 1e-9);
    rows.add("y_star", "y* of the image is mu L y*", w[1], 1e-9);
    rows.add("x_star", "conformal transform of the image is the Moebius image of the transform", w[2], 1e-9);
    Ok(())
}

fn willmore_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let chart = ctx.chart()?;
    let mut points = ambient_points(ctx, &[[1.0, 0.1], [2.0, 0.05]]);
    points.retain(|p| p[1] > 0.0);
    if points.is_empty() {
        points.push([1.0, 0.1]);
    }
    let per = ordered(&ctx.sample(8), |&k| {
        let tag = |e| tagged(ctx, k, e);
        let p = point_at(ctx, k, 8)?;
        let f = &p.frame;
        let hxi = frame::xi_mean_curvature(f).map_err(tag)?;
        let y = frame::v5_values(&f.y);
        let c = f.metric.value() * f.willmore.value() / (2.0 * f.m.value());
        let xi_rel = (0..5).map(|i| (hxi[i] - c * y[i]).abs()).fold(0.0, f64::max);
        let xi_norm = hxi.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let (mut ht_rel, mut ht) = (0.0f64, 0.0f64);
        for &[alpha, rho] in &points {
            let a = ambient::ambient_forms(&p, alpha, rho).map_err(tag)?;
            ht_rel = ht_rel.max(rel(a.htilde, a.htilde_formula));
            ht = ht.max(a.htilde.abs());
        }
        let (mut hp_rel, mut hp) = (0.0f64, 0.0f64);
        for t in [-0.5, 0.0, 0.5] {
            let (r, _) = ambient::ruled_surface_forms(&p, t).map_err(tag)?;
            hp_rel = hp_rel.max(rel(r.h_plus, r.h_plus_formula));
            hp = hp.max(r.h_plus.abs());
        }
        let u = ctx.grid.point_of(k);
        let x = chart.point(u);
        let involution = match frame::double_transform(chart, u, 8) {
            Ok((_, xss)) => (0..4).map(|i| (xss[i] - x[i]).abs()).fold(0.0, f64::max),
            Err(_) => f64::NAN,
        };
        Ok([xi_rel, ht_rel, hp_rel, f.willmore.value(), xi_norm, ht, hp, involution])
    })?;
    let w = worst(&per);
    rows.add("xi_relation", "mean curvature vector of xi = (E Willmore / 2m) y", w[0], 1e-9);
    rows.add(
        "htilde_relation",
        "associate-surface mean curvature = rho det(Omega) Willmore / (alpha det(P))",
        w[1],
        1e-9,
    );
    rows.add(
        "h_plus_relation",
        "ruled-surface mean curvature is the closed form in det(Omega) and the Willmore operator",
        w[2],
        1e-9,
    );
    let tol = ctx.tolerance("willmore_operator", 1e-8);
    let willmore = w[3] <= tol;
    let mut vanish = |name: &str, anchor: &str, v: f64, tol: f64| {
        if willmore {
            rows.add(name, anchor, v, tol)
        } else {
            rows.info(name, anchor, v, tol)
        }
    };
    vanish("willmore_operator", "the surface is Willmore", w[3], 1e-8);
    vanish("conformal_gauss_map_minimal", "Willmore iff the conformal Gauss map is minimal", w[4], 1e-8);
    vanish("associate_surface_minimal", "Willmore iff the associate 4-surface is minimal", w[5], 1e-8);
    vanish("ruled_surface_minimal", "Willmore iff the ruled 3-surface is minimal", w[6], 1e-8);
    vanish("transform_involution", "Willmore iff the conformal transform is an involution", w[7], 1e-9);
    Ok(())
}

fn reconstruction_suite(ctx: &Context, rows: &mut Rows) -> Result<()> {
    let r = recon::reconstruct(ctx)?;
    rows.add("gram_drift", "frame keeps its Gram matrix along the integration", r.gram_drift, 1e-6);
    rows.add("path_independence", "row-first and column-first sweeps agree", r.path_difference, 1e-5);
    rows.add("deviation_m", "reconstructed Moebius metric matches the source", r.deviation.m, 1e-5);
    rows.add("deviation_norm_ii", "reconstructed |II0|^2 E matches the source", r.deviation.norm_ii, 1e-5);
    if let Some(w) = r.deviation.willmore {
        rows.add("deviation_willmore", "reconstructed Willmore operator times E^3/2 matches the source", w, 1e-5);
    }
    if ctx.seed_map.is_some() {
        let plain = recon::reconstruct_with(ctx, None)?;
        let (a, b) = (r.deviation, plain.deviation);
        let diff = (a.m - b.m).abs().max((a.norm_ii - b.norm_ii).abs()).max(match (a.willmore, b.willmore) {
            (Some(x), Some(y)) => (x - y).abs(),
            _ => 0.0,
        });
        rows.add("seed_independence", "a Lorentz-moved seed yields the same invariant report", diff, 1e-9);
    }
    Ok(())
}
