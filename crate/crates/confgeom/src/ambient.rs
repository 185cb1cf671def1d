//! The associate 4-surface x̃ = αy_λ + αρy*_λ in R^{1,4}, the ruled
//! 3-surface x⁺ in H⁴, and the scalar invariants of x̃ on the light cone.
//!
//! Coordinates on x̃ are ordered (α, ρ, u¹, u²). Surface contractions use
//! the metric E_λ|du|²: |ω|² = Σω_i²/E_λ, |Ω|² = ΣΩ_ij²/E_λ²,
//! Div ω = E_λ⁻¹Σ∂_iω_i. Traces such as tr(ΩΩ*) and det Ω* are raw
//! coordinate-entry expressions.

use alloc::vec::Vec;

use crate::classical;
use crate::frame::{self, PointEval, V5};
use crate::jets::{ConformalFactor, Jet, Layout, SurfaceChart};
use crate::linalg;
use crate::{Error, Result};

type M2 = [[Jet; 2]; 2];
type M4 = [[Jet; 4]; 4];

fn sq(x: f64) -> f64 {
    x * x
}

fn det2(a: &M2) -> Jet {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

fn val4(a: &M4) -> [[f64; 4]; 4] {
    core::array::from_fn(|i| core::array::from_fn(|j| a[i][j].value()))
}

fn v2(a: &M2) -> [[f64; 2]; 2] {
    core::array::from_fn(|i| core::array::from_fn(|j| a[i][j].value()))
}

/// Surface data of a [`PointEval`] re-expressed in a 4-variable layout
/// (variables 2 and 3 are u¹, u²).
#[derive(Debug, Clone)]
pub struct LiftedData {
    pub m: Jet,
    pub metric: Jet,
    pub omega: [Jet; 2],
    pub big: M2,
    pub star: M2,
    pub willmore: Jet,
}

impl LiftedData {
    /// Lifts the jets of `p` into `layout`, requiring `u_order` derivatives
    /// in u from every field. Results are exact only up to that u-degree.
    pub fn new(p: &PointEval, layout: &alloc::sync::Arc<Layout>, u_order: usize) -> Result<Self> {
        let f = &p.frame;
        let available = Self::available_order(p);
        if available < u_order {
            return Err(Error::JetOrderTooHigh { requested: u_order, limit: available });
        }
        let top = layout.max_order();
        let e = |j: &Jet| j.embed_padded(layout, 2, top);
        let e2 = |a: &M2| -> M2 { core::array::from_fn(|i| core::array::from_fn(|j| e(&a[i][j]))) };
        Ok(LiftedData {
            m: e(&f.m),
            metric: e(&f.metric),
            omega: [e(&f.omega[0]), e(&f.omega[1])],
            big: e2(&f.big_omega),
            star: e2(&f.omega_star),
            willmore: e(&f.willmore),
        })
    }

    /// Smallest jet order among the fields used by the ambient forms.
    pub fn available_order(p: &PointEval) -> usize {
        let f = &p.frame;
        let mut o = f.m.order().min(f.metric.order()).min(f.willmore.order());
        for i in 0..2 {
            o = o.min(f.omega[i].order());
            for j in 0..2 {
                o = o.min(f.big_omega[i][j].order()).min(f.omega_star[i][j].order());
            }
        }
        o
    }
}

/// First and second fundamental forms of x̃ and related jets.
#[derive(Debug, Clone)]
pub struct AmbientJets {
    pub g: M4,
    /// inverse from the block formulas
    pub ginv: M4,
    pub hh: M4,
    /// √|det G| = α³|pr − q²|/m
    pub sqrt_g: Jet,
    /// H̃ from the closed form ρ detΩ 𝓗 / (α(pr − q²))
    pub htilde: Jet,
    /// pr − q² for P = Ω + ρΩ*
    pub det_p: Jet,
}

/// Builds G, the block-formula inverse, II and H̃ as jets in (α, ρ, u).
///
/// With P = Ω_λ + ρΩ*_λ, F* = P²/m, v = F*⁻¹ω and s = ωᵀv:
/// g^{αα} = s, g^{αρ} = −(1 + 2ρs)/α, g^{ρρ} = 2ρ(1 + 2ρs)/α²,
/// g^{αj} = v_j/α, g^{ρj} = −2ρv_j/α², g^{ij} = (F*⁻¹)_{ij}/α².
pub fn ambient_jets(d: &LiftedData, alpha: &Jet, rho: &Jet) -> Result<AmbientJets> {
    let p: M2 = core::array::from_fn(|i| core::array::from_fn(|j| &d.big[i][j] + &(rho * &d.star[i][j])));
    let det_p = det2(&p);
    if det_p.value().abs() < crate::frame::EPS_UMBILIC * 1e-4 {
        return Err(Error::DegenerateAmbient(det_p.value()));
    }
    let inv_det = det_p.recip()?;
    let pinv: M2 = [[&p[1][1] * &inv_det, -(&p[0][1] * &inv_det)], [-(&p[1][0] * &inv_det), &p[0][0] * &inv_det]];
    let m = &d.m;
    let fsinv: M2 = core::array::from_fn(|i| {
        core::array::from_fn(|j| m * &(&pinv[i][0] * &pinv[0][j] + &pinv[i][1] * &pinv[1][j]))
    });
    let w = &d.omega;
    let v: [Jet; 2] = core::array::from_fn(|i| &fsinv[i][0] * &w[0] + &fsinv[i][1] * &w[1]);
    let s = &w[0] * &v[0] + &w[1] * &v[1];
    let ia = alpha.recip()?;
    let ia2 = ia.sq();
    let two_rho_s = rho * &s * 2.0;
    let zero = alpha.zero_like();
    let mut ginv: M4 = core::array::from_fn(|_| core::array::from_fn(|_| zero.clone()));
    ginv[0][0] = s.clone();
    ginv[0][1] = -(&(&two_rho_s + 1.0) * &ia);
    ginv[1][0] = ginv[0][1].clone();
    ginv[1][1] = rho * &(&two_rho_s + 1.0) * &ia2 * 2.0;
    for j in 0..2 {
        ginv[0][2 + j] = &v[j] * &ia;
        ginv[2 + j][0] = ginv[0][2 + j].clone();
        ginv[1][2 + j] = -(rho * &v[j] * &ia2 * 2.0);
        ginv[2 + j][1] = ginv[1][2 + j].clone();
        for k in 0..2 {
            ginv[2 + j][2 + k] = &fsinv[j][k] * &ia2;
        }
    }
    let a2 = alpha.sq();
    let inv_m = m.recip()?;
    let mut g: M4 = core::array::from_fn(|_| core::array::from_fn(|_| zero.clone()));
    g[0][0] = rho.scale(-2.0);
    g[0][1] = -alpha;
    g[1][0] = -alpha;
    for j in 0..2 {
        g[1][2 + j] = &a2 * &w[j];
        g[2 + j][1] = g[1][2 + j].clone();
        for k in 0..2 {
            let pp = &p[j][0] * &p[0][k] + &p[j][1] * &p[1][k];
            g[2 + j][2 + k] = &a2 * &(&pp * &inv_m + &(rho * &w[j] * &w[k] * 2.0));
        }
    }
    let mut hh: M4 = core::array::from_fn(|_| core::array::from_fn(|_| zero.clone()));
    for j in 0..2 {
        for k in 0..2 {
            hh[2 + j][2 + k] = alpha * &p[j][k];
        }
    }
    let sign = if det_p.value() < 0.0 { -1.0 } else { 1.0 };
    let sqrt_g = &alpha.powi(3) * &det_p * &inv_m * sign;
    let htilde = rho * &det2(&d.big) * &d.willmore * &(alpha * &det_p).recip()?;
    Ok(AmbientJets { g, ginv, hh, sqrt_g, htilde, det_p })
}

/// Forms of x̃ at one (α, ρ).
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientForms {
    pub alpha: f64,
    pub rho: f64,
    pub g: [[f64; 4]; 4],
    pub ginv: [[f64; 4]; 4],
    /// Direct numerical inverse of `g`.
    pub ginv_numeric: [[f64; 4]; 4],
    pub det_g: f64,
    /// −(α⁶/m²)(pr − q²)²
    pub det_g_formula: f64,
    pub hh: [[f64; 4]; 4],
    /// tr(G⁻¹ II)
    pub htilde: f64,
    /// ρ detΩ 𝓗/(α(detΩ − ρ tr ΩΩ* + ρ² detΩ*))
    pub htilde_formula: f64,
    pub pqr: [[f64; 2]; 2],
    /// ∂_ρ G by jet differentiation
    pub d_rho_g: [[f64; 4]; 4],
    /// ∂_ρ G⁻¹ by jet differentiation of the block formulas
    pub d_rho_ginv: [[f64; 4]; 4],
    /// ∂²_ρ g^{ρρ} by jet differentiation
    pub d2_rho_grr: f64,
}

/// Evaluates [`AmbientForms`] from point data (immersion order ≥ 4).
pub fn ambient_forms(p: &PointEval, alpha: f64, rho: f64) -> Result<AmbientForms> {
    if !(alpha > 0.0) || rho < 0.0 {
        return Err(Error::BadParameter("need alpha > 0 and rho >= 0"));
    }
    let layout = Layout::new(4, 2);
    let d = LiftedData::new(p, &layout, 0)?;
    let a = Jet::variable(&layout, 2, 0, alpha);
    let r = Jet::variable(&layout, 2, 1, rho);
    let aj = ambient_jets(&d, &a, &r)?;
    let g = val4(&aj.g);
    let det_g = linalg::det_n(&g);
    let m = p.frame.m.value();
    let dp = aj.det_p.value();
    let det_g_formula = -libm::pow(alpha, 6.0) / (m * m) * dp * dp;
    if det_g.abs() < 1e-12 * libm::pow(alpha, 6.0) {
        return Err(Error::DegenerateAmbient(det_g));
    }
    let ginv_numeric = linalg::inverse_n(&g).ok_or(Error::DegenerateAmbient(det_g))?;
    let ginv = val4(&aj.ginv);
    let hh = val4(&aj.hh);
    let htilde = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| ginv[i][j] * hh[j][i]).sum();
    let f = &p.frame;
    let o = v2(&f.big_omega);
    let s = v2(&f.omega_star);
    let det_o = o[0][0] * o[1][1] - o[0][1] * o[1][0];
    let det_s = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let tr_os: f64 = (0..4).map(|k| o[k / 2][k % 2] * s[k % 2][k / 2]).sum();
    let htilde_formula = rho * det_o * f.willmore.value() / (alpha * (det_o - rho * tr_os + rho * rho * det_s));
    let pqr = core::array::from_fn(|i| core::array::from_fn(|j| o[i][j] + rho * s[i][j]));
    let d_rho_g = core::array::from_fn(|i| core::array::from_fn(|j| aj.g[i][j].d1(1)));
    let d_rho_ginv = core::array::from_fn(|i| core::array::from_fn(|j| aj.ginv[i][j].d1(1)));
    let d2_rho_grr = aj.ginv[1][1].partial(&[0, 2, 0, 0]);
    Ok(AmbientForms {
        alpha,
        rho,
        g,
        ginv,
        ginv_numeric,
        det_g,
        det_g_formula,
        hh,
        htilde,
        htilde_formula,
        pqr,
        d_rho_g,
        d_rho_ginv,
        d2_rho_grr,
    })
}

/// Closed-form ∂_ρ data at ρ = 0: (∂g^{ρα}, ∂g^{ρρ}, ∂g^{ρ1}, ∂g^{ρ2}, ∂²g^{ρρ}).
pub fn der_inverse_closed(p: &PointEval, alpha: f64) -> [f64; 5] {
    let f = &p.frame;
    let e = f.metric.value();
    let wsq = f.omega_sq.value();
    let a2 = alpha * alpha;
    [
        -2.0 * wsq / alpha,
        2.0 / a2,
        -2.0 * f.omega[0].value() / (a2 * e),
        -2.0 * f.omega[1].value() / (a2 * e),
        8.0 * wsq / a2,
    ]
}

/// Roots in ρ of pr − q² = detΩ − ρ tr(ΩΩ*) + ρ² detΩ*, ascending.
pub fn degeneracy_roots(p: &PointEval) -> Vec<f64> {
    let o = v2(&p.frame.big_omega);
    let s = v2(&p.frame.omega_star);
    let c = o[0][0] * o[1][1] - o[0][1] * o[1][0];
    let b = -(0..4).map(|k| o[k / 2][k % 2] * s[k % 2][k / 2]).sum::<f64>();
    let a = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let mut out = Vec::new();
    if a.abs() < 1e-300 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return out;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return out;
    }
    // stable quadratic roots
    let q = -0.5 * (b + libm::copysign(libm::sqrt(disc), b));
    let mut r = [q / a, if q != 0.0 { c / q } else { q / a }];
    r.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.extend_from_slice(&r);
    out
}

/// ⟨ξ, ∂x̃/∂s⟩ for s = α, ρ, u¹, u² (immersion order ≥ 3).
pub fn normal_check(p: &PointEval, alpha: f64, rho: f64) -> [f64; 4] {
    let f = &p.frame;
    let ip = |a: &V5, b: &V5| frame::minner(a, b).value();
    let xa: V5 = core::array::from_fn(|k| &f.y[k] + &(&f.ystar[k] * rho));
    let xr: V5 = core::array::from_fn(|k| &f.ystar[k] * alpha);
    let xu = |i: usize| -> V5 { core::array::from_fn(|k| (f.y[k].deriv(i) + f.ystar[k].deriv(i) * rho) * alpha) };
    [ip(&f.xi, &xa), ip(&f.xi, &xr), ip(&f.xi, &xu(0)), ip(&f.xi, &xu(1))]
}

/// Forms of the ruled 3-surface x⁺ = (e^t y + e^{−t} y*)/√2 in H⁴, in
/// coordinates (t, u¹, u²).
#[derive(Debug, Clone, PartialEq)]
pub struct RuledForms {
    pub t: f64,
    pub first: [[f64; 3]; 3],
    pub second: [[f64; 3]; 3],
    /// direct determinant of `first`
    pub det_first: f64,
    /// det²Q/(4m²) with Q = e^tΩ + e^{−t}Ω*
    pub det_formula: f64,
    /// tr(I⁺⁻¹ II⁺)
    pub h_plus: f64,
    /// e^{−3t}√2 detΩ 𝓗/(detΩ − e^{−2t}tr ΩΩ* + e^{−4t}detΩ*)
    pub h_plus_formula: f64,
    /// ⟨x⁺, x⁺⟩
    pub norm: f64,
}

/// Builds I⁺ and II⁺ from the frame (immersion order ≥ 4), both directly from
/// the vectors and from the closed forms.
pub fn ruled_surface_forms(p: &PointEval, t: f64) -> Result<(RuledForms, [[f64; 3]; 3])> {
    let f = &p.frame;
    let (et, emt) = (libm::exp(t), libm::exp(-t));
    let c = core::f64::consts::FRAC_1_SQRT_2;
    let xp: V5 = core::array::from_fn(|k| (&f.y[k] * et + &f.ystar[k] * emt) * c);
    let xt: V5 = core::array::from_fn(|k| (&f.y[k] * et - &f.ystar[k] * emt) * c);
    let xi = |i: usize| -> V5 { core::array::from_fn(|k| xp[k].deriv(i)) };
    let tang = [xt, xi(0), xi(1)];
    let ip = |a: &V5, b: &V5| frame::minner(a, b).value();
    let first_direct: [[f64; 3]; 3] = core::array::from_fn(|a| core::array::from_fn(|b| ip(&tang[a], &tang[b])));
    let m = f.m.value();
    let o = v2(&f.big_omega);
    let s = v2(&f.omega_star);
    let w = [f.omega[0].value(), f.omega[1].value()];
    let q: [[f64; 2]; 2] = core::array::from_fn(|i| core::array::from_fn(|j| et * o[i][j] + emt * s[i][j]));
    let mut first = [[0.0; 3]; 3];
    first[0][0] = 1.0;
    let mut second = [[0.0; 3]; 3];
    for i in 0..2 {
        first[0][1 + i] = -w[i];
        first[1 + i][0] = -w[i];
        for j in 0..2 {
            let qq =
                0.5 * ((0..2).map(|k| q[i][k] * q[k][j]).sum::<f64>() + (0..2).map(|k| q[j][k] * q[k][i]).sum::<f64>());
            first[1 + i][1 + j] = qq / (2.0 * m) + w[i] * w[j];
            second[1 + i][1 + j] = q[i][j] * c;
        }
    }
    let det_first = linalg::det_n(&first);
    let det_q = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    if det_q.abs() < 1e-14 {
        return Err(Error::DegenerateAmbient(det_q));
    }
    let inv = linalg::inverse_n(&first).ok_or(Error::DegenerateAmbient(det_first))?;
    let h_plus = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| inv[a][b] * second[b][a]).sum();
    let det_o = o[0][0] * o[1][1] - o[0][1] * o[1][0];
    let det_s = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let tr_os: f64 = (0..4).map(|k| o[k / 2][k % 2] * s[k % 2][k / 2]).sum();
    let e2 = libm::exp(-2.0 * t);
    let h_plus_formula = libm::exp(-3.0 * t) * core::f64::consts::SQRT_2 * det_o * f.willmore.value()
        / (det_o - e2 * tr_os + e2 * e2 * det_s);
    Ok((
        RuledForms {
            t,
            first,
            second,
            det_first,
            det_formula: det_q * det_q / (4.0 * m * m),
            h_plus,
            h_plus_formula,
            norm: ip(&xp, &xp),
        },
        first_direct,
    ))
}

/// Γ^k_{ρj} = (2E)⁻¹(∂_jω_k − ∂_kω_j + m⁻¹Σ_l(Ω_jl Ω*_kl + Ω_kl Ω*_jl)), as `[k][j]`.
pub fn gamma_rho(p: &PointEval) -> [[f64; 2]; 2] {
    let f = &p.frame;
    let e = f.metric.value();
    let m = f.m.value();
    let o = v2(&f.big_omega);
    let s = v2(&f.omega_star);
    core::array::from_fn(|k| {
        core::array::from_fn(|j| {
            let mix: f64 = (0..2).map(|l| o[j][l] * s[k][l] + o[k][l] * s[j][l]).sum();
            (f.omega[k].d1(j) - f.omega[j].d1(k) + mix / m) / (2.0 * e)
        })
    })
}

/// Covariant derivatives h̃_{AB,C} at ρ = 0 from the closed-form components,
/// indexed `[A][B][C]` over (α, ρ, u¹, u²).
pub fn co_derivative(p: &PointEval, alpha: f64) -> [[[f64; 4]; 4]; 4] {
    let f = &p.frame;
    let o = v2(&f.big_omega);
    let s = v2(&f.omega_star);
    let w = [f.omega[0].value(), f.omega[1].value()];
    let gr = gamma_rho(p);
    let cov = classical::cov_deriv2(&f.big_omega, &f.metric);
    let ow: [f64; 2] = core::array::from_fn(|j| (0..2).map(|l| o[l][j] * w[l]).sum());
    let mut h = [[[0.0; 4]; 4]; 4];
    for j in 0..2 {
        for k in 0..2 {
            h[0][2 + j][2 + k] = -o[j][k];
            h[2 + j][0][2 + k] = -o[j][k];
            let r: f64 = -alpha * (0..2).map(|i| o[i][j] * gr[i][k]).sum::<f64>();
            h[1][2 + j][2 + k] = r;
            h[2 + j][1][2 + k] = r;
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            h[2 + i][2 + j][0] = -o[i][j];
            h[2 + i][2 + j][1] = alpha * s[i][j]
                - alpha * (0..2).map(|l| o[l][j] * gr[l][i]).sum::<f64>()
                - alpha * (0..2).map(|l| o[i][l] * gr[l][j]).sum::<f64>();
            for k in 0..2 {
                let mut v = alpha * cov[i][j][k].value();
                if i == k {
                    v += alpha * ow[j];
                }
                if j == k {
                    v += alpha * ow[i];
                }
                h[2 + i][2 + j][2 + k] = v;
            }
        }
    }
    h
}

/// h̃_{AB,C} at (α, ρ) computed from jets of G and II (immersion order ≥ 5).
pub fn co_derivative_jets(p: &PointEval, alpha: f64, rho: f64) -> Result<[[[f64; 4]; 4]; 4]> {
    let layout = Layout::new(4, 1);
    let d = LiftedData::new(p, &layout, 1)?;
    let a = Jet::variable(&layout, 1, 0, alpha);
    let r = Jet::variable(&layout, 1, 1, rho);
    let aj = ambient_jets(&d, &a, &r)?;
    let g = val4(&aj.g);
    let gi = linalg::inverse_n(&g).ok_or(Error::DegenerateAmbient(linalg::det_n(&g)))?;
    let dg = |a: usize, b: usize, c: usize| aj.g[a][b].d1(c);
    // Γ^D_{AB}
    let gam: [[[f64; 4]; 4]; 4] = core::array::from_fn(|dd| {
        core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                0.5 * (0..4).map(|e| gi[dd][e] * (dg(e, a, b) + dg(e, b, a) - dg(a, b, e))).sum::<f64>()
            })
        })
    });
    let hh = val4(&aj.hh);
    Ok(core::array::from_fn(|a| {
        core::array::from_fn(|b| {
            core::array::from_fn(|c| {
                let mut v = aj.hh[a][b].d1(c);
                for dd in 0..4 {
                    v -= gam[dd][c][a] * hh[dd][b] + gam[dd][c][b] * hh[a][dd];
                }
                v
            })
        })
    }))
}

/// Ambient Christoffel symbols Γ^C_{AB} at (α, ρ) from jets of G.
pub fn christoffels(p: &PointEval, alpha: f64, rho: f64) -> Result<[[[f64; 4]; 4]; 4]> {
    let layout = Layout::new(4, 1);
    let d = LiftedData::new(p, &layout, 1)?;
    let a = Jet::variable(&layout, 1, 0, alpha);
    let r = Jet::variable(&layout, 1, 1, rho);
    let aj = ambient_jets(&d, &a, &r)?;
    let g = val4(&aj.g);
    let gi = linalg::inverse_n(&g).ok_or(Error::DegenerateAmbient(linalg::det_n(&g)))?;
    let dg = |a: usize, b: usize, c: usize| aj.g[a][b].d1(c);
    Ok(core::array::from_fn(|c| {
        core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                0.5 * (0..4).map(|e| gi[c][e] * (dg(e, a, b) + dg(e, b, a) - dg(a, b, e))).sum::<f64>()
            })
        })
    }))
}

/// φ_C = g^{AB} h̃_{CA,B}.
pub fn divergences(h: &[[[f64; 4]; 4]; 4], ginv: &[[f64; 4]; 4]) -> [f64; 4] {
    core::array::from_fn(|c| {
        let mut acc = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                acc += ginv[a][b] * h[c][a][b];
            }
        }
        acc
    })
}

/// G^{AP}G^{BQ}G^{CR} h_{AB,C} h_{PQ,R}.
pub fn contract_co_derivative(h: &[[[f64; 4]; 4]; 4], gi: &[[f64; 4]; 4]) -> f64 {
    // raise one index at a time
    let mut t1 = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                t1[p][b][c] = (0..4).map(|a| gi[p][a] * h[a][b][c]).sum();
            }
        }
    }
    let mut t2 = [[[0.0; 4]; 4]; 4];
    for p in 0..4 {
        for q in 0..4 {
            for c in 0..4 {
                t2[p][q][c] = (0..4).map(|b| gi[q][b] * t1[p][b][c]).sum();
            }
        }
    }
    let mut acc = 0.0;
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                let up: f64 = (0..4).map(|c| gi[r][c] * t2[p][q][c]).sum();
                acc += up * h[p][q][r];
            }
        }
    }
    acc
}

/// Surface form of α⁴|∇̃h̃|² at ρ = 0:
/// |∇Ω|² + 8|D|² + 3(H² + K^T)|Ω|² + 6Ω·∇D with D = dH_λ − R_3·.
/// Here |∇Ω|² = ΣΩ_{ij,k}²/E³, |D|² = ΣD_i²/E, Ω·∇D = ΣΩ_ij D_{i,j}/E².
/// Needs immersion order ≥ 5.
pub fn norm_co_der_surface(p: &PointEval) -> f64 {
    let lj = &p.lambda;
    let e = lj.metric.value();
    let cov = classical::cov_deriv2(&lj.omega, &lj.metric);
    let d: [Jet; 2] = core::array::from_fn(|i| lj.h.deriv(i) - &lj.curv.r_3i[i]);
    let dd = classical::cov_deriv1(&d, &lj.metric);
    let o = v2(&lj.omega);
    let mut grad = 0.0;
    let mut od = 0.0;
    let mut osq = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                grad += sq(cov[i][j][k].value());
            }
            od += o[i][j] * dd[i][j].value();
            osq += o[i][j] * o[i][j];
        }
    }
    let dsq = (sq(d[0].value()) + sq(d[1].value())) / e;
    let h = lj.h.value();
    grad / (e * e * e) + 8.0 * dsq + 3.0 * (h * h + lj.curv.kt.value()) * osq / (e * e) + 6.0 * od / (e * e)
}

/// The same quantity with |dH|² and Ω·Ω* written as metric contractions;
/// it agrees with the direct contraction only when R_3i = 0.
pub fn norm_co_der_contracted(p: &PointEval) -> f64 {
    let lj = &p.lambda;
    let f = &p.frame;
    let e = lj.metric.value();
    let cov = classical::cov_deriv2(&lj.omega, &lj.metric);
    let o = v2(&lj.omega);
    let s = v2(&f.omega_star);
    let w = [f.omega[0].value(), f.omega[1].value()];
    let mut grad = 0.0;
    let mut oos = 0.0;
    let mut rterm = 0.0;
    let mut cterm = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            oos += o[i][j] * s[i][j];
            for k in 0..2 {
                grad += sq(cov[i][j][k].value());
                rterm += o[i][j] * w[k] * classical::r_3ijk(&lj.curv, &lj.metric, i, j, k).value();
                cterm += o[i][j] * cov[k][i][j].value() * w[k];
            }
        }
    }
    let dh = (sq(lj.h.d1(0)) + sq(lj.h.d1(1))) / e;
    let e3 = e * e * e;
    grad / e3 + 8.0 * dh - 6.0 * oos / (e * e) - 2.0 * rterm / e3 - 6.0 * cterm / e3
}

/// The bracket of the double-Laplacian closed form:
/// Δ_λ𝓗 + 9|ω|²𝓗 − 3Div(ω)𝓗 − 6ω(∇𝓗) − (3 tr(ΩΩ*)/(2m²))|Ω|²𝓗.
/// Δ̃Δ̃H̃ = 8α⁻⁵ × this at ρ = 0. Needs immersion order ≥ 6.
pub fn double_laplace_bracket(p: &PointEval) -> f64 {
    let f = &p.frame;
    let e = f.metric.value();
    let m = f.m.value();
    let w = &f.willmore;
    let lap = 2.0 * (w.coeff(&[2, 0]) + w.coeff(&[0, 2])) / e;
    let wv = w.value();
    let wsq = f.omega_sq.value();
    let div = (f.omega[0].d1(0) + f.omega[1].d1(1)) / e;
    let wgrad = (f.omega[0].value() * w.d1(0) + f.omega[1].value() * w.d1(1)) / e;
    let o = v2(&f.big_omega);
    let s = v2(&f.omega_star);
    let tr_os: f64 = (0..4).map(|k| o[k / 2][k % 2] * s[k % 2][k / 2]).sum();
    let osq: f64 = (0..4).map(|k| sq(o[k / 2][k % 2])).sum::<f64>() / (e * e);
    lap + 9.0 * wsq * wv - 3.0 * div * wv - 6.0 * wgrad - 1.5 * tr_os / (m * m) * osq * wv
}

/// Variant with last term −6𝓗|II̊|⁻²II̊·Ω*, where
/// II̊·Ω* = ΣΩ_ij Ω*_ij/E² and |II̊|² = ΣΩ_ij²/E².
pub fn double_laplace_bracket_alt(p: &PointEval) -> f64 {
    let f = &p.frame;
    let e = f.metric.value();
    let m = f.m.value();
    let o = v2(&f.big_omega);
    let s = v2(&f.omega_star);
    let tr_os: f64 = (0..4).map(|k| o[k / 2][k % 2] * s[k % 2][k / 2]).sum();
    let osq: f64 = (0..4).map(|k| sq(o[k / 2][k % 2])).sum::<f64>() / (e * e);
    let wv = f.willmore.value();
    let last_direct = -1.5 * tr_os / (m * m) * osq * wv;
    let last_alt = -6.0 * wv * (tr_os / (e * e)) / osq;
    double_laplace_bracket(p) - last_direct + last_alt
}

fn lap(f: &Jet, aj: &AmbientJets, ginv_scale: f64, sg_scale: f64) -> Result<Jet> {
    let sg = aj.sqrt_g.scale(sg_scale);
    let grad: [Jet; 4] = core::array::from_fn(|b| f.deriv(b));
    let mut acc: Option<Jet> = None;
    for a in 0..4 {
        let mut flux = grad[0].zero_like();
        for (b, gb) in grad.iter().enumerate() {
            flux += &aj.ginv[a][b] * gb;
        }
        let term = (&sg * &flux).scale(ginv_scale).deriv(a);
        acc = Some(match acc {
            None => term,
            Some(x) => x + term,
        });
    }
    acc.expect("four terms").div(&sg)
}

/// Direct ambient Laplacians of H̃ at (α, 0, u):
/// Δ̃f = |g|^{-1/2}∂_A(|g|^{1/2} g^{AB}∂_B f), with H̃ and g^{AB} taken as
/// jets in (α, ρ, u¹, u²). `kappa` rescales the ambient metric by κ².
///
/// Returns (Δ̃H̃, Δ̃Δ̃H̃); the second needs immersion order ≥ 8 and is `None`
/// when the jets are too short.
pub fn laplace_oracle(p: &PointEval, alpha: f64, kappa: f64) -> Result<(f64, Option<f64>)> {
    let order = if LiftedData::available_order(p) >= 4 { 4 } else { 2 };
    let layout = Layout::new(4, order);
    let d = LiftedData::new(p, &layout, order)?;
    let a = Jet::variable(&layout, order, 0, alpha);
    let r = Jet::variable(&layout, order, 1, 0.0);
    let aj = ambient_jets(&d, &a, &r)?;
    let gs = 1.0 / (kappa * kappa);
    let ss = sq(kappa * kappa);
    let h = aj.htilde.scale(1.0 / kappa);
    let l1 = lap(&h, &aj, gs, ss)?;
    let l2 = if order >= 4 { Some(lap(&l1, &aj, gs, ss)?.value()) } else { None };
    Ok((l1.value(), l2))
}

/// One scalar invariant of x̃ at ρ = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRecord {
    pub name: &'static str,
    /// value from the surface-data closed form
    pub value: f64,
    /// independent evaluation, when one exists
    pub oracle: Option<f64>,
    /// homogeneity order k
    pub order: u32,
}

/// Names and orders of the ambient invariants emitted by [`invariant_suite`].
pub const AMBIENT_INVARIANTS: [(&str, u32); 7] = [
    ("htilde", 1),
    ("norm_h", 2),
    ("trace_h2", 2),
    ("trace_h3", 3),
    ("trace_h4", 4),
    ("lap_htilde", 3),
    ("norm_grad_h", 4),
];

/// The invariant suite at (α, 0) with the ambient metric scaled by κ².
/// `dlap_htilde` (order 5) is appended when `p` carries jets of order 8.
pub fn invariant_suite(p: &PointEval, alpha: f64, kappa: f64) -> Result<Vec<InvariantRecord>> {
    frame::check_umbilic(&p.frame.big_omega)?;
    let f = &p.frame;
    let forms = ambient_forms(p, alpha, 0.0)?;
    let k2 = kappa * kappa;
    let g: [[f64; 4]; 4] = core::array::from_fn(|i| core::array::from_fn(|j| forms.g[i][j] * k2));
    let gi = linalg::inverse_n(&g).ok_or(Error::DegenerateAmbient(linalg::det_n(&g)))?;
    let hh: [[f64; 4]; 4] = core::array::from_fn(|i| core::array::from_fn(|j| forms.hh[i][j] * kappa));
    let sh = linalg::matmul(&gi, &hh);
    let trace_pow = |k: usize| {
        let mut acc = sh;
        for _ in 1..k {
            acc = linalg::matmul(&acc, &sh);
        }
        (0..4).map(|i| acc[i][i]).sum::<f64>()
    };
    let e = f.metric.value();
    let o = v2(&f.big_omega);
    let oe: [[f64; 2]; 2] = core::array::from_fn(|i| core::array::from_fn(|j| o[i][j] / e));
    let tr_o = |k: usize| {
        let mut acc = oe;
        for _ in 1..k {
            acc = core::array::from_fn(|i| core::array::from_fn(|j| (0..2).map(|l| acc[i][l] * oe[l][j]).sum()));
        }
        acc[0][0] + acc[1][1]
    };
    let ak = |k: i32| libm::pow(alpha * kappa, -(k as f64));
    let mut out = Vec::new();
    let htilde: f64 = (0..4).map(|i| sh[i][i]).sum();
    out.push(InvariantRecord { name: "htilde", value: 0.0, oracle: Some(htilde), order: 1 });
    let norm_h: f64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| sh[i][j] * sh[j][i]).sum();
    out.push(InvariantRecord { name: "norm_h", value: ak(2) * tr_o(2), oracle: Some(norm_h), order: 2 });
    for (k, name) in [(2, "trace_h2"), (3, "trace_h3"), (4, "trace_h4")] {
        out.push(InvariantRecord { name, value: ak(k as i32) * tr_o(k), oracle: Some(trace_pow(k)), order: k as u32 });
    }
    let (l1, l2) = laplace_oracle(p, alpha, kappa)?;
    out.push(InvariantRecord {
        name: "lap_htilde",
        value: 2.0 * ak(3) * f.willmore.value(),
        oracle: Some(l1),
        order: 3,
    });
    let h: [[[f64; 4]; 4]; 4] = {
        let h0 = co_derivative(p, alpha);
        core::array::from_fn(|a| core::array::from_fn(|b| core::array::from_fn(|c| h0[a][b][c] * kappa)))
    };
    let direct = contract_co_derivative(&h, &gi);
    out.push(InvariantRecord {
        name: "norm_grad_h",
        value: ak(4) * norm_co_der_surface(p),
        oracle: Some(direct),
        order: 4,
    });
    if let Some(l2) = l2 {
        out.push(InvariantRecord {
            name: "dlap_htilde",
            value: 8.0 * ak(5) * double_laplace_bracket(p),
            oracle: Some(l2),
            order: 5,
        });
    }
    Ok(out)
}

/// Surface invariants tested for conformal scaling, with their orders.
pub const SURFACE_INVARIANTS: [(&str, u32); 4] =
    [("normII2", 2), ("willmore", 3), ("norm_grad", 4), ("dlap_willmore", 5)];

/// Evaluates a named surface invariant under the metric λ²g₀ of `p`.
pub fn surface_invariant(p: &PointEval, name: &str) -> Result<f64> {
    let f = &p.frame;
    match name {
        "normII2" => {
            let e = f.metric.value();
            let o = v2(&f.big_omega);
            Ok((0..4).map(|k| sq(o[k / 2][k % 2])).sum::<f64>() / (e * e))
        }
        "willmore" => Ok(f.willmore.value()),
        "norm_grad" => Ok(norm_co_der_surface(p)),
        "dlap_willmore" => Ok(8.0 * double_laplace_bracket(p)),
        _ => Err(Error::BadParameter("unknown invariant name")),
    }
}

/// Result of a least-squares exponent fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    /// max |log(I_λ/I₁) − (k·(−log λ̂) + c)|
    pub residual: f64,
    pub samples: usize,
    /// true when every sample was below [`ZERO_FLOOR`] under both metrics
    pub vacuous: bool,
}

/// Samples below this in absolute value under both metrics count as zero.
pub const ZERO_FLOOR: f64 = 1e-10;

/// Fits log(I_λ/I₁) = k(−log λ̂) + c over samples (λ̂, I_λ, I₁).
pub fn fit_exponent(samples: &[(f64, f64, f64)]) -> Result<ExponentFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(lam, il, i1) in samples {
        // both at round-off level: the sample carries no scaling information
        if il.abs() < ZERO_FLOOR && i1.abs() < ZERO_FLOOR {
            continue;
        }
        if !(lam > 0.0) || il * i1 <= 0.0 {
            return Err(Error::BadParameter("invariant changes sign under rescaling"));
        }
        xs.push(-libm::log(lam));
        ys.push(libm::log(il / i1));
    }
    if xs.is_empty() {
        return Ok(ExponentFit { exponent: 0.0, intercept: 0.0, residual: 0.0, samples: 0, vacuous: true });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx < 1e-24 {
        return Err(Error::BadParameter("conformal factor is constant over the samples"));
    }
    let k = sxy / sxx;
    let c = my - k * mx;
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - (k * x + c)).abs()).fold(0.0, f64::max);
    Ok(ExponentFit { exponent: k, intercept: c, residual, samples: xs.len(), vacuous: false })
}

/// Exponent fit of a named surface invariant under `factor` against λ ≡ 1
/// over the given parameter points, with jets of immersion order `order`.
pub fn conformal_invariance_check(
    chart: &SurfaceChart,
    factor: &ConformalFactor,
    name: &str,
    points: &[[f64; 2]],
    order: usize,
    j_max: usize,
) -> Result<ExponentFit> {
    let layout = Layout::new(2, order);
    let round = ConformalFactor::round();
    let mut samples = Vec::with_capacity(points.len());
    for &u in points {
        let pl = PointEval::new(chart, factor, &layout, u, order, j_max)?;
        let p1 = PointEval::new(chart, &round, &layout, u, order, j_max)?;
        samples.push((pl.frame.lam.value(), surface_invariant(&pl, name)?, surface_invariant(&p1, name)?));
    }
    fit_exponent(&samples)
}
