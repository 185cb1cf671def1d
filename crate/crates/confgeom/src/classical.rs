//! Classical surface geometry in (S³, λ²g₀).
//!
//! Conventions: the curvature tensor is R(a,b,c,d) with sectional curvature
//! R(X,Y,X,Y)/|X∧Y|², so the round sphere has R_abcd = g_ac g_bd − g_ad g_bc.
//! Index 3 refers to the unit normal N = n/λ̂ of the surface in λ²g₀.

use alloc::sync::Arc;

use crate::jets::{self, dot, ConformalFactor, Jet, Layout, SurfaceChart};
use crate::{Error, Result};

/// Fundamental forms of a surface in the round S³.
#[derive(Debug, Clone)]
pub struct ClassicalJet {
    /// x̂ (immersion order J)
    pub x: [Jet; 4],
    /// x̂_{u¹}, x̂_{u²}
    pub xu: [[Jet; 4]; 2],
    /// unit normal in S³, det(x̂, x̂_{u¹}, x̂_{u²}, n) < 0
    pub n: [Jet; 4],
    /// conformal factor E of I = E|du|²
    pub metric: Jet,
    /// second fundamental form [[e, f], [f, g]]
    pub ii: [[Jet; 2]; 2],
    pub h: Jet,
    pub k: Jet,
    /// traceless part of II
    pub ii0: [[Jet; 2]; 2],
}

/// Surface data in the metric λ²g₀.
#[derive(Debug, Clone)]
pub struct LambdaJet {
    /// λ̂ = λ∘x̂
    pub lam: Jet,
    /// λ_n = Dλ·n
    pub lam_n: Jet,
    /// E_λ = λ̂²E
    pub metric: Jet,
    pub h: Jet,
    /// II_λ = λ̂ II − λ_n I
    pub ii: [[Jet; 2]; 2],
    /// Ω_λ = II̊_λ = λ̂ II̊
    pub omega: [[Jet; 2]; 2],
    pub curv: Curvature,
}

/// Components of the curvature of λ²g₀ in the frame {x̂_{u¹}, x̂_{u²}, n/λ̂}.
#[derive(Debug, Clone)]
pub struct Curvature {
    pub r_i3j3: [[Jet; 2]; 2],
    /// Ricci components Ric(N, x̂_{u^i})
    pub r_3i: [Jet; 2],
    pub r_1212: Jet,
    pub ric_33: Jet,
    /// sectional curvature of the tangent plane, R_1212/E_λ²
    pub kt: Jet,
    /// E_λ⁻¹ Σ ∂_i R_3i
    pub div_ric: Jet,
}

/// Jet-valued normal direction c_l = −det(a, b, c, e_l). The sign makes the
/// flat tori r < 1/√2 have H > 0.
fn cross4(a: &[Jet; 4], b: &[Jet; 4], c: &[Jet; 4]) -> [Jet; 4] {
    let det3 = |cols: [usize; 3]| {
        let m = |r: usize, k: usize| match r {
            0 => &a[cols[k]],
            1 => &b[cols[k]],
            _ => &c[cols[k]],
        };
        m(0, 0) * &(m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * &(m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * &(m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    let others = |l: usize| -> [usize; 3] {
        let mut o = [0; 3];
        let mut k = 0;
        for i in 0..4 {
            if i != l {
                o[k] = i;
                k += 1;
            }
        }
        o
    };
    core::array::from_fn(|l| {
        let s = if (3 + l) % 2 == 0 { -1.0 } else { 1.0 };
        det3(others(l)).scale(s)
    })
}

/// Classical invariants from immersion jets of order `order + 2`.
pub fn classical_geometry(
    chart: &SurfaceChart,
    layout: &Arc<Layout>,
    u: [f64; 2],
    order: usize,
    j_max: usize,
) -> Result<ClassicalJet> {
    let x = chart.immersion_jet(layout, u, order + 2, j_max)?;
    classical_from_immersion(x)
}

/// Classical invariants from given immersion jets (order ≥ 2).
pub fn classical_from_immersion(x: [Jet; 4]) -> Result<ClassicalJet> {
    let xu = [jets::deriv_vec(&x, 0), jets::deriv_vec(&x, 1)];
    let metric = dot(&xu[0], &xu[0]);
    if !(metric.value() > 1e-12) {
        return Err(Error::DegenerateImmersion(metric.value()));
    }
    let c = cross4(&x, &xu[0], &xu[1]);
    let inv_norm = dot(&c, &c).powf(-0.5)?;
    let n: [Jet; 4] = core::array::from_fn(|i| &c[i] * &inv_norm);
    let xuu = |i: usize, j: usize| jets::deriv_vec(&xu[i], j);
    let e = dot(&xuu(0, 0), &n);
    let f = dot(&xuu(0, 1), &n);
    let g = dot(&xuu(1, 1), &n);
    let inv_e = metric.recip()?;
    let h = (&e + &g) * &inv_e * 0.5;
    let k = (&e * &g - &f * &f) * &inv_e.sq() + 1.0;
    let p = (&e - &g) * 0.5;
    let ii0 = [[p.clone(), f.clone()], [f.clone(), -&p]];
    Ok(ClassicalJet { x, xu, n, metric, ii: [[e, f.clone()], [f, g]], h, k, ii0 })
}

/// λ̂ and λ_n along the surface.
pub fn lambda_jet(factor: &ConformalFactor, cj: &ClassicalJet) -> Result<(Jet, Jet)> {
    let lam = factor.value_jet(&cj.x);
    if !(lam.value() > 0.0) {
        return Err(Error::NonPositiveFactor(lam.value()));
    }
    let grad = factor.gradient_jet(&cj.x);
    let lam_n = dot(&grad, &cj.n);
    Ok((lam, lam_n))
}

/// E_λ, H_λ, II_λ and Ω_λ from the round data and λ̂, λ_n.
#[derive(Debug, Clone)]
pub struct ConformalChange {
    pub metric: Jet,
    pub h: Jet,
    pub ii: [[Jet; 2]; 2],
    pub omega: [[Jet; 2]; 2],
}

pub fn conformal_change(cj: &ClassicalJet, lam: &Jet, lam_n: &Jet) -> Result<ConformalChange> {
    if !(lam.value() > 0.0) {
        return Err(Error::NonPositiveFactor(lam.value()));
    }
    let metric = lam.sq() * &cj.metric;
    let inv_lam = lam.recip()?;
    let h = (&cj.h - lam_n * &inv_lam) * &inv_lam;
    let ii = core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let mut v = lam * &cj.ii[i][j];
            if i == j {
                v -= lam_n * &cj.metric;
            }
            v
        })
    });
    let omega = core::array::from_fn(|i| core::array::from_fn(|j| lam * &cj.ii0[i][j]));
    Ok(ConformalChange { metric, h, ii, omega })
}

/// Curvature components of λ²g₀ along the surface.
///
/// For ĝ = e^{2φ}g on the round sphere, R̂ = e^{2φ}(R − T ⊙ g) with
/// T = Hess φ − dφ⊗dφ + ½|dφ|²g, evaluated through the ambient
/// derivatives of Φ = log λ (the sphere Hessian picks up −(x·DΦ)g).
pub fn conformal_curvature(
    factor: &ConformalFactor,
    cj: &ClassicalJet,
    lam: &Jet,
    metric_lambda: &Jet,
) -> Result<Curvature> {
    let x = &cj.x;
    let inv_lam = lam.recip()?;
    let grad = factor.gradient_jet(x);
    let hess = factor.hessian_jet(x);
    let dphi: [Jet; 4] = core::array::from_fn(|i| &grad[i] * &inv_lam);
    let x_dphi = dot(x, &dphi);
    let tang: [Jet; 4] = core::array::from_fn(|i| &dphi[i] - &(&x_dphi * &x[i]));
    let half_sq = dot(&tang, &tang) * 0.5;
    let tmat: [[Jet; 4]; 4] = core::array::from_fn(|a| {
        core::array::from_fn(|b| {
            // D²Φ = D²λ/λ − DΦ DΦᵀ, then the −dφ⊗dφ of T doubles it
            let mut t = &hess[a][b] * &inv_lam - (&dphi[a] * &dphi[b]).scale(2.0);
            if a == b {
                t += &half_sq - &x_dphi;
            }
            t
        })
    });
    let tform = |p: &[Jet; 4], q: &[Jet; 4]| {
        let tq: [Jet; 4] = core::array::from_fn(|a| dot(&tmat[a], q));
        dot(p, &tq)
    };
    let l2 = lam.sq();
    let rm = |a: &[Jet; 4], b: &[Jet; 4], c: &[Jet; 4], d: &[Jet; 4]| {
        let (ac, bd, ad, bc) = (dot(a, c), dot(b, d), dot(a, d), dot(b, c));
        let round = &ac * &bd - &ad * &bc;
        let kn = &tform(a, c) * &bd + &tform(b, d) * &ac - &tform(a, d) * &bc - &tform(b, c) * &ad;
        &l2 * &(round - kn)
    };
    let nn: [Jet; 4] = core::array::from_fn(|i| &cj.n[i] * &inv_lam);
    let xs = &cj.xu;
    let inv_e = metric_lambda.recip()?;
    let r_i3j3 = core::array::from_fn(|i| core::array::from_fn(|j| rm(&xs[i], &nn, &xs[j], &nn)));
    let r_3i: [Jet; 2] =
        core::array::from_fn(|i| (rm(&xs[0], &nn, &xs[0], &xs[i]) + rm(&xs[1], &nn, &xs[1], &xs[i])) * &inv_e);
    let r_1212 = rm(&xs[0], &xs[1], &xs[0], &xs[1]);
    let ric_33 = (rm(&xs[0], &nn, &xs[0], &nn) + rm(&xs[1], &nn, &xs[1], &nn)) * &inv_e;
    let kt = &r_1212 * &inv_e.sq();
    let div_ric =
        if r_3i[0].order() >= 1 { (r_3i[0].deriv(0) + r_3i[1].deriv(1)) * &inv_e } else { r_3i[0].zero_like() };
    Ok(Curvature { r_i3j3, r_3i, r_1212, ric_33, kt, div_ric })
}

/// Full λ-geometry at a point.
pub fn lambda_geometry(factor: &ConformalFactor, cj: &ClassicalJet) -> Result<LambdaJet> {
    let (lam, lam_n) = lambda_jet(factor, cj)?;
    let ConformalChange { metric, h, ii, omega } = conformal_change(cj, &lam, &lam_n)?;
    let curv = conformal_curvature(factor, cj, &lam, &metric)?;
    Ok(LambdaJet { lam, lam_n, metric, h, ii, omega, curv })
}

/// Christoffel symbols Γ^p_{ij} of E|du|², indexed `[p][i][j]`.
pub fn christoffel(e: &Jet) -> [[[Jet; 2]; 2]; 2] {
    let de = [e.deriv(0), e.deriv(1)];
    let inv = e.truncate(de[0].order()).recip().expect("positive metric").scale(0.5);
    core::array::from_fn(|p| {
        core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                let mut acc = de[0].zero_like();
                if i == p {
                    acc += &de[j];
                }
                if j == p {
                    acc += &de[i];
                }
                if i == j {
                    acc -= &de[p];
                }
                acc * &inv
            })
        })
    })
}

/// Covariant derivative T_{ij,k} of a 2-tensor w.r.t. E|du|², indexed `[i][j][k]`.
pub fn cov_deriv2(t: &[[Jet; 2]; 2], e: &Jet) -> [[[Jet; 2]; 2]; 2] {
    let g = christoffel(e);
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            core::array::from_fn(|k| {
                let mut acc = t[i][j].deriv(k);
                for p in 0..2 {
                    acc -= &g[p][k][i] * &t[p][j];
                    acc -= &g[p][k][j] * &t[i][p];
                }
                acc
            })
        })
    })
}

/// Covariant derivative w_{i,k} of a 1-form, indexed `[i][k]`.
pub fn cov_deriv1(w: &[Jet; 2], e: &Jet) -> [[Jet; 2]; 2] {
    let g = christoffel(e);
    core::array::from_fn(|i| {
        core::array::from_fn(|k| {
            let mut acc = w[i].deriv(k);
            for p in 0..2 {
                acc -= &g[p][k][i] * &w[p];
            }
            acc
        })
    })
}

/// R_{3ijk} assembled from the Ricci components (dimension 3).
pub fn r_3ijk(curv: &Curvature, e: &Jet, i: usize, j: usize, k: usize) -> Jet {
    let mut acc = curv.r_3i[0].zero_like();
    if i == j {
        acc += &curv.r_3i[k] * e;
    }
    if i == k {
        acc -= &curv.r_3i[j] * e;
    }
    acc
}

/// Residual of the Codazzi equation of the surface in (S³, λ²g₀),
/// indexed `[i][j][k]`.
pub fn codazzi_residual_classical(lj: &LambdaJet) -> [[[Jet; 2]; 2]; 2] {
    let d = cov_deriv2(&lj.omega, &lj.metric);
    let dh = [lj.h.deriv(0), lj.h.deriv(1)];
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            core::array::from_fn(|k| {
                let mut r = &d[i][j][k] - &d[i][k][j] - r_3ijk(&lj.curv, &lj.metric, i, j, k);
                if i == k {
                    r -= &dh[j] * &lj.metric;
                }
                if i == j {
                    r += &dh[k] * &lj.metric;
                }
                r
            })
        })
    })
}

/// Intrinsic Gaussian curvature of E|du|²: −Δ₀ log E / (2E).
pub fn intrinsic_curvature(e: &Jet) -> Result<Jet> {
    let l = e.ln()?;
    let lap = l.deriv(0).deriv(0) + l.deriv(1).deriv(1);
    Ok(lap * &e.recip()? * -0.5)
}
