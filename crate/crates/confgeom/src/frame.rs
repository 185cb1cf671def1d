//! Conformal objects at a surface point: ξ, m, y†_λ, y*_λ, ω, Ω, Ω*, 𝓗_λ.
//!
//! Minkowski vectors are `[Jet; 5]` with the time component first.
//!
//! ω is taken as ω_i = −E_λ (Ω_λ⁻¹ (dH_λ − R_3·))_i. The extra R_3i term
//! vanishes for the round metric; without it y*_λ fails ⟨y*, ξ_{u^i}⟩ = 0
//! once λ is not constant.

use alloc::sync::Arc;

use crate::classical::{self, ClassicalJet, LambdaJet};
use crate::jets::{self, ConformalFactor, Jet, Layout, SurfaceChart};
use crate::{Error, Result};

/// Minkowski vector with jet components.
pub type V5 = [Jet; 5];

/// Umbilic threshold on |det Ω_λ|.
pub const EPS_UMBILIC: f64 = 1e-8;

/// Lorentz inner product of jet vectors.
pub fn minner(a: &V5, b: &V5) -> Jet {
    let mut acc = -(&a[0] * &b[0]);
    for i in 1..5 {
        acc += &a[i] * &b[i];
    }
    acc
}

/// (c, v) as a Minkowski vector.
pub fn lift(c: Jet, v: &[Jet; 4]) -> V5 {
    [c, v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
}

pub fn v5_values(v: &V5) -> [f64; 5] {
    jets::values(v)
}

/// The conformal frame and derived tensors at a point.
#[derive(Debug, Clone)]
pub struct FrameState {
    pub y: V5,
    pub ydag: V5,
    pub ystar: V5,
    pub xi: V5,
    pub n_lam: V5,
    /// Möbius metric coefficient, m = ½ΣΩ_ij²/E_λ
    pub m: Jet,
    pub omega: [Jet; 2],
    /// |ω|² = Σω_i²/E_λ
    pub omega_sq: Jet,
    pub big_omega: [[Jet; 2]; 2],
    /// Ω*_λ from the closed form
    pub omega_star: [[Jet; 2]; 2],
    /// Ω*_λ = −⟨ξ_{u^i}, (y*_λ)_{u^j}⟩
    pub omega_star_def: [[Jet; 2]; 2],
    /// 𝓗_λ
    pub willmore: Jet,
    pub h: Jet,
    pub metric: Jet,
    pub lam: Jet,
}

/// All jets at one parameter point.
#[derive(Debug, Clone)]
pub struct PointEval {
    pub classical: ClassicalJet,
    pub lambda: LambdaJet,
    pub frame: FrameState,
}

impl PointEval {
    /// Evaluates the full pipeline from immersion jets of order `order`.
    pub fn new(
        chart: &SurfaceChart,
        factor: &ConformalFactor,
        layout: &Arc<Layout>,
        u: [f64; 2],
        order: usize,
        j_max: usize,
    ) -> Result<PointEval> {
        if order < 2 {
            return Err(Error::BadParameter("immersion order must be at least 2"));
        }
        let cj = classical::classical_geometry(chart, layout, u, order - 2, j_max)?;
        Self::from_classical(cj, factor)
    }

    pub fn from_classical(cj: ClassicalJet, factor: &ConformalFactor) -> Result<PointEval> {
        let lj = classical::lambda_geometry(factor, &cj)?;
        let fs = frame_state(&cj, &lj, factor)?;
        Ok(PointEval { classical: cj, lambda: lj, frame: fs })
    }
}

/// Checks |det Ω_λ| against the umbilic threshold.
pub fn check_umbilic(omega: &[[Jet; 2]; 2]) -> Result<()> {
    let d = omega[0][0].value() * omega[1][1].value() - omega[0][1].value() * omega[1][0].value();
    if d.abs() < EPS_UMBILIC {
        return Err(Error::Umbilic(d.abs()));
    }
    Ok(())
}

/// Conformal Gauss map ξ = H_λ y_λ + n⃗_λ and the vectors it is built from.
pub fn conformal_gauss_map(cj: &ClassicalJet, lj: &LambdaJet) -> Result<(V5, V5, V5)> {
    let y = lift(lj.lam.clone(), &core::array::from_fn(|i| &lj.lam * &cj.x[i]));
    // (log λ)_n (1, x̂) = (λ_n/λ̂²) y_λ
    let ratio = lj.lam_n.div(&lj.lam.sq())?;
    let zero = cj.n[0].zero_like();
    let nvec = lift(zero, &cj.n);
    let n_lam: V5 = core::array::from_fn(|i| &nvec[i] + &(&ratio * &y[i]));
    let xi: V5 = core::array::from_fn(|i| &(&lj.h * &y[i]) + &n_lam[i]);
    Ok((y, n_lam, xi))
}

/// m = ½ΣΩ_ij²/E_λ.
pub fn mobius_metric(lj: &LambdaJet) -> Result<Jet> {
    check_umbilic(&lj.omega)?;
    let o = &lj.omega;
    let s = o[0][0].sq() + o[0][1].sq() + o[1][0].sq() + o[1][1].sq();
    Ok(s * &lj.metric.recip()? * 0.5)
}

/// y†_λ = λ̂⁻¹(½|∇log λ|² y + y† + ∇log λ), y = (1, x̂), y† = ½(1, −x̂).
pub fn y_dagger(factor: &ConformalFactor, cj: &ClassicalJet, lam: &Jet) -> Result<V5> {
    y_dagger_at(factor, &cj.x, lam)
}

/// y†_λ as a function of a point of S³ (jet-valued `x`, λ̂ = λ(x)).
pub fn y_dagger_at(factor: &ConformalFactor, x: &[Jet; 4], lam: &Jet) -> Result<V5> {
    let inv = lam.recip()?;
    let grad = factor.gradient_jet(x);
    let d: [Jet; 4] = core::array::from_fn(|i| &grad[i] * &inv);
    let xd = jets::dot(x, &d);
    let g: [Jet; 4] = core::array::from_fn(|i| &d[i] - &(&xd * &x[i]));
    let half = jets::dot(&g, &g) * 0.5;
    Ok(core::array::from_fn(|k| {
        let v = if k == 0 {
            &half + 0.5
        } else {
            let i = k - 1;
            &half * &x[i] - &x[i] * 0.5 + &g[i]
        };
        v * &inv
    }))
}

/// ω_i = −E_λ (Ω_λ⁻¹(dH_λ − R_3·))_i and |ω|².
pub fn omega_one_form(lj: &LambdaJet) -> Result<([Jet; 2], Jet)> {
    check_umbilic(&lj.omega)?;
    let o = &lj.omega;
    let d: [Jet; 2] = core::array::from_fn(|i| lj.h.deriv(i) - &lj.curv.r_3i[i]);
    // Ω⁻¹ = Ω/(p² + q²) for traceless symmetric Ω
    let pq = o[0][0].sq() + o[0][1].sq();
    let c = (&lj.metric * &pq.recip()?).scale(-1.0);
    let w: [Jet; 2] = core::array::from_fn(|i| &c * &(&o[i][0] * &d[0] + &o[i][1] * &d[1]));
    let wsq = (w[0].sq() + w[1].sq()) * &lj.metric.recip()?;
    Ok((w, wsq))
}

/// 𝓗_λ = Δ_λH_λ + |Ω|²H_λ + Ω^{ij}R_{i3j3} − DivRic.
pub fn willmore_operator(lj: &LambdaJet) -> Result<Jet> {
    let inv = lj.metric.recip()?;
    let h = &lj.h;
    let lap = (h.deriv(0).deriv(0) + h.deriv(1).deriv(1)) * &inv;
    let o = &lj.omega;
    let inv2 = inv.sq();
    let osq = (o[0][0].sq() + o[0][1].sq() + o[1][0].sq() + o[1][1].sq()) * &inv2;
    let mut orr = &o[0][0] * &lj.curv.r_i3j3[0][0];
    orr += &o[0][1] * &lj.curv.r_i3j3[0][1];
    orr += &o[1][0] * &lj.curv.r_i3j3[1][0];
    orr += &o[1][1] * &lj.curv.r_i3j3[1][1];
    Ok(lap + &osq * h + orr * &inv2 - &lj.curv.div_ric)
}

/// y*_λ = ½(|ω|² + H²)y_λ + y†_λ + H n⃗_λ + Σ(ω_i/E_λ)(y_λ)_{u^i}.
pub fn y_star(y: &V5, ydag: &V5, n_lam: &V5, h: &Jet, w: &[Jet; 2], wsq: &Jet, metric: &Jet) -> Result<V5> {
    let inv = metric.recip()?;
    let a = (wsq + &h.sq()) * 0.5;
    let c: [Jet; 2] = core::array::from_fn(|i| &w[i] * &inv);
    let yu = [jets::deriv_vec(y, 0), jets::deriv_vec(y, 1)];
    Ok(core::array::from_fn(|k| &a * &y[k] + &ydag[k] + h * &n_lam[k] + &c[0] * &yu[0][k] + &c[1] * &yu[1][k]))
}

/// Ω*_λ in closed form from surface data:
///
/// Ω*_ij = −∂_ijH + ∂_jR_3i − Ω_ik R_{k3j3}/E + ½(Ric_33 − K^T)Ω_ij
///         − ½(|ω|² + H²)Ω_ij − Hmδ_ij + Γ^k_ij (∂_kH − R_3k)
///
/// where Γ are the Christoffel symbols of m|du|². All derivatives are
/// partial derivatives in the isothermal chart.
pub fn omega_star_closed(lj: &LambdaJet, m: &Jet, wsq: &Jet) -> Result<[[Jet; 2]; 2]> {
    let h = &lj.h;
    let o = &lj.omega;
    let c = &lj.curv;
    let inv_e = lj.metric.recip()?;
    let dh = [h.deriv(0), h.deriv(1)];
    let dm = [m.deriv(0), m.deriv(1)];
    let inv_2m = m.recip()?.scale(0.5);
    let half_gap = (&c.ric_33 - &c.kt) * 0.5;
    let half_norm = (wsq + &h.sq()) * 0.5;
    let hm = h * m;
    Ok(core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let mut v = -dh[i].deriv(j) + c.r_3i[i].deriv(j);
            v -= (&o[i][0] * &c.r_i3j3[0][j] + &o[i][1] * &c.r_i3j3[1][j]) * &inv_e;
            v += (&half_gap - &half_norm) * &o[i][j];
            if i == j {
                v -= &hm;
            }
            for k in 0..2 {
                let mut g = dm[0].zero_like();
                if j == k {
                    g += &dm[i];
                }
                if i == k {
                    g += &dm[j];
                }
                if i == j {
                    g -= &dm[k];
                }
                v += &g * &inv_2m * &(&dh[k] - &c.r_3i[k]);
            }
            v
        })
    }))
}

/// Builds the whole [`FrameState`].
pub fn frame_state(cj: &ClassicalJet, lj: &LambdaJet, factor: &ConformalFactor) -> Result<FrameState> {
    let (y, n_lam, xi) = conformal_gauss_map(cj, lj)?;
    let m = mobius_metric(lj)?;
    let ydag = y_dagger(factor, cj, &lj.lam)?;
    let (omega, omega_sq) = omega_one_form(lj)?;
    let ystar = y_star(&y, &ydag, &n_lam, &lj.h, &omega, &omega_sq, &lj.metric)?;
    let willmore = if lj.h.order() >= 2 { willmore_operator(lj)? } else { lj.h.zero_like() };
    let omega_star = if lj.h.order() >= 2 {
        omega_star_closed(lj, &m, &omega_sq)?
    } else {
        core::array::from_fn(|_| core::array::from_fn(|_| lj.h.zero_like()))
    };
    let omega_star_def = if ystar[0].order() >= 1 {
        let xu = [jets::deriv_vec(&xi, 0), jets::deriv_vec(&xi, 1)];
        let su = [jets::deriv_vec(&ystar, 0), jets::deriv_vec(&ystar, 1)];
        core::array::from_fn(|i| core::array::from_fn(|j| -minner(&xu[i], &su[j])))
    } else {
        core::array::from_fn(|_| core::array::from_fn(|_| lj.h.zero_like()))
    };
    Ok(FrameState {
        y,
        ydag,
        ystar,
        xi,
        n_lam,
        m,
        omega,
        omega_sq,
        big_omega: lj.omega.clone(),
        omega_star,
        omega_star_def,
        willmore,
        h: lj.h.clone(),
        metric: lj.metric.clone(),
        lam: lj.lam.clone(),
    })
}

/// Mean curvature vector of the ξ-surface in S^{1,3}, (Δ₀ξ + 2mξ)/(2m),
/// at the base point. Requires ξ to order 2.
pub fn xi_mean_curvature(fs: &FrameState) -> Result<[f64; 5]> {
    let lap: [f64; 5] = core::array::from_fn(|k| {
        let x = &fs.xi[k];
        2.0 * (x.coeff(&[2, 0]) + x.coeff(&[0, 2]))
    });
    let m = fs.m.value();
    let xi = v5_values(&fs.xi);
    Ok(core::array::from_fn(|k| (lap[k] + 2.0 * m * xi[k]) / (2.0 * m)))
}

/// Conformal transform x̂* from y* = μ*(1, x̂*).
pub fn conformal_transform(ystar: &[f64; 5]) -> Result<[f64; 4]> {
    if ystar[0] <= 1e-12 {
        return Err(Error::NonPositiveTime(ystar[0]));
    }
    Ok(core::array::from_fn(|i| ystar[i + 1] / ystar[0]))
}

/// Residuals of the Möbius equivariance laws at one point, round metric on
/// both surfaces: ξ' = Lξ, y*' = μLy* and x̂*' = φ(x̂*), where
/// L(1, x̂) = μ(1, φ(x̂)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivariance {
    pub xi: f64,
    pub y_star: f64,
    pub x_star: f64,
}

impl Equivariance {
    pub fn worst(&self) -> f64 {
        self.xi.max(self.y_star).max(self.x_star)
    }
}

/// Compares the frame of `base` mapped by `map` with the frame of the image chart.
pub fn equivariance(
    base: &SurfaceChart,
    map: &crate::mink5::LorentzMap,
    u: [f64; 2],
    j_max: usize,
) -> Result<Equivariance> {
    let layout = Layout::new(2, 4);
    let round = ConformalFactor::round();
    let p = PointEval::new(base, &round, &layout, u, 4, j_max)?;
    let image = SurfaceChart::mobius_image(base.clone(), *map);
    let q = PointEval::new(&image, &round, &layout, u, 4, j_max)?;
    let y = v5_values(&p.frame.y);
    let mu = map.apply_array(&y)[0];
    let lxi = map.apply_array(&v5_values(&p.frame.xi));
    let ls = map.apply_array(&v5_values(&p.frame.ystar));
    let qxi = v5_values(&q.frame.xi);
    let qs = v5_values(&q.frame.ystar);
    let xs = conformal_transform(&v5_values(&p.frame.ystar))?;
    let (phi_xs, _) = crate::mink5::mobius_action(map, xs)?;
    let qxs = conformal_transform(&qs)?;
    Ok(Equivariance {
        xi: max_abs((0..5).map(|k| qxi[k] - lxi[k])),
        y_star: max_abs((0..5).map(|k| qs[k] - mu * ls[k])),
        x_star: max_abs((0..4).map(|k| qxs[k] - phi_xs[k])),
    })
}

/// x̂* and x̂** at `u` for the round metric. x̂* is treated as a parametrized
/// surface through its jets, so the second transform is meaningful only when
/// u stays isothermal for x̂*, as on Willmore surfaces.
pub fn double_transform(chart: &SurfaceChart, u: [f64; 2], j_max: usize) -> Result<([f64; 4], [f64; 4])> {
    let order = j_max.min(8);
    let layout = Layout::new(2, order);
    let round = ConformalFactor::round();
    let p = PointEval::new(chart, &round, &layout, u, order, j_max)?;
    let ys = &p.frame.ystar;
    let inv = ys[0].recip()?;
    let xs: [Jet; 4] = core::array::from_fn(|k| &ys[k + 1] * &inv);
    let first = jets::values(&xs);
    let cj = classical::classical_from_immersion(xs)?;
    let q = PointEval::from_classical(cj, &round)?;
    let second = conformal_transform(&v5_values(&q.frame.ystar))?;
    Ok((first, second))
}

/// a = (|ω|² + H² − 1)/(|ω|² + H² + 1) for the round metric.
pub fn what_a(omega_sq: f64, h: f64) -> f64 {
    let s = omega_sq + h * h;
    (s - 1.0) / (s + 1.0)
}

fn sq(x: f64) -> f64 {
    x * x
}

fn max_abs(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(0.0, |a: f64, b| a.max(b.abs()))
}

impl FrameState {
    /// Frame rows (y_λ, y*_λ, m^{-1/2}ξ_{u¹}, m^{-1/2}ξ_{u²}, ξ).
    pub fn rows(&self) -> Result<[V5; 5]> {
        let inv = self.m.powf(-0.5)?;
        let xu = |i: usize| -> V5 { core::array::from_fn(|k| &self.xi[k].deriv(i) * &inv) };
        Ok([self.y.clone(), self.ystar.clone(), xu(0), xu(1), self.xi.clone()])
    }

    /// Structure-equation inputs at the base point.
    pub fn point_fields(&self) -> crate::integrability::PointFields {
        let v2 = |t: &[[Jet; 2]; 2]| -> [[f64; 2]; 2] {
            core::array::from_fn(|i| core::array::from_fn(|j| t[i][j].value()))
        };
        crate::integrability::PointFields {
            m: self.m.value(),
            dm: [self.m.d1(0), self.m.d1(1)],
            omega: [self.omega[0].value(), self.omega[1].value()],
            big_omega: v2(&self.big_omega),
            omega_star: v2(&self.omega_star),
        }
    }

    /// Gram matrix of the frame rows minus its expected constant value.
    pub fn gram_residual(&self) -> Result<f64> {
        let rows = self.rows()?;
        let g = crate::integrability::frame_gram();
        let mut worst: f64 = 0.0;
        for a in 0..5 {
            for b in 0..5 {
                worst = worst.max((minner(&rows[a], &rows[b]).value() - g[a][b]).abs());
            }
        }
        Ok(worst)
    }

    /// max |∂_i e_r − Σ_s A_i[r][s] e_s| over all rows and directions.
    pub fn expansion_residual(&self) -> Result<f64> {
        let rows = self.rows()?;
        let pf = self.point_fields();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            let a = crate::integrability::structure_matrix(&pf, i);
            for r in 0..5 {
                for k in 0..5 {
                    let lhs = rows[r][k].d1(i);
                    let rhs: f64 = (0..5).map(|s| a[r][s] * rows[s][k].value()).sum();
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Δ₀ξ + (tr Ω*)y_λ + 2mξ at the base point.
    pub fn laplace_xi_residual(&self) -> f64 {
        let tr = self.omega_star[0][0].value() + self.omega_star[1][1].value();
        let m = self.m.value();
        max_abs((0..5).map(|k| {
            let x = &self.xi[k];
            2.0 * (x.coeff(&[2, 0]) + x.coeff(&[0, 2])) + tr * self.y[k].value() + 2.0 * m * x.value()
        }))
    }

    /// tr Ω* + E_λ𝓗_λ.
    pub fn trace_star_residual(&self) -> f64 {
        self.omega_star[0][0].value() + self.omega_star[1][1].value() + self.metric.value() * self.willmore.value()
    }

    /// Ω* closed form against −⟨ξ_{u^i}, (y*_λ)_{u^j}⟩.
    pub fn omega_star_residual(&self) -> f64 {
        max_abs((0..4).map(|k| {
            let (i, j) = (k / 2, k % 2);
            self.omega_star[i][j].value() - self.omega_star_def[i][j].value()
        }))
    }
}

/// The remaining frame identities at one point, as absolute residuals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrameChecks {
    /// ⟨ξ,ξ⟩ − 1, ⟨ξ,y⟩, ⟨ξ,y_{u^i}⟩
    pub enveloping: f64,
    /// m − ⟨ξ_{u¹},ξ_{u¹}⟩, ⟨ξ_{u¹},ξ_{u²}⟩, m − ½E_λ|II̊_λ|²
    pub mobius_metric: f64,
    /// y* null, ⟨y*,y⟩ + 1, y* ⟂ ξ, ξ_{u^i}
    pub y_star: f64,
    /// y† null, ⟨y†,y⟩ + 1, y† ⟂ y_{u^i}, n⃗_λ
    pub y_dagger: f64,
    pub expansion: f64,
    pub laplace_xi: f64,
    pub trace_star: f64,
    pub omega_star: f64,
    /// Div ω − (H² + 2Ω·Ω*/ΣΩ² + K^T)
    pub div_omega: f64,
    /// Δ₀y_λ − (2E_λH_λn⃗_λ + 2E_λy†_λ − E_λK^T y_λ)
    pub laplace_y: f64,
    /// Σω_i²/E_λ − (1/m)Σ(∂_iH_λ − R_3i)²
    pub omega_sq: f64,
}

impl FrameChecks {
    pub fn frame_identities(&self) -> f64 {
        self.enveloping.max(self.mobius_metric).max(self.y_star).max(self.y_dagger)
    }
}

/// Evaluates every frame identity. Needs jets of immersion order ≥ 4.
pub fn frame_checks(p: &PointEval) -> Result<FrameChecks> {
    let f = &p.frame;
    let lj = &p.lambda;
    let xu = [jets::deriv_vec(&f.xi, 0), jets::deriv_vec(&f.xi, 1)];
    let yu = [jets::deriv_vec(&f.y, 0), jets::deriv_vec(&f.y, 1)];
    let ip = |a: &V5, b: &V5| minner(a, b).value();
    let enveloping = max_abs([ip(&f.xi, &f.xi) - 1.0, ip(&f.xi, &f.y), ip(&f.xi, &yu[0]), ip(&f.xi, &yu[1])]);
    let m = f.m.value();
    let e = f.metric.value();
    let o = &f.big_omega;
    let ii0_sq: f64 = (0..4).map(|k| sq(o[k / 2][k % 2].value())).sum::<f64>() / (e * e);
    let mobius_metric =
        max_abs([m - ip(&xu[0], &xu[0]), m - ip(&xu[1], &xu[1]), ip(&xu[0], &xu[1]), m - 0.5 * e * ii0_sq]);
    let y_star = max_abs([
        ip(&f.ystar, &f.ystar),
        ip(&f.ystar, &f.y) + 1.0,
        ip(&f.ystar, &f.xi),
        ip(&f.ystar, &xu[0]),
        ip(&f.ystar, &xu[1]),
    ]);
    let y_dagger = max_abs([
        ip(&f.ydag, &f.ydag),
        ip(&f.ydag, &f.y) + 1.0,
        ip(&f.ydag, &yu[0]),
        ip(&f.ydag, &yu[1]),
        ip(&f.ydag, &f.n_lam),
    ]);
    let h = f.h.value();
    let sum_os: f64 = (0..4).map(|k| o[k / 2][k % 2].value() * f.omega_star[k / 2][k % 2].value()).sum();
    let sum_oo: f64 = (0..4).map(|k| sq(o[k / 2][k % 2].value())).sum();
    let kt = lj.curv.kt.value();
    let div_w = (f.omega[0].d1(0) + f.omega[1].d1(1)) / e;
    let div_omega = div_w - (h * h + 2.0 * sum_os / sum_oo + kt);
    let laplace_y = max_abs((0..5).map(|k| {
        let y = &f.y[k];
        let lap = 2.0 * (y.coeff(&[2, 0]) + y.coeff(&[0, 2]));
        lap - (2.0 * e * h * f.n_lam[k].value() + 2.0 * e * f.ydag[k].value() - e * kt * y.value())
    }));
    let w_sq = f.omega_sq.value();
    let alt: f64 = (0..2).map(|i| sq(f.h.d1(i) - lj.curv.r_3i[i].value())).sum::<f64>() / m;
    Ok(FrameChecks {
        enveloping,
        mobius_metric,
        y_star,
        y_dagger,
        expansion: f.expansion_residual()?,
        laplace_xi: f.laplace_xi_residual(),
        trace_star: f.trace_star_residual(),
        omega_star: f.omega_star_residual(),
        div_omega,
        laplace_y,
        omega_sq: w_sq - alt,
    })
}

/// Residuals of the curvature relations between y_λ, y†_λ and the
/// curvature of λ²g₀ (u³ is arc length along the g_λ-unit normal).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AppendixB {
    /// ⟨n⃗_λ, (y†_λ)_{u^i}⟩ + R_3i
    pub n_dagger: f64,
    /// off-diagonal, diagonal and normal–normal relations
    pub i_dagger_j: [f64; 3],
    /// E⁻¹Σ R_3i,i (covariant) − E⁻¹Σ ∂_iR_3i
    pub coord_covar: f64,
    /// intrinsic Gauss curvature of E_λ|du|² − (det II_λ/E_λ² + K^T)
    pub gauss: f64,
}

impl AppendixB {
    pub fn worst(&self) -> f64 {
        max_abs([
            self.n_dagger,
            self.i_dagger_j[0],
            self.i_dagger_j[1],
            self.i_dagger_j[2],
            self.coord_covar,
            self.gauss,
        ])
    }
}

/// Checks the appendix identities at one point.
pub fn appendix_b(p: &PointEval, factor: &ConformalFactor) -> Result<AppendixB> {
    let f = &p.frame;
    let lj = &p.lambda;
    let cj = &p.classical;
    let c = &lj.curv;
    let e = lj.metric.value();
    let yu = [jets::deriv_vec(&f.y, 0), jets::deriv_vec(&f.y, 1)];
    let du = [jets::deriv_vec(&f.ydag, 0), jets::deriv_vec(&f.ydag, 1)];
    let ip = |a: &V5, b: &V5| minner(a, b).value();

    // y_λ and y†_λ along the great circle through x̂ in direction n
    let l1 = Layout::new(1, 1);
    let t = Jet::variable(&l1, 1, 0, 0.0);
    let (ct, st) = (t.cos(), t.sin());
    let x0 = jets::values(&cj.x);
    let n0 = jets::values(&cj.n);
    let xt: [Jet; 4] = core::array::from_fn(|i| &ct * x0[i] + &st * n0[i]);
    let lam_t = factor.value_jet(&xt);
    let dag_t = y_dagger_at(factor, &xt, &lam_t)?;
    let y_t: V5 = lift(lam_t.clone(), &core::array::from_fn(|i| &lam_t * &xt[i]));
    let lam0 = lj.lam.value();
    // d/du³ = λ̂⁻¹ d/dt
    let d3 = |v: &V5| -> [f64; 5] { core::array::from_fn(|k| v[k].d1(0) / lam0) };
    let (y3, dag3) = (d3(&y_t), d3(&dag_t));
    let ip5 = |a: &[f64; 5], b: &[f64; 5]| -a[0] * b[0] + (1..5).map(|k| a[k] * b[k]).sum::<f64>();
    let yd3 = ip5(&y3, &dag3);
    let nl = v5_values(&f.n_lam);
    let y3_gap = max_abs((0..5).map(|k| y3[k] - nl[k]));

    let n_dagger = max_abs((0..2).map(|i| ip(&f.n_lam, &du[i]) + c.r_3i[i].value()));
    let gap = 0.5 * (c.ric_33.value() - c.kt.value());
    let off = max_abs([ip(&yu[0], &du[1]) + c.r_i3j3[0][1].value(), ip(&yu[1], &du[0]) + c.r_i3j3[1][0].value()]);
    let diag = max_abs((0..2).map(|i| ip(&yu[i], &du[i]) + c.r_i3j3[i][i].value() - e * gap));
    let normal = (yd3 + gap).abs().max(y3_gap);

    let gam = crate::classical::christoffel(&lj.metric);
    let mut cov = 0.0;
    let mut plain = 0.0;
    for i in 0..2 {
        plain += c.r_3i[i].d1(i);
        cov += c.r_3i[i].d1(i);
        for k in 0..2 {
            cov -= c.r_3i[k].value() * gam[k][i][i].value();
        }
    }
    let coord_covar = (cov - plain) / e;
    let k_int = crate::classical::intrinsic_curvature(&lj.metric)?.value();
    let ii = &lj.ii;
    let det_ii = ii[0][0].value() * ii[1][1].value() - ii[0][1].value() * ii[1][0].value();
    let gauss = k_int - (det_ii / (e * e) + c.kt.value());
    Ok(AppendixB { n_dagger, i_dagger_j: [off, diag, normal], coord_covar, gauss })
}
