//! Conformal data (m, ω, Ω, Ω*) on a parameter grid, the Gauss–Codazzi
//! residuals of the ξ-surface, and the frame structure equations.
//!
//! Frame rows are e₀ = y_λ, e₁ = y*_λ, e₂,e₃ = m^{-1/2}ξ_{u^k}, e₄ = ξ, with
//! Gram matrix ⟨e₀,e₁⟩ = −1, ⟨e₂,e₂⟩ = ⟨e₃,e₃⟩ = ⟨e₄,e₄⟩ = 1, all others 0.

use alloc::vec::Vec;

use crate::frame::PointEval;
use crate::jets::{ConformalFactor, Jet, Layout, SurfaceChart};
use crate::{Error, Result};

/// Names of the six integrability residuals, in output order.
pub const RESIDUAL_NAMES: [&str; 6] =
    ["codazzi_y_1", "codazzi_y_2", "codazzi_ystar_1", "codazzi_ystar_2", "codazzi_mix", "gauss_xi"];

/// Rectangular parameter grid. Point (i, j) is origin + (i h₁, j h₂) and
/// is stored at `j * nu + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
    pub origin: [f64; 2],
    pub step: [f64; 2],
    pub periodic: [bool; 2],
}

impl Grid {
    pub fn new(nu: usize, nv: usize, origin: [f64; 2], step: [f64; 2], periodic: [bool; 2]) -> Result<Grid> {
        if nu < 5 || nv < 5 {
            return Err(Error::Shape("grid needs at least 5 points per direction"));
        }
        if !(step[0] > 0.0 && step[1] > 0.0) {
            return Err(Error::Shape("grid steps must be positive"));
        }
        Ok(Grid { nu, nv, origin, step, periodic })
    }

    /// nu × nv points covering [0, p₁) × [0, p₂) without the closing row.
    pub fn periodic_over(periods: [f64; 2], nu: usize, nv: usize) -> Result<Grid> {
        Grid::new(nu, nv, [0.0, 0.0], [periods[0] / nu as f64, periods[1] / nv as f64], [true, true])
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [self.origin[0] + i as f64 * self.step[0], self.origin[1] + j as f64 * self.step[1]]
    }

    /// Parameter point of a flat index.
    pub fn point_of(&self, k: usize) -> [f64; 2] {
        self.point(k % self.nu, k / self.nu)
    }

    fn n(&self, dir: usize) -> usize {
        if dir == 0 {
            self.nu
        } else {
            self.nv
        }
    }
}

/// Finite-difference weights for the `deriv`-th derivative at 0 from
/// samples at `offsets` (in units of the step), by Fornberg's recursion.
pub fn fd_weights(offsets: &[f64], deriv: usize) -> Vec<f64> {
    let n = offsets.len();
    let mut c = alloc::vec![alloc::vec![0.0; deriv + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] *= c4 / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[deriv]).collect()
}

/// Stencil of `width` points for position `pos` on a line of `n` samples:
/// centered with wrap when periodic, shifted inward at open boundaries.
/// The width is reduced on lines shorter than the stencil.
/// Returns (sample indices, offsets).
pub fn stencil(pos: usize, n: usize, width: usize, periodic: bool) -> (Vec<usize>, Vec<f64>) {
    // short lines get the widest odd stencil that fits
    let width = if width > n { n - (1 - n % 2) } else { width };
    let half = (width / 2) as isize;
    let p = pos as isize;
    let n_i = n as isize;
    if periodic {
        let idx = (-half..=half).map(|k| (p + k).rem_euclid(n_i) as usize).collect();
        let off = (-half..=half).map(|k| k as f64).collect();
        return (idx, off);
    }
    let start = (p - half).clamp(0, n_i - width as isize);
    let idx: Vec<usize> = (start..start + width as isize).map(|k| k as usize).collect();
    let off = idx.iter().map(|&k| k as f64 - p as f64).collect();
    (idx, off)
}

/// Derivative along one grid direction of a scalar field sampled on the grid.
pub fn grid_derivative(
    grid: &Grid,
    values: &dyn Fn(usize) -> f64,
    i: usize,
    j: usize,
    dir: usize,
    deriv: usize,
    width: usize,
) -> f64 {
    let pos = if dir == 0 { i } else { j };
    let (idx, off) = stencil(pos, grid.n(dir), width, grid.periodic[dir]);
    let w = fd_weights(&off, deriv);
    let h = libm::pow(grid.step[dir], deriv as f64);
    let mut acc = 0.0;
    for (k, &s) in idx.iter().enumerate() {
        let g = if dir == 0 { grid.index(s, j) } else { grid.index(i, s) };
        acc += w[k] * values(g);
    }
    acc / h
}

/// Conformal data at one parameter point, with ∂m for the structure equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFields {
    pub m: f64,
    pub dm: [f64; 2],
    pub omega: [f64; 2],
    pub big_omega: [[f64; 2]; 2],
    pub omega_star: [[f64; 2]; 2],
}

/// Point data plus the first derivatives the residuals need.
/// `d_*[..][k]` is the partial along u^k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFields {
    pub f: PointFields,
    pub lap_log_m: f64,
    pub d_omega: [[f64; 2]; 2],
    pub d_big: [[[f64; 2]; 2]; 2],
    pub d_star: [[[f64; 2]; 2]; 2],
}

/// Where conformal data came from.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)] // one per data set
pub enum DataSource {
    /// Evaluated from a chart; derivatives and off-grid samples use jets.
    Chart { chart: SurfaceChart, factor: ConformalFactor, j_max: usize },
    /// Only grid values known; derivatives by finite differences.
    Tabulated,
}

/// Which field a perturbation modifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSlot {
    M,
    Omega(usize),
    BigOmega11,
    BigOmega12,
    OmegaStar(usize, usize),
}

/// m, ω, Ω, Ω* on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalData {
    pub grid: Grid,
    pub m: Vec<f64>,
    pub omega: Vec<[f64; 2]>,
    pub big_omega: Vec<[[f64; 2]; 2]>,
    pub omega_star: Vec<[[f64; 2]; 2]>,
    pub source: DataSource,
}

const FD_WIDTH: usize = 5;

fn point_fields_from(p: &PointEval) -> PointFields {
    let f = &p.frame;
    let v2 =
        |t: &[[Jet; 2]; 2]| -> [[f64; 2]; 2] { core::array::from_fn(|i| core::array::from_fn(|j| t[i][j].value())) };
    PointFields {
        m: f.m.value(),
        dm: [f.m.d1(0), f.m.d1(1)],
        omega: [f.omega[0].value(), f.omega[1].value()],
        big_omega: v2(&f.big_omega),
        omega_star: v2(&f.omega_star),
    }
}

fn local_from(p: &PointEval) -> LocalFields {
    let f = &p.frame;
    let d2 = |t: &[[Jet; 2]; 2]| -> [[[f64; 2]; 2]; 2] {
        core::array::from_fn(|i| core::array::from_fn(|j| [t[i][j].d1(0), t[i][j].d1(1)]))
    };
    let m = &f.m;
    let lap_m = 2.0 * (m.coeff(&[2, 0]) + m.coeff(&[0, 2]));
    let mv = m.value();
    let gm2 = m.d1(0) * m.d1(0) + m.d1(1) * m.d1(1);
    LocalFields {
        f: point_fields_from(p),
        lap_log_m: lap_m / mv - gm2 / (mv * mv),
        d_omega: core::array::from_fn(|i| [f.omega[i].d1(0), f.omega[i].d1(1)]),
        d_big: d2(&f.big_omega),
        d_star: d2(&f.omega_star),
    }
}

/// Conformal data at one parameter point from a chart, with jets of
/// immersion order `order` (5 gives first derivatives of Ω*).
pub fn chart_local(
    chart: &SurfaceChart,
    factor: &ConformalFactor,
    u: [f64; 2],
    order: usize,
    j_max: usize,
) -> Result<LocalFields> {
    let layout = Layout::new(2, order);
    let p = PointEval::new(chart, factor, &layout, u, order, j_max)?;
    Ok(local_from(&p))
}

fn chart_point(chart: &SurfaceChart, factor: &ConformalFactor, u: [f64; 2], j_max: usize) -> Result<PointFields> {
    let layout = Layout::new(2, 4);
    let p = PointEval::new(chart, factor, &layout, u, 4, j_max)?;
    Ok(point_fields_from(&p))
}

impl ConformalData {
    /// Samples a chart on the grid.
    pub fn from_chart(chart: &SurfaceChart, factor: &ConformalFactor, grid: Grid, j_max: usize) -> Result<Self> {
        let mut m = Vec::with_capacity(grid.len());
        let mut omega = Vec::with_capacity(grid.len());
        let mut big = Vec::with_capacity(grid.len());
        let mut star = Vec::with_capacity(grid.len());
        for j in 0..grid.nv {
            for i in 0..grid.nu {
                let p = chart_point(chart, factor, grid.point(i, j), j_max)?;
                m.push(p.m);
                omega.push(p.omega);
                big.push(p.big_omega);
                star.push(p.omega_star);
            }
        }
        Ok(ConformalData {
            grid,
            m,
            omega,
            big_omega: big,
            omega_star: star,
            source: DataSource::Chart { chart: chart.clone(), factor: *factor, j_max },
        })
    }

    /// Tabulated data; checks m > 0 and tr Ω = 0.
    pub fn tabulated(
        grid: Grid,
        m: Vec<f64>,
        omega: Vec<[f64; 2]>,
        big_omega: Vec<[[f64; 2]; 2]>,
        omega_star: Vec<[[f64; 2]; 2]>,
    ) -> Result<Self> {
        let n = grid.len();
        if m.len() != n || omega.len() != n || big_omega.len() != n || omega_star.len() != n {
            return Err(Error::Shape("field length does not match grid"));
        }
        if let Some(&bad) = m.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::BadParameter(if bad.is_nan() { "m is NaN" } else { "m must be positive" }));
        }
        for o in &big_omega {
            let scale = 1.0 + o[0][0].abs() + o[0][1].abs();
            if (o[0][0] + o[1][1]).abs() > 1e-9 * scale || (o[0][1] - o[1][0]).abs() > 1e-9 * scale {
                return Err(Error::BadParameter("Ω must be traceless symmetric"));
            }
        }
        Ok(ConformalData { grid, m, omega, big_omega, omega_star, source: DataSource::Tabulated })
    }

    /// Copy with the chart link dropped, so every derivative uses differences.
    pub fn to_tabulated(&self) -> ConformalData {
        ConformalData { source: DataSource::Tabulated, ..self.clone() }
    }

    /// Tabulated copy with `eps · bump(u)` added to one field, where
    /// bump = 1 + sin(2πu¹/L₁) + sin(2πu²/L₂) over the grid extent.
    pub fn perturbed(&self, slot: FieldSlot, eps: f64) -> ConformalData {
        let mut d = self.to_tabulated();
        let g = self.grid;
        let ext = [g.step[0] * g.nu as f64, g.step[1] * g.nv as f64];
        let tau = 2.0 * core::f64::consts::PI;
        for j in 0..g.nv {
            for i in 0..g.nu {
                let u = g.point(i, j);
                let b = eps
                    * (1.0
                        + libm::sin(tau * (u[0] - g.origin[0]) / ext[0])
                        + libm::sin(tau * (u[1] - g.origin[1]) / ext[1]));
                let k = g.index(i, j);
                match slot {
                    FieldSlot::M => d.m[k] += b,
                    FieldSlot::Omega(a) => d.omega[k][a] += b,
                    FieldSlot::BigOmega11 => {
                        d.big_omega[k][0][0] += b;
                        d.big_omega[k][1][1] -= b;
                    }
                    FieldSlot::BigOmega12 => {
                        d.big_omega[k][0][1] += b;
                        d.big_omega[k][1][0] += b;
                    }
                    FieldSlot::OmegaStar(a, c) => {
                        d.omega_star[k][a][c] += b;
                        if a != c {
                            d.omega_star[k][c][a] += b;
                        }
                    }
                }
            }
        }
        d
    }

    fn fd(&self, get: &dyn Fn(usize) -> f64, i: usize, j: usize, dir: usize) -> f64 {
        grid_derivative(&self.grid, get, i, j, dir, 1, FD_WIDTH)
    }

    /// Values and derivatives at grid point (i, j).
    pub fn local(&self, i: usize, j: usize) -> Result<LocalFields> {
        if let DataSource::Chart { chart, factor, j_max } = &self.source {
            return chart_local(chart, factor, self.grid.point(i, j), 5.min(*j_max), *j_max);
        }
        let k = self.grid.index(i, j);
        let d = |get: &dyn Fn(usize) -> f64| [self.fd(get, i, j, 0), self.fd(get, i, j, 1)];
        let logm = |g: usize| libm::log(self.m[g]);
        let lap_log_m = grid_derivative(&self.grid, &logm, i, j, 0, 2, FD_WIDTH)
            + grid_derivative(&self.grid, &logm, i, j, 1, 2, FD_WIDTH);
        Ok(LocalFields {
            f: PointFields {
                m: self.m[k],
                dm: d(&|g| self.m[g]),
                omega: self.omega[k],
                big_omega: self.big_omega[k],
                omega_star: self.omega_star[k],
            },
            lap_log_m,
            d_omega: core::array::from_fn(|a| d(&|g| self.omega[g][a])),
            d_big: core::array::from_fn(|a| core::array::from_fn(|b| d(&|g| self.big_omega[g][a][b]))),
            d_star: core::array::from_fn(|a| core::array::from_fn(|b| d(&|g| self.omega_star[g][a][b]))),
        })
    }

    /// Point data at an arbitrary parameter `u`: exact for chart data,
    /// tensor-product cubic interpolation otherwise.
    pub fn sample(&self, u: [f64; 2]) -> Result<PointFields> {
        if let DataSource::Chart { chart, factor, j_max } = &self.source {
            return chart_point(chart, factor, u, *j_max);
        }
        let g = &self.grid;
        let mut idx = [[0usize; 4]; 2];
        let mut w = [[0.0; 4]; 2];
        for dir in 0..2 {
            let n = g.n(dir);
            let t = (u[dir] - g.origin[dir]) / g.step[dir];
            let base = libm::floor(t) as isize - 1;
            let base = if g.periodic[dir] { base } else { base.clamp(0, n as isize - 4) };
            let off: Vec<f64> = (0..4).map(|k| (base + k) as f64 - t).collect();
            let wt = fd_weights(&off, 0);
            for k in 0..4 {
                idx[dir][k] = (base + k as isize).rem_euclid(n as isize) as usize;
                w[dir][k] = wt[k];
            }
        }
        let interp = |get: &dyn Fn(usize) -> f64| {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += w[0][a] * w[1][b] * get(g.index(idx[0][a], idx[1][b]));
                }
            }
            acc
        };
        // ∂m on the grid, then interpolated
        let dm_at = |dir: usize| {
            move |k: usize| {
                let (i, j) = (k % g.nu, k / g.nu);
                self.fd(&|q| self.m[q], i, j, dir)
            }
        };
        Ok(PointFields {
            m: interp(&|k| self.m[k]),
            dm: [interp(&dm_at(0)), interp(&dm_at(1))],
            omega: core::array::from_fn(|a| interp(&|k| self.omega[k][a])),
            big_omega: core::array::from_fn(|a| core::array::from_fn(|b| interp(&|k| self.big_omega[k][a][b]))),
            omega_star: core::array::from_fn(|a| core::array::from_fn(|b| interp(&|k| self.omega_star[k][a][b]))),
        })
    }

    /// Integrability residuals at every grid point.
    pub fn residual_fields(&self) -> Result<Vec<Residuals>> {
        let mut out = Vec::with_capacity(self.grid.len());
        for j in 0..self.grid.nv {
            for i in 0..self.grid.nu {
                out.push(residuals(&self.local(i, j)?)?);
            }
        }
        Ok(out)
    }

    /// Max |residual| per identity over the grid.
    pub fn residual_summary(&self) -> Result<ResidualSummary> {
        let mut s = ResidualSummary::default();
        for r in self.residual_fields()? {
            s.absorb(&r);
        }
        Ok(s)
    }
}

/// The six residuals at a point, plus two variants of the second starred
/// Codazzi equation that differ in the (|Ω|²)' term, for comparison.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residuals {
    pub values: [f64; 6],
    /// Second y* equation with +½(trΩ*/|Ω|²)(|Ω|²)_{u²}.
    pub ystar_2_alt_u2: f64,
    /// Second y* equation with +½(trΩ*/|Ω|²)(|Ω|²)_{u¹}.
    pub ystar_2_alt_u1: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ResidualSummary {
    pub max: [f64; 6],
    pub ystar_2_alt_u2: f64,
    pub ystar_2_alt_u1: f64,
}

impl ResidualSummary {
    pub fn absorb(&mut self, r: &Residuals) {
        for k in 0..6 {
            self.max[k] = self.max[k].max(r.values[k].abs());
        }
        self.ystar_2_alt_u2 = self.ystar_2_alt_u2.max(r.ystar_2_alt_u2.abs());
        self.ystar_2_alt_u1 = self.ystar_2_alt_u1.max(r.ystar_2_alt_u1.abs());
    }

    pub fn worst(&self) -> f64 {
        self.max.iter().cloned().fold(0.0, f64::max)
    }
}

/// Covariant derivative T_{ij,k} for the metric E|du|² given Γ[p][i][j].
fn cov2(t: &[[f64; 2]; 2], dt: &[[[f64; 2]; 2]; 2], gam: &[[[f64; 2]; 2]; 2], i: usize, j: usize, k: usize) -> f64 {
    let mut v = dt[i][j][k];
    for p in 0..2 {
        v -= gam[p][k][i] * t[p][j] + gam[p][k][j] * t[i][p];
    }
    v
}

fn christoffel_conformal(e: f64, de: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
    let a = de[0] / (2.0 * e);
    let b = de[1] / (2.0 * e);
    // Γ^1 = [[a, b], [b, −a]], Γ^2 = [[−b, a], [a, b]]
    [[[a, b], [b, -a]], [[-b, a], [a, b]]]
}

/// Residuals of the integrability conditions at one point. Covariant
/// derivatives use E = −det Ω/m; |Ω|² = ΣΩ_ij²/E² is the metric norm.
pub fn residuals(l: &LocalFields) -> Result<Residuals> {
    let f = &l.f;
    if !(f.m > 0.0) {
        return Err(Error::BadParameter("m must be positive"));
    }
    let o = &f.big_omega;
    let s = &f.omega_star;
    let w = &f.omega;
    let (p, q) = (o[0][0], o[0][1]);
    let pq = p * p + q * q;
    if pq < crate::frame::EPS_UMBILIC {
        return Err(Error::Umbilic(pq));
    }
    let m = f.m;
    let e = pq / m;
    let dpq: [f64; 2] = core::array::from_fn(|k| 2.0 * (p * l.d_big[0][0][k] + q * l.d_big[0][1][k]));
    let de: [f64; 2] = core::array::from_fn(|k| dpq[k] / m - e * f.dm[k] / m);
    let gam = christoffel_conformal(e, de);
    let co = |i, j, k| cov2(o, &l.d_big, &gam, i, j, k);
    let cs = |i, j, k| cov2(s, &l.d_star, &gam, i, j, k);
    let norm = 2.0 * m * m / pq;
    let dnorm: [f64; 2] = core::array::from_fn(|k| 4.0 * m * f.dm[k] / pq - 2.0 * m * m * dpq[k] / (pq * pq));
    let tr_s = s[0][0] + s[1][1];
    let c = 0.5 * tr_s / norm;

    let cy1 = co(0, 0, 1) - co(0, 1, 0) - (w[0] * o[0][1] - w[1] * o[0][0]);
    let cy2 = co(0, 1, 1) - co(1, 1, 0) - (w[0] * o[1][1] - w[1] * o[0][1]);
    let cs1 = cs(0, 0, 1) - cs(0, 1, 0) - (-w[0] * s[0][1] + w[1] * s[0][0] + c * dnorm[1]);
    let base2 = cs(0, 1, 1) - cs(1, 1, 0) - (-w[0] * s[1][1] + w[1] * s[0][1]);
    let cs2 = base2 + c * dnorm[0];
    let mix = l.d_omega[0][1] - l.d_omega[1][0] - ((o[0][0] - o[1][1]) * s[0][1] - (s[0][0] - s[1][1]) * o[0][1]) / m;
    let tr_os: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| o[i][j] * s[j][i]).sum();
    let gauss = -l.lap_log_m / (2.0 * m) - 1.0 - tr_os / (m * m);
    Ok(Residuals {
        values: [cy1, cy2, cs1, cs2, mix, gauss],
        ystar_2_alt_u2: base2 - c * dnorm[1],
        ystar_2_alt_u1: base2 - c * dnorm[0],
    })
}

/// Coefficients A_i of ∂_{u^i} e_r = Σ_s A_i[r][s] e_s.
pub fn structure_matrix(f: &PointFields, i: usize) -> [[f64; 5]; 5] {
    let sm = libm::sqrt(f.m);
    let o = &f.big_omega;
    let s = &f.omega_star;
    let mut a = [[0.0; 5]; 5];
    a[0][0] = -f.omega[i];
    a[1][1] = f.omega[i];
    for k in 0..2 {
        a[0][2 + k] = -o[i][k] / sm;
        a[1][2 + k] = -s[i][k] / sm;
        a[2 + k][0] = -s[k][i] / sm;
        a[2 + k][1] = -o[k][i] / sm;
        for l in 0..2 {
            let mut c = 0.0;
            if i == l {
                c += f.dm[k];
            }
            if k == i {
                c -= f.dm[l];
            }
            a[2 + k][2 + l] = c / (2.0 * f.m);
        }
        if k == i {
            a[2 + k][4] = -sm;
        }
    }
    a[4][2 + i] = sm;
    a
}

/// The constant Gram matrix of the frame rows.
pub fn frame_gram() -> [[f64; 5]; 5] {
    let mut g = [[0.0; 5]; 5];
    g[0][1] = -1.0;
    g[1][0] = -1.0;
    g[2][2] = 1.0;
    g[3][3] = 1.0;
    g[4][4] = 1.0;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fornberg_central() {
        let w = fd_weights(&[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let want = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for k in 0..5 {
            assert!((w[k] - want[k]).abs() < 1e-14);
        }
        let w2 = fd_weights(&[-1.0, 0.0, 1.0], 2);
        assert!((w2[0] - 1.0).abs() < 1e-14 && (w2[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn stencil_shifts_at_boundary() {
        let (idx, off) = stencil(0, 10, 5, false);
        assert_eq!(idx, alloc::vec![0, 1, 2, 3, 4]);
        assert_eq!(off[0], 0.0);
        let (idx, _) = stencil(0, 10, 5, true);
        assert_eq!(idx, alloc::vec![8, 9, 0, 1, 2]);
    }
}
