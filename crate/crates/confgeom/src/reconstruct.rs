//! Reconstruction of a surface from conformal data by integrating the
//! frame equations ∂_i e = A_i e with classic RK4.
//!
//! Sweep order: along u¹ on the base row j = 0, then along u² up every
//! column. The column-first sweep is available for path-independence checks.

use alloc::vec::Vec;

use crate::frame::{self, PointEval};
use crate::integrability::{frame_gram, grid_derivative, structure_matrix, ConformalData, Grid, PointFields};
use crate::jets::{ConformalFactor, Layout, SurfaceChart};
use crate::mink5::{inner5, LorentzMap};
use crate::{Error, Result};

/// Five frame rows (y, y*, ξ_{u¹}/√m, ξ_{u²}/√m, ξ).
pub type Frame = [[f64; 5]; 5];

/// Integrability residual above which reconstruction is refused.
pub const MAX_RESIDUAL: f64 = 1e-6;
/// Gram drift above which the step is declared too coarse.
pub const MAX_DRIFT: f64 = 1e-4;

/// Frame rows on every grid point, row-major (index j·nu + i).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    pub grid: Grid,
    pub frames: Vec<Frame>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// u¹ along the base row, then u² per column.
    RowFirst,
    /// u² along the base column, then u¹ per row.
    ColumnFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub sweep: Sweep,
    /// Project back onto the exact Gram matrix every N steps.
    pub gram_correction: Option<usize>,
    /// Skip the integrability precheck (used by the path-dependence study).
    pub skip_precheck: bool,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions { sweep: Sweep::RowFirst, gram_correction: None, skip_precheck: false }
    }
}

/// Gram matrix of a frame.
pub fn gram(f: &Frame) -> [[f64; 5]; 5] {
    core::array::from_fn(|a| core::array::from_fn(|b| inner5(&f[a], &f[b])))
}

/// max |Gram(f) − G₀|.
pub fn gram_drift(f: &Frame) -> f64 {
    let g = gram(f);
    let g0 = frame_gram();
    let mut w: f64 = 0.0;
    for a in 0..5 {
        for b in 0..5 {
            w = w.max((g[a][b] - g0[a][b]).abs());
        }
    }
    w
}

/// Pulls a frame back toward the exact Gram matrix: e ← e − ½(M − G₀)G₀e,
/// iterated. G₀ is its own inverse, so this is a Newton step.
pub fn gram_correct(f: &Frame) -> Frame {
    let g0 = frame_gram();
    let mut e = *f;
    for _ in 0..3 {
        let m = gram(&e);
        let d: [[f64; 5]; 5] = core::array::from_fn(|a| core::array::from_fn(|b| m[a][b] - g0[a][b]));
        let dg = crate::linalg::matmul(&d, &g0);
        let prev = e;
        for a in 0..5 {
            for k in 0..5 {
                e[a][k] = prev[a][k] - 0.5 * (0..5).map(|b| dg[a][b] * prev[b][k]).sum::<f64>();
            }
        }
    }
    e
}

fn apply(a: &[[f64; 5]; 5], e: &Frame) -> Frame {
    core::array::from_fn(|r| core::array::from_fn(|k| (0..5).map(|s| a[r][s] * e[s][k]).sum()))
}

fn axpy(e: &Frame, h: f64, k: &Frame) -> Frame {
    core::array::from_fn(|r| core::array::from_fn(|c| e[r][c] + h * k[r][c]))
}

/// One RK4 step of de/du^dir = A_dir(u) e.
fn rk4_step(data: &ConformalData, e: &Frame, u: [f64; 2], dir: usize, h: f64) -> Result<Frame> {
    let at = |t: f64| -> Result<[[f64; 5]; 5]> {
        let mut p = u;
        p[dir] += t;
        let f: PointFields = data.sample(p)?;
        if !(f.m > 0.0) {
            return Err(Error::BadParameter("non-positive m in conformal data"));
        }
        Ok(structure_matrix(&f, dir))
    };
    let a0 = at(0.0)?;
    let am = at(0.5 * h)?;
    let a1 = at(h)?;
    let k1 = apply(&a0, e);
    let k2 = apply(&am, &axpy(e, 0.5 * h, &k1));
    let k3 = apply(&am, &axpy(e, 0.5 * h, &k2));
    let k4 = apply(&a1, &axpy(e, h, &k3));
    Ok(core::array::from_fn(|r| {
        core::array::from_fn(|c| e[r][c] + h / 6.0 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]))
    }))
}

/// Integrates the frame equations from `seed` at the grid origin.
///
/// Errors with [`Error::Integrability`] when the residuals of `data` exceed
/// [`MAX_RESIDUAL`], and with [`Error::GramDrift`] when the drift exceeds
/// [`MAX_DRIFT`].
pub fn integrate_structure_equations(data: &ConformalData, seed: &Frame, opts: IntegrateOptions) -> Result<FrameField> {
    let seed_drift = gram_drift(seed);
    if seed_drift > 1e-9 {
        return Err(Error::Shape("seed frame violates the orthonormality relations"));
    }
    if !opts.skip_precheck {
        let worst = data.residual_summary()?.worst();
        if !(worst <= MAX_RESIDUAL) {
            return Err(Error::Integrability(worst, MAX_RESIDUAL));
        }
    }
    let g = data.grid;
    let (outer, inner) = match opts.sweep {
        Sweep::RowFirst => (0, 1),
        Sweep::ColumnFirst => (1, 0),
    };
    let n = [g.nu, g.nv];
    let mut frames = alloc::vec![[[0.0; 5]; 5]; g.len()];
    let idx = |a: usize, b: usize| if outer == 0 { g.index(a, b) } else { g.index(b, a) };
    let mut steps = 0usize;
    let mut advance = |e: &Frame, u: [f64; 2], dir: usize| -> Result<Frame> {
        let mut next = rk4_step(data, e, u, dir, g.step[dir])?;
        steps += 1;
        if let Some(every) = opts.gram_correction {
            if every > 0 && steps % every == 0 {
                next = gram_correct(&next);
            }
        }
        Ok(next)
    };
    frames[idx(0, 0)] = *seed;
    for a in 1..n[outer] {
        let prev = frames[idx(a - 1, 0)];
        let u = g.point_of(idx(a - 1, 0));
        frames[idx(a, 0)] = advance(&prev, u, outer)?;
    }
    for a in 0..n[outer] {
        for b in 1..n[inner] {
            let prev = frames[idx(a, b - 1)];
            let u = g.point_of(idx(a, b - 1));
            frames[idx(a, b)] = advance(&prev, u, inner)?;
        }
    }
    let field = FrameField { grid: g, frames };
    let drift = field.max_gram_drift();
    if !(drift <= MAX_DRIFT) {
        return Err(Error::GramDrift(drift, MAX_DRIFT));
    }
    Ok(field)
}

impl FrameField {
    pub fn max_gram_drift(&self) -> f64 {
        self.frames.iter().map(gram_drift).fold(0.0, f64::max)
    }

    /// max |a − b| over all points and components.
    pub fn max_difference(&self, other: &FrameField) -> f64 {
        let mut w: f64 = 0.0;
        for (a, b) in self.frames.iter().zip(&other.frames) {
            for r in 0..5 {
                for c in 0..5 {
                    w = w.max((a[r][c] - b[r][c]).abs());
                }
            }
        }
        w
    }

    /// Applies a Lorentz map to every row.
    pub fn transformed(&self, l: &LorentzMap) -> FrameField {
        FrameField {
            grid: self.grid,
            frames: self.frames.iter().map(|f| core::array::from_fn(|r| l.apply_array(&f[r]))).collect(),
        }
    }
}

/// Integrates one more step past the last grid point in each periodic
/// direction and returns max |e(end) − e(start)| over both directions.
pub fn period_closure(data: &ConformalData, field: &FrameField) -> Result<f64> {
    let g = field.grid;
    let mut w: f64 = 0.0;
    for dir in 0..2 {
        if !g.periodic[dir] {
            continue;
        }
        let (i, j) = if dir == 0 { (g.nu - 1, 0) } else { (0, g.nv - 1) };
        let last = field.frames[g.index(i, j)];
        let next = rk4_step(data, &last, g.point(i, j), dir, g.step[dir])?;
        let first = field.frames[0];
        for r in 0..5 {
            for c in 0..5 {
                w = w.max((next[r][c] - first[r][c]).abs());
            }
        }
    }
    Ok(w)
}

/// The exact frame of a chart at `u`.
pub fn exact_frame(chart: &SurfaceChart, factor: &ConformalFactor, u: [f64; 2], j_max: usize) -> Result<Frame> {
    let layout = Layout::new(2, 4);
    let p = PointEval::new(chart, factor, &layout, u, 4, j_max)?;
    let rows = p.frame.rows()?;
    Ok(core::array::from_fn(|r| frame::v5_values(&rows[r])))
}

/// The explicit seed y = (1, e₁), ξ = (0, e₄), middle rows (0, e₂), (0, e₃),
/// with y* solved from ⟨y*, y⟩ = −1, ⟨y*, y*⟩ = 0 and y* ⟂ the other rows.
pub fn canonical_seed() -> Frame {
    let y = [1.0, 1.0, 0.0, 0.0, 0.0];
    let e2 = [0.0, 0.0, 1.0, 0.0, 0.0];
    let e3 = [0.0, 0.0, 0.0, 1.0, 0.0];
    let xi = [0.0, 0.0, 0.0, 0.0, 1.0];
    // y* ⟂ e2, e3, ξ leaves span{(1,0,..), (0,1,..)}, whose null lines are
    // (1, ±1); orthogonality to (1, −1) selects the one not parallel to y.
    let eta = |v: [f64; 5]| -> [f64; 5] { [-v[0], v[1], v[2], v[3], v[4]] };
    let a = [eta(y), eta(e2), eta(e3), eta(xi), eta([1.0, -1.0, 0.0, 0.0, 0.0])];
    let ystar = crate::linalg::solve_n(&a, &[-1.0, 0.0, 0.0, 0.0, 0.0]).expect("regular seed system");
    [y, ystar, e2, e3, xi]
}

/// Applies a Lorentz map to every row of a frame.
pub fn transform_frame(l: &LorentzMap, f: &Frame) -> Frame {
    core::array::from_fn(|r| l.apply_array(&f[r]))
}

/// (x̂, λ̂) at every grid point from the y row.
pub fn extract_surface(field: &FrameField) -> Result<Vec<([f64; 4], f64)>> {
    field
        .frames
        .iter()
        .map(|f| {
            let y = f[0];
            if !(y[0] > 0.0) {
                return Err(Error::NonPositiveTime(y[0]));
            }
            Ok(([y[1] / y[0], y[2] / y[0], y[3] / y[0], y[4] / y[0]], y[0]))
        })
        .collect()
}

/// Möbius- and rescaling-invariant scalar fields on a grid:
/// m, |II̊_λ|²E_λ and 𝓗_λE_λ^{3/2}.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantField {
    pub grid: Grid,
    pub m: Vec<f64>,
    pub norm_ii: Vec<f64>,
    pub willmore: Vec<f64>,
}

/// Max absolute deviations between two invariant fields.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MobiusReport {
    pub m: f64,
    pub norm_ii: f64,
    pub willmore: f64,
}

impl MobiusReport {
    pub fn worst(&self) -> f64 {
        self.m.max(self.norm_ii).max(self.willmore)
    }
}

/// FD stencil width for derivatives of reconstructed fields.
const FD_WIDTH: usize = 9;

impl InvariantField {
    pub fn from_chart(chart: &SurfaceChart, factor: &ConformalFactor, grid: Grid, j_max: usize) -> Result<Self> {
        let layout = Layout::new(2, 4);
        let mut out = InvariantField { grid, m: Vec::new(), norm_ii: Vec::new(), willmore: Vec::new() };
        for j in 0..grid.nv {
            for i in 0..grid.nu {
                let p = PointEval::new(chart, factor, &layout, grid.point(i, j), 4, j_max)?;
                let f = &p.frame;
                let e = f.metric.value();
                let o: f64 = (0..4).map(|k| f.big_omega[k / 2][k % 2].value()).map(|v| v * v).sum();
                out.m.push(f.m.value());
                out.norm_ii.push(o / e);
                out.willmore.push(f.willmore.value() * e * libm::sqrt(e));
            }
        }
        Ok(out)
    }

    /// Reads the invariants off a frame field by finite differences:
    /// E = ⟨y_{u¹}, y_{u¹}⟩, m = ⟨ξ_{u¹}, ξ_{u¹}⟩, Ω_ij = −⟨y_i, ξ_j⟩,
    /// Ω*_ij = −⟨y*_i, ξ_j⟩ and 𝓗 = −tr Ω*/E, reported as 𝓗 E^{3/2}.
    pub fn from_frame(field: &FrameField) -> Self {
        let mut g = field.grid;
        g.periodic = [false, false];
        let d = |row: usize, i: usize, j: usize, dir: usize| -> [f64; 5] {
            core::array::from_fn(|k| grid_derivative(&g, &|q| field.frames[q][row][k], i, j, dir, 1, FD_WIDTH))
        };
        let mut out = InvariantField { grid: field.grid, m: Vec::new(), norm_ii: Vec::new(), willmore: Vec::new() };
        for j in 0..g.nv {
            for i in 0..g.nu {
                let y = [d(0, i, j, 0), d(0, i, j, 1)];
                let ys = [d(1, i, j, 0), d(1, i, j, 1)];
                let xi = [d(4, i, j, 0), d(4, i, j, 1)];
                let e = inner5(&y[0], &y[0]);
                let m = inner5(&xi[0], &xi[0]);
                let mut o = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        let v = inner5(&y[a], &xi[b]);
                        o += v * v;
                    }
                }
                let tr_star = -(inner5(&ys[0], &xi[0]) + inner5(&ys[1], &xi[1]));
                out.m.push(m);
                out.norm_ii.push(o / e);
                // 𝓗 E^{3/2} with 𝓗 = −tr Ω*/E
                out.willmore.push(-tr_star * libm::sqrt(e));
            }
        }
        out
    }
}

/// Compares Möbius-invariant fields on a common grid. No aligning map is
/// solved for; the fields themselves are invariant.
pub fn compare_modulo_mobius(a: &InvariantField, b: &InvariantField) -> Result<MobiusReport> {
    if a.grid.nu != b.grid.nu || a.grid.nv != b.grid.nv {
        return Err(Error::Shape("invariant fields live on different grids"));
    }
    let dev = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    Ok(MobiusReport {
        m: dev(&a.m, &b.m),
        norm_ii: dev(&a.norm_ii, &b.norm_ii),
        willmore: dev(&a.willmore, &b.willmore),
    })
}
