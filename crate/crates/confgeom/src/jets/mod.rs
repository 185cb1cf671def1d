//! Truncated multivariate Taylor jets.
//!
//! A [`Jet`] stores the Taylor coefficients of a function of `nvars`
//! variables around a base point, up to total degree `order`. Monomials are
//! kept in graded order, so the coefficients of a lower-order jet are a
//! prefix of those of a higher-order one. Binary operations between jets of
//! different orders return a jet of the smaller order, which is exactly the
//! precision both operands support.

mod catalog;
mod factor;

pub use catalog::{SurfaceChart, DEFAULT_J_MAX};
pub use factor::ConformalFactor;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::{Error, Result};

/// Monomial bookkeeping shared by all jets of one variable count.
pub struct Layout {
    nvars: usize,
    max_order: usize,
    /// exponents, `nvars` entries per monomial
    exps: Vec<u8>,
    /// number of monomials of total degree <= k
    dims: Vec<usize>,
    /// `up[v][i]`: index of monomial i times x_v (usize::MAX past max order)
    up: Vec<Vec<usize>>,
    /// product triples (i, j, k), sorted by degree of k
    triples: Vec<(u32, u32, u32)>,
    /// number of triples whose output degree is <= k
    ntriples: Vec<usize>,
}

impl Layout {
    /// Builds the layout for `nvars` variables up to total degree `max_order`.
    pub fn new(nvars: usize, max_order: usize) -> Arc<Layout> {
        assert!((1..=8).contains(&nvars), "unsupported variable count");
        let mut exps: Vec<u8> = Vec::new();
        let mut dims = Vec::with_capacity(max_order + 1);
        let mut degs = Vec::new();
        for d in 0..=max_order {
            let mut cur = vec![0u8; nvars];
            push_compositions(d, 0, &mut cur, &mut exps);
            while degs.len() < exps.len() / nvars {
                degs.push(d);
            }
            dims.push(exps.len() / nvars);
        }
        let count = dims[max_order];
        let find = |target: &[u8]| -> usize {
            let d: usize = target.iter().map(|&e| e as usize).sum();
            let lo = if d == 0 { 0 } else { dims[d - 1] };
            (lo..dims[d]).find(|&i| &exps[i * nvars..(i + 1) * nvars] == target).expect("monomial present")
        };
        let mut up = vec![vec![usize::MAX; count]; nvars];
        for i in 0..count {
            if degs[i] == max_order {
                continue;
            }
            for (v, row) in up.iter_mut().enumerate() {
                let mut e = exps[i * nvars..(i + 1) * nvars].to_vec();
                e[v] += 1;
                row[i] = find(&e);
            }
        }
        let mut triples = Vec::new();
        for i in 0..count {
            for j in 0..count {
                if degs[i] + degs[j] > max_order {
                    continue;
                }
                let mut k = i;
                for v in 0..nvars {
                    for _ in 0..exps[j * nvars + v] {
                        k = up[v][k];
                    }
                }
                triples.push((i as u32, j as u32, k as u32));
            }
        }
        triples.sort_by_key(|&(_, _, k)| (degs[k as usize], k));
        let mut ntriples = vec![0; max_order + 1];
        for (d, slot) in ntriples.iter_mut().enumerate() {
            *slot = triples.iter().take_while(|&&(_, _, k)| degs[k as usize] <= d).count();
        }
        Arc::new(Layout { nvars, max_order, exps, dims, up, triples, ntriples })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of coefficients of a jet of the given order.
    pub fn dim(&self, order: usize) -> usize {
        self.dims[order]
    }

    /// Exponent vector of monomial `i`.
    pub fn exponents(&self, i: usize) -> &[u8] {
        &self.exps[i * self.nvars..(i + 1) * self.nvars]
    }

    /// Index of the monomial with the given exponents, if representable.
    pub fn index(&self, exps: &[u8]) -> Option<usize> {
        if exps.len() != self.nvars {
            return None;
        }
        let mut k = 0;
        for (v, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                k = *self.up[v].get(k)?;
                if k == usize::MAX {
                    return None;
                }
            }
        }
        Some(k)
    }
}

fn push_compositions(rest: usize, v: usize, cur: &mut [u8], out: &mut Vec<u8>) {
    let n = cur.len();
    if v == n - 1 {
        cur[v] = rest as u8;
        out.extend_from_slice(cur);
        return;
    }
    for e in (0..=rest).rev() {
        cur[v] = e as u8;
        push_compositions(rest - e, v + 1, cur, out);
    }
    cur[v] = 0;
}

/// Truncated Taylor expansion of a scalar function.
#[derive(Clone)]
pub struct Jet {
    layout: Arc<Layout>,
    order: usize,
    c: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.layout.nvars)
            .field("order", &self.order)
            .field("c", &self.c)
            .finish()
    }
}

impl Jet {
    /// The constant jet `value`.
    pub fn constant(layout: &Arc<Layout>, order: usize, value: f64) -> Jet {
        let mut c = vec![0.0; layout.dim(order)];
        c[0] = value;
        Jet { layout: layout.clone(), order, c }
    }

    /// The jet of the coordinate function `x_var`, with value `base`.
    pub fn variable(layout: &Arc<Layout>, order: usize, var: usize, base: f64) -> Jet {
        let mut j = Jet::constant(layout, order, base);
        if order >= 1 {
            j.c[1 + var] = 1.0;
        }
        j
    }

    /// Builds a jet from raw coefficients in layout order.
    pub fn from_coeffs(layout: &Arc<Layout>, order: usize, c: Vec<f64>) -> Result<Jet> {
        if c.len() != layout.dim(order) {
            return Err(Error::Shape("coefficient count does not match order"));
        }
        Ok(Jet { layout: layout.clone(), order, c })
    }

    /// A zero jet of the same shape.
    pub fn zero_like(&self) -> Jet {
        Jet::constant(&self.layout, self.order, 0.0)
    }

    /// A constant jet of the same shape.
    pub fn const_like(&self, value: f64) -> Jet {
        Jet::constant(&self.layout, self.order, value)
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// Function value at the base point.
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Taylor coefficient of the monomial with the given exponents.
    pub fn coeff(&self, exps: &[u8]) -> f64 {
        match self.layout.index(exps) {
            Some(i) if i < self.c.len() => self.c[i],
            _ => 0.0,
        }
    }

    /// Partial derivative value ∂^exps f at the base point.
    pub fn partial(&self, exps: &[u8]) -> f64 {
        let fact: f64 = exps.iter().map(|&e| factorial(e as usize)).product();
        self.coeff(exps) * fact
    }

    /// First partial along `var` at the base point.
    pub fn d1(&self, var: usize) -> f64 {
        if self.order == 0 {
            return 0.0;
        }
        self.c[1 + var]
    }

    /// Keeps terms up to `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Jet {
        let order = order.min(self.order);
        Jet { layout: self.layout.clone(), order, c: self.c[..self.layout.dim(order)].to_vec() }
    }

    /// Jet of ∂f/∂x_var; its order drops by one.
    pub fn deriv(&self, var: usize) -> Jet {
        assert!(self.order >= 1, "derivative of an order-0 jet");
        let order = self.order - 1;
        let n = self.layout.dim(order);
        let nv = self.layout.nvars;
        let mut c = vec![0.0; n];
        for (i, ci) in c.iter_mut().enumerate() {
            let k = self.layout.up[var][i];
            let e = self.layout.exps[i * nv + var] as f64;
            *ci = (e + 1.0) * self.c[k];
        }
        Jet { layout: self.layout.clone(), order, c }
    }

    fn check(&self, other: &Jet) {
        debug_assert!(Arc::ptr_eq(&self.layout, &other.layout), "jets from different layouts");
    }

    fn mul_impl(&self, other: &Jet) -> Jet {
        self.check(other);
        let order = self.order.min(other.order);
        let mut c = vec![0.0; self.layout.dim(order)];
        let nt = self.layout.ntriples[order];
        for &(i, j, k) in &self.layout.triples[..nt] {
            c[k as usize] += self.c[i as usize] * other.c[j as usize];
        }
        Jet { layout: self.layout.clone(), order, c }
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        self.check(other);
        let order = self.order.min(other.order);
        let n = self.layout.dim(order);
        let c = (0..n).map(|i| f(self.c[i], other.c[i])).collect();
        Jet { layout: self.layout.clone(), order, c }
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: f64) -> Jet {
        Jet { layout: self.layout.clone(), order: self.order, c: self.c.iter().map(|x| x * s).collect() }
    }

    /// f², slightly cheaper to read at call sites.
    pub fn sq(&self) -> Jet {
        self.mul_impl(self)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, k: u32) -> Jet {
        let mut acc = self.const_like(1.0);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            base = base.sq();
            k >>= 1;
        }
        acc
    }

    /// Composes a univariate Taylor series `d[k] = g^(k)(f0)/k!` with the
    /// non-constant part of `self`.
    fn compose(&self, d: &[f64]) -> Jet {
        let mut h = self.clone();
        h.c[0] = 0.0;
        let mut acc = self.const_like(d[self.order]);
        for k in (0..self.order).rev() {
            acc = acc.mul_impl(&h);
            acc.c[0] += d[k];
        }
        acc
    }

    /// 1/f; fails when f vanishes at the base point.
    pub fn recip(&self) -> Result<Jet> {
        let a = self.c[0];
        if a == 0.0 || !a.is_finite() {
            return Err(Error::JetReciprocalOfZero);
        }
        let mut d = vec![0.0; self.order + 1];
        let mut p = 1.0 / a;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = if k % 2 == 0 { p } else { -p };
            p /= a;
        }
        Ok(self.compose(&d))
    }

    /// f / g.
    pub fn div(&self, other: &Jet) -> Result<Jet> {
        Ok(self.mul_impl(&other.recip()?))
    }

    /// f^p for real p; requires f > 0 at the base point.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        let a = self.c[0];
        if !(a > 0.0) {
            return Err(Error::JetNonPositive(a));
        }
        let mut d = vec![0.0; self.order + 1];
        let mut coef = libm::pow(a, p);
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = coef;
            coef *= (p - k as f64) / ((k + 1) as f64 * a);
        }
        Ok(self.compose(&d))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    pub fn ln(&self) -> Result<Jet> {
        let a = self.c[0];
        if !(a > 0.0) {
            return Err(Error::JetNonPositive(a));
        }
        let mut d = vec![0.0; self.order + 1];
        d[0] = libm::log(a);
        let mut p = 1.0;
        for (k, dk) in d.iter_mut().enumerate().skip(1) {
            p /= a;
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            *dk = s * p / k as f64;
        }
        Ok(self.compose(&d))
    }

    pub fn exp(&self) -> Jet {
        let e = libm::exp(self.c[0]);
        let d: Vec<f64> = (0..=self.order).map(|k| e / factorial(k)).collect();
        self.compose(&d)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (libm::sin(self.c[0]), libm::cos(self.c[0]));
        let d: Vec<f64> = (0..=self.order).map(|k| [s, c, -s, -c][k % 4] / factorial(k)).collect();
        self.compose(&d)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (libm::sin(self.c[0]), libm::cos(self.c[0]));
        let d: Vec<f64> = (0..=self.order).map(|k| [c, -s, -c, s][k % 4] / factorial(k)).collect();
        self.compose(&d)
    }

    /// Largest coefficient magnitude; handy for residual reporting.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Re-expresses a jet of a layout with fewer variables in `target`,
    /// mapping variable `v` to `offset + v`.
    pub fn embed(&self, target: &Arc<Layout>, offset: usize) -> Jet {
        let nv = self.layout.nvars;
        assert!(offset + nv <= target.nvars);
        let order = self.order.min(target.max_order);
        let mut c = vec![0.0; target.dim(order)];
        let mut e = vec![0u8; target.nvars];
        for i in 0..self.layout.dim(order) {
            e.iter_mut().for_each(|x| *x = 0);
            e[offset..offset + nv].copy_from_slice(self.layout.exponents(i));
            c[target.index(&e).expect("monomial fits")] = self.c[i];
        }
        Jet { layout: target.clone(), order, c }
    }

    /// [`Jet::embed`] followed by zero-padding up to `order`. The padded
    /// coefficients are not derivatives of anything; only products whose
    /// degree in the original variables stays within `self.order()` are
    /// meaningful afterwards.
    pub fn embed_padded(&self, target: &Arc<Layout>, offset: usize, order: usize) -> Jet {
        let mut j = self.embed(target, offset);
        let order = order.min(target.max_order);
        if order > j.order {
            j.c.resize(target.dim(order), 0.0);
            j.order = order;
        }
        j
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, b| a * b as f64)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.zip(b, |x, y| x + y));
binop!(Sub, sub, |a, b| a.zip(b, |x, y| x - y));
binop!(Mul, mul, |a, b| a.mul_impl(b));

macro_rules! scalar_op {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<f64> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                let f: fn(&Jet, f64) -> Jet = $f;
                f(self, rhs)
            }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<&Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, f64) -> Jet = $f;
                f(rhs, self)
            }
        }
        impl $tr<Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

scalar_op!(Mul, mul, |a, s| a.scale(s));
scalar_op!(Add, add, |a, s| {
    let mut r = a.clone();
    r.c[0] += s;
    r
});

impl Sub<f64> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        &self + (-rhs)
    }
}

impl Sub<&Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        -rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Jet> for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Jet> for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = &*self - &rhs;
    }
}

/// Euclidean dot product of jet-valued vectors.
pub fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    let mut acc = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        acc += x * y;
    }
    acc
}

/// Sum of jets; panics on an empty slice.
pub fn sum<'a>(items: impl IntoIterator<Item = &'a Jet>) -> Jet {
    let mut it = items.into_iter();
    let mut acc = it.next().expect("non-empty sum").clone();
    for x in it {
        acc += x;
    }
    acc
}

/// Componentwise derivative of a jet-valued vector.
pub fn deriv_vec<const N: usize>(v: &[Jet; N], var: usize) -> [Jet; N] {
    core::array::from_fn(|i| v[i].deriv(var))
}

/// `s * v` for a jet scalar and jet vector.
pub fn scale_vec<const N: usize>(s: &Jet, v: &[Jet; N]) -> [Jet; N] {
    core::array::from_fn(|i| s * &v[i])
}

/// Componentwise sum of jet vectors.
pub fn add_vec<const N: usize>(a: &[Jet; N], b: &[Jet; N]) -> [Jet; N] {
    core::array::from_fn(|i| &a[i] + &b[i])
}

/// Componentwise difference of jet vectors.
pub fn sub_vec<const N: usize>(a: &[Jet; N], b: &[Jet; N]) -> [Jet; N] {
    core::array::from_fn(|i| &a[i] - &b[i])
}

/// Values at the base point.
pub fn values<const N: usize>(v: &[Jet; N]) -> [f64; N] {
    core::array::from_fn(|i| v[i].value())
}
