//! Pfaffian system `∂ᵢ F⃗ = Pᵢ(y) F⃗` on the vector of square-free mixed
//! derivatives, evaluated without ever forming `Pᵢ`.
//!
//! Coordinates are 0-based throughout: bit `i` of a [`SubsetIndex`] stands
//! for `∂_{i+1}`, so the entries of a [`DerivVector`] for `m = 2` are
//! `F, ∂₁F, ∂₂F, ∂₁∂₂F`.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::abs;
use crate::series::HypParams;
use crate::{Error, Result};

/// Default relative separation below which two coordinates count as tied.
pub const DEFAULT_TIE_EPS: f64 = 1e-8;

/// Subset `J ⊆ {0, …, m−1}` stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetIndex(pub usize);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        SubsetIndex(indices.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn bits(self) -> usize {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        SubsetIndex(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> Self {
        SubsetIndex(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..usize::BITS as usize).filter(move |&i| bits >> i & 1 == 1)
    }
}

/// `2^m` values indexed by [`SubsetIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct DerivVector {
    m: usize,
    values: Vec<f64>,
}

impl DerivVector {
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                found: values.len(),
            });
        }
        Ok(DerivVector { m, values })
    }

    pub fn zeros(m: usize) -> Self {
        DerivVector {
            m,
            values: vec![0.0; 1 << m],
        }
    }

    /// Unit vector `e_J`.
    pub fn unit(m: usize, j: SubsetIndex) -> Self {
        let mut v = DerivVector::zeros(m);
        v.values[j.0] = 1.0;
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: SubsetIndex) -> f64 {
        self.values[j.0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Relabels coordinates: entry `J` of the result is entry `π(J)` of
    /// `self`, where `π(J) = {perm[j] : j ∈ J}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let values = (0..self.values.len())
            .map(|mask| self.values[permute_mask(mask, perm)])
            .collect();
        DerivVector { m: self.m, values }
    }
}

pub(crate) fn permute_mask(mask: usize, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .filter(|(j, _)| mask >> j & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// Rejects zero coordinates and pairs closer than `eps · max|y|`.
pub fn check_regular(y: &[f64], eps: f64) -> Result<()> {
    if let Some(i) = y.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroCoordinate { i });
    }
    check_distinct(y, eps)
}

/// Rejects pairs closer than `eps · max|y|`.
pub fn check_distinct(y: &[f64], eps: f64) -> Result<()> {
    if let Some(&v) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::OutOfRange {
            name: "y",
            value: v,
        });
    }
    let scale = y.iter().fold(0.0f64, |acc, v| acc.max(abs(*v)));
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            if abs(y[i] - y[j]) <= eps * scale {
                return Err(Error::Tie { i, j });
            }
        }
    }
    Ok(())
}

/// A point of the non-diagonal region: nonzero, pairwise distinct
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationPoint {
    y: Vec<f64>,
}

impl EvaluationPoint {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(y, DEFAULT_TIE_EPS)
    }

    pub fn with_tolerance(y: Vec<f64>, eps: f64) -> Result<Self> {
        check_regular(&y, eps)?;
        Ok(EvaluationPoint { y })
    }

    pub fn coords(&self) -> &[f64] {
        &self.y
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }
}

/// Evaluator for the Pfaffian system with reusable scratch space.
///
/// [`Pfaffian::load`] fixes the point and fills the table
/// `T(i, J) = yᵢ ∂ᵢ² ∂_J F` for every `i ∉ J`; applying any `Pᵢ` afterwards
/// is a lookup.
#[derive(Debug, Clone)]
pub struct Pfaffian {
    m: usize,
    a: f64,
    c: f64,
    y: Vec<f64>,
    /// `w[i*m+k] = ½ y_k/(yᵢ−y_k)`
    w: Vec<f64>,
    /// `v[i*m+k] = ½ yᵢ/(yᵢ−y_k)²`
    v: Vec<f64>,
    /// `d[i*m+k] = ½ /(yᵢ−y_k)`
    d: Vec<f64>,
    /// `c − yᵢ + ½ Σ_{k≠i} w_ik`
    diag: Vec<f64>,
    /// `table[J*m+i] = T(i, J)` for `i ∉ J`
    table: Vec<f64>,
}

impl Pfaffian {
    pub fn new(m: usize, params: HypParams) -> Self {
        Pfaffian {
            m,
            a: params.a,
            c: params.c,
            y: vec![0.0; m],
            w: vec![0.0; m * m],
            v: vec![0.0; m * m],
            d: vec![0.0; m * m],
            diag: vec![0.0; m],
            table: vec![0.0; m << m],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn set_point(&mut self, y: &[f64]) {
        self.y.copy_from_slice(y);
        self.refresh();
    }

    fn refresh(&mut self) {
        let m = self.m;
        let y = &self.y;
        for i in 0..m {
            let mut s = 0.0;
            for k in 0..m {
                if k == i {
                    continue;
                }
                let inv = 1.0 / (y[i] - y[k]);
                self.d[i * m + k] = 0.5 * inv;
                self.w[i * m + k] = 0.5 * y[k] * inv;
                self.v[i * m + k] = 0.5 * y[i] * inv * inv;
                s += y[k] * inv;
            }
            self.diag[i] = self.c - y[i] + 0.5 * s;
        }
    }

    /// `r(i, J; y) F`, with `i ∉ J`.
    fn r(&self, i: usize, j: usize, f: &[f64]) -> f64 {
        let m = self.m;
        let big_i = j | 1 << i;
        let fj = f[j];
        let w = &self.w[i * m..(i + 1) * m];
        let v = &self.v[i * m..(i + 1) * m];
        let mut acc = self.diag[i] * f[big_i] - self.a * fj;
        let mut inside = j;
        while inside != 0 {
            let k = inside.trailing_zeros() as usize;
            inside &= inside - 1;
            acc += v[k] * (f[big_i ^ 1 << k] - fj);
        }
        let mut outside = !big_i & ((1 << m) - 1);
        while outside != 0 {
            let k = outside.trailing_zeros() as usize;
            outside &= outside - 1;
            acc -= w[k] * f[j | 1 << k];
        }
        -acc
    }

    fn fill_table(&mut self, f: &[f64]) {
        let m = self.m;
        // increasing J: every J∖{k} precedes J
        for j in 0..1usize << m {
            let mut free = !j & ((1 << m) - 1);
            while free != 0 {
                let i = free.trailing_zeros() as usize;
                free &= free - 1;
                let mut t = self.r(i, j, f);
                let d = &self.d[i * m..(i + 1) * m];
                let mut rest = j;
                while rest != 0 {
                    let k = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    t += d[k] * self.table[(j ^ 1 << k) * m + k];
                }
                self.table[j * m + i] = t;
            }
        }
    }

    /// Fixes the point `y` and fills the second-derivative table for `F`.
    pub fn load(&mut self, y: &EvaluationPoint, f: &DerivVector) -> Result<()> {
        self.check(y.m(), f)?;
        self.set_point(y.coords());
        self.fill_table(f.values());
        Ok(())
    }

    fn check(&self, m: usize, f: &DerivVector) -> Result<()> {
        if m != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: m,
            });
        }
        if f.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: f.m(),
            });
        }
        Ok(())
    }

    /// `T(i, J) = yᵢ ∂ᵢ² ∂_J F` from the last [`Pfaffian::load`].
    pub fn table_entry(&self, i: usize, j: SubsetIndex) -> f64 {
        debug_assert!(!j.contains(i));
        self.table[j.0 * self.m + i]
    }

    /// Entry `J` of `Pᵢ F` from the last [`Pfaffian::load`].
    fn applied(&self, i: usize, j: usize, f: &[f64]) -> f64 {
        if j >> i & 1 == 0 {
            f[j | 1 << i]
        } else {
            self.table[(j ^ 1 << i) * self.m + i] / self.y[i]
        }
    }

    /// `Σᵢ dirᵢ Pᵢ(y) F`, the derivative of `F⃗` along `dir`.
    pub fn directional(
        &mut self,
        y: &EvaluationPoint,
        dir: &[f64],
        f: &DerivVector,
    ) -> Result<DerivVector> {
        self.check(y.m(), f)?;
        if dir.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: dir.len(),
            });
        }
        self.set_point(y.coords());
        self.fill_table(f.values());
        let fv = f.values();
        let values = (0..fv.len())
            .map(|j| (0..self.m).map(|i| dir[i] * self.applied(i, j, fv)).sum())
            .collect();
        DerivVector::new(self.m, values)
    }

    /// Right-hand side of the radial system for
    /// `G(x) = e^{−xΣβ} x^{mn/2} F⃗(βx)`, written into `out`. `β` must be
    /// pairwise distinct and `x > 0`; this is the inner loop and does not
    /// re-validate.
    pub(crate) fn g_rhs_into(
        &mut self,
        x: f64,
        g: &[f64],
        beta: &[f64],
        mn_half: f64,
        out: &mut [f64],
    ) {
        let m = self.m;
        for (yi, &b) in self.y.iter_mut().zip(beta) {
            *yi = b * x;
        }
        self.refresh();
        self.fill_table(g);
        let diag = -beta.iter().sum::<f64>() + mn_half / x;
        let inv_x = 1.0 / x;
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = diag * g[j];
            for i in 0..m {
                if j >> i & 1 == 0 {
                    acc += beta[i] * g[j | 1 << i];
                } else {
                    // βᵢ/yᵢ = 1/x
                    acc += inv_x * self.table[(j ^ 1 << i) * m + i];
                }
            }
            *o = acc;
        }
    }
}

/// `r(i, J; y) F`: the square-free part of `yᵢ ∂ᵢ² ∂_J F`.
pub fn r_apply(
    i: usize,
    j: SubsetIndex,
    y: &EvaluationPoint,
    params: HypParams,
    f: &DerivVector,
) -> Result<f64> {
    if i >= y.m() || j.contains(i) {
        return Err(Error::OutOfRange {
            name: "i",
            value: i as f64,
        });
    }
    let mut p = Pfaffian::new(y.m(), params);
    p.check(y.m(), f)?;
    p.set_point(y.coords());
    Ok(p.r(i, j.0, f.values()))
}

/// Table of `yᵢ ∂ᵢ² ∂_J F` for all `i ∉ J`, as `(J, i) ↦ table[J·m + i]`
/// (entries with `i ∈ J` are zero).
pub fn second_derivs_table(
    y: &EvaluationPoint,
    params: HypParams,
    f: &DerivVector,
) -> Result<Vec<f64>> {
    let mut p = Pfaffian::new(y.m(), params);
    p.load(y, f)?;
    Ok(p.table)
}

/// `Pᵢ(y) F`.
pub fn apply_pfaffian(
    i: usize,
    y: &EvaluationPoint,
    params: HypParams,
    f: &DerivVector,
) -> Result<DerivVector> {
    if i >= y.m() {
        return Err(Error::OutOfRange {
            name: "i",
            value: i as f64,
        });
    }
    let mut p = Pfaffian::new(y.m(), params);
    p.load(y, f)?;
    let values = (0..f.len()).map(|j| p.applied(i, j, f.values())).collect();
    DerivVector::new(y.m(), values)
}

/// Dense `Pᵢ(y)` assembled column by column from unit vectors; row-major.
pub fn pfaffian_matrix(i: usize, y: &EvaluationPoint, params: HypParams) -> Result<Vec<Vec<f64>>> {
    let m = y.m();
    let n = 1usize << m;
    let mut rows = vec![vec![0.0; n]; n];
    for col in 0..n {
        let e = DerivVector::unit(m, SubsetIndex(col));
        let out = apply_pfaffian(i, y, params, &e)?;
        for (row, v) in out.values().iter().enumerate() {
            rows[row][col] = *v;
        }
    }
    Ok(rows)
}

/// Radial right-hand side `dG/dx` for the scaled vector
/// `G(x) = e^{−xΣβ} x^{mn/2} F⃗(βx)`.
pub fn g_rhs(
    x: f64,
    g: &DerivVector,
    beta: &[f64],
    n: f64,
    params: HypParams,
) -> Result<DerivVector> {
    let m = beta.len();
    if !(x > 0.0) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
        });
    }
    let point: Vec<f64> = beta.iter().map(|b| b * x).collect();
    check_regular(&point, DEFAULT_TIE_EPS)?;
    let mut p = Pfaffian::new(m, params);
    p.check(m, g)?;
    let mut out = vec![0.0; g.len()];
    p.g_rhs_into(x, g.values(), beta, m as f64 * n / 2.0, &mut out);
    DerivVector::new(m, out)
}

/// Diagonal of the limiting matrix `A₀` (which is upper triangular):
/// entry `I` is `−Σ_{i∉I} βᵢ`.
pub fn a0_spectrum(beta: &[f64]) -> Vec<f64> {
    let m = beta.len();
    (0..1usize << m)
        .map(|mask| {
            -(0..m)
                .filter(|i| mask >> i & 1 == 0)
                .map(|i| beta[i])
                .sum::<f64>()
        })
        .collect()
}

/// The radial system `dG/dx = P_β(x) G` packaged for the integrator.
#[derive(Debug, Clone)]
pub struct RadialSystem {
    pfaffian: Pfaffian,
    beta: Vec<f64>,
    mn_half: f64,
}

impl RadialSystem {
    pub fn new(beta: &[f64], n: f64, params: HypParams, tie_eps: f64) -> Result<Self> {
        check_regular(beta, tie_eps)?;
        Ok(RadialSystem {
            pfaffian: Pfaffian::new(beta.len(), params),
            beta: beta.to_vec(),
            mn_half: beta.len() as f64 * n / 2.0,
        })
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        1 << self.beta.len()
    }

    /// `dG/dx` at `x > 0`.
    pub fn eval(&mut self, x: f64, g: &[f64], out: &mut [f64]) {
        let beta = core::mem::take(&mut self.beta);
        self.pfaffian.g_rhs_into(x, g, &beta, self.mn_half, out);
        self.beta = beta;
    }
}
