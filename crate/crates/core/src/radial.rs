//! `₁F₁` at an arbitrary point of the non-diagonal region by transporting
//! the series-initialized derivative vector along the ray `t ↦ t·y`, and
//! limits onto the diagonal by extrapolating symmetric perturbations.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, exp};
use crate::ode::{integrate, IntegrationPlan, Method};
use crate::pfaffian::{check_regular, DerivVector, RadialSystem, DEFAULT_TIE_EPS};
use crate::series::{HypParams, Series};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    /// Series initialization happens at `t₀·y` with `max|t₀yᵢ| = start_radius`.
    pub start_radius: f64,
    pub method: Method,
    /// Step in `t` for fixed-step methods; initial step otherwise.
    pub step: f64,
    pub rel_tol: f64,
    /// Relative size of the last series block kept at the start point.
    pub series_tol: f64,
    pub block_budget: usize,
    pub tie_eps: f64,
}

impl Default for RadialOptions {
    fn default() -> Self {
        RadialOptions {
            start_radius: 0.05,
            method: Method::Rk4Adaptive,
            step: 1e-3,
            rel_tol: 1e-12,
            series_tol: 1e-16,
            block_budget: 600,
            tie_eps: DEFAULT_TIE_EPS,
        }
    }
}

/// `F⃗(y)`, all square-free derivatives, at a point with nonzero, pairwise
/// distinct coordinates.
pub fn hgm_vector(params: HypParams, y: &[f64], opts: &RadialOptions) -> Result<DerivVector> {
    check_regular(y, opts.tie_eps)?;
    let m = y.len();
    let r = y.iter().fold(0.0f64, |acc, v| acc.max(abs(*v)));
    let t0 = opts.start_radius / r;
    if t0 >= 1.0 {
        let s = Series::with_auto_degree(params, m, y, opts.series_tol, opts.block_budget)?;
        return s.squarefree_derivatives(y);
    }
    let y0: Vec<f64> = y.iter().map(|v| v * t0).collect();
    let s = Series::with_auto_degree(params, m, &y0, opts.series_tol, opts.block_budget)?;
    let total: f64 = y.iter().sum();
    // H(t) = e^{−tΣy} F⃗(ty) keeps the state of moderate size
    let scale0 = exp(-t0 * total);
    let h0: Vec<f64> = s
        .squarefree_derivatives(&y0)?
        .values()
        .iter()
        .map(|v| v * scale0)
        .collect();
    let mut system = RadialSystem::new(y, 0.0, params, opts.tie_eps)?;
    let plan = match opts.method {
        Method::Rk4Adaptive => {
            IntegrationPlan::adaptive(t0, 1.0, opts.rel_tol, opts.step.min(0.1 * t0))?
        }
        method => IntegrationPlan::fixed(method, t0, 1.0, opts.step)?,
    };
    let h1 = integrate(|t, v, out| system.eval(t, v, out), &h0, &plan)?;
    let scale1 = exp(total);
    DerivVector::new(m, h1.into_iter().map(|v| v * scale1).collect())
}

/// `₁F₁(a; c; y)` through [`hgm_vector`].
pub fn hyp1f1_hgm(params: HypParams, y: &[f64], opts: &RadialOptions) -> Result<f64> {
    Ok(hgm_vector(params, y, opts)?.values()[0])
}

/// Value at `h = 0` of the polynomial through the points `(hⱼ, fⱼ)`
/// (Neville's scheme).
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let h: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut p: Vec<f64> = points.iter().map(|p| p.1).collect();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (h[i], h[i + level]);
            p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
        }
    }
    p.first().copied().unwrap_or(f64::NAN)
}

/// Offsets `(j − (g−1)/2)` that spread each run of tied values of the sorted
/// slice `v` symmetrically; zero for values that are not tied.
pub fn centered_offsets(v: &[f64], eps: f64) -> Vec<f64> {
    let scale = v.iter().fold(0.0f64, |acc, x| acc.max(abs(*x)));
    let mut out = vec![0.0; v.len()];
    let mut start = 0;
    while start < v.len() {
        let mut end = start + 1;
        while end < v.len() && abs(v[end] - v[start]) <= eps * scale {
            end += 1;
        }
        let g = end - start;
        for (j, o) in out[start..end].iter_mut().enumerate() {
            *o = j as f64 - (g as f64 - 1.0) / 2.0;
        }
        start = end;
    }
    out
}

/// Limit `δ → 0` of `f(δ)` for a function known to be even in `δ`, from
/// `levels` evaluations at `δ₀, δ₀/2, …`.
pub fn extrapolate_even<F>(delta0: f64, levels: usize, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if levels == 0 || !(delta0 > 0.0) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta0,
        });
    }
    let mut pts = Vec::with_capacity(levels);
    let mut d = delta0;
    for _ in 0..levels {
        pts.push((d * d, f(d)?));
        d *= 0.5;
    }
    Ok(extrapolate_to_zero(&pts))
}

/// `₁F₁(a; c; y·I_m)` as the limit of `₁F₁` at the spread points
/// `y·(1 + (i − (m+1)/2)δ)`, which is even in `δ`.
pub fn hyp1f1_near_diagonal(
    params: HypParams,
    y: f64,
    m: usize,
    delta0: f64,
    levels: usize,
    opts: &RadialOptions,
) -> Result<f64> {
    if m == 1 {
        return hyp1f1_hgm(params, &[y], opts);
    }
    let offsets = centered_offsets(&vec![y; m], opts.tie_eps);
    extrapolate_even(delta0, levels, |d| {
        let pt: Vec<f64> = offsets.iter().map(|o| y * (1.0 + o * d)).collect();
        hyp1f1_hgm(params, &pt, opts)
    })
}
