//! `f(y) = ₁F₁(a; c; y·I_m)` on the diagonal line from the ordinary
//! differential equations satisfied by the restriction, for `m = 2` (third
//! order) and `m = 3` (fourth order).

use alloc::vec::Vec;

use crate::math::{abs, ln, powi};
use crate::ode::{integrate, IntegrationPlan, Method};
use crate::series::{HypParams, Series, TruncationConfig};
use crate::{Error, Result};

/// Default start of the integration; the ODEs have a regular singular point
/// at the origin.
pub const DEFAULT_Y0: f64 = 1e-2;

fn check_y(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "y",
            value: y,
        })
    }
}

/// `(h₀, h₁, h₂)` with `f‴ = h₂f″ + h₁f′ + h₀f` for `m = 2`.
pub fn m2_coefficients(params: HypParams, y: f64) -> Result<[f64; 3]> {
    check_y(y)?;
    let HypParams { a, c } = params;
    let h2 = -3.0 * (c - 1.0 - y) / y - 2.0 / y;
    let h1 = 4.0 * a / y - 2.0 * (c - y) * (c - 1.0 - y) / (y * y);
    let h0 = 4.0 * a * (c - 1.0 - y) / (y * y);
    Ok([h0, h1, h2])
}

/// Polynomial coefficients `[p₀, …, p₄]` of
/// `Σ pⱼ(y) f⁽ʲ⁾(y) = 0` for `m = 3` (`p₄ = y³`).
pub fn m3_polynomials(params: HypParams, y: f64) -> [f64; 5] {
    let HypParams { a, c } = params;
    let (y2, y3) = (y * y, y * y * y);
    let p4 = y3;
    let p3 = -6.0 * y3 + (6.0 * c - 4.0) * y2;
    let p2 = 11.0 * y3 + (-10.0 * a - 22.0 * c + 18.0) * y2 + (11.0 * c * c - 17.0 * c + 4.0) * y;
    let p1 = -6.0 * y3
        + (30.0 * a + 18.0 * c - 18.0) * y2
        + ((-30.0 * c + 34.0) * a - 18.0 * c * c + 34.0 * c - 12.0) * y
        + 6.0 * c * c * c
        - 16.0 * c * c
        + 10.0 * c;
    let p0 = -18.0 * a * y2
        + (9.0 * a * a + (36.0 * c - 51.0) * a) * y
        + (-18.0 * c * c + 48.0 * c - 30.0) * a;
    [p0, p1, p2, p3, p4]
}

/// Companion derivative of `(f, f′, f″)` for `m = 2`.
pub fn diag_rhs_m2(params: HypParams, y: f64, s: &[f64; 3]) -> Result<[f64; 3]> {
    let [h0, h1, h2] = m2_coefficients(params, y)?;
    Ok([s[1], s[2], h2 * s[2] + h1 * s[1] + h0 * s[0]])
}

/// Companion derivative of `(f, f′, f″, f‴)` for `m = 3`.
pub fn diag_rhs_m3(params: HypParams, y: f64, s: &[f64; 4]) -> Result<[f64; 4]> {
    check_y(y)?;
    let p = m3_polynomials(params, y);
    let f4 = -(p[3] * s[3] + p[2] * s[2] + p[1] * s[1] + p[0] * s[0]) / p[4];
    Ok([s[1], s[2], s[3], f4])
}

fn rhs_into(params: HypParams, m: usize, y: f64, s: &[f64], out: &mut [f64]) {
    if m == 2 {
        let [h0, h1, h2] = m2_coefficients(params, y).unwrap_or([f64::NAN; 3]);
        out[0] = s[1];
        out[1] = s[2];
        out[2] = h2 * s[2] + h1 * s[1] + h0 * s[0];
    } else {
        let p = m3_polynomials(params, y);
        out[0] = s[1];
        out[1] = s[2];
        out[2] = s[3];
        out[3] = -(p[3] * s[3] + p[2] * s[2] + p[1] * s[1] + p[0] * s[0]) / p[4];
    }
}

/// `f(y), f′(y), …` up to order `order − 1` from the series restricted to the
/// diagonal.
pub fn series_state(
    params: HypParams,
    m: usize,
    y: f64,
    order: usize,
    degree: usize,
) -> Result<Vec<f64>> {
    let s = Series::new(params, TruncationConfig::new(degree, m)?)?;
    let b = s.diagonal_coefficients();
    Ok((0..order)
        .map(|j| {
            (j..b.len())
                .map(|k| {
                    let ff: f64 = ((k - j + 1)..=k).map(|t| t as f64).product();
                    b[k] * ff * powi(y, (k - j) as i32)
                })
                .sum()
        })
        .collect())
}

/// Default plan: adaptive RK4 from [`DEFAULT_Y0`] to `y`.
pub fn default_plan(y: f64) -> Result<IntegrationPlan> {
    IntegrationPlan::adaptive(DEFAULT_Y0, y, 1e-12, DEFAULT_Y0 / 10.0)
}

/// `ln f(y)` for `f(y) = ₁F₁(a; c; y·I_m)`, `m ∈ {2, 3}`, integrating the
/// diagonal ODE over `plan.x_start → plan.x_end = y` in unit-length chunks
/// and renormalizing the state between chunks.
pub fn ln_hyp1f1_diagonal(
    params: HypParams,
    y: f64,
    m: usize,
    plan: &IntegrationPlan,
) -> Result<f64> {
    if m != 2 && m != 3 {
        return Err(Error::UnsupportedDimension { m });
    }
    check_y(y)?;
    let y0 = plan.x_start;
    check_y(y0)?;
    if abs(plan.x_end - y) > 1e-12 * y {
        return Err(Error::OutOfRange {
            name: "x_end",
            value: plan.x_end,
        });
    }
    let order = m + 1;
    // a generous degree: the start point is close to the origin
    let mut state = series_state(params, m, y0, order, 40)?;
    let mut ln_scale = 0.0;
    let mut x = y0;
    let dir = if y > y0 { 1.0 } else { -1.0 };
    while dir * (y - x) > 0.0 {
        let next = if abs(y - x) <= 1.0 { y } else { x + dir };
        let chunk = IntegrationPlan {
            x_start: x,
            x_end: next,
            ..*plan
        };
        state = integrate(|t, s, out| rhs_into(params, m, t, s, out), &state, &chunk)?;
        let norm = state.iter().fold(0.0f64, |acc, v| acc.max(abs(*v)));
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NonFinite { x: next });
        }
        for v in state.iter_mut() {
            *v /= norm;
        }
        ln_scale += ln(norm);
        x = next;
    }
    if !(state[0] > 0.0) {
        return Err(Error::NonFinite { x: y });
    }
    Ok(ln(state[0]) + ln_scale)
}

/// `₁F₁(a; c; y·I_m)` for `m ∈ {2, 3}`.
pub fn hyp1f1_diagonal(params: HypParams, y: f64, m: usize, plan: &IntegrationPlan) -> Result<f64> {
    Ok(libm::exp(ln_hyp1f1_diagonal(params, y, m, plan)?))
}

/// [`hyp1f1_diagonal`] with [`default_plan`]; values at or below the start
/// point come straight from the series.
pub fn hyp1f1_diagonal_auto(params: HypParams, y: f64, m: usize) -> Result<f64> {
    if m != 2 && m != 3 {
        return Err(Error::UnsupportedDimension { m });
    }
    if y <= DEFAULT_Y0 {
        if y < 0.0 {
            return Err(Error::OutOfRange {
                name: "y",
                value: y,
            });
        }
        return Ok(series_state(params, m, y, 1, 40)?[0]);
    }
    hyp1f1_diagonal(params, y, m, &default_plan(y)?)
}

/// Fixed-step RK4 variant of [`default_plan`].
pub fn fixed_plan(y0: f64, y: f64, step: f64) -> Result<IntegrationPlan> {
    IntegrationPlan::fixed(Method::Rk4, y0, y, step)
}
