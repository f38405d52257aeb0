//! Distribution of the largest eigenvalue `ℓ₁` of a real Wishart matrix
//! `W ~ W_m(n, Σ)` with diagonal `Σ`:
//!
//! `Pr[ℓ₁ < x] = C e^{−xΣβᵢ} x^{mn/2} ₁F₁((m+1)/2; (n+m+1)/2; βx)`,
//! `β = diag(Σ⁻¹)/2`, `C = Γ_m((m+1)/2) / Γ_m((n+m+1)/2) · ∏ βᵢ^{n/2}`.
//!
//! A non-diagonal `Σ` has to be diagonalized by the caller; only its
//! eigenvalues matter.

use alloc::vec;
use alloc::vec::Vec;

use log::warn;

use crate::diagonal;
use crate::math::{exp, ln, ln_gamma};
use crate::ode::{integrate_with_trace, IntegrationPlan, Method};
use crate::pfaffian::{check_distinct, DerivVector, RadialSystem, DEFAULT_TIE_EPS};
use crate::radial::{centered_offsets, extrapolate_to_zero};
use crate::series::{linear_initial, HypParams, InitialMode, Series, TruncationConfig};
use crate::special::chi2_cdf;
use crate::{Error, Result};

/// Ratio between successive spread levels of a tie group.
pub const SPREAD_RATIO: f64 = 0.75;

/// What to do when two `βᵢ` coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Diagonal ODE when all `β` are equal and `m ≤ 3`; otherwise spread the
    /// tied values symmetrically and extrapolate the spread to zero.
    #[default]
    Perturb,
    /// Diagonal ODE only; anything else is an error.
    Diagonal,
    Error,
}

/// Numerical knobs of the CDF evaluation. `None` fields get defaults that
/// depend on the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HgmConfig {
    /// Series truncation degree `K` at the start point.
    pub degree: Option<usize>,
    /// Start of the radial integration.
    pub x0: Option<f64>,
    /// Fixed step (or initial step in adaptive mode).
    pub step: Option<f64>,
    pub method: Method,
    /// Local tolerance for [`Method::Rk4Adaptive`].
    pub rel_tol: f64,
    pub tie_policy: TiePolicy,
    /// Relative separation below which two `β` count as tied.
    pub tie_eps: f64,
    pub initial_mode: InitialMode,
    /// Automatic `K`: stop once a degree block is this small relative to the sum.
    pub series_tol: f64,
    /// Automatic `K`: never include a block with more partitions than this.
    pub block_budget: usize,
    /// Largest relative displacement of a tied `β` at the coarsest level.
    pub spread: f64,
    /// Number of spread levels used by the extrapolation, each
    /// [`SPREAD_RATIO`] times the previous one.
    pub spread_levels: usize,
    /// Quantile search gives up beyond this `x`.
    pub max_x: f64,
    /// Quantile search stops once `|cdf − p|` is below this and the bracket
    /// is tight.
    pub tol_p: f64,
}

impl Default for HgmConfig {
    fn default() -> Self {
        HgmConfig {
            degree: None,
            x0: None,
            step: None,
            method: Method::Rk4,
            rel_tol: 1e-10,
            tie_policy: TiePolicy::Perturb,
            tie_eps: DEFAULT_TIE_EPS,
            initial_mode: InitialMode::Series,
            series_tol: 1e-13,
            block_budget: 600,
            spread: 0.4,
            spread_levels: 6,
            max_x: 1e6,
            tol_p: 1e-7,
        }
    }
}

impl HgmConfig {
    /// `max(0.01, 0.002·m²)` unless set.
    pub fn x0_for(&self, m: usize) -> f64 {
        self.x0
            .unwrap_or_else(|| (0.002 * (m * m) as f64).max(0.01))
    }

    /// `min(0.5/Σβ, (x_max − x₀)/10⁴, x₀/100)` unless set. The last term
    /// resolves the `1/x` coefficients next to the start point.
    pub fn step_for(&self, prob: &WishartProblem, x_max: f64) -> f64 {
        self.step.unwrap_or_else(|| {
            let x0 = self.x0_for(prob.m());
            let span = (x_max - x0).abs().max(1e-12);
            (0.5 / prob.beta_sum()).min(span / 1e4).min(x0 / 100.0)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("x0", self.x0.unwrap_or(1.0)),
            ("step", self.step.unwrap_or(1.0)),
            ("rel_tol", self.rel_tol),
            ("tie_eps", self.tie_eps),
            ("series_tol", self.series_tol),
            ("spread", self.spread),
            ("max_x", self.max_x),
            ("tol_p", self.tol_p),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::OutOfRange { name, value });
            }
        }
        if self.degree == Some(0) {
            return Err(Error::OutOfRange {
                name: "degree",
                value: 0.0,
            });
        }
        if self.spread_levels == 0 {
            return Err(Error::OutOfRange {
                name: "spread_levels",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Dimension, degrees of freedom and `β = diag(Σ⁻¹)/2` (kept ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct WishartProblem {
    n: f64,
    beta: Vec<f64>,
}

impl WishartProblem {
    pub fn new(n: f64, beta: &[f64]) -> Result<Self> {
        let m = beta.len();
        if m == 0 {
            return Err(Error::OutOfRange {
                name: "m",
                value: 0.0,
            });
        }
        if let Some(&b) = beta.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
            return Err(Error::OutOfRange {
                name: "beta",
                value: b,
            });
        }
        if !(n > m as f64 - 1.0) || !n.is_finite() {
            return Err(Error::OutOfRange {
                name: "n",
                value: n,
            });
        }
        let mut beta = beta.to_vec();
        beta.sort_by(|a, b| a.total_cmp(b));
        Ok(WishartProblem { n, beta })
    }

    /// From the variances `σᵢ² = Σᵢᵢ`.
    pub fn from_sigma(n: f64, sigma: &[f64]) -> Result<Self> {
        if let Some(&s) = sigma.iter().find(|s| !(**s > 0.0)) {
            return Err(Error::OutOfRange {
                name: "sigma",
                value: s,
            });
        }
        let beta: Vec<f64> = sigma.iter().map(|s| 0.5 / s).collect();
        Self::new(n, &beta)
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn beta_sum(&self) -> f64 {
        self.beta.iter().sum()
    }

    pub fn beta_min(&self) -> f64 {
        self.beta[0]
    }

    /// `a = (m+1)/2`, `c = (n+m+1)/2`.
    pub fn params(&self) -> HypParams {
        let m = self.m() as f64;
        HypParams {
            a: (m + 1.0) / 2.0,
            c: (self.n + m + 1.0) / 2.0,
        }
    }

    /// `ln C`.
    pub fn ln_constant(&self) -> Result<f64> {
        let p = self.params();
        let m = self.m();
        let ln_det: f64 = self.beta.iter().map(|b| ln(*b)).sum();
        Ok(multivariate_gamma_ln(m, p.a)? - multivariate_gamma_ln(m, p.c)? + self.n / 2.0 * ln_det)
    }

    /// `ln(C e^{−xΣβ} x^{mn/2})`, the factor in front of `₁F₁`.
    pub fn ln_prefactor(&self, x: f64) -> Result<f64> {
        Ok(self.ln_constant()? - x * self.beta_sum() + self.m() as f64 * self.n / 2.0 * ln(x))
    }

    /// Same problem with every `βᵢ` replaced by `min β`: the stochastically
    /// largest comparison problem with `Σ = σ₁² I`.
    pub fn equal_beta(&self) -> Self {
        WishartProblem {
            n: self.n,
            beta: vec![self.beta_min(); self.m()],
        }
    }

    fn with_beta(&self, beta: Vec<f64>) -> Self {
        WishartProblem { n: self.n, beta }
    }
}

/// `ln Γ_m(a) = m(m−1)/4 · ln π + Σᵢ ln Γ(a − (i−1)/2)`.
pub fn multivariate_gamma_ln(m: usize, a: f64) -> Result<f64> {
    let mut total = (m * m.saturating_sub(1)) as f64 / 4.0 * ln(core::f64::consts::PI);
    for i in 0..m {
        let arg = a - i as f64 / 2.0;
        if arg <= 0.0 && arg == libm::floor(arg) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
            });
        }
        total += ln_gamma(arg);
    }
    Ok(total)
}

fn check_grid(xs: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &x in xs {
        if !(x > 0.0) || !x.is_finite() || x < prev {
            return Err(Error::OutOfRange {
                name: "x",
                value: x,
            });
        }
        prev = x;
    }
    Ok(())
}

fn clamp_probability(x: f64, p: f64) -> f64 {
    if !(-1e-4..=1.0 + 1e-4).contains(&p) {
        warn!("probability {p} at x = {x} is outside [0, 1]; try a smaller step or a larger K");
    }
    p.clamp(0.0, 1.0)
}

/// Radial integration for pairwise distinct `β`; unclamped values.
fn curve_distinct(
    xs: &[f64],
    prob: &WishartProblem,
    cfg: &HgmConfig,
    step: f64,
    series: Option<&Series>,
) -> Result<Vec<f64>> {
    let m = prob.m();
    let params = prob.params();
    let beta = prob.beta();
    let x0 = cfg.x0_for(m);
    let x_max = xs.last().copied().unwrap_or(x0);
    let y0: Vec<f64> = beta.iter().map(|b| b * x0).collect();
    check_distinct(&y0, cfg.tie_eps)?;
    let owned;
    let series = match series {
        Some(s) => s,
        None => {
            owned = start_series(prob, cfg, &y0)?;
            &owned
        }
    };
    let f0 = match cfg.initial_mode {
        InitialMode::Series => series.squarefree_derivatives(&y0)?,
        InitialMode::Linear => linear_initial(params, &y0)?,
    };
    let scale0 = exp(prob.ln_prefactor(x0)?);
    let g0: Vec<f64> = f0.values().iter().map(|v| v * scale0).collect();

    let mut out = Vec::with_capacity(xs.len());
    let split = xs.iter().position(|&x| x > x0).unwrap_or(xs.len());
    for &x in &xs[..split] {
        let y: Vec<f64> = beta.iter().map(|b| b * x).collect();
        out.push(exp(prob.ln_prefactor(x)?) * series.value(&y)?);
    }
    if split == xs.len() {
        return Ok(out);
    }
    if step * prob.beta_sum() > 1.0 {
        warn!(
            "step {step} times sum of beta is {:.3}; the explicit integrator may be unstable",
            step * prob.beta_sum()
        );
    }
    let plan = match cfg.method {
        Method::Rk4Adaptive => IntegrationPlan::adaptive(x0, x_max, cfg.rel_tol, step)?,
        method => IntegrationPlan::fixed(method, x0, x_max, step)?,
    };
    let mut system = RadialSystem::new(beta, prob.n(), params, cfg.tie_eps)?;
    let trace = integrate_with_trace(|x, g, d| system.eval(x, g, d), &g0, &plan, &xs[split..])?;
    out.extend(trace.into_iter().map(|(_, g)| g[0]));
    Ok(out)
}

fn start_series(prob: &WishartProblem, cfg: &HgmConfig, y0: &[f64]) -> Result<Series> {
    let params = prob.params();
    match cfg.degree {
        Some(k) => Series::new(params, TruncationConfig::new(k, prob.m())?),
        None => Series::with_auto_degree(params, prob.m(), y0, cfg.series_tol, cfg.block_budget),
    }
}

fn logit(p: f64) -> f64 {
    ln(p / (1.0 - p))
}

/// Diagonal-ODE route for `β = β₀·(1, …, 1)`, `m ∈ {2, 3}`.
fn curve_diagonal(xs: &[f64], prob: &WishartProblem) -> Result<Vec<f64>> {
    let m = prob.m();
    let b = prob.beta_min();
    let params = prob.params();
    xs.iter()
        .map(|&x| {
            let y = b * x;
            let ln_f = if y <= diagonal::DEFAULT_Y0 {
                ln(diagonal::series_state(params, m, y, 1, 40)?[0])
            } else {
                diagonal::ln_hyp1f1_diagonal(params, y, m, &diagonal::default_plan(y)?)?
            };
            Ok(exp(prob.ln_prefactor(x)? + ln_f))
        })
        .collect()
}

/// Tied `β`: symmetric spread of each tie group, extrapolated to zero
/// spread. The CDF is even in the spread parameter; the extrapolation runs
/// on its logit, which varies far more slowly than the tail itself.
fn curve_spread(xs: &[f64], prob: &WishartProblem, cfg: &HgmConfig, step: f64) -> Result<Vec<f64>> {
    let beta = prob.beta();
    let offsets = centered_offsets(beta, cfg.tie_eps);
    let widest = offsets.iter().fold(0.0f64, |acc, o| acc.max(o.abs()));
    // keep spread groups clear of their neighbours
    let mut room = f64::INFINITY;
    for w in beta.windows(2) {
        let gap = (w[1] - w[0]) / w[1];
        if gap > cfg.tie_eps {
            room = room.min(0.25 * gap);
        }
    }
    let delta0 = cfg.spread.min(room).min(0.5) / widest;
    warn!(
        "tied beta values: extrapolating {} symmetric spreads down from {:.3e}",
        cfg.spread_levels,
        delta0 * widest
    );
    let spread_at = |d: f64| {
        prob.with_beta(
            beta.iter()
                .zip(&offsets)
                .map(|(b, o)| b * (1.0 + o * d))
                .collect(),
        )
    };
    // the coefficients do not depend on β: one series serves every level
    let coarse = spread_at(delta0);
    let x0 = cfg.x0_for(prob.m());
    let y0: Vec<f64> = coarse.beta().iter().map(|b| b * x0).collect();
    let series = start_series(prob, cfg, &y0)?;
    let mut columns: Vec<(f64, Vec<f64>)> = Vec::with_capacity(cfg.spread_levels);
    let mut d = delta0;
    for _ in 0..cfg.spread_levels {
        columns.push((
            d * d,
            curve_distinct(xs, &spread_at(d), cfg, step, Some(&series))?,
        ));
        d *= SPREAD_RATIO;
    }
    Ok((0..xs.len())
        .map(|i| {
            let open = columns.iter().all(|(_, v)| v[i] > 0.0 && v[i] < 1.0);
            if open {
                let pts: Vec<(f64, f64)> = columns.iter().map(|(h, v)| (*h, logit(v[i]))).collect();
                1.0 / (1.0 + exp(-extrapolate_to_zero(&pts)))
            } else {
                let pts: Vec<(f64, f64)> = columns.iter().map(|(h, v)| (*h, v[i])).collect();
                extrapolate_to_zero(&pts)
            }
        })
        .collect())
}

fn all_equal(beta: &[f64], eps: f64) -> bool {
    let hi = beta[beta.len() - 1];
    (hi - beta[0]) <= eps * hi
}

/// Unclamped `Pr[ℓ₁ < x]` on an ascending grid, in one integration pass.
pub fn cdf_curve_raw(xs: &[f64], prob: &WishartProblem, cfg: &HgmConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_grid(xs)?;
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let x_max = xs[xs.len() - 1];
    let step = cfg.step_for(prob, x_max);
    let m = prob.m();
    let tied = check_distinct(prob.beta(), cfg.tie_eps);
    match (tied, cfg.tie_policy) {
        (Ok(()), _) => curve_distinct(xs, prob, cfg, step, None),
        (Err(e), TiePolicy::Error) => Err(e),
        (Err(e), TiePolicy::Diagonal) => {
            if (m == 2 || m == 3) && all_equal(prob.beta(), cfg.tie_eps) {
                curve_diagonal(xs, prob)
            } else if m > 3 {
                Err(Error::UnsupportedDimension { m })
            } else {
                Err(e)
            }
        }
        (Err(_), TiePolicy::Perturb) => {
            if (m == 2 || m == 3) && all_equal(prob.beta(), cfg.tie_eps) {
                curve_diagonal(xs, prob)
            } else {
                curve_spread(xs, prob, cfg, step)
            }
        }
    }
}

/// `Pr[ℓ₁ < x]` on an ascending grid, clamped to `[0, 1]`.
pub fn cdf_curve(xs: &[f64], prob: &WishartProblem, cfg: &HgmConfig) -> Result<Vec<f64>> {
    let raw = cdf_curve_raw(xs, prob, cfg)?;
    Ok(xs
        .iter()
        .zip(raw)
        .map(|(&x, p)| clamp_probability(x, p))
        .collect())
}

/// `Pr[ℓ₁ < x]`, clamped to `[0, 1]`.
pub fn cdf_largest_root(x: f64, prob: &WishartProblem, cfg: &HgmConfig) -> Result<f64> {
    Ok(cdf_curve(&[x], prob, cfg)?[0])
}

/// Unclamped `Pr[ℓ₁ < x]`.
pub fn cdf_largest_root_raw(x: f64, prob: &WishartProblem, cfg: &HgmConfig) -> Result<f64> {
    Ok(cdf_curve_raw(&[x], prob, cfg)?[0])
}

/// Stochastic-ordering bounds `(lower, upper)` on `Pr[ℓ₁ < x]`: the upper one
/// is the χ²_n CDF at `x/σ₁²`, the lower one the CDF for `Σ = σ₁² I_m`,
/// with `σ₁² = 1/(2 min β)` the largest variance.
///
/// The lower bound ignores the integration settings of `cfg` (only
/// `tie_eps` and `max_x` carry over): the equal-`β` problem needs the
/// adaptive integrator and a start point further out, see
/// [`lower_bound_config`].
pub fn bounds(x: f64, prob: &WishartProblem, cfg: &HgmConfig) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
        });
    }
    let upper = chi2_cdf(2.0 * prob.beta_min() * x, prob.n());
    let equal = prob.equal_beta();
    let lower = cdf_largest_root(x, &equal, &lower_bound_config(&equal, cfg))?;
    Ok((lower, upper))
}

/// Settings used for the equal-`β` lower bound: adaptive RK4 at tolerance
/// `1e-9`, start at `β x₀ = 0.08 m`, automatic `K` to `1e-15`.
pub fn lower_bound_config(equal: &WishartProblem, cfg: &HgmConfig) -> HgmConfig {
    let m = equal.m() as f64;
    HgmConfig {
        x0: Some(0.08 * m / equal.beta_min()),
        method: Method::Rk4Adaptive,
        rel_tol: 1e-9,
        step: None,
        degree: None,
        series_tol: 1e-15,
        block_budget: 20_000,
        tie_policy: TiePolicy::Perturb,
        tie_eps: cfg.tie_eps,
        max_x: cfg.max_x,
        ..HgmConfig::default()
    }
}

/// `x` with `Pr[ℓ₁ < x] = p`, by bisection. The lower end of the bracket is
/// the point where the χ² upper bound equals `p`.
pub fn quantile(p: f64, prob: &WishartProblem, cfg: &HgmConfig) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
        });
    }
    let x_lo0 = crate::special::chi2_quantile(p, prob.n())? / (2.0 * prob.beta_min());
    let failed = Error::BracketFailed {
        p,
        max_x: cfg.max_x,
    };
    let mut lo = x_lo0;
    if lo >= cfg.max_x {
        return Err(failed);
    }
    let mut hi = (2.0 * lo).min(cfg.max_x);
    while cdf_largest_root(hi, prob, cfg)? < p {
        if hi >= cfg.max_x {
            return Err(failed);
        }
        lo = hi;
        hi = (2.0 * hi).min(cfg.max_x);
    }
    // one step size for the whole search keeps the probe CDF monotone
    let cfg = HgmConfig {
        step: Some(cfg.step_for(prob, hi)),
        ..*cfg
    };
    let mut f_lo = cdf_largest_root_raw(lo, prob, &cfg)?;
    let mut f_hi = cdf_largest_root_raw(hi, prob, &cfg)?;
    if f_lo > p {
        // the bound guarantees f(lo) ≤ p up to integration error
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = cdf_largest_root_raw(mid, prob, &cfg)?;
        if f < p {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
            f_hi = f;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    let x = if (p - f_lo).abs() < (f_hi - p).abs() {
        lo
    } else {
        hi
    };
    let err = (p - f_lo).abs().min((f_hi - p).abs());
    if err > cfg.tol_p {
        warn!("quantile search stalled at |cdf - p| = {err:e}");
    }
    Ok(x)
}

/// `Pr[ℓ₁ < x]` from the truncated series alone, for cross-checks.
#[derive(Debug, Clone)]
pub struct SeriesCdf {
    prob: WishartProblem,
    series: Series,
}

impl SeriesCdf {
    pub fn new(prob: &WishartProblem, degree: usize) -> Result<Self> {
        let series = Series::new(prob.params(), TruncationConfig::new(degree, prob.m())?)?;
        Ok(SeriesCdf {
            prob: prob.clone(),
            series,
        })
    }

    pub fn degree(&self) -> usize {
        self.series.degree()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::OutOfRange {
                name: "x",
                value: x,
            });
        }
        let y: Vec<f64> = self.prob.beta().iter().map(|b| b * x).collect();
        let blocks = self.series.block_sums(&y)?;
        Ok(exp(self.prob.ln_prefactor(x)?) * blocks.iter().sum::<f64>())
    }
}

/// `|e^{−Σy} ₁F₁(a; c; y) − ₁F₁(c−a; c; −y)|` with both sides summed to
/// degree `degree`.
pub fn kummer_check(params: HypParams, y: &[f64], degree: usize) -> Result<f64> {
    let cfg = TruncationConfig::new(degree, y.len())?;
    let lhs = exp(-y.iter().sum::<f64>()) * Series::new(params, cfg)?.value(y)?;
    let dual = HypParams::new(params.c - params.a, params.c)?;
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let rhs = Series::new(dual, cfg)?.value(&neg)?;
    Ok((lhs - rhs).abs())
}

/// Initial scaled vector `G(x₀)` used by [`cdf_largest_root`], for
/// inspection and testing.
pub fn initial_vector(prob: &WishartProblem, cfg: &HgmConfig) -> Result<DerivVector> {
    let m = prob.m();
    let x0 = cfg.x0_for(m);
    let params = prob.params();
    let y0: Vec<f64> = prob.beta().iter().map(|b| b * x0).collect();
    check_distinct(&y0, cfg.tie_eps)?;
    let f0 = match (cfg.initial_mode, cfg.degree) {
        (InitialMode::Linear, _) => linear_initial(params, &y0)?,
        (InitialMode::Series, Some(k)) => {
            Series::new(params, TruncationConfig::new(k, m)?)?.squarefree_derivatives(&y0)?
        }
        (InitialMode::Series, None) => {
            Series::with_auto_degree(params, m, &y0, cfg.series_tol, cfg.block_budget)?
                .squarefree_derivatives(&y0)?
        }
    };
    let scale = exp(prob.ln_prefactor(x0)?);
    DerivVector::new(m, f0.values().iter().map(|v| v * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multivariate_gamma_examples() {
        let pi = core::f64::consts::PI;
        assert!((multivariate_gamma_ln(1, 3.3).unwrap() - libm::lgamma(3.3)).abs() < 1e-14);
        assert!((multivariate_gamma_ln(2, 2.0).unwrap() - ln(pi / 2.0)).abs() < 1e-14);
        for m in 2..=5 {
            for a in [2.7, 4.1] {
                let lhs = multivariate_gamma_ln(m, a).unwrap();
                let rhs = (m - 1) as f64 / 2.0 * ln(pi)
                    + libm::lgamma(a)
                    + multivariate_gamma_ln(m - 1, a - 0.5).unwrap();
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
        assert!(multivariate_gamma_ln(3, 1.0).is_err());
    }

    #[test]
    fn problem_validation() {
        assert!(WishartProblem::new(3.0, &[]).is_err());
        assert!(WishartProblem::new(3.0, &[1.0, -2.0]).is_err());
        assert!(WishartProblem::new(0.5, &[1.0, 2.0]).is_err());
        let p = WishartProblem::new(3.0, &[2.0, 1.0]).unwrap();
        assert_eq!(p.beta(), &[1.0, 2.0]);
        let q = WishartProblem::from_sigma(3.0, &[0.5, 0.25]).unwrap();
        assert_eq!(q.beta(), &[1.0, 2.0]);
        assert_eq!(p.params(), HypParams { a: 1.5, c: 3.0 });
    }

    #[test]
    fn one_dimensional_case_is_chi_square() {
        // m = 1: ℓ₁ = σ²χ²_n
        let prob = WishartProblem::new(5.0, &[0.7]).unwrap();
        let cfg = HgmConfig::default();
        for x in [0.5, 3.0, 9.0] {
            let got = cdf_largest_root(x, &prob, &cfg).unwrap();
            let want = chi2_cdf(2.0 * 0.7 * x, 5.0);
            assert!((got - want).abs() < 1e-8, "{x}: {got} vs {want}");
        }
    }

    #[test]
    fn kummer_trivial_cases() {
        let prm = HypParams::new(1.2, 3.1).unwrap();
        assert_eq!(kummer_check(prm, &[0.0, 0.0], 10).unwrap(), 0.0);
        let same = HypParams::new(2.0, 2.0).unwrap();
        assert!(kummer_check(same, &[0.4], 40).unwrap() < 1e-15);
    }
}
