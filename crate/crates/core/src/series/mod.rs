//! Truncated zonal-polynomial expansion of ₁F₁(a; c; Y) and its partial
//! derivatives near the origin.
//!
//! In the monomial basis the expansion reads
//! `₁F₁ = Σ_k Σ_{λ⊢k} q_λ(a,c) M_λ(y)` with
//! `q_λ = Σ_{κ ⊵ λ} (a)_κ c_{κ,λ} / ((c)_κ k!)`.
//! Everything the rest of the crate needs (values, square-free mixed
//! derivatives, derivatives along the diagonal) is a weighted sum of the
//! `q_λ` against products of powers of the coordinates, which [`Series`]
//! evaluates with a dynamic programme over the coordinates whose states are
//! the partitions of weight ≤ K with at most `m` parts.

mod monomial;
mod zonal;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

pub use monomial::monomial_symmetric;
pub use zonal::{zonal_to_monomial_coeffs, zonal_to_monomial_coeffs_exact, Coeff, ZonalCoeffTable};

use crate::math::{abs, powi};
use crate::partitions::{arrangements, partitions_of, pochhammer_ratio, Partition};
use crate::pfaffian::{check_distinct, DerivVector};
use crate::{Error, Result};

/// Largest truncation degree; `1/k!` underflows shortly after 170.
pub const MAX_DEGREE: usize = 160;

/// Upper and lower parameters `(a, c)` of ₁F₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: f64,
    pub c: f64,
}

impl HypParams {
    pub fn new(a: f64, c: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
            });
        }
        if !c.is_finite() {
            return Err(Error::OutOfRange {
                name: "c",
                value: c,
            });
        }
        Ok(HypParams { a, c })
    }

    /// Ensures `(c)_κ ≠ 0` for every `κ` with `|κ| ≤ degree` and at most
    /// `m` parts. The offending partition is the smallest rectangle that
    /// contains the vanishing factor.
    pub fn check_poles(&self, degree: usize, m: usize) -> Result<()> {
        for i in 0..m.min(degree) {
            let mut j = 0;
            while (i + 1) * (j + 1) <= degree {
                if abs(self.c - i as f64 / 2.0 + j as f64) < 1e-12 {
                    return Err(Error::Pole {
                        partition: Partition::rectangle(j + 1, i + 1),
                    });
                }
                j += 1;
            }
        }
        Ok(())
    }
}

/// Truncation degree `K` and dimension `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationConfig {
    pub degree: usize,
    pub m: usize,
}

impl TruncationConfig {
    pub fn new(degree: usize, m: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::OutOfRange {
                name: "degree",
                value: degree as f64,
            });
        }
        if m == 0 {
            return Err(Error::OutOfRange {
                name: "m",
                value: 0.0,
            });
        }
        Ok(TruncationConfig { degree, m })
    }
}

/// How initial derivative vectors are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialMode {
    /// Full truncated series.
    #[default]
    Series,
    /// First-order expansion around the origin; only adequate very close to it.
    Linear,
}

fn pole_guard(c: f64, kappa: &Partition) -> Result<()> {
    for (i, &k) in kappa.parts().iter().enumerate() {
        for j in 0..k {
            if abs(c - i as f64 / 2.0 + j as f64) < 1e-12 {
                return Err(Error::Pole {
                    partition: kappa.clone(),
                });
            }
        }
    }
    Ok(())
}

fn inv_factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc / j as f64)
}

/// Monomial-basis coefficient `q_λ(a, c)`.
pub fn q_coefficient(lambda: &Partition, params: HypParams) -> Result<f64> {
    let k = lambda.weight();
    // κ ⊵ λ has no more parts than λ
    let table = zonal_to_monomial_coeffs(k, lambda.len().max(1));
    let col = table.index_of(lambda).ok_or(Error::InvalidPartition)?;
    let scale = inv_factorial(k);
    let mut q = 0.0;
    for (r, kappa) in table.partitions().iter().enumerate() {
        let c = *table.get(r, col);
        if c == 0.0 {
            continue;
        }
        pole_guard(params.c, kappa)?;
        q += pochhammer_ratio(params.a, params.c, kappa) * c * scale;
    }
    Ok(q)
}

fn closed_form_weight(kappa: &Partition) -> f64 {
    let parts = kappa.parts();
    let l = parts.len();
    let mut num = 1.0;
    for i in 0..l {
        for j in i + 1..l {
            num *= (2 * parts[i]) as f64 - (2 * parts[j]) as f64 + (j as f64 - i as f64);
        }
    }
    let mut den = 1.0;
    for (i, &k) in parts.iter().enumerate() {
        for x in 1..=(2 * k + l - i - 1) {
            den *= x as f64;
        }
    }
    num / den
}

/// `q_{(1^k)}(a, c)` from its closed-form sum over `κ ⊢ k`.
pub fn q_ones_closed_form(k: usize, params: HypParams) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let mut pref = 1.0;
    for j in 1..=k {
        pref *= 2.0 * j as f64;
    }
    let mut sum = 0.0;
    for kappa in partitions_of(k, k) {
        pole_guard(params.c, &kappa)?;
        sum += closed_form_weight(&kappa) * pochhammer_ratio(params.a, params.c, &kappa);
    }
    Ok(pref * sum)
}

/// `q_{(2,1^{k−2})}(a, c)` from its closed-form sum over `κ ⊢ k`.
pub fn q_two_ones_closed_form(k: usize, params: HypParams) -> Result<f64> {
    if k < 2 {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
        });
    }
    let mut pref = powi(2.0, k as i32);
    for j in 1..=k - 2 {
        pref *= j as f64;
    }
    let pairs = (k * (k - 1) / 2) as f64;
    let mut sum = 0.0;
    for kappa in partitions_of(k, k) {
        pole_guard(params.c, &kappa)?;
        let content: f64 = kappa
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &ki)| ki as f64 * (ki as f64 - (i + 1) as f64))
            .sum();
        sum += closed_form_weight(&kappa)
            * (pairs + content)
            * pochhammer_ratio(params.a, params.c, &kappa);
    }
    Ok(pref * sum)
}

const NONE: u32 = u32::MAX;

/// Partitions of weight ≤ K with at most `m` parts, grouped by weight and in
/// reverse-lexicographic order inside each weight, with the transition
/// "insert a part of size e".
#[derive(Debug, Clone)]
struct StateSpace {
    degree: usize,
    m: usize,
    states: Vec<Partition>,
    weights: Vec<usize>,
    lens: Vec<usize>,
    block_start: Vec<usize>,
    /// `add[s * (K+1) + e]`: index of `μ_s ⊎ (e)`, or NONE.
    add: Vec<u32>,
}

impl StateSpace {
    fn new(degree: usize, m: usize) -> Self {
        let mut states = Vec::new();
        let mut block_start = Vec::with_capacity(degree + 2);
        for k in 0..=degree {
            block_start.push(states.len());
            states.extend(partitions_of(k, m));
        }
        block_start.push(states.len());
        let index: BTreeMap<&[usize], u32> = states
            .iter()
            .enumerate()
            .map(|(i, p)| (p.parts(), i as u32))
            .collect();
        let stride = degree + 1;
        let mut add = vec![NONE; states.len() * stride];
        for (s, p) in states.iter().enumerate() {
            if p.len() >= m {
                continue;
            }
            let w = p.weight();
            for e in 1..=degree - w {
                let mut parts = p.parts().to_vec();
                let pos = parts.iter().position(|&x| x < e).unwrap_or(parts.len());
                parts.insert(pos, e);
                add[s * stride + e] = index[parts.as_slice()];
            }
        }
        let weights = states.iter().map(|p| p.weight()).collect();
        let lens = states.iter().map(|p| p.len()).collect();
        StateSpace {
            degree,
            m,
            states,
            weights,
            lens,
            block_start,
            add,
        }
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    /// One coordinate of the dynamic programme: every state absorbs one more
    /// exponent `e`, weighted by `w[e]`.
    fn propagate(&self, input: &[f64], w: &[f64], output: &mut [f64]) {
        output.iter_mut().for_each(|v| *v = 0.0);
        let stride = self.degree + 1;
        let w0 = w[0];
        for (s, &v) in input.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            if w0 != 0.0 {
                output[s] += v * w0;
            }
            if self.lens[s] >= self.m {
                continue;
            }
            let row = &self.add[s * stride..(s + 1) * stride];
            let top = self.degree - self.weights[s];
            for e in 1..=top {
                output[row[e] as usize] += v * w[e];
            }
        }
    }
}

/// Weights `e!/(e−d)! · y^{e−d}` for `e = 0..=K` (zero for `e < d`).
fn derivative_weights(y: f64, d: usize, degree: usize) -> Vec<f64> {
    let mut w = vec![0.0; degree + 1];
    let mut pow = 1.0;
    for e in d..=degree {
        let mut ff = 1.0;
        for x in (e - d + 1)..=e {
            ff *= x as f64;
        }
        w[e] = ff * pow;
        pow *= y;
    }
    w
}

/// Truncated expansion with precomputed `q_λ`.
#[derive(Debug, Clone)]
pub struct Series {
    params: HypParams,
    space: StateSpace,
    q: Vec<f64>,
}

impl Series {
    pub fn new(params: HypParams, cfg: TruncationConfig) -> Result<Self> {
        params.check_poles(cfg.degree, cfg.m)?;
        let space = StateSpace::new(cfg.degree, cfg.m);
        let mut q = vec![0.0; space.len()];
        for k in 0..=cfg.degree {
            let start = space.block_start[k];
            for (off, v) in q_block(params, k, cfg.m).into_iter().enumerate() {
                q[start + off] = v;
            }
        }
        Ok(Series { params, space, q })
    }

    /// Chooses the degree so that the last retained block is below
    /// `rel_tol` relative to the partial sum at `y` (bounded through the
    /// diagonal point `max|yᵢ|·(1,…,1)`), stopping early once a block would
    /// hold more than `block_budget` partitions.
    pub fn with_auto_degree(
        params: HypParams,
        m: usize,
        y: &[f64],
        rel_tol: f64,
        block_budget: usize,
    ) -> Result<Self> {
        let r = y.iter().fold(0.0f64, |acc, v| acc.max(abs(*v)));
        let mut total = 1.0;
        let mut prev_term = f64::INFINITY;
        let mut degree = 1;
        for k in 1..=MAX_DEGREE {
            if k > 1 && partitions_of(k, m).len() > block_budget {
                break;
            }
            params.check_poles(k, m)?;
            let block: f64 = q_block(params, k, m)
                .iter()
                .zip(partitions_of(k, m))
                .map(|(qv, lambda)| abs(*qv) * arrangements(&lambda, m))
                .sum();
            let term = block * powi(r, k as i32);
            total += term;
            degree = k;
            if k >= 2 && term < rel_tol * total && term <= prev_term {
                break;
            }
            prev_term = term;
        }
        Series::new(params, TruncationConfig { degree, m })
    }

    pub fn params(&self) -> HypParams {
        self.params
    }

    pub fn degree(&self) -> usize {
        self.space.degree
    }

    pub fn dim(&self) -> usize {
        self.space.m
    }

    /// Stored `q_λ`, or `None` when `λ` is outside the truncation.
    pub fn q(&self, lambda: &Partition) -> Option<f64> {
        let k = lambda.weight();
        if k > self.space.degree {
            return None;
        }
        (self.space.block_start[k]..self.space.block_start[k + 1])
            .find(|&s| self.space.states[s] == *lambda)
            .map(|s| self.q[s])
    }

    fn check_len(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.space.m {
            return Err(Error::DimensionMismatch {
                expected: self.space.m,
                found: y.len(),
            });
        }
        Ok(())
    }

    fn dot(&self, v: &[f64]) -> f64 {
        self.q.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    fn chain(&self, weights: &[Vec<f64>]) -> Vec<f64> {
        let n = self.space.len();
        let mut cur = vec![0.0; n];
        let mut next = vec![0.0; n];
        cur[0] = 1.0;
        for w in weights {
            self.space.propagate(&cur, w, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Truncated `₁F₁(a; c; y)`.
    pub fn value(&self, y: &[f64]) -> Result<f64> {
        self.derivative(&vec![0; y.len()], y)
    }

    /// `∂₁^{μ₁} ⋯ ∂_m^{μ_m} ₁F₁` at `y` for an arbitrary multi-index.
    pub fn derivative(&self, mu: &[usize], y: &[f64]) -> Result<f64> {
        self.check_len(y)?;
        self.check_len_mu(mu)?;
        let degree = self.space.degree;
        let weights: Vec<Vec<f64>> = y
            .iter()
            .zip(mu)
            .map(|(&yi, &d)| derivative_weights(yi, d, degree))
            .collect();
        Ok(self.dot(&self.chain(&weights)))
    }

    fn check_len_mu(&self, mu: &[usize]) -> Result<()> {
        if mu.len() != self.space.m {
            return Err(Error::DimensionMismatch {
                expected: self.space.m,
                found: mu.len(),
            });
        }
        Ok(())
    }

    /// Sums `Σ_{λ⊢k} q_λ M_λ(y)` for `k = 0..=K`.
    pub fn block_sums(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y)?;
        let degree = self.space.degree;
        let weights: Vec<Vec<f64>> = y
            .iter()
            .map(|&yi| derivative_weights(yi, 0, degree))
            .collect();
        let v = self.chain(&weights);
        Ok((0..=degree)
            .map(|k| {
                (self.space.block_start[k]..self.space.block_start[k + 1])
                    .map(|s| self.q[s] * v[s])
                    .sum()
            })
            .collect())
    }

    /// All `2^m` square-free mixed derivatives `∂_J F(y)`, bit `i` of `J`
    /// standing for `∂_{i+1}`. No distinctness check.
    pub fn squarefree_derivatives(&self, y: &[f64]) -> Result<DerivVector> {
        self.check_len(y)?;
        let m = self.space.m;
        let degree = self.space.degree;
        let plain: Vec<Vec<f64>> = y
            .iter()
            .map(|&v| derivative_weights(v, 0, degree))
            .collect();
        let first: Vec<Vec<f64>> = y
            .iter()
            .map(|&v| derivative_weights(v, 1, degree))
            .collect();
        let n = self.space.len();
        let mut stack: Vec<Vec<f64>> = (0..=m).map(|_| vec![0.0; n]).collect();
        stack[0][0] = 1.0;
        let mut out = vec![0.0; 1 << m];
        self.descend(0, 0, &mut stack, &plain, &first, &mut out);
        DerivVector::new(m, out)
    }

    fn descend(
        &self,
        depth: usize,
        mask: usize,
        stack: &mut [Vec<f64>],
        plain: &[Vec<f64>],
        first: &[Vec<f64>],
        out: &mut [f64],
    ) {
        if depth == self.space.m {
            out[mask] = self.dot(&stack[depth]);
            return;
        }
        for (bit, w) in [(0, &plain[depth]), (1usize << depth, &first[depth])] {
            let (lo, hi) = stack.split_at_mut(depth + 1);
            self.space.propagate(&lo[depth], w, &mut hi[0]);
            self.descend(depth + 1, mask | bit, stack, plain, first, out);
        }
    }

    /// Taylor coefficients `b_k` of `f(y) = F(y, …, y) = Σ b_k y^k`.
    pub fn diagonal_coefficients(&self) -> Vec<f64> {
        (0..=self.space.degree)
            .map(|k| {
                (self.space.block_start[k]..self.space.block_start[k + 1])
                    .map(|s| self.q[s] * arrangements(&self.space.states[s], self.space.m))
                    .sum()
            })
            .collect()
    }

    /// `∂^τ F(y)` for the rectangle `τ = (t^l)` acting on `y₁..y_l`, summed
    /// term by term through the splitting lemma for `∂^τ M_λ`.
    pub fn rect_derivative(&self, tau: &Partition, y: &[f64]) -> Result<f64> {
        self.check_len(y)?;
        let (t, l) = rectangle_shape(tau)?;
        if l > self.space.m {
            return Err(Error::OutOfRange {
                name: "rectangle length",
                value: l as f64,
            });
        }
        if l == 0 {
            return self.value(y);
        }
        let mut total = 0.0;
        for (s, lambda) in self.space.states.iter().enumerate() {
            if lambda.contains(tau) {
                total += self.q[s] * monomial::rect_derivative_of_monomial(lambda, t, l, y);
            }
        }
        Ok(total)
    }
}

fn rectangle_shape(tau: &Partition) -> Result<(usize, usize)> {
    match tau.parts().first() {
        None => Ok((0, 0)),
        Some(&t) if tau.parts().iter().all(|&p| p == t) => Ok((t, tau.len())),
        Some(_) => Err(Error::InvalidPartition),
    }
}

/// `q_λ` for all `λ ⊢ k` with at most `m` parts, in table order.
fn q_block(params: HypParams, k: usize, m: usize) -> Vec<f64> {
    let table = zonal_to_monomial_coeffs(k, m);
    let scale = inv_factorial(k);
    let ratios: Vec<f64> = table
        .partitions()
        .iter()
        .map(|kappa| pochhammer_ratio(params.a, params.c, kappa) * scale)
        .collect();
    (0..table.len())
        .map(|col| {
            (0..=col)
                .map(|row| ratios[row] * *table.get(row, col))
                .sum()
        })
        .collect()
}

/// Truncated `₁F₁(a; c; y) = Σ_{k≤K} Σ_{λ⊢k} q_λ M_λ(y)`.
pub fn hyp1f1_series(params: HypParams, y: &[f64], cfg: TruncationConfig) -> Result<f64> {
    Series::new(params, cfg)?.value(y)
}

/// Truncated `∂^τ ₁F₁` for a rectangular `τ = (t^l)` on the first `l`
/// coordinates.
pub fn rect_derivative_series(
    tau: &Partition,
    params: HypParams,
    y: &[f64],
    cfg: TruncationConfig,
) -> Result<f64> {
    Series::new(params, cfg)?.rect_derivative(tau, y)
}

/// The vector of square-free derivatives at `y0`.
///
/// [`InitialMode::Series`] requires pairwise distinct coordinates (the
/// Pfaffian system that consumes the vector is singular on ties).
/// [`InitialMode::Linear`] uses
/// `∂_J F ≈ q_(1^l) + 2 q_(2,1^{l−1}) Σ_{i∈J} yᵢ + q_(1^{l+1}) Σ_{i∉J} yᵢ`
/// with `l = |J|` and accepts any point, including the origin.
pub fn squarefree_derivatives_at(
    params: HypParams,
    y0: &[f64],
    cfg: TruncationConfig,
    mode: InitialMode,
) -> Result<DerivVector> {
    if y0.len() != cfg.m {
        return Err(Error::DimensionMismatch {
            expected: cfg.m,
            found: y0.len(),
        });
    }
    match mode {
        InitialMode::Series => {
            check_distinct(y0, crate::pfaffian::DEFAULT_TIE_EPS)?;
            Series::new(params, cfg)?.squarefree_derivatives(y0)
        }
        InitialMode::Linear => linear_initial(params, y0),
    }
}

pub(crate) fn linear_initial(params: HypParams, y: &[f64]) -> Result<DerivVector> {
    let m = y.len();
    let ones: Vec<f64> = (0..=m + 1)
        .map(|l| q_coefficient(&Partition::column(l), params))
        .collect::<Result<_>>()?;
    let two_ones: Vec<f64> = (0..=m)
        .map(|l| {
            if l == 0 {
                Ok(0.0)
            } else {
                let mut parts = vec![2];
                parts.extend(core::iter::repeat(1).take(l - 1));
                q_coefficient(&Partition::from_multiset(parts), params)
            }
        })
        .collect::<Result<_>>()?;
    let total: f64 = y.iter().sum();
    let values = (0..1usize << m)
        .map(|mask| {
            let l = mask.count_ones() as usize;
            let inside: f64 = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| y[i]).sum();
            ones[l] + 2.0 * two_ones[l] * inside + ones[l + 1] * (total - inside)
        })
        .collect();
    DerivVector::new(m, values)
}
