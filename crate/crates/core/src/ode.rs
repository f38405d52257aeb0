//! Explicit integrators for `v′(x) = R(x) v(x)` along a line segment.
//!
//! The right-hand side is any `FnMut(x, v, out)`; nothing here knows about
//! the structure of the state vector.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, ceil};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Euler,
    #[default]
    Rk4,
    /// Classical RK4 with step doubling and PI step-size control.
    Rk4Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationPlan {
    pub x_start: f64,
    pub x_end: f64,
    /// Fixed step, or the initial trial step in adaptive mode.
    pub step: f64,
    /// Local relative tolerance, adaptive mode only.
    pub rel_tol: f64,
    pub method: Method,
}

impl IntegrationPlan {
    /// Fixed-step plan. The segment is split into `⌈|x_end − x_start|/step⌉`
    /// equal steps.
    pub fn fixed(method: Method, x_start: f64, x_end: f64, step: f64) -> Result<Self> {
        let plan = IntegrationPlan {
            x_start,
            x_end,
            step,
            rel_tol: 1e-10,
            method,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn adaptive(x_start: f64, x_end: f64, rel_tol: f64, initial_step: f64) -> Result<Self> {
        let plan = IntegrationPlan {
            x_start,
            x_end,
            step: initial_step,
            rel_tol,
            method: Method::Rk4Adaptive,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x_start.is_finite() || !self.x_end.is_finite() || self.x_start == self.x_end {
            return Err(Error::OutOfRange {
                name: "x_end",
                value: self.x_end,
            });
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::OutOfRange {
                name: "step",
                value: self.step,
            });
        }
        if self.method == Method::Rk4Adaptive && !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::OutOfRange {
                name: "rel_tol",
                value: self.rel_tol,
            });
        }
        Ok(())
    }

    /// Number of steps a fixed-step run takes over the whole segment.
    pub fn fixed_steps(&self) -> usize {
        steps_for(self.x_end - self.x_start, self.step)
    }
}

fn steps_for(span: f64, step: f64) -> usize {
    // tolerate a last step that is short by rounding noise
    let n = ceil(abs(span) / step * (1.0 - 1e-12));
    (n as usize).max(1)
}

struct Stepper {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Stepper {
    fn new(n: usize) -> Self {
        Stepper {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }

    fn euler<F: FnMut(f64, &[f64], &mut [f64])>(
        &mut self,
        rhs: &mut F,
        x: f64,
        h: f64,
        v: &mut [f64],
    ) {
        rhs(x, v, &mut self.k1);
        for (vi, ki) in v.iter_mut().zip(&self.k1) {
            *vi += h * ki;
        }
    }

    fn rk4<F: FnMut(f64, &[f64], &mut [f64])>(
        &mut self,
        rhs: &mut F,
        x: f64,
        h: f64,
        v: &mut [f64],
    ) {
        let half = 0.5 * h;
        rhs(x, v, &mut self.k1);
        for ((t, vi), k) in self.tmp.iter_mut().zip(v.iter()).zip(&self.k1) {
            *t = vi + half * k;
        }
        rhs(x + half, &self.tmp, &mut self.k2);
        for ((t, vi), k) in self.tmp.iter_mut().zip(v.iter()).zip(&self.k2) {
            *t = vi + half * k;
        }
        rhs(x + half, &self.tmp, &mut self.k3);
        for ((t, vi), k) in self.tmp.iter_mut().zip(v.iter()).zip(&self.k3) {
            *t = vi + h * k;
        }
        rhs(x + h, &self.tmp, &mut self.k4);
        let sixth = h / 6.0;
        for i in 0..v.len() {
            v[i] += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

fn check_finite(v: &[f64], x: f64) -> Result<()> {
    if v.iter().all(|t| t.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { x })
    }
}

/// Integration state carried across segments so adaptive runs keep their
/// step size between grid points.
struct Driver {
    stepper: Stepper,
    full: Vec<f64>,
    half: Vec<f64>,
    h: f64,
    err_prev: f64,
}

impl Driver {
    fn new(n: usize, h: f64) -> Self {
        Driver {
            stepper: Stepper::new(n),
            full: vec![0.0; n],
            half: vec![0.0; n],
            h,
            err_prev: 1.0,
        }
    }

    fn segment<F: FnMut(f64, &[f64], &mut [f64])>(
        &mut self,
        rhs: &mut F,
        plan: &IntegrationPlan,
        from: f64,
        to: f64,
        v: &mut [f64],
    ) -> Result<()> {
        if from == to {
            return Ok(());
        }
        match plan.method {
            Method::Euler | Method::Rk4 => {
                let n = steps_for(to - from, plan.step);
                let h = (to - from) / n as f64;
                for s in 0..n {
                    let x = from + s as f64 * h;
                    if plan.method == Method::Euler {
                        self.stepper.euler(rhs, x, h, v);
                    } else {
                        self.stepper.rk4(rhs, x, h, v);
                    }
                    check_finite(v, x + h)?;
                }
                Ok(())
            }
            Method::Rk4Adaptive => self.adaptive(rhs, plan.rel_tol, from, to, v),
        }
    }

    fn adaptive<F: FnMut(f64, &[f64], &mut [f64])>(
        &mut self,
        rhs: &mut F,
        tol: f64,
        from: f64,
        to: f64,
        v: &mut [f64],
    ) -> Result<()> {
        let dir = if to > from { 1.0 } else { -1.0 };
        let span = abs(to - from);
        let h_min = span * 1e-14;
        let mut x = from;
        let mut rejections = 0usize;
        while dir * (to - x) > 0.0 {
            let mut h = self.h.min(abs(to - x));
            let last = h >= abs(to - x) * (1.0 - 1e-12);
            if last {
                h = abs(to - x);
            }
            let hs = dir * h;
            self.full.copy_from_slice(v);
            self.stepper.rk4(rhs, x, hs, &mut self.full);
            self.half.copy_from_slice(v);
            self.stepper.rk4(rhs, x, 0.5 * hs, &mut self.half);
            self.stepper
                .rk4(rhs, x + 0.5 * hs, 0.5 * hs, &mut self.half);
            let scale = self.half.iter().fold(0.0f64, |acc, t| acc.max(abs(*t)));
            let diff = self
                .half
                .iter()
                .zip(&self.full)
                .fold(0.0f64, |acc, (a, b)| acc.max(abs(a - b)));
            let err = diff / 15.0 / (tol * scale.max(f64::MIN_POSITIVE));
            if !err.is_finite() {
                if h <= h_min {
                    return Err(Error::NonFinite { x });
                }
                self.h = 0.25 * h;
                continue;
            }
            if err <= 1.0 {
                for i in 0..v.len() {
                    v[i] = self.half[i] + (self.half[i] - self.full[i]) / 15.0;
                }
                x = if last { to } else { x + hs };
                check_finite(v, x)?;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * libm::pow(err, -0.7 / 5.0) * libm::pow(self.err_prev, 0.4 / 5.0))
                        .clamp(0.2, 5.0)
                };
                self.err_prev = err.max(1e-4);
                // keep the unclipped size when the step was cut short by the target
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
                rejections = 0;
            } else {
                rejections += 1;
                if h <= h_min || rejections > 60 {
                    return Err(Error::NonFinite { x });
                }
                self.h = h * (0.9 * libm::pow(err, -0.2)).clamp(0.1, 0.9);
            }
        }
        Ok(())
    }
}

/// Approximates `v(x_end)` from `v(x_start) = v0`.
pub fn integrate<F>(mut rhs: F, v0: &[f64], plan: &IntegrationPlan) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    plan.validate()?;
    let mut v = v0.to_vec();
    check_finite(&v, plan.x_start)?;
    let mut driver = Driver::new(v.len(), plan.step);
    driver.segment(&mut rhs, plan, plan.x_start, plan.x_end, &mut v)?;
    Ok(v)
}

/// Snapshots of the solution at each grid point, stopping exactly on them.
/// The grid must be monotone in the direction of integration and lie in the
/// closed segment.
pub fn integrate_with_trace<F>(
    mut rhs: F,
    v0: &[f64],
    plan: &IntegrationPlan,
    grid: &[f64],
) -> Result<Vec<(f64, Vec<f64>)>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    plan.validate()?;
    let dir = if plan.x_end > plan.x_start { 1.0 } else { -1.0 };
    let mut prev = plan.x_start;
    for &g in grid {
        if dir * (g - prev) < 0.0 || dir * (plan.x_end - g) < 0.0 {
            return Err(Error::OutOfRange {
                name: "grid",
                value: g,
            });
        }
        prev = g;
    }
    let mut v = v0.to_vec();
    check_finite(&v, plan.x_start)?;
    let mut driver = Driver::new(v.len(), plan.step);
    let mut x = plan.x_start;
    let mut out = Vec::with_capacity(grid.len());
    for &g in grid {
        driver.segment(&mut rhs, plan, x, g, &mut v)?;
        x = g;
        out.push((g, v.clone()));
    }
    Ok(out)
}
