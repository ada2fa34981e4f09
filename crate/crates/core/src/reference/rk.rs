//! Classical fourth-order Runge-Kutta on a fixed fine grid.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::coeff::CoefficientModel;
use crate::error::{Error, Result};

/// Largest number of fine steps an oracle may take.
pub const MAX_STEPS: usize = 4_000_000;

type Y = [Complex64; 2];

#[derive(Clone, Debug)]
pub struct RkSolution {
    model: CoefficientModel,
    epsilon: f64,
    lo: f64,
    h: f64,
    states: Vec<Y>,
}

fn rhs(model: &CoefficientModel, eps: f64, x: f64, y: &Y) -> Result<Y> {
    // the last stage can overshoot the right end by rounding
    let a = model.a(x.min(model.domain().1))?;
    Ok([y[1] / eps, y[0] * (-a / eps)])
}

fn rk4(model: &CoefficientModel, eps: f64, x: f64, y: &Y, h: f64) -> Result<Y> {
    let add = |y: &Y, k: &Y, s: f64| [y[0] + k[0] * s, y[1] + k[1] * s];
    let k1 = rhs(model, eps, x, y)?;
    let k2 = rhs(model, eps, x + 0.5 * h, &add(y, &k1, 0.5 * h))?;
    let k3 = rhs(model, eps, x + 0.5 * h, &add(y, &k2, 0.5 * h))?;
    let k4 = rhs(model, eps, x + h, &add(y, &k3, h))?;
    let w = h / 6.0;
    Ok([
        y[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * w,
        y[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * w,
    ])
}

/// Integrates `phi' = (eps phi') / eps`, `(eps phi')' = -a phi / eps` on
/// `[lo, hi]` with step `2 pi eps / (sqrt(a_max) steps_per_wavelength)`.
pub fn rk_oracle(
    model: &CoefficientModel,
    epsilon: f64,
    lo: f64,
    hi: f64,
    phi0: Complex64,
    eps_dphi0: Complex64,
    steps_per_wavelength: usize,
) -> Result<RkSolution> {
    if steps_per_wavelength < 20 {
        return Err(Error::InvalidParameter("steps_per_wavelength must be at least 20"));
    }
    if !(epsilon > 0.0) || !(lo < hi) {
        return Err(Error::InvalidParameter("need eps > 0 and lo < hi"));
    }
    let samples = 1000;
    let mut a_max: f64 = 0.0;
    for i in 0..=samples {
        let x = lo + (hi - lo) * i as f64 / samples as f64;
        a_max = a_max.max(model.a(x.min(hi))?);
    }
    let h_ref = 2.0 * PI * epsilon / (libm::sqrt(a_max) * steps_per_wavelength as f64);
    let needed = libm::ceil((hi - lo) / h_ref);
    if !(needed <= MAX_STEPS as f64) {
        return Err(Error::StepBudget { needed: needed.min(usize::MAX as f64) as usize, budget: MAX_STEPS });
    }
    let n = (needed as usize).max(1);
    let h = (hi - lo) / n as f64;
    let mut states = Vec::with_capacity(n + 1);
    let mut y = [phi0, eps_dphi0];
    states.push(y);
    for k in 0..n {
        y = rk4(model, epsilon, lo + k as f64 * h, &y, h)?;
        states.push(y);
    }
    Ok(RkSolution { model: model.clone(), epsilon, lo, h, states })
}

impl RkSolution {
    pub fn n_steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Value at `x`, one partial step from the nearest fine node to its left.
    pub fn eval(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let n = self.n_steps();
        let hi = self.lo + n as f64 * self.h;
        let tol = 1e-12 * (hi - self.lo);
        if !(x >= self.lo - tol && x <= hi + tol) {
            return Err(Error::OutOfDomain { x, lo: self.lo, hi });
        }
        let k = (libm::floor((x - self.lo) / self.h) as isize).clamp(0, n as isize) as usize;
        let xk = self.lo + k as f64 * self.h;
        let dx = x - xk;
        let y = if dx.abs() <= 1e-15 * self.h.max(1.0) {
            self.states[k]
        } else {
            let x_eval = xk.min(self.model.domain().1);
            rk4(&self.model, self.epsilon, x_eval, &self.states[k], dx)?
        };
        Ok((y[0], y[1]))
    }
}
