//! Numerical phase tables for models without closed-form antiderivatives.
//!
//! Both variants store the `eps`-independent integrals `int sqrt(a)` and
//! `int b` from the left end of their grid; [`crate::PhaseModel`] combines
//! them for a given `eps`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::coeff::CoefficientModel;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Table {
    /// Values at marching nodes and their midpoints; lookup by exact match.
    Simpson { xs: Vec<f64>, s: Vec<f64>, b: Vec<f64> },
    /// Antiderivative values at Chebyshev points, interpolated barycentrically.
    Chebyshev { lo: f64, hi: f64, ts: Vec<f64>, s: Vec<f64>, b: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct NumericPhase {
    table: Table,
}

fn integrands(model: &CoefficientModel, x: f64) -> Result<(f64, f64)> {
    Ok((libm::sqrt(model.a(x)?), model.beta(x)?))
}

fn simpson_pair(model: &CoefficientModel, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let (s0, b0) = integrands(model, lo)?;
    let (s1, b1) = integrands(model, 0.5 * (lo + hi))?;
    let (s2, b2) = integrands(model, hi)?;
    let w = (hi - lo) / 6.0;
    Ok((w * (s0 + 4.0 * s1 + s2), w * (b0 + 4.0 * b1 + b2)))
}

impl NumericPhase {
    /// Composite Simpson tabulation on `nodes` refined once: each marching
    /// interval is split at its midpoint and Simpson's rule is applied to
    /// both halves.
    pub fn simpson(model: &CoefficientModel, nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidGrid("empty node list"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("nodes must be strictly increasing"));
        }
        let n = nodes.len();
        let mut xs = Vec::with_capacity(2 * n - 1);
        let mut s = Vec::with_capacity(2 * n - 1);
        let mut b = Vec::with_capacity(2 * n - 1);
        integrands(model, nodes[0])?;
        xs.push(nodes[0]);
        s.push(0.0);
        b.push(0.0);
        let (mut acc_s, mut acc_b) = (0.0, 0.0);
        for w in nodes.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            for (lo, hi) in [(w[0], mid), (mid, w[1])] {
                let (ds, db) = simpson_pair(model, lo, hi)?;
                acc_s += ds;
                acc_b += db;
                xs.push(hi);
                s.push(acc_s);
                b.push(acc_b);
            }
        }
        Ok(NumericPhase { table: Table::Simpson { xs, s, b } })
    }

    /// Clenshaw-Curtis cumulative integrals on `n` Chebyshev points of
    /// `[lo, hi]`.
    pub fn chebyshev(model: &CoefficientModel, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter("at least 3 Chebyshev points are needed"));
        }
        if !(lo < hi) {
            return Err(Error::InvalidGrid("empty interval"));
        }
        let m = n - 1;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        // t_j = cos(pi j / m), descending from 1 to -1
        let ts: Vec<f64> = (0..n).map(|j| libm::cos(PI * j as f64 / m as f64)).collect();
        let mut fs = Vec::with_capacity(n);
        let mut fb = Vec::with_capacity(n);
        for (j, &t) in ts.iter().enumerate() {
            let x = if j == 0 { hi } else if j == m { lo } else { mid + half * t };
            let (s, b) = integrands(model, x)?;
            fs.push(s);
            fb.push(b);
        }
        let s = cumulative(&fs, half);
        let b = cumulative(&fb, half);
        Ok(NumericPhase { table: Table::Chebyshev { lo, hi, ts, s, b } })
    }

    /// `(int sqrt(a), int b)` from the table origin to `x`.
    pub fn integrals(&self, x: f64) -> Result<(f64, f64)> {
        match &self.table {
            Table::Simpson { xs, s, b } => {
                let i = xs.binary_search_by(|v| v.total_cmp(&x)).map_err(|_| Error::NotTabulated(x))?;
                Ok((s[i], b[i]))
            }
            Table::Chebyshev { lo, hi, ts, s, b } => {
                if x < *lo || x > *hi {
                    return Err(Error::OutOfDomain { x, lo: *lo, hi: *hi });
                }
                let t = (2.0 * x - lo - hi) / (hi - lo);
                Ok(barycentric(ts, s, b, t))
            }
        }
    }

    /// Left end of the table, where both integrals vanish.
    pub fn origin(&self) -> f64 {
        match &self.table {
            Table::Simpson { xs, .. } => xs[0],
            Table::Chebyshev { lo, .. } => *lo,
        }
    }

    /// Points carrying tabulated values, ascending.
    pub fn points(&self) -> Vec<f64> {
        match &self.table {
            Table::Simpson { xs, .. } => xs.clone(),
            Table::Chebyshev { lo, hi, ts, .. } => {
                let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
                ts.iter().rev().map(|t| mid + half * t).collect()
            }
        }
    }
}

/// Antiderivative values at the Chebyshev points `t_j = cos(pi j / m)`,
/// vanishing at `t = -1`, for samples `f` scaled by `half = dx/dt`.
fn cumulative(f: &[f64], half: f64) -> Vec<f64> {
    let n = f.len();
    let m = n - 1;
    let cos_jk = |j: usize, k: usize| libm::cos(PI * ((j * k) % (2 * m)) as f64 / m as f64);
    // coefficients of the interpolant, c[k] for k = 0..=m, padded with zeros
    let mut c = alloc::vec![0.0; m + 3];
    for (k, ck) in c.iter_mut().enumerate().take(n) {
        let mut acc = 0.0;
        for (j, fj) in f.iter().enumerate() {
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            acc += w * fj * cos_jk(j, k);
        }
        *ck = 2.0 * acc / m as f64;
    }
    c[0] *= 0.5;
    c[m] *= 0.5;
    // antiderivative coefficients, C_k = (c_{k-1} - c_{k+1}) / (2k)
    let mut big = alloc::vec![0.0; m + 2];
    for k in 1..=m + 1 {
        let prev = if k == 1 { 2.0 * c[0] } else { c[k - 1] };
        big[k] = (prev - c[k + 1]) / (2.0 * k as f64);
    }
    // T_k(-1) = (-1)^k
    let at_left: f64 = big.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -*v }).sum();
    (0..n)
        .map(|j| {
            let v: f64 = big.iter().enumerate().map(|(k, ck)| ck * cos_jk(j, k)).sum();
            half * (v - at_left)
        })
        .collect()
}

fn barycentric(ts: &[f64], s: &[f64], b: &[f64], t: f64) -> (f64, f64) {
    let m = ts.len() - 1;
    let (mut num_s, mut num_b, mut den) = (0.0, 0.0, 0.0);
    for (j, &tj) in ts.iter().enumerate() {
        let d = t - tj;
        if d == 0.0 {
            return (s[j], b[j]);
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == m {
            w *= 0.5;
        }
        let w = w / d;
        num_s += w * s[j];
        num_b += w * b[j];
        den += w;
    }
    (num_s / den, num_b / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exact_pair(model: &CoefficientModel, x0: f64, x: f64) -> (f64, f64) {
        (
            model.antiderivative_sqrt_a(x).unwrap() - model.antiderivative_sqrt_a(x0).unwrap(),
            model.antiderivative_b(x).unwrap() - model.antiderivative_b(x0).unwrap(),
        )
    }

    #[test]
    fn constant_model_exact() {
        let m = CoefficientModel::constant(1.0, 0.0, 1.0).unwrap();
        let t = NumericPhase::simpson(&m, &[0.0, 0.3, 1.0]).unwrap();
        assert_relative_eq!(t.integrals(1.0).unwrap().0, 1.0, epsilon = 1e-15);
        assert_eq!(t.integrals(0.65).unwrap().1, 0.0);
        let c = NumericPhase::chebyshev(&m, 0.0, 1.0, 9).unwrap();
        for x in [0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((c.integrals(x).unwrap().0 - x).abs() < 1e-15);
        }
    }

    #[test]
    fn simpson_lookup_is_exact_match() {
        let m = CoefficientModel::airy(2.0).unwrap();
        let t = NumericPhase::simpson(&m, &[1.0, 1.5, 2.0]).unwrap();
        assert!(t.integrals(1.25).is_ok());
        assert!(matches!(t.integrals(1.3), Err(Error::NotTabulated(_))));
        assert_eq!(t.points().len(), 5);
    }

    #[test]
    fn simpson_fourth_order() {
        let m = CoefficientModel::airy(2.0).unwrap();
        let mut errs = alloc::vec::Vec::new();
        for h in [0.2, 0.1, 0.05, 0.025] {
            let n = libm::round(1.0 / h) as usize;
            let nodes: Vec<f64> = (0..=n).map(|i| 1.0 + i as f64 * h).collect();
            let t = NumericPhase::simpson(&m, &nodes).unwrap();
            let mut e: f64 = 0.0;
            for x in t.points() {
                e = e.max((t.integrals(x).unwrap().0 - exact_pair(&m, 1.0, x).0).abs());
            }
            errs.push(e);
        }
        for w in errs.windows(2) {
            assert!(libm::log2(w[0] / w[1]) > 3.8, "{errs:?}");
        }
    }

    #[test]
    fn chebyshev_17_accurate_on_airy() {
        let m = CoefficientModel::airy(2.0).unwrap();
        let c = NumericPhase::chebyshev(&m, 1.0, 2.0, 17).unwrap();
        for i in 0..=40 {
            let x = 1.0 + i as f64 / 40.0;
            let (s, b) = c.integrals(x).unwrap();
            let (es, eb) = exact_pair(&m, 1.0, x);
            assert!((s - es).abs() < 1e-13 && (b - eb).abs() < 1e-12, "x={x} {} {}", s - es, b - eb);
        }
    }

    #[test]
    fn chebyshev_converges_geometrically_on_exp() {
        let m = CoefficientModel::exp();
        let err = |n| {
            let c = NumericPhase::chebyshev(&m, 0.0, 1.0, n).unwrap();
            (0..=50)
                .map(|i| {
                    let x = i as f64 / 50.0;
                    (c.integrals(x).unwrap().0 - exact_pair(&m, 0.0, x).0).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e5, e9, e17) = (err(5), err(9), err(17));
        assert!(e9 < 1e-3 * e5 && e17 < 1e-14, "{e5} {e9} {e17}");
    }
}
