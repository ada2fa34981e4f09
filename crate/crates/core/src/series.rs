//! Truncated Taylor series ("jets") with elementary-function arithmetic.
//!
//! A [`Series`] holds the normalized Taylor coefficients `f^(k)(x)/k!` of a
//! function around a base point. Every binary operation truncates to the
//! shorter operand, so derivative depth is tracked automatically: dividing
//! `b_p'` by `2 phi'` consumes exactly one coefficient per recursion step.

use core::ops::{Add, Div, Mul, Neg, Sub};

/// Maximum number of stored coefficients (degree 7).
pub const MAX_LEN: usize = 8;

/// Normalized Taylor coefficients `[f, f', f''/2!, ..., f^(n-1)/(n-1)!]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Series {
    c: [f64; MAX_LEN],
    len: usize,
}

const FACTORIALS: [f64; MAX_LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

impl Series {
    /// A constant, carried with `len` coefficients.
    pub fn constant(value: f64, len: usize) -> Self {
        let mut c = [0.0; MAX_LEN];
        c[0] = value;
        Series { c, len: len.clamp(1, MAX_LEN) }
    }

    /// The independent variable `y` expanded around `x`.
    pub fn variable(x: f64, len: usize) -> Self {
        let mut s = Series::constant(x, len);
        if s.len > 1 {
            s.c[1] = 1.0;
        }
        s
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= MAX_LEN);
        let mut c = [0.0; MAX_LEN];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Series { c, len: coeffs.len() }
    }

    /// Builds a series from derivative values `[f, f', ..., f^(k)]`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut s = Series::from_coeffs(derivs);
        for k in 0..s.len {
            s.c[k] /= FACTORIALS[k];
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..self.len]
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at the base point.
    pub fn derivative_at(&self, k: usize) -> f64 {
        assert!(k < self.len, "derivative order {k} exceeds series length {}", self.len);
        self.c[k] * FACTORIALS[k]
    }

    /// Series of the derivative; one coefficient shorter.
    pub fn derivative(&self) -> Self {
        assert!(self.len >= 2, "cannot differentiate a length-1 series");
        let mut c = [0.0; MAX_LEN];
        for k in 0..self.len - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Series { c, len: self.len - 1 }
    }

    pub fn truncate(mut self, len: usize) -> Self {
        assert!(len >= 1);
        if len < self.len {
            for k in len..self.len {
                self.c[k] = 0.0;
            }
            self.len = len;
        }
        self
    }

    pub fn scale(mut self, s: f64) -> Self {
        for k in 0..self.len {
            self.c[k] *= s;
        }
        self
    }

    pub fn add_scalar(mut self, s: f64) -> Self {
        self.c[0] += s;
        self
    }

    pub fn recip(&self) -> Self {
        Series::constant(1.0, self.len) / *self
    }

    /// `self^alpha`; requires a positive leading coefficient.
    pub fn powf(&self, alpha: f64) -> Self {
        let u0 = self.c[0];
        assert!(u0 > 0.0, "powf needs a positive base value, got {u0}");
        let mut w = [0.0; MAX_LEN];
        w[0] = libm::pow(u0, alpha);
        for k in 1..self.len {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (alpha * j as f64 - (k - j) as f64) * self.c[j] * w[k - j];
            }
            w[k] = acc / (k as f64 * u0);
        }
        Series { c: w, len: self.len }
    }

    pub fn sqrt(&self) -> Self {
        let u0 = self.c[0];
        assert!(u0 > 0.0, "sqrt needs a positive base value, got {u0}");
        let mut w = [0.0; MAX_LEN];
        w[0] = libm::sqrt(u0);
        for k in 1..self.len {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= w[j] * w[k - j];
            }
            w[k] = acc / (2.0 * w[0]);
        }
        Series { c: w, len: self.len }
    }

    pub fn exp(&self) -> Self {
        let mut w = [0.0; MAX_LEN];
        w[0] = libm::exp(self.c[0]);
        for k in 1..self.len {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * w[k - j];
            }
            w[k] = acc / k as f64;
        }
        Series { c: w, len: self.len }
    }

    pub fn ln(&self) -> Self {
        let u0 = self.c[0];
        assert!(u0 > 0.0, "ln needs a positive base value, got {u0}");
        let mut w = [0.0; MAX_LEN];
        w[0] = libm::log(u0);
        for k in 1..self.len {
            let mut acc = k as f64 * self.c[k];
            for j in 1..k {
                acc -= j as f64 * w[j] * self.c[k - j];
            }
            w[k] = acc / (k as f64 * u0);
        }
        Series { c: w, len: self.len }
    }

    /// Simultaneous sine and cosine.
    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = [0.0; MAX_LEN];
        let mut c = [0.0; MAX_LEN];
        s[0] = libm::sin(self.c[0]);
        c[0] = libm::cos(self.c[0]);
        for k in 1..self.len {
            let mut as_ = 0.0;
            let mut ac = 0.0;
            for j in 1..=k {
                let t = j as f64 * self.c[j];
                as_ += t * c[k - j];
                ac -= t * s[k - j];
            }
            s[k] = as_ / k as f64;
            c[k] = ac / k as f64;
        }
        (Series { c: s, len: self.len }, Series { c, len: self.len })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// Evaluates the polynomial at offset `dy` from the base point.
    pub fn eval_offset(&self, dy: f64) -> f64 {
        self.c[..self.len].iter().rev().fold(0.0, |acc, &ck| acc * dy + ck)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        let len = self.len.min(rhs.len);
        let mut c = [0.0; MAX_LEN];
        for k in 0..len {
            c[k] = self.c[k] + rhs.c[k];
        }
        Series { c, len }
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self + (-rhs)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let len = self.len.min(rhs.len);
        let mut c = [0.0; MAX_LEN];
        for k in 0..len {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.c[j] * rhs.c[k - j];
            }
            c[k] = acc;
        }
        Series { c, len }
    }
}

impl Div for Series {
    type Output = Series;
    fn div(self, rhs: Series) -> Series {
        let len = self.len.min(rhs.len);
        let d0 = rhs.c[0];
        assert!(d0 != 0.0, "division by a series with zero value");
        let mut c = [0.0; MAX_LEN];
        for k in 0..len {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * c[k - j];
            }
            c[k] = acc / d0;
        }
        Series { c, len }
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(self, rhs: f64) -> Series {
        self.scale(rhs)
    }
}

impl Add<f64> for Series {
    type Output = Series;
    fn add(self, rhs: f64) -> Series {
        self.add_scalar(rhs)
    }
}

impl Sub<f64> for Series {
    type Output = Series;
    fn sub(self, rhs: f64) -> Series {
        self.add_scalar(-rhs)
    }
}
