//! Asymptotic quadratures for the iterated oscillatory integrals `M_1..M_3`
//! and a brute-force adaptive oracle for them.
//!
//! The scalar functions return the single independent entry of each matrix;
//! the `*_matrix` wrappers place it (and its conjugate) in the right pattern.

use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss_kronrod;
use crate::wkb::{h_p, LocalData, NodeData, PhaseModel, NUM_B};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 { m: [[ZERO; 2]; 2] };
    pub const IDENTITY: Mat2 = Mat2 { m: [[Complex64 { re: 1.0, im: 0.0 }, ZERO], [ZERO, Complex64 { re: 1.0, im: 0.0 }]] };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    /// `(0, conj q; q, 0)`.
    pub fn off_diagonal(q: Complex64) -> Self {
        Mat2::new(ZERO, q.conj(), q, ZERO)
    }

    /// `diag(q, conj q)`.
    pub fn diagonal(q: Complex64) -> Self {
        Mat2::new(q, ZERO, ZERO, q.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    pub fn adjoint(&self) -> Self {
        Mat2::new(self.m[0][0].conj(), self.m[1][0].conj(), self.m[0][1].conj(), self.m[1][1].conj())
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.m.iter().map(|r| r[0].norm() + r[1].norm()).fold(0.0, f64::max)
    }

    pub fn is_off_diagonal_conjugate(&self) -> bool {
        self.m[0][0] == ZERO && self.m[1][1] == ZERO && self.m[0][1] == self.m[1][0].conj()
    }

    pub fn is_diagonal_conjugate(&self) -> bool {
        self.m[0][1] == ZERO && self.m[1][0] == ZERO && self.m[1][1] == self.m[0][0].conj()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        out
    }
}

/// `(eta - xi)/6 (f(xi) + 4 f(mid) + f(eta))`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, xi: f64, eta: f64) -> f64 {
    (eta - xi) / 6.0 * (f(xi) + 4.0 * f(0.5 * (xi + eta)) + f(eta))
}

/// Point data for one step `[xi, eta]`.
#[derive(Clone, Copy, Debug)]
pub struct Step {
    pub xi: NodeData,
    pub eta: NodeData,
    pub mid: LocalData,
    pub epsilon: f64,
}

impl Step {
    pub fn new(phase: &PhaseModel, xi: f64, eta: f64) -> Result<Self> {
        if !(xi <= eta) {
            return Err(Error::InvalidInterval { xi, eta });
        }
        Ok(Step {
            xi: phase.node(xi)?,
            eta: phase.node(eta)?,
            mid: phase.local(0.5 * (xi + eta))?,
            epsilon: phase.epsilon(),
        })
    }

    pub fn from_parts(xi: NodeData, eta: NodeData, mid: LocalData, epsilon: f64) -> Self {
        Step { xi, eta, mid, epsilon }
    }

    fn h(&self) -> f64 {
        self.eta.x() - self.xi.x()
    }

    fn degenerate(&self) -> bool {
        self.eta.x() == self.xi.x()
    }

    /// `2 s / eps` with `s = phi(eta) - phi(xi)`.
    fn two_s_over_eps(&self) -> f64 {
        (self.eta.theta - self.xi.theta).to_f64() * 2.0
    }

    fn s(&self) -> f64 {
        0.5 * self.epsilon * self.two_s_over_eps()
    }

    fn simpson_b_bp(&self, p: usize) -> f64 {
        let (a, m, c) = (&self.xi.local, &self.mid, &self.eta.local);
        self.h() / 6.0 * (a.b * a.b_p[p] + 4.0 * m.b * m.b_p[p] + c.b * c.b_p[p])
    }

    pub fn q1(&self, p: usize, p_tilde: usize) -> Result<Complex64> {
        if p_tilde == 0 {
            return Err(Error::InvalidParameter("P~ must be at least 1"));
        }
        let needed = p + p_tilde - 1;
        if needed >= NUM_B {
            return Err(Error::InsufficientJetOrder { p, p_tilde, needed, max: NUM_B - 1 });
        }
        if self.degenerate() {
            return Ok(ZERO);
        }
        let ie = I * self.epsilon;
        let (bx, be) = (&self.xi.local.b_p, &self.eta.local.b_p);
        let ex = self.xi.osc2();
        let ee = self.eta.osc2();
        let x = self.two_s_over_eps();
        let mut boundary = ZERO;
        let mut pow = Complex64::new(1.0, 0.0);
        for k in 1..=p {
            pow *= ie;
            boundary += pow * (ee * be[k - 1] - ex * bx[k - 1]);
        }
        let mut tail = ZERO;
        for k in 1..=p_tilde {
            pow *= ie;
            tail += pow * be[k + p - 1] * h_p(k, x);
        }
        Ok(-boundary - ex * tail)
    }

    pub fn q2(&self) -> Complex64 {
        if self.degenerate() {
            return ZERO;
        }
        let eps = self.epsilon;
        let (x, y) = (&self.xi.local.b_p, &self.eta.local.b_p);
        let arg = -self.two_s_over_eps();
        let s = self.s();
        let e2 = eps * eps;
        let t1 = -I * eps * self.simpson_b_bp(0);
        let t2 = -(h_p(0, arg) * (x[0] * y[0]) - x[0] * x[0] - self.simpson_b_bp(1)) * e2;
        let t3 = I * (eps * e2) * (x[0] * y[1] - x[1] * y[0]) * h_p(1, arg);
        let t4 = (e2 * e2) * ((x[0] + y[0]) * y[2] - x[1] * y[1] - 2.0 * y[0] * y[3] * s) * h_p(2, arg);
        let t5 = I * (e2 * e2 * eps) * ((y[0] - x[0]) * y[3] - (y[1] - x[1]) * y[2]) * h_p(3, arg);
        t1 + t2 + t3 + t4 + t5
    }

    pub fn q3(&self) -> Complex64 {
        if self.degenerate() {
            return ZERO;
        }
        let eps = self.epsilon;
        let (xl, yl) = (&self.xi.local, &self.eta.local);
        let (ax, ay) = (&xl.aux, &yl.aux);
        let bb0 = xl.b * ax.b0;
        let h = self.h();
        let arg = self.two_s_over_eps();
        let s = self.s();
        let e = self.xi.osc2();
        let t1 = -(eps * eps) * 0.5 * h * (ay.c0 + bb0 * ay.b0) * h_p(1, arg);
        let inner2 = 0.5 * (ay.c1 * h + ay.d0 + bb0 * (ay.b1 * h + ay.f0))
            + ax.b0 * ay.b0 * ay.b0
            + 2.0 * s * (ay.l0 - ax.b0 * ay.kappa0);
        let t2 = -I * (eps * eps * eps) * inner2 * h_p(2, arg);
        let inner3 = 0.5 * (ay.e0 + ay.d1 + bb0 * (ay.g0 + ay.f1))
            + 2.0 * (ax.b0 * ay.b0 * ay.b1 + ay.l0 - ax.b0 * ay.kappa0);
        let t3 = (eps * eps * eps * eps) * inner3 * h_p(3, arg);
        e * (t1 + t2 + t3)
    }

    pub fn q2_simp(&self) -> Complex64 {
        if self.degenerate() {
            return ZERO;
        }
        let eps = self.epsilon;
        let (x, y) = (&self.xi.local.b_p, &self.eta.local.b_p);
        let arg = -self.two_s_over_eps();
        let s = self.s();
        let e2 = eps * eps;
        let t1 = -I * eps * self.simpson_b_bp(0);
        let t2 = -e2 * x[0] * y[0] * h_p(1, arg);
        let t3 = -I * (e2 * eps) * (y[0] * (y[1] - 2.0 * y[2] * s) - x[0] * y[1]) * h_p(2, arg);
        let t4 = (e2 * e2) * (y[2] * (x[0] + y[0]) - y[1] * y[1]) * h_p(3, arg);
        t1 + t2 + t3 + t4
    }

    pub fn q3_simp(&self) -> Complex64 {
        if self.degenerate() {
            return ZERO;
        }
        let eps = self.epsilon;
        let b0 = self.eta.local.b_p[0];
        let arg = self.two_s_over_eps();
        let s = self.s();
        let inner = h_p(2, arg) * (eps * eps * s) + I * (eps * eps * eps) * h_p(3, arg);
        self.xi.osc2() * (-2.0 * b0 * b0 * b0) * inner
    }

    /// Second-order approximation of `(M_2)_{11}` from the trapezoidal rule
    /// and two shifted integration-by-parts steps.
    pub fn q2_weak(&self) -> Complex64 {
        if self.degenerate() {
            return ZERO;
        }
        let eps = self.epsilon;
        let (xl, yl) = (&self.xi.local, &self.eta.local);
        let (x, y) = (&xl.b_p, &yl.b_p);
        let arg = -self.two_s_over_eps();
        let ie = I * eps;
        let t1 = -ie * 0.5 * self.h() * (yl.b * y[0] + xl.b * x[0]);
        let t2 = ie * ie * x[0] * y[0] * h_p(1, arg);
        let t3 = ie * ie * ie * y[1] * (y[0] - x[0]) * h_p(2, arg);
        t1 + t2 + t3
    }
}

pub fn q1(p: usize, p_tilde: usize, xi: f64, eta: f64, phase: &PhaseModel) -> Result<Complex64> {
    Step::new(phase, xi, eta)?.q1(p, p_tilde)
}

pub fn q1_matrix(p: usize, p_tilde: usize, xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    Ok(Mat2::off_diagonal(q1(p, p_tilde, xi, eta, phase)?))
}

pub fn q2(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Complex64> {
    Ok(Step::new(phase, xi, eta)?.q2())
}

pub fn q2_matrix(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    Ok(Mat2::diagonal(q2(xi, eta, phase)?))
}

pub fn q3(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Complex64> {
    Ok(Step::new(phase, xi, eta)?.q3())
}

pub fn q3_matrix(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    Ok(Mat2::off_diagonal(q3(xi, eta, phase)?))
}

pub fn q2_simp(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Complex64> {
    Ok(Step::new(phase, xi, eta)?.q2_simp())
}

pub fn q2_simp_matrix(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    Ok(Mat2::diagonal(q2_simp(xi, eta, phase)?))
}

pub fn q3_simp(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Complex64> {
    Ok(Step::new(phase, xi, eta)?.q3_simp())
}

pub fn q3_simp_matrix(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    Ok(Mat2::off_diagonal(q3_simp(xi, eta, phase)?))
}

pub fn q2_weak(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Complex64> {
    Ok(Step::new(phase, xi, eta)?.q2_weak())
}

pub fn q2_weak_matrix(xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    Ok(Mat2::diagonal(q2_weak(xi, eta, phase)?))
}

/// Panel budget of each (possibly nested) adaptive integral in the oracle.
pub const ORACLE_MAX_PANELS: usize = 400;

/// The iterated integral `M_p(eta; xi)`, `p = 1, 2, 3`, by nested adaptive
/// quadrature to absolute tolerance `tol`.
///
/// Needs a phase that can be evaluated anywhere (exact or Chebyshev).
pub fn m_p_oracle(p: usize, xi: f64, eta: f64, phase: &PhaseModel, tol: f64) -> Result<Mat2> {
    if !(1..=3).contains(&p) {
        return Err(Error::InvalidParameter("oracle order must be 1, 2 or 3"));
    }
    if !(xi <= eta) {
        return Err(Error::InvalidInterval { xi, eta });
    }
    let n21 = |y: f64| -> Result<Complex64> {
        let b = phase.model().beta(y)?;
        Ok(crate::wkb::cis(phase.theta(y)?.mul_f64(2.0)) * b)
    };
    let m1 = |y: f64| gauss_kronrod::integrate(n21, xi, y, tol, ORACLE_MAX_PANELS);
    let m2 = |y: f64| gauss_kronrod::integrate(|t| Ok(n21(t)?.conj() * m1(t)?), xi, y, tol, ORACLE_MAX_PANELS);
    match p {
        1 => Ok(Mat2::off_diagonal(m1(eta)?)),
        2 => Ok(Mat2::diagonal(m2(eta)?)),
        _ => {
            let v = gauss_kronrod::integrate(|t| Ok(n21(t)? * m2(t)?), xi, eta, tol, ORACLE_MAX_PANELS)?;
            Ok(Mat2::off_diagonal(v))
        }
    }
}
