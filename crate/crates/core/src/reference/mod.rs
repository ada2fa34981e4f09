//! Ground-truth solutions for the two benchmark problems and a fine-grid
//! Runge-Kutta integrator for everything else.

pub mod airy;
pub mod bessel;
pub mod rk;

use num_complex::Complex64;

use crate::dd::Dd;
use crate::error::{Error, Result};

pub use airy::{airy_pair, AiryValues};
pub use bessel::{bessel_quad, BesselValues};
pub use rk::{rk_oracle, RkSolution};

/// `(phi, eps phi')` for `eps^2 phi'' + x phi = 0` with
/// `phi = Ai(-x/eps^{2/3}) + i Bi(-x/eps^{2/3})`.
pub fn airy_exact_solution(epsilon: f64, x: f64) -> Result<(Complex64, Complex64)> {
    if !(epsilon > 0.0) || !(x > 0.0) {
        return Err(Error::InvalidParameter("airy reference needs eps > 0 and x > 0"));
    }
    let e13 = libm::cbrt(epsilon);
    let z = x / (e13 * e13);
    // zeta = 2 x^{3/2} / (3 eps), formed without going through z
    let zeta = (Dd::sqrt_f64(x).mul_f64(x) * airy::TWO_THIRDS).div_f64(epsilon);
    let v = airy::airy_negative(z, zeta)?;
    let phi = Complex64::new(v.ai, v.bi);
    let dphi = Complex64::new(v.aip, v.bip) * (-e13);
    Ok((phi, dphi))
}

/// `(phi, eps phi')` for `eps^2 phi'' + e^x phi = 0`, `phi(0) = 1`,
/// `eps phi'(0) = 0`.
///
/// With `w = 2 e^{x/2} / eps` and `w0 = 2 / eps`,
/// `phi = (J0(w) Y1(w0) - Y0(w) J1(w0)) / (J0(w0) Y1(w0) - Y0(w0) J1(w0))`.
pub fn expx_exact_solution(epsilon: f64, x: f64) -> Result<(Complex64, Complex64)> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive"));
    }
    let w0 = 2.0 / epsilon;
    let w = w0 * libm::exp(0.5 * x);
    let b0 = bessel_quad(w0)?;
    let b = bessel_quad(w)?;
    let den = b0.j0 * b0.y1 - b0.y0 * b0.j1;
    if !(den.abs() > 1e-300) {
        return Err(Error::SingularReference);
    }
    let phi = (b.j0 * b0.y1 - b.y0 * b0.j1) / den;
    // d/dx J0(w) = -J1(w) w / 2, same for Y0
    let dphi = (-b.j1 * b0.y1 + b.y1 * b0.j1) / den * (0.5 * w);
    Ok((Complex64::new(phi, 0.0), Complex64::new(epsilon * dphi, 0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    AiryExact,
    BesselExact,
    RkOracle,
}

/// A solution `x -> (phi, eps phi')` from one of the oracles.
#[derive(Clone, Debug)]
pub enum ReferenceSolution {
    Airy { epsilon: f64 },
    Bessel { epsilon: f64 },
    Rk(RkSolution),
}

impl ReferenceSolution {
    pub fn eval(&self, x: f64) -> Result<(Complex64, Complex64)> {
        match self {
            ReferenceSolution::Airy { epsilon } => airy_exact_solution(*epsilon, x),
            ReferenceSolution::Bessel { epsilon } => expx_exact_solution(*epsilon, x),
            ReferenceSolution::Rk(r) => r.eval(x),
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            ReferenceSolution::Airy { .. } => Provenance::AiryExact,
            ReferenceSolution::Bessel { .. } => Provenance::BesselExact,
            ReferenceSolution::Rk(_) => Provenance::RkOracle,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // relative to |phi| + |eps phi'|, which stays away from zero for real solutions
    fn residual<F: Fn(f64) -> (Complex64, Complex64)>(sol: F, a: f64, eps: f64, x: f64) -> f64 {
        let phi = |y: f64| sol(y).0;
        let (p0, d0) = sol(x);
        let h = 5e-3 * eps;
        let d2 = (phi(x + h) * 16.0 - phi(x + 2.0 * h) - phi(x) * 30.0 + phi(x - h) * 16.0 - phi(x - 2.0 * h))
            / (12.0 * h * h);
        (d2 * (eps * eps) + p0 * a).norm() / (p0.norm() + d0.norm())
    }

    #[test]
    fn airy_initial_data() {
        let eps = 0.0625;
        let (phi, dphi) = airy_exact_solution(eps, 1.0).unwrap();
        let t = -1.0 / eps.powf(2.0 / 3.0);
        let v = airy_pair(t).unwrap();
        assert!((phi - Complex64::new(v.ai, v.bi)).norm() < 1e-14);
        assert!((dphi + Complex64::new(v.aip, v.bip) * eps.cbrt()).norm() < 1e-14);
    }

    #[test]
    fn airy_residual() {
        let eps = 0.0625;
        for i in 0..20 {
            let x = 1.02 + 0.05 * i as f64;
            let r = residual(|y| airy_exact_solution(eps, y).unwrap(), x, eps, x);
            assert!(r < 1e-9, "x={x} r={r}");
        }
    }

    #[test]
    fn airy_derivative_consistent() {
        let eps = 0.0625;
        let h = 1e-6;
        for x in [1.1, 1.5, 1.9] {
            let fd = (airy_exact_solution(eps, x + h).unwrap().0 - airy_exact_solution(eps, x - h).unwrap().0) / (2.0 * h);
            let (_, dphi) = airy_exact_solution(eps, x).unwrap();
            assert!((fd * eps - dphi).norm() < 1e-7 * dphi.norm());
        }
    }

    #[test]
    fn exp_initial_data() {
        for eps in [0.25, 0.0625, 0.01] {
            let (phi, dphi) = expx_exact_solution(eps, 0.0).unwrap();
            assert!((phi - 1.0).norm() < 1e-10 && dphi.norm() < 1e-10, "eps={eps}");
        }
    }

    #[test]
    fn exp_residual() {
        let eps = 0.125;
        for i in 0..10 {
            let x = 0.05 + 0.1 * i as f64;
            let r = residual(|y| expx_exact_solution(eps, y).unwrap(), libm::exp(x), eps, x);
            assert!(r < 1e-9, "x={x} r={r}");
        }
    }

    #[test]
    fn envelope_is_wkb_amplitude() {
        // |phi| x^{1/4} is close to eps^{1/6} / sqrt(pi) for small eps
        let eps: f64 = 1.0 / 64.0;
        let want = eps.powf(1.0 / 6.0) / core::f64::consts::PI.sqrt();
        for i in 0..10 {
            let x = 1.0 + 0.1 * i as f64;
            let (phi, _) = airy_exact_solution(eps, x).unwrap();
            assert!((phi.norm() * x.powf(0.25) / want - 1.0).abs() < 1e-3);
        }
    }
}
