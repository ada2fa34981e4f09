//! Frame transforms and the one-step marching schemes.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::coeff::CoefficientModel;
use crate::error::{Error, Result};
use crate::quadrature::{Mat2, Step};
use crate::wkb::{cis, PhaseModel};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodId {
    Wkb2,
    Wkb3,
    Wkb3s,
}

impl MethodId {
    pub const ALL: [MethodId; 3] = [MethodId::Wkb2, MethodId::Wkb3, MethodId::Wkb3s];

    pub fn name(&self) -> &'static str {
        match self {
            MethodId::Wkb2 => "WKB2",
            MethodId::Wkb3 => "WKB3",
            MethodId::Wkb3s => "WKB3S",
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "WKB2" => Ok(MethodId::Wkb2),
            "WKB3" => Ok(MethodId::Wkb3),
            "WKB3S" => Ok(MethodId::Wkb3s),
            _ => Err(Error::InvalidParameter("method must be WKB2, WKB3 or WKB3S")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `(phi, eps phi')`
    Wave,
    U,
    Z,
}

impl Frame {
    fn name(&self) -> &'static str {
        match self {
            Frame::Wave => "wave",
            Frame::U => "U",
            Frame::Z => "Z",
        }
    }
}

/// A complex 2-vector tagged with its frame and location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State2 {
    pub v: [Complex64; 2],
    pub frame: Frame,
    pub x: f64,
}

impl State2 {
    pub fn new(v: [Complex64; 2], frame: Frame, x: f64) -> Self {
        State2 { v, frame, x }
    }

    fn expect(&self, frame: Frame) -> Result<()> {
        if self.frame == frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch { expected: frame.name(), found: self.frame.name() })
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.v[0].norm().max(self.v[1].norm())
    }

    pub fn norm2(&self) -> f64 {
        libm::sqrt(self.v[0].norm_sqr() + self.v[1].norm_sqr())
    }

    /// `max |self_i - other_i|`.
    pub fn dist_inf(&self, other: &State2) -> f64 {
        (self.v[0] - other.v[0]).norm().max((self.v[1] - other.v[1]).norm())
    }
}

/// Strictly increasing nodes `x_0 < ... < x_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
}

impl Grid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidGrid("a grid needs at least one node"));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("non-finite node"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("nodes must be strictly increasing"));
        }
        Ok(Grid { nodes })
    }

    /// Equidistant grid with step close to `h`; the last node is `x_end`.
    pub fn uniform(x0: f64, x_end: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(x0 < x_end) {
            return Err(Error::InvalidGrid("need h > 0 and x0 < x_end"));
        }
        let ratio = (x_end - x0) / h;
        let near = libm::round(ratio);
        let n = if (ratio - near).abs() <= 1e-9 * ratio.max(1.0) { near } else { libm::ceil(ratio) } as usize;
        let n = n.max(1);
        let step = (x_end - x0) / n as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| x0 + i as f64 * step).collect();
        nodes.push(x_end);
        Grid::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn h_max(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Nodes followed by all interval midpoints.
    pub fn nodes_and_midpoints(&self) -> Vec<f64> {
        let mut out = self.nodes.clone();
        out.extend(self.nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        out
    }
}

/// `a^{1/4}`, its derivative and `sqrt(a)` at `x`.
fn quarter_root(model: &CoefficientModel, x: f64) -> Result<(f64, f64, f64)> {
    let q = model.series(x, 2)?.powf(0.25);
    let v = q.value();
    Ok((v, q.derivative_at(1), v * v))
}

/// `(phi, eps phi')` to `U`.
pub fn wave_to_u(phi: Complex64, eps_dphi: Complex64, x: f64, model: &CoefficientModel, epsilon: f64) -> Result<State2> {
    let (q, dq, root) = quarter_root(model, x)?;
    let u1 = phi * q;
    let u2 = (eps_dphi * q + phi * (epsilon * dq)) / root;
    Ok(State2::new([u1, u2], Frame::U, x))
}

/// Exact inverse of [`wave_to_u`].
pub fn u_to_wave(u: &State2, model: &CoefficientModel, epsilon: f64) -> Result<State2> {
    u.expect(Frame::U)?;
    let (q, dq, root) = quarter_root(model, u.x)?;
    let phi = u.v[0] / q;
    let eps_dphi = (u.v[1] * root - phi * (epsilon * dq)) / q;
    Ok(State2::new([phi, eps_dphi], Frame::Wave, u.x))
}

fn p_apply(v: [Complex64; 2]) -> [Complex64; 2] {
    [(I * v[0] + v[1]) * FRAC_1_SQRT_2, (v[0] + I * v[1]) * FRAC_1_SQRT_2]
}

fn p_adjoint_apply(v: [Complex64; 2]) -> [Complex64; 2] {
    [(-I * v[0] + v[1]) * FRAC_1_SQRT_2, (v[0] - I * v[1]) * FRAC_1_SQRT_2]
}

/// `Z = exp(-i Phi / eps) P U` with `Phi = diag(phi, -phi)`.
pub fn u_to_z(u: &State2, phase: &PhaseModel) -> Result<State2> {
    u.expect(Frame::U)?;
    let e = cis(phase.theta(u.x)?);
    let pu = p_apply(u.v);
    Ok(State2::new([pu[0] * e.conj(), pu[1] * e], Frame::Z, u.x))
}

pub fn z_to_u(z: &State2, phase: &PhaseModel) -> Result<State2> {
    z.expect(Frame::Z)?;
    let e = cis(phase.theta(z.x)?);
    Ok(State2::new(p_adjoint_apply([z.v[0] * e, z.v[1] * e.conj()]), Frame::U, z.x))
}

fn assemble(diag: Complex64, off: Complex64) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    Mat2::new(one + diag, off.conj(), off, one + diag.conj())
}

/// `I + A^1 + A^2 (+ A^3)` for one step.
pub fn step_matrix_from(method: MethodId, step: &Step) -> Result<Mat2> {
    let eps = step.epsilon;
    let (e2, e3) = (eps * eps, eps * eps * eps);
    let m = match method {
        MethodId::Wkb3 => {
            let off = step.q1(3, 3)? * eps + step.q3() * e3;
            assemble(step.q2() * e2, off)
        }
        MethodId::Wkb3s => {
            let off = step.q1(2, 3)? * eps + step.q3_simp() * e3;
            assemble(step.q2_simp() * e2, off)
        }
        MethodId::Wkb2 => {
            let off = step.q1(2, 2)? * eps;
            assemble(step.q2_weak() * e2, off)
        }
    };
    Ok(m)
}

pub fn step_matrix(method: MethodId, xi: f64, eta: f64, phase: &PhaseModel) -> Result<Mat2> {
    step_matrix_from(method, &Step::new(phase, xi, eta)?)
}

/// Checks `a` and `phi'` at every node and midpoint of `grid`.
pub fn check_grid(grid: &Grid, phase: &PhaseModel) -> Result<f64> {
    phase.check_positivity(&grid.nodes_and_midpoints())
}

/// `Z_n` for every node, starting from `z0` at the first node.
pub fn march(method: MethodId, grid: &Grid, z0: &State2, phase: &PhaseModel) -> Result<Vec<State2>> {
    z0.expect(Frame::Z)?;
    let nodes = grid.nodes();
    if z0.x != nodes[0] {
        return Err(Error::InvalidParameter("initial state must sit at the first grid node"));
    }
    check_grid(grid, phase)?;
    let eps = phase.epsilon();
    let mut out = Vec::with_capacity(nodes.len());
    out.push(*z0);
    let mut z = z0.v;
    let mut left = phase.node(nodes[0])?;
    for w in nodes.windows(2) {
        let right = phase.node(w[1])?;
        let mid = phase.local(0.5 * (w[0] + w[1]))?;
        let step = Step::from_parts(left, right, mid, eps);
        z = step_matrix_from(method, &step)?.apply(z);
        out.push(State2::new(z, Frame::Z, w[1]));
        left = right;
    }
    Ok(out)
}

/// Numerical solution at every grid node, in all three frames.
#[derive(Clone, Debug)]
pub struct Solution {
    pub z: Vec<State2>,
    pub u: Vec<State2>,
    pub wave: Vec<State2>,
}

pub fn solve(method: MethodId, grid: &Grid, phi0: Complex64, eps_dphi0: Complex64, phase: &PhaseModel) -> Result<Solution> {
    if !(phi0.re.is_finite() && phi0.im.is_finite() && eps_dphi0.re.is_finite() && eps_dphi0.im.is_finite()) {
        return Err(Error::InvalidParameter("initial data must be finite"));
    }
    let model = phase.model();
    let eps = phase.epsilon();
    let x0 = grid.nodes()[0];
    let u0 = wave_to_u(phi0, eps_dphi0, x0, model, eps)?;
    let z0 = u_to_z(&u0, phase)?;
    let z = march(method, grid, &z0, phase)?;
    let mut u = Vec::with_capacity(z.len());
    let mut wave = Vec::with_capacity(z.len());
    for (k, zn) in z.iter().enumerate() {
        // the first node returns the initial data untouched
        let un = if k == 0 { u0 } else { z_to_u(zn, phase)? };
        let wn = if k == 0 { State2::new([phi0, eps_dphi0], Frame::Wave, x0) } else { u_to_wave(&un, model, eps)? };
        u.push(un);
        wave.push(wn);
    }
    Ok(Solution { z, u, wave })
}

/// `(phi_n, eps phi'_n)` at every node.
pub fn solve_ivp(
    method: MethodId,
    grid: &Grid,
    phi0: Complex64,
    eps_dphi0: Complex64,
    phase: &PhaseModel,
) -> Result<Vec<(Complex64, Complex64)>> {
    Ok(solve(method, grid, phi0, eps_dphi0, phase)?.wave.iter().map(|s| (s.v[0], s.v[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn wave_to_u_examples() {
        let one = CoefficientModel::constant(1.0, 0.0, 1.0).unwrap();
        let u = wave_to_u(c(1.0, 0.0), c(0.0, 0.0), 0.4, &one, 0.1).unwrap();
        assert_eq!(u.v, [c(1.0, 0.0), c(0.0, 0.0)]);
        let airy = CoefficientModel::airy(2.0).unwrap();
        let u = wave_to_u(c(1.0, 0.0), c(0.0, 0.0), 1.0, &airy, 0.1).unwrap();
        assert!((u.v[0] - 1.0).norm() < 1e-16);
        assert!((u.v[1] - 0.025).norm() < 1e-17);
        let back = u_to_wave(&u, &airy, 0.1).unwrap();
        assert!((back.v[0] - 1.0).norm() < 1e-16 && back.v[1].norm() < 1e-17);
    }

    #[test]
    fn z_at_phase_origin_is_pu() {
        let airy = CoefficientModel::airy(2.0).unwrap();
        let phase = PhaseModel::exact(&airy, 0.1).unwrap();
        let u = State2::new([c(0.3, -1.0), c(2.0, 0.5)], Frame::U, 1.0);
        let z = u_to_z(&u, &phase).unwrap();
        assert_eq!(z.v, p_apply(u.v));
    }

    #[test]
    fn frame_tags_are_checked() {
        let airy = CoefficientModel::airy(2.0).unwrap();
        let phase = PhaseModel::exact(&airy, 0.1).unwrap();
        let z = State2::new([c(1.0, 0.0); 2], Frame::Z, 1.5);
        assert!(matches!(u_to_z(&z, &phase), Err(Error::FrameMismatch { .. })));
    }

    #[test]
    fn uniform_grid() {
        let g = Grid::uniform(1.0, 2.0, 0.125).unwrap();
        assert_eq!(g.n_steps(), 8);
        assert_eq!(*g.nodes().last().unwrap(), 2.0);
        let g = Grid::uniform(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.n_steps(), 4);
        assert!(Grid::new(alloc::vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn single_node_grid_returns_initial_data() {
        let airy = CoefficientModel::airy(2.0).unwrap();
        let phase = PhaseModel::exact(&airy, 0.1).unwrap();
        let g = Grid::new(alloc::vec![1.5]).unwrap();
        let out = solve_ivp(MethodId::Wkb3, &g, c(1.0, 2.0), c(-0.5, 0.25), &phase).unwrap();
        assert_eq!(out, alloc::vec![(c(1.0, 2.0), c(-0.5, 0.25))]);
    }

    #[test]
    fn constant_coefficient_is_exact() {
        let one = CoefficientModel::constant(1.0, 0.0, 1.0).unwrap();
        let eps = 0.1;
        let phase = PhaseModel::exact(&one, eps).unwrap();
        let g = Grid::uniform(0.0, 1.0, 0.25).unwrap();
        for m in MethodId::ALL {
            let out = solve_ivp(m, &g, c(1.0, 0.0), c(0.0, 1.0), &phase).unwrap();
            for (x, (phi, dphi)) in g.nodes().iter().zip(out) {
                let want = Complex64::new(0.0, x / eps).exp();
                assert!((phi - want).norm() < 1e-13 && (dphi - want * I).norm() < 1e-13);
            }
        }
    }
}
