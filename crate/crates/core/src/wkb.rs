//! Phase, the functions `b_p`, the auxiliary quotients and `h_p`.

use alloc::sync::Arc;

use num_complex::Complex64;

use crate::coeff::CoefficientModel;
use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::phase_numeric::NumericPhase;
use crate::series::{Series, MAX_LEN};

/// Smallest admissible value of `phi'`.
pub const PHI_PRIME_FLOOR: f64 = 1e-12;

/// Number of `b_p` available from an order-7 jet of `a`.
pub const NUM_B: usize = 6;

/// `e^{i theta}` with the argument reduced in double-double first.
pub fn cis(theta: Dd) -> Complex64 {
    let r = theta.rem_period(dd::TWO_PI).to_f64();
    Complex64::new(libm::cos(r), libm::sin(r))
}

/// `h_p(x) = e^{ix} - sum_{k<p} (ix)^k / k!`.
///
/// For `|x| <= p + 1` the tail `sum_{k>=p}` is summed instead, which avoids
/// the cancellation of the subtraction form.
pub fn h_p(p: usize, x: f64) -> Complex64 {
    let ix = Complex64::new(0.0, x);
    if p == 0 {
        return Complex64::new(libm::cos(x), libm::sin(x));
    }
    if x.abs() <= (p + 1) as f64 {
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..=p {
            term = term * ix / k as f64;
        }
        let mut sum = term;
        let mut k = p;
        loop {
            k += 1;
            term = term * ix / k as f64;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() || k > p + 80 {
                break;
            }
        }
        sum
    } else {
        let mut partial = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 0..p {
            if k > 0 {
                term = term * ix / k as f64;
            }
            partial += term;
        }
        Complex64::new(libm::cos(x), libm::sin(x)) - partial
    }
}

/// Auxiliary quotients at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AuxBundle {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub c0: f64,
    pub c1: f64,
    pub d0: f64,
    pub d1: f64,
    pub e0: f64,
    pub f0: f64,
    pub f1: f64,
    pub g0: f64,
    pub kappa0: f64,
    pub l0: f64,
}

/// Taylor expansions of `b`, `phi'` and `b_0..b_5` around one point.
#[derive(Clone, Copy, Debug)]
pub struct LocalJets {
    pub b: Series,
    pub phi_prime: Series,
    pub b_p: [Series; NUM_B],
}

impl LocalJets {
    pub fn new(model: &CoefficientModel, epsilon: f64, x: f64) -> Result<Self> {
        let a = model.series(x, MAX_LEN)?;
        if !(a.value() > 0.0) {
            return Err(Error::FloorViolated { x, value: a.value(), floor: model.a_floor() });
        }
        let q = a.powf(-0.25);
        let b = q * q.derivative().derivative() * -0.5;
        let phi_prime = a.sqrt() - b * (epsilon * epsilon);
        let value = phi_prime.value();
        if !(value >= PHI_PRIME_FLOOR) {
            return Err(Error::PhaseNotPositive { x, value, floor: PHI_PRIME_FLOOR });
        }
        let two = phi_prime * 2.0;
        let mut b_p = [b / two; NUM_B];
        for p in 1..NUM_B {
            b_p[p] = b_p[p - 1].derivative() / two;
        }
        Ok(LocalJets { b, phi_prime, b_p })
    }

    pub fn aux(&self) -> AuxBundle {
        let two = self.phi_prime * 2.0;
        let (b, b0, b1) = (self.b, self.b_p[0], self.b_p[1]);
        let c0 = b * b * b0 / two;
        let c1 = c0.derivative() / two;
        let d0 = c0 / two;
        let d1 = d0.derivative() / two;
        let f0 = b0 / two;
        let f1 = f0.derivative() / two;
        AuxBundle {
            b0: b0.value(),
            b1: b1.value(),
            b2: self.b_p[2].value(),
            b3: self.b_p[3].value(),
            b4: self.b_p[4].value(),
            b5: self.b_p[5].value(),
            c0: c0.value(),
            c1: c1.value(),
            d0: d0.value(),
            d1: d1.value(),
            e0: (c1 / two).value(),
            f0: f0.value(),
            f1: f1.value(),
            g0: (b1 / two).value(),
            kappa0: (b * b1 / two).value(),
            l0: (b * b0 * b1 / two).value(),
        }
    }
}

/// Everything the quadratures need at one point, phase excluded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalData {
    pub x: f64,
    pub b: f64,
    pub b_p: [f64; NUM_B],
    pub aux: AuxBundle,
    pub phi_prime: f64,
}

/// [`LocalData`] plus the phase value, both plain and as `phi / eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeData {
    pub local: LocalData,
    pub phi: f64,
    pub theta: Dd,
}

impl NodeData {
    pub fn x(&self) -> f64 {
        self.local.x
    }

    /// `e^{2 i phi / eps}`.
    pub fn osc2(&self) -> Complex64 {
        cis(self.theta.mul_f64(2.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseMode {
    Exact,
    Simpson,
    Chebyshev { n: usize },
}

impl core::fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PhaseMode::Exact => write!(f, "exact"),
            PhaseMode::Simpson => write!(f, "simpson"),
            PhaseMode::Chebyshev { n } => write!(f, "chebyshev{n}"),
        }
    }
}

/// The phase `phi(x) = int sqrt(a) - eps^2 int b` for one `eps`.
///
/// In every mode `phi'` and its derivatives come from the exact integrand;
/// only the values of `phi` differ.
#[derive(Clone, Debug)]
pub struct PhaseModel {
    model: CoefficientModel,
    epsilon: f64,
    mode: PhaseMode,
    numeric: Option<Arc<NumericPhase>>,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("epsilon must be positive and finite"))
    }
}

impl PhaseModel {
    pub fn exact(model: &CoefficientModel, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !model.is_exact_phase_capable() {
            return Err(Error::ExactPhaseUnavailable);
        }
        Ok(PhaseModel { model: model.clone(), epsilon, mode: PhaseMode::Exact, numeric: None })
    }

    /// Composite Simpson phase tabulated on `nodes` and their midpoints.
    pub fn simpson(model: &CoefficientModel, nodes: &[f64], epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let table = NumericPhase::simpson(model, nodes)?;
        Ok(PhaseModel {
            model: model.clone(),
            epsilon,
            mode: PhaseMode::Simpson,
            numeric: Some(Arc::new(table)),
        })
    }

    /// Spectral phase on `[lo, hi]` from `n` Chebyshev points.
    pub fn chebyshev(model: &CoefficientModel, lo: f64, hi: f64, epsilon: f64, n: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        let table = NumericPhase::chebyshev(model, lo, hi, n)?;
        Ok(PhaseModel {
            model: model.clone(),
            epsilon,
            mode: PhaseMode::Chebyshev { n },
            numeric: Some(Arc::new(table)),
        })
    }

    /// Builds a phase of the given mode covering `nodes`.
    pub fn build(model: &CoefficientModel, epsilon: f64, mode: PhaseMode, nodes: &[f64]) -> Result<Self> {
        match mode {
            PhaseMode::Exact => Self::exact(model, epsilon),
            PhaseMode::Simpson => Self::simpson(model, nodes, epsilon),
            PhaseMode::Chebyshev { n } => {
                let (lo, hi) = match (nodes.first(), nodes.last()) {
                    (Some(&lo), Some(&hi)) => (lo, hi),
                    _ => return Err(Error::InvalidGrid("empty node list")),
                };
                Self::chebyshev(model, lo, hi, epsilon, n)
            }
        }
    }

    /// Reuses a precomputed table for a different `eps`.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(PhaseModel { epsilon, ..self.clone() })
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> PhaseMode {
        self.mode
    }

    pub fn numeric(&self) -> Option<&NumericPhase> {
        self.numeric.as_deref()
    }

    /// `(int sqrt(a), int b)` in the working representation.
    fn integrals(&self, x: f64) -> Result<(f64, f64)> {
        match &self.numeric {
            None => {
                let s = self.model.antiderivative_sqrt_a(x).ok_or(Error::ExactPhaseUnavailable)?;
                let b = self.model.antiderivative_b(x).ok_or(Error::ExactPhaseUnavailable)?;
                Ok((s, b))
            }
            Some(t) => t.integrals(x),
        }
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        let (s, b) = self.integrals(x)?;
        Ok(s - self.epsilon * self.epsilon * b)
    }

    /// `phi(x) / eps` in double-double.
    pub fn theta(&self, x: f64) -> Result<Dd> {
        let eps = self.epsilon;
        match &self.numeric {
            None => {
                let s = self.model.antiderivative_sqrt_a_dd(x).ok_or(Error::ExactPhaseUnavailable)?;
                let b = self.model.antiderivative_b(x).ok_or(Error::ExactPhaseUnavailable)?;
                Ok(s.div_f64(eps) - Dd::prod(eps, b))
            }
            Some(t) => {
                let (s, b) = t.integrals(x)?;
                Ok(Dd::from_f64(s).div_f64(eps) - Dd::prod(eps, b))
            }
        }
    }

    /// `s = phi(eta) - phi(xi)` from stored values.
    pub fn increment(&self, xi: f64, eta: f64) -> Result<f64> {
        if xi == eta {
            self.integrals(xi)?;
            return Ok(0.0);
        }
        Ok(self.phi(eta)? - self.phi(xi)?)
    }

    pub fn phi_prime(&self, x: f64) -> Result<f64> {
        Ok(LocalJets::new(&self.model, self.epsilon, x)?.phi_prime.value())
    }

    /// `phi^(k)(x)` for `1 <= k <= 6`.
    pub fn phi_derivative(&self, x: f64, k: usize) -> Result<f64> {
        if k == 0 || k > NUM_B {
            return Err(Error::OrderTooHigh { requested: k, max: NUM_B });
        }
        Ok(LocalJets::new(&self.model, self.epsilon, x)?.phi_prime.derivative_at(k - 1))
    }

    pub fn jets(&self, x: f64) -> Result<LocalJets> {
        LocalJets::new(&self.model, self.epsilon, x)
    }

    pub fn local(&self, x: f64) -> Result<LocalData> {
        let j = self.jets(x)?;
        let mut b_p = [0.0; NUM_B];
        for (v, s) in b_p.iter_mut().zip(j.b_p.iter()) {
            *v = s.value();
        }
        Ok(LocalData { x, b: j.b.value(), b_p, aux: j.aux(), phi_prime: j.phi_prime.value() })
    }

    pub fn node(&self, x: f64) -> Result<NodeData> {
        let local = self.local(x)?;
        Ok(NodeData { local, phi: self.phi(x)?, theta: self.theta(x)? })
    }

    /// Verifies `a >= a_floor` and `phi' >= PHI_PRIME_FLOOR` at every point
    /// and returns the smallest `phi'` seen.
    pub fn check_positivity(&self, xs: &[f64]) -> Result<f64> {
        let mut min = f64::INFINITY;
        for &x in xs {
            self.model.check_floor(x)?;
            min = min.min(self.phi_prime(x)?);
        }
        Ok(min)
    }
}

/// `b(x)` from the order-2 jet of `a`.
pub fn beta(model: &CoefficientModel, x: f64) -> Result<f64> {
    model.beta(x)
}

/// `b_p(x)`, `0 <= p <= 5`.
pub fn beta_p(x: f64, p: usize, phase: &PhaseModel) -> Result<f64> {
    if p >= NUM_B {
        return Err(Error::OrderTooHigh { requested: p, max: NUM_B - 1 });
    }
    Ok(phase.jets(x)?.b_p[p].value())
}

pub fn aux_bundle(x: f64, phase: &PhaseModel) -> Result<AuxBundle> {
    Ok(phase.jets(x)?.aux())
}

pub fn phase_value(phase: &PhaseModel, x: f64) -> Result<f64> {
    phase.phi(x)
}

pub fn phase_increment(phase: &PhaseModel, xi: f64, eta: f64) -> Result<f64> {
    phase.increment(xi, eta)
}
