//! Coefficient models, initial data and reference solutions per problem.

use wkb_march::reference::{airy_exact_solution, rk_oracle, ReferenceSolution};
use wkb_march::{builtin_model, BuiltinModel, CoefficientModel, Complex64, Series};

use crate::config::{CustomProblem, Problem};
use crate::error::CliError;

/// Exact or oracle solution `x -> (phi, eps phi')`.
#[derive(Clone, Debug)]
pub enum Reference {
    Oracle(ReferenceSolution),
    /// `e^{i k (x - lo) / eps}` for constant `a = k^2`.
    PlaneWave { k: f64, lo: f64, epsilon: f64 },
}

impl Reference {
    pub fn eval(&self, x: f64) -> wkb_march::Result<(Complex64, Complex64)> {
        match self {
            Reference::Oracle(r) => r.eval(x),
            Reference::PlaneWave { k, lo, epsilon } => {
                let phi = Complex64::new(0.0, k * (x - lo) / epsilon).exp();
                Ok((phi, phi * Complex64::new(0.0, *k)))
            }
        }
    }
}

pub fn model(problem: &Problem) -> Result<CoefficientModel, CliError> {
    match problem {
        Problem::Builtin(b) => Ok(builtin_model(*b)?),
        Problem::Custom(c) => custom_model(c),
    }
}

fn custom_model(c: &CustomProblem) -> Result<CoefficientModel, CliError> {
    let (lo, hi) = (c.interval[0], c.interval[1]);
    let coeffs = c.coefficients.clone();
    let horner = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
    let samples = 1000;
    let a_min = (0..=samples).map(|i| horner(lo + (hi - lo) * i as f64 / samples as f64)).fold(f64::INFINITY, f64::min);
    if !(a_min > 0.0) {
        return Err(CliError::Config(format!("custom a(x) must stay positive on [{lo}, {hi}], sampled min {a_min}")));
    }
    let taylor = c.coefficients.clone();
    let m = CoefficientModel::from_taylor("custom", lo, hi, 0.5 * a_min, move |x: Series| {
        taylor.iter().rev().fold(x.clone().scale(0.0), |acc, &ck| (acc * x.clone()).add_scalar(ck))
    })?;
    Ok(m)
}

/// Initial data `(phi, eps phi')` at the left end.
pub fn initial_data(problem: &Problem, epsilon: f64) -> Result<(Complex64, Complex64), CliError> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match problem {
        Problem::Builtin(BuiltinModel::Airy { .. }) => Ok(airy_exact_solution(epsilon, 1.0)?),
        Problem::Builtin(BuiltinModel::Exp) => Ok((c(1.0, 0.0), c(0.0, 0.0))),
        Problem::Builtin(BuiltinModel::Constant { value, .. }) => Ok((c(1.0, 0.0), c(0.0, value.sqrt()))),
        Problem::Custom(p) => Ok((c(p.phi0[0], p.phi0[1]), c(p.eps_dphi0[0], p.eps_dphi0[1]))),
    }
}

pub fn reference(problem: &Problem, model: &CoefficientModel, epsilon: f64) -> Result<Reference, CliError> {
    match problem {
        Problem::Builtin(BuiltinModel::Airy { .. }) => Ok(Reference::Oracle(ReferenceSolution::Airy { epsilon })),
        Problem::Builtin(BuiltinModel::Exp) => Ok(Reference::Oracle(ReferenceSolution::Bessel { epsilon })),
        Problem::Builtin(BuiltinModel::Constant { value, lo, .. }) => {
            Ok(Reference::PlaneWave { k: value.sqrt(), lo: *lo, epsilon })
        }
        Problem::Custom(p) => {
            let (phi0, d0) = initial_data(problem, epsilon)?;
            let rk = rk_oracle(model, epsilon, p.interval[0], p.interval[1], phi0, d0, p.steps_per_wavelength)?;
            Ok(Reference::Oracle(ReferenceSolution::Rk(rk)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn custom_polynomial_jets() {
        let p = CustomProblem {
            coefficients: vec![1.0, 2.0, 0.5],
            interval: [0.0, 1.0],
            phi0: [1.0, 0.0],
            eps_dphi0: [0.0, 0.0],
            steps_per_wavelength: 400,
        };
        let m = custom_model(&p).unwrap();
        let jet = m.jet(0.5, 3).unwrap();
        let v = jet.values();
        assert!((v[0] - (1.0 + 1.0 + 0.125)).abs() < 1e-15);
        assert!((v[1] - 2.5).abs() < 1e-15);
        assert!((v[2] - 1.0).abs() < 1e-15);
        assert!(v[3].abs() < 1e-15);
    }

    #[test]
    fn nonpositive_custom_rejected() {
        let p = CustomProblem {
            coefficients: vec![-0.1, 1.0],
            interval: [0.0, 1.0],
            phi0: [1.0, 0.0],
            eps_dphi0: [0.0, 0.0],
            steps_per_wavelength: 400,
        };
        assert!(matches!(custom_model(&p), Err(CliError::Config(_))));
    }

    #[test]
    fn plane_wave_reference_solves_constant_problem() {
        let r = Reference::PlaneWave { k: 2.0, lo: 0.0, epsilon: 0.1 };
        let (p, d) = r.eval(0.3).unwrap();
        assert!((p - Complex64::new(0.0, 6.0).exp()).norm() < 1e-15);
        assert!((d - p * Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }
}
