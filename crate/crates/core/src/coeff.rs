//! Coefficient functions `a(x)` together with their derivative jets.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;
use core::str::FromStr;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::series::{Series, MAX_LEN};

/// Highest derivative of `a` the schemes consume (`b_5` needs `a^(7)`).
pub const MAX_JET_ORDER: usize = 7;

/// Derivatives `[f(x), f'(x), ..., f^(k)(x)]` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    x: f64,
    values: [f64; MAX_LEN],
    order: usize,
}

impl Jet {
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..=self.order]
    }

    pub fn to_series(&self) -> Series {
        Series::from_derivatives(self.values())
    }
}

type TaylorFn = dyn Fn(Series) -> Series + Send + Sync;
type DerivativeFn = dyn Fn(f64, &mut [f64; MAX_LEN]) + Send + Sync;
type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;
type DdFn = dyn Fn(f64) -> Dd + Send + Sync;

#[derive(Clone)]
enum JetProvider {
    Linear,
    Exp,
    Constant(f64),
    Derivatives(Arc<DerivativeFn>),
    Taylor(Arc<TaylorFn>),
}

/// The coefficient `a(x)` of `eps^2 phi'' + a(x) phi = 0`.
///
/// Immutable once built; clones share the underlying closures.
#[derive(Clone)]
pub struct CoefficientModel {
    name: String,
    lo: f64,
    hi: f64,
    a_floor: f64,
    jets: JetProvider,
    sqrt_a_integral: Option<Arc<ScalarFn>>,
    // Extended-precision variant, used to keep phi/eps accurate for small eps.
    sqrt_a_integral_dd: Option<Arc<DdFn>>,
    b_integral: Option<Arc<ScalarFn>>,
}

impl fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientModel")
            .field("name", &self.name)
            .field("domain", &(self.lo, self.hi))
            .field("a_floor", &self.a_floor)
            .field("exact_phase", &self.is_exact_phase_capable())
            .finish()
    }
}

/// Models shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BuiltinModel {
    /// `a(x) = x` on `[1, x_end]`.
    Airy { x_end: f64 },
    /// `a(x) = e^x` on `[0, 1]`.
    Exp,
    /// `a(x) = value` on `[lo, hi]`.
    Constant { value: f64, lo: f64, hi: f64 },
}

impl FromStr for BuiltinModel {
    type Err = Error;

    /// Accepts `airy`, `airy(<x_end>)`, `exp`, `constant(<c>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(Error::UnknownModel(s.to_string())),
            None => (s, None),
        };
        let parse_arg = |a: &str| -> Result<f64> {
            a.trim().parse::<f64>().map_err(|_| Error::UnknownModel(s.to_string()))
        };
        match (head.trim().to_ascii_lowercase().as_str(), arg) {
            ("airy", None) => Ok(BuiltinModel::Airy { x_end: 2.0 }),
            ("airy", Some(a)) => Ok(BuiltinModel::Airy { x_end: parse_arg(a)? }),
            ("exp", None) => Ok(BuiltinModel::Exp),
            ("constant", Some(a)) => Ok(BuiltinModel::Constant { value: parse_arg(a)?, lo: 0.0, hi: 1.0 }),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }
}

pub fn builtin_model(which: BuiltinModel) -> Result<CoefficientModel> {
    match which {
        BuiltinModel::Airy { x_end } => CoefficientModel::airy(x_end),
        BuiltinModel::Exp => Ok(CoefficientModel::exp()),
        BuiltinModel::Constant { value, lo, hi } => CoefficientModel::constant(value, lo, hi),
    }
}

impl CoefficientModel {
    /// `a(x) = x` on `[1, x_end]`, `1 < x_end <= 100`.
    pub fn airy(x_end: f64) -> Result<Self> {
        if !(x_end > 1.0 && x_end <= 100.0) {
            return Err(Error::InvalidParameter("airy model needs 1 < x_end <= 100"));
        }
        let lo = 1.0;
        let s_lo = libm::pow(lo, 1.5);
        let b_lo = libm::pow(lo, -1.5);
        Ok(CoefficientModel {
            name: "airy".to_string(),
            lo,
            hi: x_end,
            a_floor: 1.0,
            jets: JetProvider::Linear,
            sqrt_a_integral: Some(Arc::new(move |x: f64| (2.0 / 3.0) * (libm::pow(x, 1.5) - s_lo))),
            sqrt_a_integral_dd: Some(Arc::new(move |x: f64| {
                let two_thirds = Dd::from_f64(2.0).div_f64(3.0);
                (Dd::sqrt_f64(x).mul_f64(x) - Dd::sqrt_f64(lo).mul_f64(lo)) * two_thirds
            })),
            b_integral: Some(Arc::new(move |x: f64| (5.0 / 48.0) * (libm::pow(x, -1.5) - b_lo))),
        })
    }

    /// `a(x) = e^x` on `[0, 1]`.
    pub fn exp() -> Self {
        CoefficientModel {
            name: "exp".to_string(),
            lo: 0.0,
            hi: 1.0,
            a_floor: 1.0,
            jets: JetProvider::Exp,
            sqrt_a_integral: Some(Arc::new(|x: f64| 2.0 * libm::expm1(0.5 * x))),
            sqrt_a_integral_dd: None,
            b_integral: Some(Arc::new(|x: f64| libm::expm1(-0.5 * x) / 16.0)),
        }
    }

    pub fn constant(value: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter("constant coefficient must be positive"));
        }
        if !(lo < hi) {
            return Err(Error::InvalidParameter("empty domain"));
        }
        let root = libm::sqrt(value);
        Ok(CoefficientModel {
            name: format!("constant({value})"),
            lo,
            hi,
            a_floor: value,
            jets: JetProvider::Constant(value),
            sqrt_a_integral: Some(Arc::new(move |x: f64| root * (x - lo))),
            sqrt_a_integral_dd: Some(Arc::new(move |x: f64| (Dd::from_f64(x) - Dd::from_f64(lo)) * Dd::sqrt_f64(value))),
            b_integral: Some(Arc::new(|_| 0.0)),
        })
    }

    /// A user model whose jets come from evaluating `a` on a Taylor variable.
    pub fn from_taylor<F>(name: &str, lo: f64, hi: f64, a_floor: f64, a: F) -> Result<Self>
    where
        F: Fn(Series) -> Series + Send + Sync + 'static,
    {
        Self::custom(name, lo, hi, a_floor, JetProvider::Taylor(Arc::new(a)))
    }

    /// A user model with closed-form derivatives: `derivs(x, out)` fills
    /// `out[k] = a^(k)(x)` for `k = 0..=7`.
    pub fn from_derivatives<F>(name: &str, lo: f64, hi: f64, a_floor: f64, derivs: F) -> Result<Self>
    where
        F: Fn(f64, &mut [f64; MAX_LEN]) + Send + Sync + 'static,
    {
        Self::custom(name, lo, hi, a_floor, JetProvider::Derivatives(Arc::new(derivs)))
    }

    fn custom(name: &str, lo: f64, hi: f64, a_floor: f64, jets: JetProvider) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter("empty domain"));
        }
        if !(a_floor > 0.0) {
            return Err(Error::InvalidParameter("a_floor must be positive"));
        }
        Ok(CoefficientModel {
            name: name.to_string(),
            lo,
            hi,
            a_floor,
            jets,
            sqrt_a_integral: None,
            sqrt_a_integral_dd: None,
            b_integral: None,
        })
    }

    /// Attaches closed-form antiderivatives of `sqrt(a)` and `b`, both
    /// normalized to vanish at the left end of the domain.
    pub fn with_antiderivatives<S, B>(mut self, sqrt_a: S, b: B) -> Self
    where
        S: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.sqrt_a_integral = Some(Arc::new(sqrt_a));
        self.sqrt_a_integral_dd = None;
        self.b_integral = Some(Arc::new(b));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn a_floor(&self) -> f64 {
        self.a_floor
    }

    pub fn is_exact_phase_capable(&self) -> bool {
        self.sqrt_a_integral.is_some() && self.b_integral.is_some()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: self.lo, hi: self.hi })
        }
    }

    /// Taylor series of `a` around `x` with `len` coefficients.
    pub fn series(&self, x: f64, len: usize) -> Result<Series> {
        self.check_domain(x)?;
        if len == 0 || len > MAX_LEN {
            return Err(Error::OrderTooHigh { requested: len.saturating_sub(1), max: MAX_JET_ORDER });
        }
        let s = match &self.jets {
            JetProvider::Linear => Series::variable(x, len),
            JetProvider::Constant(c) => Series::constant(*c, len),
            JetProvider::Exp => {
                let e = libm::exp(x);
                let mut c = [0.0; MAX_LEN];
                let mut f = 1.0;
                for (k, ck) in c.iter_mut().enumerate().take(len) {
                    if k > 0 {
                        f *= k as f64;
                    }
                    *ck = e / f;
                }
                Series::from_coeffs(&c[..len])
            }
            JetProvider::Derivatives(d) => {
                let mut out = [0.0; MAX_LEN];
                d(x, &mut out);
                Series::from_derivatives(&out[..len])
            }
            JetProvider::Taylor(f) => f(Series::variable(x, len)).truncate(len),
        };
        Ok(s)
    }

    /// `[a(x), a'(x), ..., a^(order)(x)]`.
    pub fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        if order > MAX_JET_ORDER {
            return Err(Error::OrderTooHigh { requested: order, max: MAX_JET_ORDER });
        }
        let s = self.series(x, order + 1)?;
        let mut values = [0.0; MAX_LEN];
        for (k, v) in values.iter_mut().enumerate().take(order + 1) {
            *v = s.derivative_at(k);
        }
        Ok(Jet { x, values, order })
    }

    pub fn a(&self, x: f64) -> Result<f64> {
        Ok(self.series(x, 1)?.value())
    }

    /// `b(x) = -a^{-1/4} (a^{-1/4})'' / 2`, expanded in `a, a', a''`.
    pub fn beta(&self, x: f64) -> Result<f64> {
        let j = self.jet(x, 2)?;
        let [a, a1, a2] = [j.values[0], j.values[1], j.values[2]];
        Ok(-(5.0 / 32.0) * a1 * a1 * libm::pow(a, -2.5) + 0.125 * a2 * libm::pow(a, -1.5))
    }

    /// `int_{lo}^{x} sqrt(a)`, when available in closed form.
    pub fn antiderivative_sqrt_a(&self, x: f64) -> Option<f64> {
        self.sqrt_a_integral.as_ref().map(|f| f(x))
    }

    /// Same as [`Self::antiderivative_sqrt_a`], carried in double-double
    /// where the closed form allows it.
    pub fn antiderivative_sqrt_a_dd(&self, x: f64) -> Option<Dd> {
        match &self.sqrt_a_integral_dd {
            Some(f) => Some(f(x)),
            None => self.antiderivative_sqrt_a(x).map(Dd::from_f64),
        }
    }

    /// `int_{lo}^{x} b`, when available in closed form.
    pub fn antiderivative_b(&self, x: f64) -> Option<f64> {
        self.b_integral.as_ref().map(|f| f(x))
    }

    /// Checks `a(x) >= a_floor`.
    pub fn check_floor(&self, x: f64) -> Result<()> {
        let value = self.a(x)?;
        if value >= self.a_floor && value.is_finite() {
            Ok(())
        } else {
            Err(Error::FloorViolated { x, value, floor: self.a_floor })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn airy_jet() {
        let m = CoefficientModel::airy(2.0).unwrap();
        assert_eq!(m.jet(1.0, 2).unwrap().values(), &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn constant_jet() {
        let m = CoefficientModel::constant(1.0, 0.0, 1.0).unwrap();
        assert_eq!(m.jet(0.3, 3).unwrap().values(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn exp_jet() {
        let m = CoefficientModel::exp();
        for v in m.jet(0.0, 3).unwrap().values() {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn jet_errors() {
        let m = CoefficientModel::exp();
        assert!(matches!(m.jet(1.5, 2), Err(Error::OutOfDomain { .. })));
        assert!(matches!(m.jet(0.5, 8), Err(Error::OrderTooHigh { requested: 8, .. })));
    }

    #[test]
    fn builtin_names() {
        assert_eq!("airy".parse::<BuiltinModel>().unwrap(), BuiltinModel::Airy { x_end: 2.0 });
        assert_eq!("airy(100)".parse::<BuiltinModel>().unwrap(), BuiltinModel::Airy { x_end: 100.0 });
        assert_eq!(
            "constant(2.5)".parse::<BuiltinModel>().unwrap(),
            BuiltinModel::Constant { value: 2.5, lo: 0.0, hi: 1.0 }
        );
        assert!(matches!("bessel".parse::<BuiltinModel>(), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn airy_sqrt_a_increment() {
        let m = builtin_model(BuiltinModel::Airy { x_end: 2.0 }).unwrap();
        let d = m.antiderivative_sqrt_a(2.0).unwrap() - m.antiderivative_sqrt_a(1.0).unwrap();
        assert_relative_eq!(d, (2.0 / 3.0) * (2f64.powf(1.5) - 1.0), epsilon = 1e-15);
        assert_relative_eq!(d, 1.218_951_416_497_460, epsilon = 1e-14);
    }

    #[test]
    fn exp_b_antiderivative() {
        let m = CoefficientModel::exp();
        for x in [0.0, 0.3, 1.0] {
            let want = (libm::exp(-x / 2.0) - 1.0) / 16.0;
            assert_relative_eq!(m.antiderivative_b(x).unwrap(), want, epsilon = 1e-15, max_relative = 1e-13);
            assert_relative_eq!(m.beta(x).unwrap(), -libm::exp(-x / 2.0) / 32.0, epsilon = 1e-16);
        }
    }

    #[test]
    fn constant_has_zero_b() {
        let m = CoefficientModel::constant(1.0, 0.0, 1.0).unwrap();
        assert_eq!(m.antiderivative_b(0.7), Some(0.0));
        assert_eq!(m.beta(0.7).unwrap(), 0.0);
    }

    #[test]
    fn airy_beta_closed_form() {
        let m = CoefficientModel::airy(2.0).unwrap();
        assert_relative_eq!(m.beta(1.0).unwrap(), -0.15625, epsilon = 1e-16);
    }

    #[test]
    fn taylor_model_matches_closed_form() {
        let m = CoefficientModel::from_taylor("exp2", 0.0, 1.0, 1.0, |x| x.exp()).unwrap();
        let e = CoefficientModel::exp();
        let a = m.jet(0.4, 7).unwrap();
        let b = e.jet(0.4, 7).unwrap();
        for (u, v) in a.values().iter().zip(b.values()) {
            assert_relative_eq!(*u, *v, max_relative = 1e-14);
        }
        assert!(!m.is_exact_phase_capable());
    }

    #[test]
    fn floor_violation() {
        let m = CoefficientModel::from_taylor("dip", 0.0, 1.0, 0.5, |x| x * x + 0.1).unwrap();
        assert!(m.check_floor(0.9).is_ok());
        assert!(matches!(m.check_floor(0.1), Err(Error::FloorViolated { .. })));
    }
}
