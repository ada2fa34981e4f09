//! WKB-based one-step marching schemes for `eps^2 phi'' + a(x) phi = 0`.
//!
//! The solution is transformed into a slowly varying frame `Z` in which the
//! dominant oscillations have been removed analytically. The remaining
//! oscillatory iterated integrals are approximated by asymptotic quadratures,
//! which gives schemes whose error shrinks both with the step size `h` and
//! with `eps`, so coarse `eps`-independent grids suffice.
//!
//! Three schemes are provided ([`MethodId`]): a second-order one and two
//! third-order ones. Reference solutions (Airy, Bessel and a fine-grid
//! Runge-Kutta integrator) live in [`reference`].
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coeff;
pub mod dd;
pub mod error;
pub mod fit;
pub mod gauss_kronrod;
pub mod phase_numeric;
pub mod quadrature;
pub mod reference;
pub mod series;
pub mod stepper;
pub mod wkb;

pub use coeff::{builtin_model, BuiltinModel, CoefficientModel, Jet};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use phase_numeric::NumericPhase;
pub use quadrature::Mat2;
pub use series::Series;
pub use stepper::{Frame, Grid, MethodId, State2};
pub use wkb::{h_p, AuxBundle, NodeData, PhaseMode, PhaseModel};
