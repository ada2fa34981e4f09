use num_complex::Complex64;
use proptest::prelude::*;

use wkb_march::gauss_kronrod;
use wkb_march::stepper::{step_matrix, u_to_z, wave_to_u, z_to_u};
use wkb_march::{h_p, CoefficientModel, Frame, MethodId, PhaseModel, State2};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn airy_phase(eps: f64) -> PhaseModel {
    PhaseModel::exact(&CoefficientModel::airy(2.0).unwrap(), eps).unwrap()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn u_z_roundtrip_and_norm(
        x in 1.0..2.0f64,
        eps in 0.001..0.5f64,
        re0 in -3.0..3.0f64, im0 in -3.0..3.0f64,
        re1 in -3.0..3.0f64, im1 in -3.0..3.0f64,
    ) {
        let phase = airy_phase(eps);
        let u = State2::new([c(re0, im0), c(re1, im1)], Frame::U, x);
        let z = u_to_z(&u, &phase).unwrap();
        let back = z_to_u(&z, &phase).unwrap();
        prop_assert!(back.dist_inf(&u) <= 1e-15 * u.norm_inf().max(1.0));
        prop_assert!((z.norm2() - u.norm2()).abs() <= 1e-15 * u.norm2().max(1.0));
    }

    #[test]
    fn wave_to_u_is_linear(
        x in 1.0..2.0f64,
        eps in 0.01..0.5f64,
        p in -2.0..2.0f64, d in -2.0..2.0f64,
        ar in -2.0..2.0f64, ai in -2.0..2.0f64,
    ) {
        let m = CoefficientModel::airy(2.0).unwrap();
        let alpha = c(ar, ai);
        let u = wave_to_u(c(p, 0.0), c(d, 0.0), x, &m, eps).unwrap();
        let scaled = wave_to_u(alpha * p, alpha * d, x, &m, eps).unwrap();
        for k in 0..2 {
            prop_assert!((scaled.v[k] - alpha * u.v[k]).norm() <= 1e-14 * (1.0 + scaled.v[k].norm()));
        }
    }

    #[test]
    fn step_preserves_conjugate_pairs(
        xi in 1.0..1.9f64,
        h in 0.001..0.1f64,
        eps in 0.01..0.5f64,
        re in -1.0..1.0f64, im in -1.0..1.0f64,
    ) {
        let phase = airy_phase(eps);
        let z = [c(re, im), c(re, -im)];
        for method in MethodId::ALL {
            let s = step_matrix(method, xi, xi + h, &phase).unwrap();
            let w = s.apply(z);
            prop_assert!((w[1] - w[0].conj()).norm() <= 1e-14);
        }
    }

    #[test]
    fn h_p_derivative_recurrence(p in 1usize..=5, x in -20.0..20.0f64) {
        prop_assume!(x.abs() > 1e-3);
        let d = 1e-3;
        let f = |t: f64| h_p(p, t);
        let fd = (f(x - 2.0 * d) - f(x - d) * 8.0 + f(x + d) * 8.0 - f(x + 2.0 * d)) / (12.0 * d);
        let want = Complex64::i() * h_p(p - 1, x);
        // h_1 has zeros at multiples of 2 pi, so the relative check is floored
        prop_assert!((fd - want).norm() <= 1e-8 * want.norm().max(1e-2), "fd {fd} want {want}");
    }

    #[test]
    fn h_p_magnitude_bound(p in 1usize..=6, x in -50.0..50.0f64) {
        let ax = x.abs();
        let bound = (ax.powi(p as i32) / factorial(p)).min(2.0 * ax.powi(p as i32 - 1) / factorial(p - 1));
        prop_assert!(h_p(p, x).norm() <= bound * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn sqrt_antiderivative_matches_quadrature(a in 1.0..2.0f64, b in 1.0..2.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let m = CoefficientModel::airy(2.0).unwrap();
        let want = gauss_kronrod::integrate(|y| Ok(Complex64::new(y.sqrt(), 0.0)), lo, hi, 1e-15, 200).unwrap().re;
        let got = m.antiderivative_sqrt_a(hi).unwrap() - m.antiderivative_sqrt_a(lo).unwrap();
        prop_assert!((got - want).abs() <= 1e-12);
    }

    #[test]
    fn jets_match_finite_differences(x in 0.05..0.95f64) {
        let m = CoefficientModel::exp();
        let jet = m.jet(x, 3).unwrap();
        let h = f64::EPSILON.cbrt();
        for k in 0..3 {
            let up = m.jet(x + h, k).unwrap().values()[k];
            let down = m.jet(x - h, k).unwrap().values()[k];
            let fd = (up - down) / (2.0 * h);
            prop_assert!((fd - jet.values()[k + 1]).abs() <= 1e-6 * jet.values()[k + 1].abs());
        }
    }
}

#[test]
fn h_p_tiny_argument_keeps_digits() {
    let x = 1e-8;
    let got = h_p(3, x);
    // (ix)^3/3! (1 + ix/4 + (ix)^2/20 + ...)
    let ix = c(0.0, x);
    let want = ix * ix * ix / 6.0 * (c(1.0, 0.0) + ix / 4.0 + ix * ix / 20.0);
    assert!((got - want).norm() <= 1e-12 * want.norm());
}

#[test]
fn b_p_bounded_uniformly_in_eps() {
    let m = CoefficientModel::airy(2.0).unwrap();
    let xs: Vec<f64> = (0..=40).map(|i| 1.0 + i as f64 / 40.0).collect();
    for p in 0..6 {
        let maxes: Vec<f64> = (2..=10)
            .map(|k| {
                let phase = PhaseModel::exact(&m, 0.5f64.powi(k)).unwrap();
                xs.iter().map(|&x| wkb_march::wkb::beta_p(x, p, &phase).unwrap().abs()).fold(0.0, f64::max)
            })
            .collect();
        let top = maxes.iter().cloned().fold(0.0, f64::max);
        let bottom = maxes.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(top.is_finite() && (top - bottom) <= 0.01 * top, "p={p} {maxes:?}");
    }
}
