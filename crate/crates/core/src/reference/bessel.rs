//! Bessel functions `J0, J1, Y0, Y1` of positive real argument.
//!
//! Power series in double-double for `z <= 20`, Hankel expansions above.

use crate::dd::{self, Dd};
use crate::error::{Error, Result};

pub const SWITCH: f64 = 20.0;
pub const Z_MAX: f64 = 1e7;

const FRAC_2_PI: Dd = Dd::new(0.6366197723675814, -3.935735335036497e-17);
const FRAC_1_PI: Dd = Dd::new(0.3183098861837907, -1.9678676675182486e-17);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselValues {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

pub fn bessel_quad(z: f64) -> Result<BesselValues> {
    if !(z > 0.0 && z <= Z_MAX) {
        return Err(Error::ArgumentOutOfRange(z));
    }
    if z <= SWITCH {
        Ok(series(z))
    } else {
        Ok(hankel(z))
    }
}

fn series(z: f64) -> BesselValues {
    let half = 0.5 * z;
    let q = Dd::prod(half, half); // z^2 / 4
    let gamma_ln = Dd::from_f64(libm::log(half)) + dd::EULER_GAMMA;
    // t_k = (-1)^k q^k / (k!)^2,  r_k = (-1)^k q^k / (k! (k+1)!)
    let mut t = Dd::ONE;
    let mut r = Dd::ONE;
    let mut j0 = Dd::ONE;
    let mut j1s = Dd::ONE;
    let mut y0s = Dd::ZERO;
    // psi(k+1) + psi(k+2) + 2 gamma = H_k + H_{k+1}
    let mut y1s = Dd::ONE; // k = 0 term with H_0 + H_1 = 1
    let mut harmonic = Dd::ZERO;
    for k in 1..400usize {
        let kf = k as f64;
        t = -(t * q).div_f64(kf * kf);
        r = -(r * q).div_f64(kf * (kf + 1.0));
        harmonic = harmonic + Dd::ONE.div_f64(kf);
        let harmonic_next = harmonic + Dd::ONE.div_f64(kf + 1.0);
        j0 = j0 + t;
        j1s = j1s + r;
        y0s = y0s - t * harmonic;
        y1s = y1s + r * (harmonic + harmonic_next);
        if t.hi.abs() < 1e-34 && r.hi.abs() < 1e-34 {
            break;
        }
        if kf > q.hi && (t.hi.abs() + r.hi.abs()) * harmonic_next.hi < 1e-33 * (j0.hi.abs() + 1e-300) {
            break;
        }
    }
    let j1 = j1s.mul_f64(half);
    // Y0 = (2/pi)(ln(z/2) + gamma) J0 + (2/pi) sum (-1)^{k+1} H_k q^k/(k!)^2
    let y0 = FRAC_2_PI * (gamma_ln * j0 + y0s);
    // Y1 = -2/(pi z) + (2/pi) ln(z/2) J1
    //      - (1/pi) (z/2) sum (-1)^k (H_k + H_{k+1} - 2 gamma) q^k / (k!(k+1)!)
    let corr = y1s - (dd::EULER_GAMMA.mul_f64(2.0)) * j1s;
    let y1 = -(FRAC_2_PI.div_f64(z)) + FRAC_2_PI * (Dd::from_f64(libm::log(half)) * j1) - FRAC_1_PI * corr.mul_f64(half);
    BesselValues { j0: j0.to_f64(), j1: j1.to_f64(), y0: y0.to_f64(), y1: y1.to_f64() }
}

/// `(P, Q)` of the Hankel expansion for order `nu`.
fn hankel_pq(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        a *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf * z);
        let mag = a.abs();
        if mag > last || a == 0.0 {
            break;
        }
        last = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if mag < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn hankel(z: f64) -> BesselValues {
    let amp = libm::sqrt(FRAC_2_PI.to_f64() / z);
    let zz = Dd::from_f64(z);
    let chi0 = (zz - dd::FRAC_PI_4).rem_period(dd::TWO_PI).to_f64();
    let chi1 = (zz - dd::FRAC_3PI_4).rem_period(dd::TWO_PI).to_f64();
    let (p0, q0) = hankel_pq(0.0, z);
    let (p1, q1) = hankel_pq(1.0, z);
    let (s0, c0) = (libm::sin(chi0), libm::cos(chi0));
    let (s1, c1) = (libm::sin(chi1), libm::cos(chi1));
    BesselValues {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn small_argument_limits() {
        let v = bessel_quad(1e-10).unwrap();
        assert!((v.j0 - 1.0).abs() < 1e-15);
        assert!(v.j1.abs() < 1e-10);
    }

    #[test]
    fn frozen_values() {
        // mpmath, 30 digits
        let cases: [(f64, f64, f64, f64, f64); 5] = [
            (0.5, 0.938_469_807_240_812_9, 0.242_268_457_674_873_89, -0.444_518_733_506_706_56, -1.471_472_392_670_243_1),
            (7.3, 0.288_216_947_635_014_38, 0.082_570_430_493_257_88, 0.062_773_886_374_037_648, -0.284_594_371_868_072_09),
            (20.0, 0.167_024_664_340_583_15, 0.066_833_124_175_850_046, 0.062_640_596_809_383_831, -0.165_511_614_362_521_3),
            (35.5, -0.132_331_563_891_330_01, -0.022_347_970_208_817_343, -0.020_482_485_069_601_729, 0.132_056_244_589_617_42),
            (1000.0, 0.024_786_686_152_420_175, 0.004_728_311_907_089_523_9, 0.004_715_917_977_622_813_4, -0.024_784_331_292_351_779),
        ];
        for (z, j0, j1, y0, y1) in cases {
            let v = bessel_quad(z).unwrap();
            let modulus = libm::sqrt(2.0 / (PI * z));
            for (got, want) in [(v.j0, j0), (v.j1, j1), (v.y0, y0), (v.y1, y1)] {
                let tol = 1e-13 * modulus.max(want.abs());
                assert!((got - want).abs() < tol, "z={z} got {got} want {want}");
            }
        }
    }

    #[test]
    fn cross_product() {
        for i in 0..200 {
            let z = 0.05 * libm::pow(2e8, i as f64 / 199.0);
            let v = bessel_quad(z).unwrap();
            let want = 2.0 / (PI * z);
            let got = v.j1 * v.y0 - v.j0 * v.y1;
            assert!((got - want).abs() < 1e-10 * want, "z={z}");
        }
    }

    #[test]
    fn amplitude_for_large_argument() {
        for z in [100.0, 517.3, 1e4, 3.3e6] {
            let v = bessel_quad(z).unwrap();
            let want = 2.0 / (PI * z);
            assert!(((v.j0 * v.j0 + v.y0 * v.y0) / want - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn branches_overlap() {
        let z = SWITCH;
        let s = series(z);
        let h = hankel(z);
        for (a, b) in [(s.j0, h.j0), (s.j1, h.j1), (s.y0, h.y0), (s.y1, h.y1)] {
            assert!((a - b).abs() < 1e-13, "{a} {b}");
        }
    }

    #[test]
    fn non_positive_rejected() {
        assert!(bessel_quad(0.0).is_err());
        assert!(bessel_quad(-1.0).is_err());
    }
}
