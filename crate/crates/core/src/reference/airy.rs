//! Airy functions of real argument.
//!
//! Maclaurin series summed in double-double on `[-10, 5]`, trigonometric
//! asymptotic expansions below `-10`.

use crate::dd::{self, Dd};
use crate::error::{Error, Result};

const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const SQRT3: Dd = Dd::new(1.7320508075688772, 1.0035084221806903e-16);
const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;
pub(crate) const TWO_THIRDS: Dd = Dd::new(0.6666666666666666, 3.700743415417188e-17);

/// Series branch is used for `t >= -SWITCH`.
pub const SWITCH: f64 = 10.0;
pub const T_MIN: f64 = -1e6;
pub const T_MAX: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub bi: f64,
    pub aip: f64,
    pub bip: f64,
}

/// `Ai, Bi, Ai', Bi'` at `t`.
pub fn airy_pair(t: f64) -> Result<AiryValues> {
    if !(T_MIN..=T_MAX).contains(&t) {
        return Err(Error::ArgumentOutOfRange(t));
    }
    if t >= -SWITCH {
        Ok(series(t))
    } else {
        let z = -t;
        let zeta = (Dd::sqrt_f64(z).mul_f64(z)) * TWO_THIRDS;
        Ok(asymptotic_negative(z, zeta))
    }
}

/// Values at `t = -z` for `z > SWITCH`, with `zeta = 2 z^{3/2} / 3` supplied
/// by the caller so it can be formed without rounding `z` first.
pub fn airy_negative(z: f64, zeta: Dd) -> Result<AiryValues> {
    if !(z > 0.0 && z <= -T_MIN) {
        return Err(Error::ArgumentOutOfRange(-z));
    }
    if z <= SWITCH {
        Ok(series(-z))
    } else {
        Ok(asymptotic_negative(z, zeta))
    }
}

fn series(t: f64) -> AiryValues {
    let t3 = Dd::prod(t * t, t) + Dd::from_f64(libm::fma(t, t, -(t * t)) * t);
    let tt = Dd::from_f64(t);
    // f = sum a_k t^{3k},  g = sum b_k t^{3k+1}
    let mut f = Dd::ONE;
    let mut fp = Dd::ZERO;
    let mut g = tt;
    let mut gp = Dd::ONE;
    let mut a = Dd::ONE; // a_k t^{3k}
    let mut b = tt; // b_k t^{3k+1}
    for k in 0..200usize {
        let kf = k as f64;
        let a_next = (a * t3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        let b_next = (b * t3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        let k1 = kf + 1.0;
        f = f + a_next;
        g = g + b_next;
        // derivative terms of index k + 1, expressed through the current terms
        fp = fp + a.mul_f64(t).mul_f64(t).div_f64(3.0 * kf + 2.0);
        gp = gp + b.mul_f64(t).mul_f64(t).div_f64(3.0 * kf + 3.0);
        let small = a_next.hi.abs() + b_next.hi.abs();
        a = a_next;
        b = b_next;
        if k1 > 2.0 && small <= 1e-34 * (f.hi.abs() + g.hi.abs()) {
            break;
        }
    }
    let c1f = AI0 * f;
    let c2g = MINUS_AIP0 * g;
    let c1fp = AI0 * fp;
    let c2gp = MINUS_AIP0 * gp;
    AiryValues {
        ai: (c1f - c2g).to_f64(),
        bi: (SQRT3 * (c1f + c2g)).to_f64(),
        aip: (c1fp - c2gp).to_f64(),
        bip: (SQRT3 * (c1fp + c2gp)).to_f64(),
    }
}

fn asymptotic_negative(z: f64, zeta: Dd) -> AiryValues {
    let zf = zeta.to_f64();
    // even/odd alternating sums of u_k / zeta^k and v_k / zeta^k
    let (mut a, mut b, mut c, mut d) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0f64;
    let mut pow = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        pow /= zf;
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let tu = u * pow;
        let tv = v * pow;
        let mag = tu.abs().max(tv.abs());
        if mag > last {
            break;
        }
        last = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            a += sign * tu;
            c += sign * tv;
        } else {
            b += sign * tu;
            d += sign * tv;
        }
        if mag < 1e-18 {
            break;
        }
    }
    let arg = (zeta - dd::FRAC_PI_4).rem_period(dd::TWO_PI).to_f64();
    let (s, co) = (libm::sin(arg), libm::cos(arg));
    let q = libm::pow(z, 0.25);
    let amp = FRAC_1_SQRT_PI / q;
    let amp_d = FRAC_1_SQRT_PI * q;
    AiryValues {
        ai: amp * (co * a + s * b),
        bi: amp * (-s * a + co * b),
        aip: amp_d * (s * c - co * d),
        bip: amp_d * (co * c + s * d),
    }
}
