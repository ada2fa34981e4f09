//! Globally adaptive 21-point Gauss-Kronrod integration of complex integrands.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One panel: Kronrod estimate and `|K - G|` as error bound.
fn qk21<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = r * XGK[j];
        let sum = f(c - dx)? + f(c + dx)?;
        kron += sum * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    let kron = kron * r;
    let gauss = gauss * r;
    Ok((kron, (kron - gauss).norm()))
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by repeatedly
/// bisecting the panel with the largest error estimate.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (v, e) = qk21(&mut f, a, b)?;
    let mut panels: Vec<(f64, f64, Complex64, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= tol {
            break;
        }
        if panels.len() >= max_panels {
            return Err(Error::OracleBudget { tol, estimate: total_err, evaluations: panels.len() });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            return Err(Error::OracleBudget { tol, estimate: total_err, evaluations: panels.len() });
        }
        let (v1, e1) = qk21(&mut f, lo, mid)?;
        let (v2, e2) = qk21(&mut f, mid, hi)?;
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    Ok(panels.iter().map(|p| p.2).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| Ok(Complex64::new(x * x, -x)), 0.0, 1.0, 1e-14, 10).unwrap();
        assert_relative_eq!(v.re, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(v.im, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn oscillatory_exponential() {
        let k = 200.0;
        let v = integrate(|x| Ok(Complex64::new(0.0, k * x).exp()), 0.0, 1.0, 1e-13, 500).unwrap();
        let want = (Complex64::new(0.0, k).exp() - 1.0) / Complex64::new(0.0, k);
        assert!((v - want).norm() < 1e-13);
    }

    #[test]
    fn budget_error() {
        let r = integrate(|x| Ok(Complex64::new(1.0 / x.sqrt(), 0.0)), 0.0, 1.0, 1e-15, 4);
        assert!(matches!(r, Err(Error::OracleBudget { .. })));
    }
}
