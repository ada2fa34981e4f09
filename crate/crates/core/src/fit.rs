//! Least-squares slopes on log-log data.

use alloc::vec::Vec;

/// Errors below this are treated as roundoff and left out of fits.
pub const ERROR_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub used: usize,
    /// Indices of points excluded for lying below the floor.
    pub below_floor: Vec<usize>,
}

/// Fits `log10 err = slope log10 x + intercept` over points with
/// `err >= floor`. Returns `None` when fewer than two points remain.
pub fn loglog_slope_with_floor(xs: &[f64], errs: &[f64], floor: f64) -> Option<SlopeFit> {
    let mut below_floor = Vec::new();
    let mut pts = Vec::new();
    for (i, (&x, &e)) in xs.iter().zip(errs).enumerate() {
        if !(e >= floor) || !(x > 0.0) || !e.is_finite() {
            below_floor.push(i);
        } else {
            pts.push((libm::log10(x), libm::log10(e)));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    Some(SlopeFit { slope, intercept: my - slope * mx, used: pts.len(), below_floor })
}

pub fn loglog_slope(xs: &[f64], errs: &[f64]) -> Option<SlopeFit> {
    loglog_slope_with_floor(xs, errs, ERROR_FLOOR)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [0.5, 0.25, 0.125, 0.0625];
        let es: Vec<f64> = xs.iter().map(|x| 3.0 * x * x * x).collect();
        let f = loglog_slope(&xs, &es).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.intercept - libm::log10(3.0)).abs() < 1e-12);
        assert!(f.below_floor.is_empty());
    }

    #[test]
    fn floor_points_flagged() {
        let xs = [1.0, 0.5, 0.25, 0.125];
        let es = [1e-8, 1e-10, 1e-14, 0.0];
        let f = loglog_slope(&xs, &es).unwrap();
        assert_eq!(f.below_floor, [2, 3]);
        assert_eq!(f.used, 2);
    }

    #[test]
    fn too_few_points() {
        assert!(loglog_slope(&[1.0, 0.5], &[1e-3, 1e-20]).is_none());
    }
}
