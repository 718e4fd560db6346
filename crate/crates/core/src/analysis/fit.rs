use super::AnalysisError;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

/// Regression model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `y = A·x^p` fitted on log–log axes.
    PowerLaw,
    /// `y = A·r^x` fitted on log–linear axes.
    Exponential,
}

/// Least-squares fit in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Model.
    pub model: FitModel,
    /// Slope in log space: exponent `p` or `ln r`.
    pub slope: f64,
    /// Prefactor `A`.
    pub amplitude: f64,
    /// Inclusive abscissa range used.
    pub window: (f64, f64),
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
    /// Points used.
    pub points: usize,
}

impl FitResult {
    /// Power-law exponent.
    pub fn exponent(&self) -> f64 {
        self.slope
    }

    /// Per-unit geometric ratio `r = e^{slope}`.
    pub fn ratio(&self) -> f64 {
        self.slope.exp()
    }
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    (slope, intercept, r2)
}

/// Window dropping the `min(10, len − 5)` smallest abscissae.
pub fn default_window(series: &[(f64, f64)]) -> Option<(f64, f64)> {
    let mut xs: Vec<f64> = series.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.is_empty() {
        return None;
    }
    let skip = 10.min(xs.len().saturating_sub(5));
    Some((xs[skip], xs[xs.len() - 1]))
}

fn select(series: &[(f64, f64)], window: Option<(f64, f64)>, needed: usize) -> Result<Vec<(f64, f64)>, AnalysisError> {
    let pts: Vec<(f64, f64)> = match window {
        Some((lo, hi)) => series.iter().copied().filter(|p| p.0 >= lo && p.0 <= hi).collect(),
        None => series.to_vec(),
    };
    if pts.len() < needed {
        return Err(AnalysisError::TooFewPoints { needed, got: pts.len() });
    }
    if let Some(&(at, value)) = pts.iter().find(|p| !(p.1 > 0.0)) {
        return Err(AnalysisError::NonPositive { at, value });
    }
    Ok(pts)
}

fn span(pts: &[(f64, f64)]) -> (f64, f64) {
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)))
}

/// Power-law fit of `(N, rate)` on log–log axes over `window` (all points if `None`).
pub fn fit_power_law(series: &[(f64, f64)], window: Option<(f64, f64)>) -> Result<FitResult, AnalysisError> {
    let pts = select(series, window, 5)?;
    if let Some(&(at, value)) = pts.iter().find(|p| !(p.0 > 0.0)) {
        return Err(AnalysisError::NonPositive { at, value });
    }
    let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&x, &y);
    Ok(FitResult {
        model: FitModel::PowerLaw,
        slope,
        amplitude: intercept.exp(),
        window: span(&pts),
        r_squared: r2,
        points: pts.len(),
    })
}

/// Geometric decay of `(site, |amp|²)` from a log–linear fit.
pub fn fit_exponential_tail(profile: &[(f64, f64)]) -> Result<FitResult, AnalysisError> {
    let pts = select(profile, None, 4)?;
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&x, &y);
    Ok(FitResult {
        model: FitModel::Exponential,
        slope,
        amplitude: intercept.exp(),
        window: span(&pts),
        r_squared: r2,
        points: pts.len(),
    })
}

/// Period-4 analysis of a rate series.
#[derive(Debug, Clone, PartialEq)]
pub struct Period4Report {
    /// Normalised autocorrelation of the detrended log-rate at lags `2..=8`.
    pub autocorrelation: Vec<(usize, f64)>,
    /// First lag whose autocorrelation reaches 90% of the maximum.
    pub dominant_lag: usize,
    /// Autocorrelation at lag 4.
    pub ac4: f64,
    /// Amplitude of the `e^{iπN/2}` Fourier component of the detrended log-rate.
    pub depth: f64,
    /// `dominant_lag == 4 && ac4 ≥ 0.5 && depth ≥ depth_threshold`.
    pub detected: bool,
    /// Depth threshold applied.
    pub depth_threshold: f64,
}

/// Default depth threshold of [`period4_modulation`].
pub const PERIOD4_DEPTH_THRESHOLD: f64 = 5e-3;

/// Detrends `ln rate` by a quadratic in `ln N` and inspects the residual autocorrelation.
/// Points must have consecutive integer `N`.
pub fn period4_modulation(series: &[(usize, f64)]) -> Result<Period4Report, AnalysisError> {
    if series.len() < 16 {
        return Err(AnalysisError::TooFewPoints { needed: 16, got: series.len() });
    }
    if let Some(&(at, value)) = series.iter().find(|p| !(p.1 > 0.0)) {
        return Err(AnalysisError::NonPositive { at: at as f64, value });
    }
    let x: Vec<f64> = series.iter().map(|p| (p.0 as f64).ln()).collect();
    let y: Vec<f64> = series.iter().map(|p| p.1.ln()).collect();
    let coef = quadratic_fit(&x, &y);
    let r: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - (coef[0] + coef[1] * a + coef[2] * a * a)).collect();
    let e0: f64 = r.iter().map(|v| v * v).sum();
    let autocorrelation: Vec<(usize, f64)> = (2..=8)
        .map(|lag| {
            let s: f64 = r.iter().zip(&r[lag..]).map(|(a, b)| a * b).sum();
            (lag, if e0 > 0.0 { s / e0 } else { 0.0 })
        })
        .collect();
    let max = autocorrelation.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let dominant_lag = autocorrelation.iter().find(|p| p.1 >= 0.9 * max).map(|p| p.0).unwrap_or(0);
    let ac4 = autocorrelation.iter().find(|p| p.0 == 4).map(|p| p.1).unwrap_or(0.0);
    let (mut re, mut im) = (0.0, 0.0);
    for (p, v) in series.iter().zip(&r) {
        let phase = 0.5 * PI * p.0 as f64;
        re += v * phase.cos();
        im -= v * phase.sin();
    }
    let depth = 2.0 * (re * re + im * im).sqrt() / r.len() as f64;
    let detected = dominant_lag == 4 && ac4 >= 0.5 && depth >= PERIOD4_DEPTH_THRESHOLD;
    Ok(Period4Report { autocorrelation, dominant_lag, ac4, depth, detected, depth_threshold: PERIOD4_DEPTH_THRESHOLD })
}

fn quadratic_fit(x: &[f64], y: &[f64]) -> [f64; 3] {
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let t = xi - mx;
        let phi = [1.0, t, t * t];
        for i in 0..3 {
            b[i] += phi[i] * yi;
            for j in 0..3 {
                a[i][j] += phi[i] * phi[j];
            }
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut c = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * c[k]).sum();
        c[i] = (b[i] - s) / a[i][i];
    }
    [c[0] - c[1] * mx + c[2] * mx * mx, c[1] - 2.0 * c[2] * mx, c[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn synthetic_cubic() {
        let s: Vec<(f64, f64)> = (50..=150).step_by(5).map(|n| (n as f64, 3.7 * (n as f64).powi(-3))).collect();
        let f = fit_power_law(&s, default_window(&s)).unwrap();
        assert!((f.exponent() + 3.0).abs() < 1e-6);
        assert!((f.amplitude - 3.7).abs() < 1e-6);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.window.0, 100.0);
    }

    #[test]
    fn synthetic_half_ratio() {
        let p: Vec<(f64, f64)> = (1..=12).map(|d| (d as f64, 0.5f64.powi(d))).collect();
        let f = fit_exponential_tail(&p).unwrap();
        assert!((f.ratio() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s: Vec<(f64, f64)> = (1..=6).map(|n| (n as f64, if n == 3 { 0.0 } else { 1.0 })).collect();
        assert!(matches!(fit_power_law(&s, None), Err(AnalysisError::NonPositive { .. })));
        assert!(matches!(fit_power_law(&s[..3], None), Err(AnalysisError::TooFewPoints { .. })));
        assert!(period4_modulation(&[(1, 1.0); 10]).is_err());
    }

    #[test]
    fn synthetic_period_four() {
        let s: Vec<(usize, f64)> =
            (60..=120).map(|n| (n, (n as f64).powi(-3) * (1.0 + 0.1 * (PI * n as f64 / 2.0).cos()))).collect();
        let r = period4_modulation(&s).unwrap();
        assert_eq!(r.dominant_lag, 4);
        assert!(r.detected);
        assert!((r.depth - 0.1).abs() < 0.01);
        let smooth: Vec<(usize, f64)> = (60..=120).map(|n| (n, (n as f64).powi(-3))).collect();
        assert!(!period4_modulation(&smooth).unwrap().detected);
    }

    proptest! {
        #[test]
        fn exponent_recovered(p in -5.0f64..-0.5, a in 0.1f64..10.0) {
            let s: Vec<(f64, f64)> = (10..40).map(|n| (n as f64, a * (n as f64).powf(p))).collect();
            let f = fit_power_law(&s, None).unwrap();
            prop_assert!((f.exponent() - p).abs() < 1e-9);
            prop_assert!(f.r_squared >= 0.0 && f.r_squared <= 1.0);
        }
    }
}
