use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdeOptions {
    /// Bandwidth used when the log-values have zero spread; `None` makes that an error.
    pub fallback_bandwidth: Option<f64>,
}

impl Default for KdeOptions {
    fn default() -> Self {
        KdeOptions { fallback_bandwidth: Some(0.1) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeCurve {
    pub bandwidth: f64,
    /// Natural logs of the input values.
    pub samples: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

impl KdeCurve {
    pub fn density(&self, x: f64) -> f64 {
        gaussian_kde(&self.samples, self.bandwidth, x)
    }

    /// Trapezoidal area under the evaluated points.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.points)
    }
}

pub fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum()
}

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn gaussian_kde(samples: &[f64], h: f64, x: f64) -> f64 {
    let sum: f64 = samples
        .iter()
        .map(|s| {
            let u = (x - s) / h;
            (-0.5 * u * u).exp()
        })
        .sum();
    INV_SQRT_2PI * sum / (samples.len() as f64 * h)
}

/// Type-7 (linear interpolation) quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule on the given samples; zero when they have no spread.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / n;
    let sigma = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sigma.min(iqr / 1.34) } else { sigma };
    0.9 * spread * n.powf(-0.2)
}

/// Gaussian KDE of `ln(values)` at `points` evenly spaced abscissae over `[min-3h, max+3h]`.
pub fn kde_curve(values: &[f64], points: usize) -> Result<Vec<(f64, f64)>> {
    kde_curve_with(values, points, &KdeOptions::default()).map(|c| c.points)
}

pub fn kde_curve_with(values: &[f64], points: usize, options: &KdeOptions) -> Result<KdeCurve> {
    if values.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if points < 2 {
        return Err(Error::Invalid("a KDE curve needs at least 2 points".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
        return Err(Error::Invalid(format!("KDE values must be positive counts, got {bad}")));
    }
    let samples: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mut h = silverman_bandwidth(&samples);
    if h <= 0.0 || !h.is_finite() {
        h = options.fallback_bandwidth.filter(|b| *b > 0.0).ok_or(Error::DegenerateBandwidth)?;
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let step = (hi - lo) / (points - 1) as f64;
    let points = (0..points)
        .map(|i| {
            let x = lo + step * i as f64;
            (x, gaussian_kde(&samples, h, x))
        })
        .collect();
    Ok(KdeCurve { bandwidth: h, samples, points })
}
