//! Log–log least squares for growth and decay exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "stderr")]
    pub stderr_slope: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// `(log abscissa, log value)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    pub fit_range: (f64, f64),
}

impl GrowthFit {
    /// Fitted value at abscissa `t` (in the same log convention the fit used).
    pub fn predict_log(&self, log_t: f64) -> f64 {
        self.intercept + self.slope * log_t
    }
}

fn ols(points: Vec<(f64, f64)>, fit_range: (f64, f64)) -> Result<GrowthFit> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let stderr_slope = if points.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(GrowthFit {
        slope,
        intercept,
        stderr_slope,
        residual: (ssr / n).sqrt(),
        points,
        fit_range,
    })
}

/// OLS of `log value` against `log(1 + |y|)` over the points with `|y|` in
/// `range`. The lower end is raised to 2 so the pre-asymptotic regime never
/// enters.
pub fn fit_growth_exponent(points: &[(f64, f64)], range: (f64, f64)) -> Result<GrowthFit> {
    let lo = range.0.max(2.0);
    let used: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(y, _)| y >= lo && y <= range.1)
        .collect();
    if used.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 points with |y| in [{lo}, {}], found {}",
            range.1,
            used.len()
        )));
    }
    if let Some(&(y, v)) = used.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::Fit(format!("non-positive value {v} at |y| = {y}")));
    }
    let fit_range = (
        used.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        used.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
    );
    ols(
        used.iter()
            .map(|&(y, v)| ((1.0 + y).ln(), v.ln()))
            .collect(),
        fit_range,
    )
}

/// Plain power law `value ≈ C t^slope` (no `1 +` offset), for decay and
/// small-parameter profiles. Needs at least 3 positive points.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, found {}",
            points.len()
        )));
    }
    if let Some(&(t, v)) = points
        .iter()
        .find(|p| !(p.0 > 0.0 && p.1 > 0.0 && p.1.is_finite()))
    {
        return Err(Error::Fit(format!("non-positive point ({t}, {v})")));
    }
    let fit_range = (
        points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
    );
    ols(
        points.iter().map(|&(t, v)| (t.ln(), v.ln())).collect(),
        fit_range,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn dyadic() -> Vec<f64> {
        (2..=8).map(|k| (1u32 << k) as f64).collect()
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = dyadic()
            .into_iter()
            .map(|y| (y, (1.0 + y).powf(0.5)))
            .collect();
        let f = fit_growth_exponent(&pts, (4.0, 256.0)).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        assert_eq!(f.points.len(), 7);
        assert_eq!(f.fit_range, (4.0, 256.0));
    }

    #[test]
    fn constant_values() {
        let pts: Vec<_> = dyadic().into_iter().map(|y| (y, 3.0)).collect();
        let f = fit_growth_exponent(&pts, (4.0, 256.0)).unwrap();
        assert!(f.slope.abs() < 1e-12);
    }

    #[test]
    fn noisy_fixture() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<_> = dyadic()
            .into_iter()
            .map(|y| {
                let noise: f64 = rng.gen_range(-1.0..1.0);
                (y, (1.0 + y).powf(2.0 / 3.0) * (1.0 + 0.005 * noise))
            })
            .collect();
        let f = fit_growth_exponent(&pts, (4.0, 256.0)).unwrap();
        assert!((f.slope - 2.0 / 3.0).abs() < 0.02);
        assert!(f.stderr_slope.is_finite());
    }

    #[test]
    fn rejections() {
        let pts = vec![(4.0, 1.0), (8.0, 2.0), (16.0, 3.0)];
        assert!(fit_growth_exponent(&pts, (4.0, 256.0)).is_err());
        let pts = vec![(4.0, 1.0), (8.0, 0.0), (16.0, 3.0), (32.0, 4.0)];
        assert!(fit_growth_exponent(&pts, (4.0, 256.0)).is_err());
        // points below 2 are excluded even when the range admits them
        let pts = vec![(0.5, 1.0), (1.0, 1.0), (4.0, 1.0), (8.0, 1.0), (16.0, 1.0)];
        assert!(fit_growth_exponent(&pts, (0.0, 256.0)).is_err());
    }

    #[test]
    fn plain_power_law() {
        let pts: Vec<_> = (2..10)
            .map(|k| {
                let e = 0.5f64.powi(k);
                (e, 3.0 * e.powf(-1.0 / 6.0))
            })
            .collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.slope + 1.0 / 6.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }
}
