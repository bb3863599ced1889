use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::normal_quantile;
use crate::error::{Error, Result};
use crate::ols::least_squares;
use crate::series::{DetSpec, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethod {
    Cauchy,
    TNormal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MildlyExplosiveCI {
    pub rho_hat: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: CiMethod,
    /// Segment length.
    pub n: usize,
}

/// Two-sided `alpha` percentile of the standard Cauchy law, `cot(pi alpha / 2)`,
/// with the customary rounded values at 0.10, 0.05 and 0.01.
pub fn cauchy_percentile(alpha: f64) -> f64 {
    const TABLE: [(f64, f64); 3] = [(0.10, 6.315), (0.05, 12.7), (0.01, 63.65674)];
    TABLE
        .iter()
        .find(|(a, _)| (a - alpha).abs() < 1e-12)
        .map(|(_, c)| *c)
        .unwrap_or_else(|| 1.0 / (PI * alpha / 2.0).tan())
}

/// `(rho^2 - 1) / rho^n * C_alpha`.
pub fn cauchy_half_width(rho: f64, n: usize, alpha: f64) -> f64 {
    (rho * rho - 1.0) / rho.powf(n as f64) * cauchy_percentile(alpha)
}

fn check_level(level: f64) -> Result<f64> {
    if level > 0.0 && level < 1.0 {
        Ok(1.0 - level)
    } else {
        Err(Error::invalid(format!("confidence level {level} outside (0, 1)")))
    }
}

/// `sum y_t y_{t-1} / sum y_{t-1}^2` over `t = 2..=n`.
pub fn no_intercept_rho(segment: &Series) -> Result<f64> {
    let v = segment.values();
    let (mut num, mut den) = (0.0, 0.0);
    for w in v.windows(2) {
        num += w[1] * w[0];
        den += w[0] * w[0];
    }
    if !(den > 0.0) {
        return Err(Error::degenerate("lagged level is identically zero"));
    }
    Ok(num / den)
}

/// Interval `rho_hat +/- (rho_hat^2 - 1) / rho_hat^n C_alpha` from the
/// no-intercept autoregression; `n` is the segment length.
pub fn cauchy_ci(segment: &Series, level: f64) -> Result<MildlyExplosiveCI> {
    let alpha = check_level(level)?;
    let rho = no_intercept_rho(segment)?;
    if rho <= 1.0 {
        return Err(Error::NotExplosive(rho));
    }
    let n = segment.len();
    let h = cauchy_half_width(rho, n, alpha);
    Ok(MildlyExplosiveCI {
        rho_hat: rho,
        lower: rho - h,
        upper: rho + h,
        level,
        method: CiMethod::Cauchy,
        n,
    })
}

/// Inverts the two-sided t test on `rho` in `y_t = [mu] + [gamma t] + rho y_{t-1} + e_t`
/// with standard normal critical values.
pub fn t_ci(segment: &Series, det: DetSpec, level: f64) -> Result<MildlyExplosiveCI> {
    let alpha = check_level(level)?;
    let v = segment.values();
    let n = v.len();
    if n < 10 {
        return Err(Error::WindowTooShort(format!("segment of {n} observations; at least 10 needed")));
    }
    let y: Vec<f64> = v[1..].to_vec();
    let lag: Vec<f64> = v[..n - 1].to_vec();
    let mut cols = Vec::new();
    if det == DetSpec::Trend {
        cols.push((2..=n).map(|t| t as f64).collect());
    }
    cols.push(lag);
    let fit = least_squares(&cols, &y, det.has_constant())?;
    let j = cols.len() - 1;
    let rho = fit.beta[j];
    let se = fit.se(j);
    if !(se.is_finite() && se > 0.0) {
        return Err(Error::degenerate("zero residual variance"));
    }
    let h = normal_quantile(1.0 - alpha / 2.0) * se;
    Ok(MildlyExplosiveCI {
        rho_hat: rho,
        lower: rho - h,
        upper: rho + h,
        level,
        method: CiMethod::TNormal,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentiles() {
        assert_eq!(cauchy_percentile(0.10), 6.315);
        assert_eq!(cauchy_percentile(0.05), 12.7);
        assert_eq!(cauchy_percentile(0.01), 63.65674);
        // cot(pi/8) = 1 + sqrt(2)
        assert!((cauchy_percentile(0.25) - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn half_width_example() {
        let h = cauchy_half_width(1.05, 100, 0.05);
        assert!((h - 0.1025 / 1.05f64.powi(100) * 12.7).abs() < 1e-15);
        assert!((h - 0.0099).abs() < 5e-5);
    }

    #[test]
    fn explosive_required() {
        let s = Series::new((0..30).map(|i| 1.0 + 0.5 * (i as f64).sin()).collect()).unwrap();
        assert!(matches!(cauchy_ci(&s, 0.95), Err(Error::NotExplosive(_))));
        let g = Series::new((0..30).map(|i| 1.05f64.powi(i) + 0.01 * (i as f64).cos()).collect()).unwrap();
        let ci = cauchy_ci(&g, 0.95).unwrap();
        assert!(ci.lower <= ci.rho_hat && ci.rho_hat <= ci.upper);
        let t = t_ci(&g, DetSpec::Constant, 0.95).unwrap();
        assert!(t.lower <= t.rho_hat && t.rho_hat <= t.upper);
        assert!(t_ci(&g, DetSpec::Constant, 1.5).is_err());
    }
}
