use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::least_squares;
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicInit {
    /// Initial condition `T_0` (1-based): the walk ends with the sample
    /// `y_{T_0}, ..., y_{T_e}`.
    pub start: usize,
    pub bic_ur: f64,
    pub bic_ar: f64,
    pub rho_hat: f64,
    /// Observations added during the walk.
    pub steps: usize,
}

/// 10% of the observations before `T_e`, at least 3.
pub fn default_n_min(te_hat: usize) -> usize {
    (te_hat / 10).max(3)
}

/// Information criteria of the random walk with drift and the AR(1) with
/// intercept on rows `t = t0+1..=te`.
fn bics(v: &[f64], t0: usize, te: usize) -> Result<(f64, f64, f64)> {
    let n = te - t0;
    let x: Vec<f64> = (t0 + 1..=te).map(|t| v[t - 2]).collect();
    let y: Vec<f64> = (t0 + 1..=te).map(|t| v[t - 1]).collect();
    let dy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - a).collect();
    let m = dy.iter().sum::<f64>() / n as f64;
    let ssr_ur: f64 = dy.iter().map(|d| (d - m) * (d - m)).sum();
    let fit = least_squares(&[x], &y, true)?;
    if !(ssr_ur > 0.0 && fit.ssr > 0.0) {
        return Err(Error::degenerate("zero residual variance in the initial-condition search"));
    }
    let nf = n as f64;
    let ur = (ssr_ur / nf).ln() + nf.ln() / nf;
    let ar = (fit.ssr / nf).ln() + 2.0 * nf.ln() / nf;
    Ok((ur, ar, fit.beta[0]))
}

/// Moves the initial condition back from `T_e - n_min` one observation at a
/// time while the unit-root model has the larger BIC and the AR estimate
/// exceeds one.
pub fn bic_init(series: &Series, te_hat: usize, n_min: usize) -> Result<BicInit> {
    if n_min < 3 {
        return Err(Error::invalid("n_min must be at least 3"));
    }
    if te_hat > series.len() || te_hat < n_min + 1 {
        return Err(Error::invalid(format!(
            "T_e = {te_hat} leaves no initial condition before a sample of {n_min} observations"
        )));
    }
    let v = series.values();
    let mut t0 = te_hat - n_min;
    let mut steps = 0;
    loop {
        let (ur, ar, rho) = bics(v, t0, te_hat)?;
        if ur > ar && rho > 1.0 && t0 > 1 {
            t0 -= 1;
            steps += 1;
        } else {
            return Ok(BicInit {
                start: t0,
                bic_ur: ur,
                bic_ar: ar,
                rho_hat: rho,
                steps,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explosive_walks_to_start() {
        let v: Vec<f64> = (0..60).map(|i| 1.08f64.powi(i) + 0.3 * ((i * 7 % 5) as f64 - 2.0)).collect();
        let y = Series::new(v).unwrap();
        let r = bic_init(&y, 60, 6).unwrap();
        assert!(r.start <= 54);
        assert_eq!(r.start, 1);
        assert_eq!(bic_init(&y, 60, 6).unwrap(), r);
    }

    #[test]
    fn arguments() {
        let y = Series::new((0..20).map(|i| i as f64).collect()).unwrap();
        assert!(bic_init(&y, 10, 2).is_err());
        assert!(bic_init(&y, 3, 3).is_err());
        assert_eq!(default_n_min(200), 20);
        assert_eq!(default_n_min(12), 3);
    }
}
