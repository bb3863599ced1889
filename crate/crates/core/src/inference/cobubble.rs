use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_pvalue, MultiplierKind, MIN_REPLICATES};
use crate::error::{Error, Result};
use crate::ols::least_squares;
use crate::rng::stream;
use crate::series::Series;

/// Shortest overlap accepted.
pub const MIN_OVERLAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobubbleResult {
    pub s: f64,
    pub p_value: f64,
    pub mu: f64,
    pub beta: f64,
    /// Overlap length.
    pub n: usize,
    pub delay: i64,
    #[serde(rename = "B")]
    pub b: usize,
    pub seed: u64,
    pub replicates: Vec<f64>,
}

/// Pairs `(y_t, x_{t-i})` over the dates where both exist.
fn align(y: &Series, x: &Series, i: i64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = y.len().min(x.len()) as i64;
    let lo = 1 + i.max(0);
    let hi = n + i.min(0);
    if hi - lo + 1 < MIN_OVERLAP as i64 {
        return Err(Error::WindowTooShort(format!(
            "overlap of {} observations at delay {i}; at least {MIN_OVERLAP} needed",
            (hi - lo + 1).max(0)
        )));
    }
    let ys = (lo..=hi).map(|t| y.values()[(t - 1) as usize]).collect();
    let xs = (lo..=hi).map(|t| x.values()[(t - i - 1) as usize]).collect();
    Ok((ys, xs))
}

/// `S = sigma^{-2} n^{-2} sum_t (sum_{s<=t} e_s)^2` with `sigma^2` the mean
/// squared residual; zero when the residuals vanish relative to `y`.
fn stat_from_residuals(e: &[f64], y: &[f64]) -> f64 {
    let n = e.len() as f64;
    let s2 = e.iter().map(|v| v * v).sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let vy = y.iter().map(|v| (v - my) * (v - my)).sum::<f64>() / n;
    if !(s2 > 1e-24 * vy.max(f64::MIN_POSITIVE)) {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut sum = 0.0;
    for v in e {
        acc += v;
        sum += acc * acc;
    }
    sum / (s2 * n * n)
}

/// Residual-based statistic of `y_t` on a constant and `x_{t-i}`.
pub fn cobubble_stat(y: &Series, x: &Series, i: i64) -> Result<f64> {
    let (ys, xs) = align(y, x, i)?;
    let fit = least_squares(&[xs], &ys, true)?;
    Ok(stat_from_residuals(&fit.residuals, &ys))
}

/// Statistic with a wild-bootstrap p-value: `y*_t = fitted_t + w_t e_t`.
pub fn cobubble_test(y: &Series, x: &Series, i: i64, b: usize, multiplier: MultiplierKind, seed: u64) -> Result<CobubbleResult> {
    if b < MIN_REPLICATES {
        return Err(Error::invalid(format!("B = {b}; at least {MIN_REPLICATES} replicates are required")));
    }
    let (ys, xs) = align(y, x, i)?;
    let fit = least_squares(std::slice::from_ref(&xs), &ys, true)?;
    let s = stat_from_residuals(&fit.residuals, &ys);
    let fitted: Vec<f64> = ys.iter().zip(&fit.residuals).map(|(y, e)| y - e).collect();
    let replicates: Vec<f64> = (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, r as u64);
            let ystar: Vec<f64> = fitted
                .iter()
                .zip(&fit.residuals)
                .map(|(f, e)| f + multiplier.draw(&mut rng) * e)
                .collect();
            let f = least_squares(std::slice::from_ref(&xs), &ystar, true).expect("same design as the original fit");
            stat_from_residuals(&f.residuals, &ystar)
        })
        .collect();
    Ok(CobubbleResult {
        s,
        p_value: bootstrap_pvalue(s, &replicates),
        mu: fit.intercept,
        beta: fit.beta[0],
        n: ys.len(),
        delay: i,
        b,
        seed,
        replicates,
    })
}
