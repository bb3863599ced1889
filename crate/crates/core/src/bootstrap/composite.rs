use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::wild::check_bootstrap_args;
use super::{collect_replicates, upper_critical_value, MultiplierKind};
use crate::error::{Error, Result};
use crate::ols::{least_squares, AdfConfig};
use crate::recursive::double_scan;
use crate::rng::stream;
use crate::series::{min_window_len, DetSpec, Series};

/// Default size-control window for monthly data.
pub const DEFAULT_TB: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeReport {
    /// Critical value for `max BSADF` over the control window.
    pub cv: f64,
    pub level: f64,
    /// Replicates of `M* = max_t BSADF*_t`.
    pub replicates: Vec<f64>,
    /// Minimum window `floor(tau0 T)`.
    pub w0: usize,
    #[serde(rename = "Tb")]
    pub tb: usize,
    /// Bootstrap sample length `w0 + Tb - 1`.
    pub sample_len: usize,
    /// Lag coefficients of the restricted regression.
    pub phi: Vec<f64>,
    #[serde(rename = "B")]
    pub b: usize,
    pub seed: u64,
    pub failed: usize,
}

/// Critical value controlling the family-wise size of PSY dating over the
/// first `Tb` monitoring points.
///
/// The regression `dy_t = [mu] + [gamma t] + sum phi_j dy_{t-j} + e_t`
/// (`delta = 0`) is fitted on the whole series. Bootstrap samples of length
/// `w0 + Tb - 1` start from `y*_i = y_i`, `i <= k + 1`, and follow
/// `dy*_t = sum phi_j dy*_{t-j} + w_t e_t`, with `e_t` the residual at the
/// same date.
#[allow(clippy::too_many_arguments)]
pub fn composite_monitor_cv(
    series: &Series,
    tau0: f64,
    tb: usize,
    b: usize,
    level: f64,
    multiplier: MultiplierKind,
    seed: u64,
    cfg: AdfConfig,
) -> Result<CompositeReport> {
    check_bootstrap_args(b, level)?;
    if tb == 0 {
        return Err(Error::invalid("Tb must be at least 1"));
    }
    let v = series.values();
    let n = v.len();
    let k = cfg.k;
    let w0 = min_window_len(tau0, n)?;
    if w0 < cfg.min_window() {
        return Err(Error::WindowTooShort(format!(
            "floor(tau0 T) = {w0} but the regression needs windows of at least {}",
            cfg.min_window()
        )));
    }
    let len = w0 + tb - 1;
    if len > n {
        return Err(Error::invalid(format!(
            "floor(tau0 T) + Tb - 1 = {len} exceeds the sample size {n}"
        )));
    }
    let dy = series.diff();
    // rows t = k+2..=n, dy_t at dy[t-2]
    let rows: Vec<usize> = (k + 2..=n).collect();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    if cfg.det == DetSpec::Trend {
        cols.push(rows.iter().map(|&t| t as f64).collect());
    }
    for j in 1..=k {
        cols.push(rows.iter().map(|&t| dy[t - 2 - j]).collect());
    }
    let resp: Vec<f64> = rows.iter().map(|&t| dy[t - 2]).collect();
    let fit = least_squares(&cols, &resp, cfg.det.has_constant())?;
    let phi: Vec<f64> = fit.beta[fit.beta.len() - k..].to_vec();
    // residual for date t at res[t - k - 2]
    let res = &fit.residuals;

    let outcomes: Vec<Option<f64>> = (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, r as u64);
            let mut ys = v[..len].to_vec();
            let mut dys: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
            for t in k + 2..=len {
                let mut d = multiplier.draw(&mut rng) * res[t - k - 2];
                for (j, p) in phi.iter().enumerate() {
                    d += p * dys[t - 3 - j];
                }
                dys[t - 2] = d;
                ys[t - 1] = ys[t - 2] + d;
            }
            double_scan(&ys, w0, cfg, true)
                .iter()
                .filter_map(|sc| sc.best.value())
                .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))
        })
        .collect();
    let (replicates, failed) = collect_replicates(outcomes)?;
    Ok(CompositeReport {
        cv: upper_critical_value(&replicates, level),
        level,
        replicates,
        w0,
        tb,
        sample_len: len,
        phi,
        b,
        seed,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize) -> Series {
        let mut x = 11u64;
        let mut y = 0.0;
        let v = (0..n)
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                y += ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                y
            })
            .collect();
        Series::new(v).unwrap()
    }

    #[test]
    fn reproducible_and_sized() {
        let y = series(100);
        let cfg = AdfConfig::new(DetSpec::Constant, 1);
        let a = composite_monitor_cv(&y, 0.2, 10, 99, 0.05, MultiplierKind::Gaussian, 4, cfg).unwrap();
        let b = composite_monitor_cv(&y, 0.2, 10, 99, 0.05, MultiplierKind::Gaussian, 4, cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sample_len, 29);
        assert_eq!(a.replicates.len(), 99);
        assert_eq!(a.phi.len(), 1);
        assert!(a.cv.is_finite());
        assert_eq!(DEFAULT_TB, 24);
    }

    #[test]
    fn window_must_fit() {
        let y = series(40);
        let cfg = AdfConfig::default();
        assert!(composite_monitor_cv(&y, 0.5, 30, 99, 0.05, MultiplierKind::Gaussian, 1, cfg).is_err());
        assert!(composite_monitor_cv(&y, 0.5, 0, 99, 0.05, MultiplierKind::Gaussian, 1, cfg).is_err());
    }
}
