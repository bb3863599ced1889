use super::sequence::{Best, StatSequence, SupResult};
use super::sup::check_min_window;
use crate::error::{Error, Result};
use crate::series::Series;
use crate::statistic::StatKind;

/// `T^{-1/5}`.
pub fn default_bandwidth(t: usize) -> f64 {
    (t as f64).powf(-0.2)
}

/// Gaussian Nadaraya-Watson smoother of `x` on its own index grid with
/// kernel argument `(i - t) / scale`.
pub(crate) fn nw_smooth(x: &[f64], scale: f64) -> Result<Vec<f64>> {
    let n = x.len();
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid("kernel bandwidth must be positive"));
    }
    let w: Vec<f64> = (0..n)
        .map(|d| {
            let u = d as f64 / scale;
            (-0.5 * u * u).exp()
        })
        .collect();
    (0..n)
        .map(|t| {
            let mut num = 0.0;
            let mut den = 0.0;
            for (i, xi) in x.iter().enumerate() {
                let wi = w[i.abs_diff(t)];
                num += wi * xi;
                den += wi;
            }
            if den > 0.0 {
                Ok(num / den)
            } else {
                Err(Error::degenerate("zero kernel mass; bandwidth too small"))
            }
        })
        .collect()
}

fn check_bandwidth(h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::invalid(format!("bandwidth {h} outside (0, 1)")));
    }
    Ok(())
}

/// Kernel estimates of `sigma_t^2`, `t = 2..=T`, smoothing `(dy_i)^2` with
/// argument `(i - t) / (T h)`.
pub fn kernel_variance(series: &Series, bandwidth: Option<f64>) -> Result<Vec<f64>> {
    let n = series.len();
    let h = bandwidth.unwrap_or_else(|| default_bandwidth(n));
    check_bandwidth(h)?;
    let sq: Vec<f64> = series.diff().iter().map(|d| d * d).collect();
    let s2 = nw_smooth(&sq, n as f64 * h)?;
    if s2.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::degenerate("kernel variance estimate is zero"));
    }
    Ok(s2)
}

/// Sup over expanding windows of the variance-weighted statistic
/// `sum dy_t y~_{t-1} / s_t^2 / sqrt(sum y~_{t-1}^2 / s_t^2)`, `y~ = y - y_1`.
pub fn sbz(series: &Series, tau0: f64, bandwidth: Option<f64>) -> Result<SupResult> {
    if series.len() < 20 {
        return Err(Error::WindowTooShort("the kernel variance estimate needs T >= 20".into()));
    }
    let s2 = kernel_variance(series, bandwidth)?;
    sbz_with(series, tau0, &s2)
}

/// SBZ scan with user-supplied variances `sigma2[t - 2]` for `t = 2..=T`.
pub fn sbz_with(series: &Series, tau0: f64, sigma2: &[f64]) -> Result<SupResult> {
    let v = series.values();
    let n = v.len();
    if sigma2.len() != n - 1 {
        return Err(Error::invalid("need one variance per first difference"));
    }
    if sigma2.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::degenerate("variance estimates must be positive"));
    }
    let w0 = check_min_window(n, tau0, 3)?;
    let y1 = v[0];
    let mut num = 0.0;
    let mut den = 0.0;
    let mut seq = StatSequence::new(StatKind::Sbz, tau0, n);
    let mut best = Best::default();
    let mut skipped = 0;
    for t in 2..=n {
        let yl = v[t - 2] - y1;
        let d = v[t - 1] - v[t - 2];
        let s = sigma2[t - 2];
        num += d * yl / s;
        den += yl * yl / s;
        if t >= w0 {
            if den > 0.0 {
                let bz = num / den.sqrt();
                seq.push(t, Some(bz));
                best.offer(bz, 0, t);
            } else {
                seq.push(t, None);
                skipped += 1;
            }
        }
    }
    SupResult::new(best, n, Some(seq), skipped)
}
