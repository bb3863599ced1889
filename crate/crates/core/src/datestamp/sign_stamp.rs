use serde::{Deserialize, Serialize};

use super::stamp::Episode;
use crate::error::{Error, Result};
use crate::recursive::{check_min_window, SignMode, SignScan};
use crate::series::Series;

/// Exponent on the corrected variance.
pub const DEFAULT_SIGN_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignStamp {
    /// Origin `s` and collapse `e` of the maximising window `(s, e]`.
    pub episode: Episode,
    pub value: f64,
    pub epsilon: f64,
    pub skipped: usize,
}

/// Dates from the window maximising the corrected sign statistic.
pub fn sign_stamp(series: &Series, tau0: f64) -> Result<SignStamp> {
    sign_stamp_with(series, tau0, DEFAULT_SIGN_EPSILON)
}

/// Maximises `delta_hat sqrt(sum C_{t-1}^2) / (s~^2)^(eps/2)` over windows
/// `(s, e]` of length at least `floor(tau0 T)`, with
/// `s~^2 = (e s^2(0,e) - s s^2(0,s)) / (e - s - 1)`. Windows with
/// `sum C^2 = 0` or `s~^2 <= 0` are skipped; ties go to the smallest `(s, e)`.
pub fn sign_stamp_with(series: &Series, tau0: f64, epsilon: f64) -> Result<SignStamp> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be non-negative")));
    }
    let scan = SignScan::new(series, SignMode::Raw, 0)?;
    let n = scan.len();
    let w0 = check_min_window(n, tau0, 3)?;
    let ssr = scan.prefix_ssr();
    // m s^2(0, m)
    let scaled: Vec<f64> = ssr
        .iter()
        .enumerate()
        .map(|(m, s)| if m >= 2 { m as f64 * s / (m - 1) as f64 } else { 0.0 })
        .collect();
    let mut best: Option<(f64, usize, usize)> = None;
    let mut skipped = 0;
    scan.for_each_window(w0, |s, e, sxx, sxy, _| {
        let s2 = (scaled[e] - scaled[s]) / (e - s - 1) as f64;
        if !(sxx > 0.0 && s2 > 0.0) {
            skipped += 1;
            return;
        }
        let v = sxy / sxx * sxx.sqrt() / s2.powf(epsilon / 2.0);
        match best {
            Some((bv, bs, be)) if bv > v || (bv == v && (bs, be) <= (s, e)) => {}
            _ => best = Some((v, s, e)),
        }
    });
    let (value, s, e) = best.ok_or(Error::AllDegenerate)?;
    Ok(SignStamp {
        episode: Episode::new(s, e, None, n),
        value,
        epsilon,
        skipped,
    })
}
