use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

/// Default end-of-sample window length.
pub const DEFAULT_END_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndSampleStats {
    pub s: f64,
    pub r: f64,
    /// `None` on a flat window.
    pub s_w: Option<f64>,
}

/// Statistics on the `m` first differences `d_{j+1}..d_{j+m}`, where `d_i`
/// is the `i`-th difference of the series (`d_i = y_{i+1} - y_i`):
/// `S = sum (i-j) d_i`, `R = sum_i (sum_{l>=i} d_l)^2`,
/// `S_w = S / sqrt(sum ((i-j) d_i)^2)`.
pub fn end_of_sample_stats(series: &Series, m: usize, j: usize) -> Result<EndSampleStats> {
    let d = series.diff();
    end_stats_diff(&d, m, j)
}

pub(crate) fn end_stats_diff(d: &[f64], m: usize, j: usize) -> Result<EndSampleStats> {
    if m < 2 {
        return Err(Error::invalid("window length m must be at least 2"));
    }
    if j + m > d.len() {
        return Err(Error::invalid(format!(
            "window of {m} differences at anchor {j} exceeds the {} available",
            d.len()
        )));
    }
    let w = &d[j..j + m];
    let mut s = 0.0;
    let mut ss = 0.0;
    for (i, x) in w.iter().enumerate() {
        let a = (i + 1) as f64 * x;
        s += a;
        ss += a * a;
    }
    let mut r = 0.0;
    let mut tail = 0.0;
    for x in w.iter().rev() {
        tail += x;
        r += tail * tail;
    }
    let s_w = (ss > 0.0).then(|| s / ss.sqrt());
    Ok(EndSampleStats { s, r, s_w })
}
