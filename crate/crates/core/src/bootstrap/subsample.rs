use serde::{Deserialize, Serialize};

use super::empirical_quantile;
use crate::error::{Error, Result};
use crate::recursive::end_stats_diff;
use crate::series::Series;

/// Fewer subsamples than this attach a warning to the result.
pub const MIN_SUBSAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsampleCv {
    pub cv_s: f64,
    pub cv_r: f64,
    /// `None` when every window is flat.
    pub cv_sw: Option<f64>,
    pub n_subsamples: usize,
    pub warning: Option<String>,
}

/// Quantiles of `S`, `R` and `S_w` over every length-`m` window of the
/// training differences.
pub fn subsampling_cv(training: &Series, m: usize, quantile: f64) -> Result<SubsampleCv> {
    if training.len() < 2 * m {
        return Err(Error::invalid(format!(
            "training span of {} observations is shorter than 2m = {}",
            training.len(),
            2 * m
        )));
    }
    let d = training.diff();
    let count = d.len() + 1 - m;
    let (mut s, mut r, mut sw) = (Vec::with_capacity(count), Vec::with_capacity(count), Vec::new());
    for j in 0..count {
        let st = end_stats_diff(&d, m, j)?;
        s.push(st.s);
        r.push(st.r);
        if let Some(x) = st.s_w {
            sw.push(x);
        }
    }
    let warning = (count < MIN_SUBSAMPLES)
        .then(|| format!("only {count} subsamples; critical values are unreliable"));
    Ok(SubsampleCv {
        cv_s: empirical_quantile(&s, quantile)?,
        cv_r: empirical_quantile(&r, quantile)?,
        cv_sw: if sw.is_empty() { None } else { Some(empirical_quantile(&sw, quantile)?) },
        n_subsamples: count,
        warning,
    })
}
