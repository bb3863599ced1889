use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ols::{fit_adf_window, AdfConfig};
use crate::series::Series;

/// Autoregressive coefficient estimates indexed by window end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefSequence {
    /// Strictly increasing window ends.
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Sample size the indices refer to.
    pub t: usize,
    /// Rolling window length; `None` for expanding windows.
    pub window: Option<usize>,
}

impl CoefSequence {
    pub fn new(indices: Vec<usize>, values: Vec<f64>, t: usize, window: Option<usize>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::invalid("indices and values differ in length"));
        }
        if indices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("coefficient indices must increase"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(CoefSequence {
            indices,
            values,
            t,
            window,
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.indices.binary_search(&index).ok().map(|i| self.values[i])
    }

    /// Index of the largest coefficient (earliest on ties).
    pub fn peak_index(&self) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, i));
            }
        }
        best.map(|b| b.1)
    }
}

fn collect(series: &Series, ends: impl Iterator<Item = (usize, usize)>, cfg: AdfConfig, window: Option<usize>) -> Result<CoefSequence> {
    let (mut idx, mut vals) = (Vec::new(), Vec::new());
    for (s, e) in ends {
        if let Ok(f) = fit_adf_window(series, s, e, cfg) {
            idx.push(e);
            vals.push(f.rho_hat);
        }
    }
    if idx.is_empty() {
        return Err(Error::AllDegenerate);
    }
    CoefSequence::new(idx, vals, series.len(), window)
}

/// `rho_hat` of the test regression on `(0, e]`, `e = w0..=T`.
pub fn recursive_coefficients(series: &Series, w0: usize, cfg: AdfConfig) -> Result<CoefSequence> {
    let n = series.len();
    if w0 < cfg.min_window() || w0 > n {
        return Err(Error::WindowTooShort(format!(
            "first window of {w0} observations; need {}..={n}",
            cfg.min_window()
        )));
    }
    collect(series, (w0..=n).map(|e| (0, e)), cfg, None)
}

/// `rho_hat` of the test regression on `(e - S, e]`, `e = S..=T`.
pub fn rolling_coefficients(series: &Series, window: usize, cfg: AdfConfig) -> Result<CoefSequence> {
    let n = series.len();
    if window < cfg.min_window() || window > n {
        return Err(Error::WindowTooShort(format!(
            "rolling window of {window} observations; need {}..={n}",
            cfg.min_window()
        )));
    }
    collect(series, (window..=n).map(|e| (e - window, e)), cfg, Some(window))
}
