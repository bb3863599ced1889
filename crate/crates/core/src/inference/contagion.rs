use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::coef::CoefSequence;
use crate::error::{Error, Result};
use crate::ols::least_squares;

/// Largest delay searched by default.
pub const DEFAULT_MAX_DELAY: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContagionResult {
    pub d_hat: usize,
    pub theta1: f64,
    pub theta2: f64,
    pub r2: f64,
    /// `(d, R^2)` for every delay with enough overlap.
    pub by_delay: Vec<(usize, f64)>,
}

/// Fits `target_s = theta1 + theta2 core_{s-d} + e_s` for each `d` and keeps
/// the delay with the largest `R^2` (smallest `d` on ties).
pub fn contagion_delay(core: &CoefSequence, target: &CoefSequence, delays: RangeInclusive<usize>) -> Result<ContagionResult> {
    if core.window != target.window {
        return Err(Error::invalid("core and target come from different window lengths"));
    }
    let mut best: Option<ContagionResult> = None;
    let mut by_delay = Vec::new();
    for d in delays {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (&s, &y) in target.indices.iter().zip(&target.values) {
            if let Some(x) = s.checked_sub(d).and_then(|i| core.get(i)) {
                xs.push(x);
                ys.push(y);
            }
        }
        if ys.len() < 3 {
            continue;
        }
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        let sst: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
        let Ok(fit) = least_squares(&[xs], &ys, true) else {
            continue;
        };
        if !(sst > 0.0) {
            continue;
        }
        let r2 = 1.0 - fit.ssr / sst;
        by_delay.push((d, r2));
        if best.as_ref().is_none_or(|b| r2 > b.r2) {
            best = Some(ContagionResult {
                d_hat: d,
                theta1: fit.intercept,
                theta2: fit.beta[0],
                r2,
                by_delay: Vec::new(),
            });
        }
    }
    let mut out = best.ok_or_else(|| Error::invalid("no delay leaves an estimable overlap"))?;
    out.by_delay = by_delay;
    Ok(out)
}
