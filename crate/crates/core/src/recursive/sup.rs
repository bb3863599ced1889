use rayon::prelude::*;

use super::sequence::{Best, StatSequence, SupResult};
use crate::error::{Error, Result};
use std::sync::Arc;

use crate::ols::{window_t, AdfConfig, DetPlan, Rows, WindowQr};
use crate::series::{min_window_len, Series};
use crate::statistic::StatKind;

/// Minimum window length in observations, checked against the regression size.
pub(crate) fn check_min_window(t: usize, tau0: f64, need: usize) -> Result<usize> {
    let w0 = min_window_len(tau0, t)?;
    if w0 < need {
        return Err(Error::WindowTooShort(format!(
            "floor(tau0 T) = {w0} but the regression needs windows of at least {need}"
        )));
    }
    Ok(w0)
}

/// Scan results for one window end `e`.
pub(crate) struct EndScan {
    pub e: usize,
    /// Statistic on `(0, e]`.
    pub s0: Option<f64>,
    /// Best window ending at `e`.
    pub best: Best,
    pub skipped: usize,
}

/// For every end `e >= w0`, grows the window backwards from `(e - w0, e]`
/// to `(0, e]`. With `all_starts == false` only `(0, e]` is evaluated.
pub(crate) fn double_scan(v: &[f64], w0: usize, cfg: AdfConfig, all_starts: bool) -> Vec<EndScan> {
    let n = v.len();
    let p = cfg.n_params();
    let plan = Arc::new(DetPlan::new(cfg.det, n));
    (w0..=n)
        .into_par_iter()
        .map_init(
            || WindowQr::new(p),
            |qr, e| {
                qr.reset();
                let rows = Rows::new(v, cfg, e);
                let mut next = e;
                let mut best = Best::default();
                let mut s0 = None;
                let mut skipped = 0;
                for s in (0..=e - w0).rev() {
                    let first = s + cfg.k + 1;
                    while next > first {
                        next -= 1;
                        qr.add_planned(&rows, next, &plan);
                    }
                    if !all_starts && s > 0 {
                        continue;
                    }
                    match window_t(qr, &rows, first, e, cfg) {
                        Some(t) => {
                            best.offer(t, s, e);
                            if s == 0 {
                                s0 = Some(t);
                            }
                        }
                        None => skipped += 1,
                    }
                }
                EndScan {
                    e,
                    s0,
                    best,
                    skipped,
                }
            },
        )
        .collect()
}

/// Sup of the ADF statistic over expanding windows `(0, floor(tau T)]`, `tau >= tau0`.
pub fn sadf(series: &Series, tau0: f64, cfg: AdfConfig) -> Result<SupResult> {
    sadf_values(series.values(), tau0, cfg)
}

pub(crate) fn sadf_values(v: &[f64], tau0: f64, cfg: AdfConfig) -> Result<SupResult> {
    let n = v.len();
    let w0 = check_min_window(n, tau0, cfg.min_window())?;
    let scans = double_scan(v, w0, cfg, false);
    let mut seq = StatSequence::new(StatKind::Sadf, tau0, n);
    let mut best = Best::default();
    let mut skipped = 0;
    for sc in &scans {
        seq.push(sc.e, sc.s0);
        match sc.s0 {
            Some(t) => best.offer(t, 0, sc.e),
            None => skipped += 1,
        }
    }
    SupResult::new(best, n, Some(seq), skipped)
}

/// Double sup over all windows `(floor(tau1 T), floor(tau2 T)]` of length at
/// least `floor(tau0 T)`; the sequence holds the backward sup (BSADF) per end.
pub fn gsadf(series: &Series, tau0: f64, cfg: AdfConfig) -> Result<SupResult> {
    gsadf_values(series.values(), tau0, cfg)
}

pub(crate) fn gsadf_values(v: &[f64], tau0: f64, cfg: AdfConfig) -> Result<SupResult> {
    let n = v.len();
    let w0 = check_min_window(n, tau0, cfg.min_window())?;
    let scans = double_scan(v, w0, cfg, true);
    let mut seq = StatSequence::new(StatKind::Gsadf, tau0, n);
    let mut best = Best::default();
    let mut skipped = 0;
    for sc in &scans {
        seq.push(sc.e, sc.best.value());
        best.merge(sc.best);
        skipped += sc.skipped;
    }
    SupResult::new(best, n, Some(seq), skipped)
}

/// Forward recursive ADF sequence `ADF_tau`, `tau in [tau0, 1]`.
pub fn adf_sequence(series: &Series, tau0: f64, cfg: AdfConfig) -> Result<StatSequence> {
    let mut seq = sadf(series, tau0, cfg)?.sequence.expect("sadf emits a sequence");
    seq.kind = StatKind::Adf;
    Ok(seq)
}

/// Backward sup ADF sequence `BSADF_tau2(tau0)`.
pub fn bsadf_sequence(series: &Series, tau0: f64, cfg: AdfConfig) -> Result<StatSequence> {
    Ok(gsadf(series, tau0, cfg)?.sequence.expect("gsadf emits a sequence"))
}
