use super::sequence::{Best, StatSequence, SupResult};
use crate::error::{Error, Result};
use crate::ols::least_squares;
use crate::series::{frac_to_index, Series};
use crate::statistic::StatKind;

/// Sup of the recursive Chow t-ratio for `phi` in
/// `dy~_t = phi 1(t > b) y~_{t-1} + sum_j phi_j dy~_{t-j} + e_t`, with
/// `y~ = y - mean(y)` and break `b` in `[0, floor((1 - tau0) T)]`.
///
/// The sequence is indexed by the break point `b`; the argmax window is
/// `(b/T, 1)`.
pub fn hb_sup_chow(series: &Series, tau0: f64, k: usize) -> Result<SupResult> {
    let y = series.values();
    let n = y.len();
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return Err(Error::invalid(format!("tau0 = {tau0} outside (0, 1)")));
    }
    let b_max = frac_to_index(1.0 - tau0, n)?;
    if n - b_max < 2 || n < 2 * k + 4 {
        return Err(Error::WindowTooShort("sample too short for the sup-Chow scan".into()));
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let yt: Vec<f64> = y.iter().map(|v| v - mean).collect();
    // row t (1-based) stored at position t - 1; rows t = k+2..=T
    let first = k + 1;
    let nrows = n - first;
    let mut seq = StatSequence::new(StatKind::Hb, tau0, n);
    let mut best = Best::default();
    let mut skipped = 0;

    if k == 0 {
        // suffix sums over rows r >= from
        let mut sxx = vec![0.0; n + 1];
        let mut sxy = vec![0.0; n + 1];
        for r in (first..n).rev() {
            let x = yt[r - 1];
            let d = yt[r] - yt[r - 1];
            sxx[r] = sxx[r + 1] + x * x;
            sxy[r] = sxy[r + 1] + x * d;
        }
        let syy: f64 = (first..n).map(|r| (yt[r] - yt[r - 1]).powi(2)).sum();
        for b in 0..=b_max {
            // active rows t > b, i.e. positions r >= b
            let from = b.max(first);
            let (xx, xy) = (sxx[from], sxy[from]);
            let v = if xx > 0.0 {
                let phi = xy / xx;
                let ssr = syy - phi * xy;
                if ssr > 0.0 {
                    let s2 = ssr / (nrows - 1) as f64;
                    Some(phi / (s2 / xx).sqrt())
                } else {
                    None
                }
            } else {
                None
            };
            record(&mut seq, &mut best, &mut skipped, b, v);
        }
    } else {
        let dy: Vec<f64> = (first..n).map(|r| yt[r] - yt[r - 1]).collect();
        let lags: Vec<Vec<f64>> = (1..=k)
            .map(|j| (first..n).map(|r| yt[r - j] - yt[r - j - 1]).collect())
            .collect();
        for b in 0..=b_max {
            let mut cols = vec![(first..n)
                .map(|r| if r + 1 > b { yt[r - 1] } else { 0.0 })
                .collect::<Vec<f64>>()];
            cols.extend(lags.iter().cloned());
            let v = least_squares(&cols, &dy, false)
                .ok()
                .filter(|f| f.ssr > 0.0)
                .map(|f| f.t(0));
            record(&mut seq, &mut best, &mut skipped, b, v);
        }
    }
    let (value, b, _) = best.get().ok_or(Error::AllDegenerate)?;
    Ok(SupResult {
        value,
        argmax: (b as f64 / n as f64, 1.0),
        argmax_index: (b, n),
        sequence: Some(seq),
        skipped,
    })
}

fn record(seq: &mut StatSequence, best: &mut Best, skipped: &mut usize, b: usize, v: Option<f64>) {
    seq.push(b, v);
    match v {
        Some(t) => best.offer(t, b, 0),
        None => *skipped += 1,
    }
}
