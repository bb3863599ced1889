use serde::{Deserialize, Serialize};

use super::sequence::{Best, StatSequence, SupResult};
use super::sup::check_min_window;
use crate::error::{Error, Result};
use crate::ols::WindowQr;
use crate::series::Series;
use crate::statistic::StatKind;

/// Treatment of the signs before cumulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    #[default]
    Raw,
    /// `sign_t - (t-1)^{-1} sum_{i=2..t} sign_i`.
    Demeaned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignStatistics {
    pub ssadf: SupResult,
    pub sgsadf: SupResult,
}

/// Increments `dC_t`, `t = 1..=T` (`dC_1 = 0`).
///
/// With `k > 0` the sign of `dy_t - sum_j phi_j(t) dy_{t-j}` is used, where
/// `phi(t)` comes from the recursive regression of `dy_i` on a constant,
/// `y_{i-1}` and `k` lags over `i = k+5..=t`; while that regression is not
/// estimable the plain sign is kept.
pub(crate) fn sign_series(v: &[f64], mode: SignMode, k: usize) -> Result<Vec<f64>> {
    let n = v.len();
    let dy: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    // dy_t lives at dy[t - 2]
    let mut signs: Vec<f64> = dy.iter().map(|d| sgn(*d)).collect();
    if k > 0 {
        let p = k + 2;
        let mut qr = WindowQr::new(p);
        let mut x = vec![0.0; p];
        for t in (k + 5)..=n {
            let i = t;
            x[0] = 1.0;
            x[1] = v[i - 2];
            for j in 1..=k {
                x[1 + j] = dy[i - 2 - j];
            }
            qr.add_row(&mut x, dy[i - 2]);
            if let Some(b) = qr.solve() {
                let fitted: f64 = (1..=k).map(|j| b[1 + j] * dy[t - 2 - j]).sum();
                signs[t - 2] = sgn(dy[t - 2] - fitted);
            }
        }
    }
    if signs.iter().all(|s| *s == 0.0) {
        return Err(Error::degenerate("all signs are zero (flat series)"));
    }
    let mut d = Vec::with_capacity(n);
    d.push(0.0);
    match mode {
        SignMode::Raw => d.extend_from_slice(&signs),
        SignMode::Demeaned => {
            let mut acc = 0.0;
            for (i, s) in signs.iter().enumerate() {
                acc += s;
                d.push(s - acc / (i + 1) as f64);
            }
        }
    }
    Ok(d)
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Window sums for the no-intercept regression `dC_t = delta C_{t-1} + e_t`.
pub(crate) struct SignScan {
    /// `dC_t` at position `t - 1`.
    d: Vec<f64>,
    /// `C_t` at position `t`, `C_0 = 0`.
    c: Vec<f64>,
}

impl SignScan {
    pub(crate) fn new(series: &Series, mode: SignMode, k: usize) -> Result<Self> {
        let d = sign_series(series.values(), mode, k)?;
        let mut c = Vec::with_capacity(d.len() + 1);
        c.push(0.0);
        let mut acc = 0.0;
        for x in &d {
            acc += x;
            c.push(acc);
        }
        Ok(SignScan { d, c })
    }

    pub(crate) fn len(&self) -> usize {
        self.d.len()
    }

    /// Visits windows `(s, e]`, `e >= w0`, `s` from `e - w0` down to 0, with
    /// `(sxx, sxy, syy)` over rows `t = s+1..=e`.
    pub(crate) fn for_each_window(&self, w0: usize, mut f: impl FnMut(usize, usize, f64, f64, f64)) {
        let n = self.len();
        for e in w0..=n {
            let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
            let mut next = e;
            for s in (0..=e - w0).rev() {
                while next > s {
                    let x = self.c[next - 1];
                    let y = self.d[next - 1];
                    sxx += x * x;
                    sxy += x * y;
                    syy += y * y;
                    next -= 1;
                }
                f(s, e, sxx, sxy, syy);
            }
        }
    }

    /// `SSR(0, m)` of the regression on `(0, m]` for `m = 0..=T`.
    pub(crate) fn prefix_ssr(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(0.0);
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for t in 1..=self.len() {
            let x = self.c[t - 1];
            let y = self.d[t - 1];
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
            out.push(if sxx > 0.0 { syy - sxy * sxy / sxx } else { syy });
        }
        out
    }
}

/// `(delta_hat, SSR)` of the window regression, `None` if `sum C^2 = 0`.
#[inline]
pub(crate) fn sign_fit(sxx: f64, sxy: f64, syy: f64) -> Option<(f64, f64)> {
    (sxx > 0.0).then(|| {
        let delta = sxy / sxx;
        (delta, syy - delta * sxy)
    })
}

/// sSADF and sGSADF on cumulated signs.
pub fn sign_statistics(series: &Series, tau0: f64, mode: SignMode, k: usize) -> Result<SignStatistics> {
    let scan = SignScan::new(series, mode, k)?;
    let n = scan.len();
    let w0 = check_min_window(n, tau0, 3)?;
    let mut s_seq = StatSequence::new(StatKind::Ssadf, tau0, n);
    let mut g_seq = StatSequence::new(StatKind::Sgsadf, tau0, n);
    let mut s_best = Best::default();
    let mut g_best = Best::default();
    let (mut s_skip, mut g_skip) = (0, 0);
    let mut end_best = Best::default();
    scan.for_each_window(w0, |s, e, sxx, sxy, syy| {
        if s == e - w0 {
            end_best = Best::default();
        }
        let stat = sign_fit(sxx, sxy, syy).and_then(|(delta, ssr)| {
            (ssr > 0.0).then(|| delta / (ssr / (e - s - 1) as f64 / sxx).sqrt())
        });
        match stat {
            Some(v) => {
                end_best.offer(v, s, e);
                g_best.offer(v, s, e);
            }
            None => g_skip += 1,
        }
        if s == 0 {
            s_seq.push(e, stat);
            match stat {
                Some(v) => s_best.offer(v, 0, e),
                None => s_skip += 1,
            }
            g_seq.push(e, end_best.value());
        }
    });
    Ok(SignStatistics {
        ssadf: SupResult::new(s_best, n, Some(s_seq), s_skip)?,
        sgsadf: SupResult::new(g_best, n, Some(g_seq), g_skip)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increasing_closed_form() {
        let s = Series::new(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let scan = SignScan::new(&s, SignMode::Raw, 0).unwrap();
        let mut got = None;
        scan.for_each_window(3, |s, e, sxx, sxy, syy| {
            if (s, e) == (2, 5) {
                let (delta, ssr) = sign_fit(sxx, sxy, syy).unwrap();
                assert!((delta - 3.0 / 7.0).abs() < 1e-15);
                assert!((ssr / 2.0 - 3.0 / 14.0).abs() < 1e-15);
                got = Some(delta / (ssr / 2.0 / sxx).sqrt());
            }
        });
        assert!((got.unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn flat_series_rejected() {
        let s = Series::new(vec![2.0; 30]).unwrap();
        assert!(sign_statistics(&s, 0.2, SignMode::Raw, 0).is_err());
    }

    #[test]
    fn nesting_and_filter() {
        let v: Vec<f64> = (0..80).map(|i| (i as f64 * 0.77).sin() + 0.03 * i as f64).collect();
        let s = Series::new(v).unwrap();
        for mode in [SignMode::Raw, SignMode::Demeaned] {
            for k in [0, 2] {
                let r = sign_statistics(&s, 0.15, mode, k).unwrap();
                assert!(r.sgsadf.value >= r.ssadf.value);
                assert_eq!(r.sgsadf.sequence.as_ref().unwrap().max(), Some(r.sgsadf.value));
            }
        }
    }
}
