use serde::{Deserialize, Serialize};

use super::sbz::{default_bandwidth, nw_smooth};
use super::sequence::{Best, StatSequence, SupResult};
use super::sup::check_min_window;
use crate::error::{Error, Result};
use crate::series::Series;
use crate::statistic::StatKind;

/// Estimated variance profile on the grid `j / n`, `j = 0..=n`, where `n`
/// is the number of first differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceProfile {
    pub eta: Vec<f64>,
    pub omega_bar2: f64,
}

impl VarianceProfile {
    /// Profile implied by residuals `e_1..e_n`.
    pub fn from_residuals(res: &[f64]) -> Result<Self> {
        let n = res.len();
        if n == 0 {
            return Err(Error::invalid("no residuals"));
        }
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for e in res {
            acc += e * e;
            cum.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::degenerate("all residuals are zero"));
        }
        let eta = cum.iter().map(|c| c / acc).collect();
        Ok(VarianceProfile {
            eta,
            omega_bar2: acc / n as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.eta.len() - 1
    }

    /// Piecewise-linear `eta(s)`.
    pub fn at(&self, s: f64) -> f64 {
        let n = self.n() as f64;
        let x = (s.clamp(0.0, 1.0)) * n;
        let i = (x.floor() as usize).min(self.n() - 1);
        let f = x - i as f64;
        self.eta[i] + f * (self.eta[i + 1] - self.eta[i])
    }

    /// `floor(g(j/n) n)` for `j = 0..=n`, `g` the left-most inverse of `eta`.
    pub fn transformed_indices(&self) -> Vec<usize> {
        let n = self.n();
        let mut out = Vec::with_capacity(n + 1);
        out.push(0);
        let mut i = 1;
        for j in 1..=n {
            let r = j as f64 / n as f64;
            while i < n && self.eta[i] < r {
                i += 1;
            }
            let lo = self.eta[i - 1];
            let hi = self.eta[i];
            let frac = if hi > lo { (r - lo) / (hi - lo) } else { 1.0 };
            out.push(if frac >= 1.0 { i } else { i - 1 });
        }
        out
    }
}

/// Profile from `e_t = dy_t` minus its Gaussian-kernel local mean.
pub fn variance_profile(series: &Series) -> Result<VarianceProfile> {
    variance_profile_with(series, None)
}

pub fn variance_profile_with(series: &Series, bandwidth: Option<f64>) -> Result<VarianceProfile> {
    let n = series.len();
    if n < 20 {
        return Err(Error::WindowTooShort("the variance profile needs T >= 20".into()));
    }
    let dy = series.diff();
    let m = dy.len();
    let h = bandwidth.unwrap_or_else(|| default_bandwidth(m));
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::invalid(format!("bandwidth {h} outside (0, 1)")));
    }
    let mean = nw_smooth(&dy, m as f64 * h)?;
    let res: Vec<f64> = dy.iter().zip(&mean).map(|(d, mu)| d - mu).collect();
    VarianceProfile::from_residuals(&res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeTransformed {
    pub stadf: SupResult,
    pub gstadf: SupResult,
    /// `y~_j = y_{t'_j} - y_0`, `j = 0..=n`.
    pub transformed: Vec<f64>,
    pub omega_bar2: f64,
}

/// STADF and GSTADF with the estimated profile.
pub fn time_transformed_tests(series: &Series, tau0: f64) -> Result<TimeTransformed> {
    let p = variance_profile(series)?;
    time_transformed_with(series, tau0, &p)
}

/// STADF and GSTADF for a given profile (its grid must match the series).
pub fn time_transformed_with(series: &Series, tau0: f64, profile: &VarianceProfile) -> Result<TimeTransformed> {
    let v = series.values();
    let n = v.len() - 1;
    if profile.n() != n {
        return Err(Error::invalid("profile grid does not match the series"));
    }
    let idx = profile.transformed_indices();
    let yt: Vec<f64> = idx.iter().map(|&i| v[i] - v[0]).collect();
    let w0 = check_min_window(n, tau0, 2)?;
    let om2 = profile.omega_bar2;
    let om = om2.sqrt();

    let mut s_seq = StatSequence::new(StatKind::Stadf, tau0, n);
    let mut g_seq = StatSequence::new(StatKind::Gstadf, tau0, n);
    let mut s_best = Best::default();
    let mut g_best = Best::default();
    let (mut s_skip, mut g_skip) = (0, 0);
    for e in w0..=n {
        let mut den = 0.0;
        let mut next = e;
        let mut end_best = Best::default();
        for s in (0..=e - w0).rev() {
            while next > s {
                next -= 1;
                den += yt[next] * yt[next];
            }
            let stat = (den > 0.0).then(|| {
                (yt[e] * yt[e] - yt[s] * yt[s] - om2 * (e - s) as f64) / (2.0 * om * den.sqrt())
            });
            match stat {
                Some(x) => {
                    end_best.offer(x, s, e);
                    g_best.offer(x, s, e);
                }
                None => g_skip += 1,
            }
            if s == 0 {
                s_seq.push(e, stat);
                match stat {
                    Some(x) => s_best.offer(x, 0, e),
                    None => s_skip += 1,
                }
            }
        }
        g_seq.push(e, end_best.value());
    }
    Ok(TimeTransformed {
        stadf: SupResult::new(s_best, n, Some(s_seq), s_skip)?,
        gstadf: SupResult::new(g_best, n, Some(g_seq), g_skip)?,
        transformed: yt,
        omega_bar2: om2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_monotone() {
        let v: Vec<f64> = (0..60).map(|i| (i as f64 * 1.7).sin() * (1.0 + i as f64 / 30.0)).collect();
        let p = variance_profile(&Series::new(v).unwrap()).unwrap();
        assert_eq!(p.eta[0], 0.0);
        assert_eq!(*p.eta.last().unwrap(), 1.0);
        assert!(p.eta.windows(2).all(|w| w[0] <= w[1]));
        assert!(p.omega_bar2 > 0.0);
    }

    #[test]
    fn flat_profile_is_identity() {
        let p = VarianceProfile::from_residuals(&[1.0; 40]).unwrap();
        assert_eq!(p.transformed_indices(), (0..=40).collect::<Vec<_>>());
    }

    #[test]
    fn flat_segments_take_leftmost_preimage() {
        // eta = 0, .5, .5, .5, 1 on a grid of 4
        let p = VarianceProfile::from_residuals(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.transformed_indices(), vec![0, 0, 1, 3, 4]);
    }

    #[test]
    fn zero_residuals_rejected() {
        assert!(VarianceProfile::from_residuals(&[0.0; 10]).is_err());
    }
}
