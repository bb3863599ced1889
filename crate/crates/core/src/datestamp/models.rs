use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stamp::Episode;
use crate::error::{Error, Result};
use crate::ols::least_squares;
use crate::series::{floor_index, Series};

/// Default minimum number of rows in each regime.
pub const DEFAULT_MIN_SEGMENT: usize = 3;

/// Bubble model: 1 explosive to the end, 2 explosive then unit root,
/// 3 explosive then collapse to the end, 4 explosive, collapse, unit root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum BubbleModel {
    M1,
    M2,
    M3,
    M4,
}

impl BubbleModel {
    pub const ALL: [BubbleModel; 4] = [BubbleModel::M1, BubbleModel::M2, BubbleModel::M3, BubbleModel::M4];

    pub fn number(self) -> u8 {
        match self {
            BubbleModel::M1 => 1,
            BubbleModel::M2 => 2,
            BubbleModel::M3 => 3,
            BubbleModel::M4 => 4,
        }
    }

    /// Regression coefficients plus break dates: 3, 4, 6, 7.
    pub fn bic_penalty(self) -> usize {
        match self {
            BubbleModel::M1 => 2 + 1,
            BubbleModel::M2 => 2 + 2,
            BubbleModel::M3 => 4 + 2,
            BubbleModel::M4 => 4 + 3,
        }
    }

    fn has_collapse(self) -> bool {
        matches!(self, BubbleModel::M3 | BubbleModel::M4)
    }
}

impl From<BubbleModel> for u8 {
    fn from(m: BubbleModel) -> u8 {
        m.number()
    }
}

impl TryFrom<u8> for BubbleModel {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        BubbleModel::ALL
            .into_iter()
            .find(|m| m.number() == n)
            .ok_or_else(|| Error::invalid(format!("bubble model {n} is not one of 1, 2, 3, 4")))
    }
}

/// Break indices `(t1, t2, t3)`: explosive on `(t1, t2]`, collapse on `(t2, t3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BubbleDates {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
}

impl BubbleDates {
    pub fn from_fractions(tau1: f64, tau2: f64, tau3: f64, t: usize) -> Self {
        let f = |x: f64| floor_index(x * t as f64);
        BubbleDates {
            t1: f(tau1),
            t2: f(tau2),
            t3: f(tau3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleFit {
    pub ssr: f64,
    /// `[mu1, delta1]`, plus `[mu2, delta2]` for models with a collapse.
    pub coeffs: Vec<f64>,
    /// Whether `y_{t1} < y_{t2}` (and `y_{t2} > y_{t3}` with a collapse).
    pub valid: bool,
}

fn check_dates(model: BubbleModel, d: BubbleDates, t: usize, min_seg: usize) -> Result<()> {
    let bad = |msg: &str| Err(Error::invalid(format!("model {}: {msg}", model.number())));
    if !(d.t1 >= 1 && d.t1 < d.t2 && d.t2 <= d.t3 && d.t3 <= t) {
        return bad("dates must satisfy 1 <= t1 < t2 <= t3 <= T");
    }
    let ok = match model {
        BubbleModel::M1 => d.t2 == t && d.t3 == t,
        BubbleModel::M2 => d.t3 == d.t2 && d.t2 < t,
        BubbleModel::M3 => d.t3 == t && d.t2 < t,
        BubbleModel::M4 => d.t2 < d.t3 && d.t3 < t,
    };
    if !ok {
        return bad("dates violate the model restrictions");
    }
    let mut segs = vec![d.t1 - 1, d.t2 - d.t1];
    if model.has_collapse() {
        segs.push(d.t3 - d.t2);
    }
    if d.t3 < t {
        segs.push(t - d.t3);
    }
    if segs.iter().any(|&n| n < min_seg) {
        return bad(&format!("every regime needs at least {min_seg} rows"));
    }
    Ok(())
}

fn is_valid(model: BubbleModel, v: &[f64], d: BubbleDates) -> bool {
    let y = |i: usize| v[i - 1];
    y(d.t1) < y(d.t2) && (!model.has_collapse() || y(d.t2) > y(d.t3))
}

/// Fits `dy_t = mu1 D_t(t1,t2) + delta1 D_t(t1,t2) y_{t-1} + mu2 D_t(t2,t3)
/// + delta2 D_t(t2,t3) y_{t-1} + e_t`, `t = 2..=T`, `D_t(a,b) = 1(a < t <= b)`.
pub fn fit_bubble_model(series: &Series, model: BubbleModel, dates: BubbleDates, min_seg: usize) -> Result<BubbleFit> {
    let v = series.values();
    let n = v.len();
    check_dates(model, dates, n, min_seg)?;
    let block = |a: usize, b: usize| -> Result<(f64, f64, f64, f64)> {
        let x: Vec<f64> = (a + 1..=b).map(|t| v[t - 2]).collect();
        let y: Vec<f64> = (a + 1..=b).map(|t| v[t - 1] - v[t - 2]).collect();
        let fit = least_squares(&[x], &y, true)?;
        let z2: f64 = y.iter().map(|d| d * d).sum();
        Ok((fit.intercept, fit.beta[0], fit.ssr, z2))
    };
    let total: f64 = v.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
    let (mu1, d1, s1, z1) = block(dates.t1, dates.t2)?;
    let mut coeffs = vec![mu1, d1];
    let mut ssr = s1 + total - z1;
    if model.has_collapse() {
        let (mu2, d2, s2, z2) = block(dates.t2, dates.t3)?;
        coeffs.extend([mu2, d2]);
        ssr += s2 - z2;
    }
    Ok(BubbleFit {
        ssr: ssr.max(0.0),
        coeffs,
        valid: is_valid(model, v, dates),
    })
}

/// Prefix sums over rows `t = 2..=T` of `x = y_{t-1} - c`, `z = dy_t`.
struct Sums {
    sx: Vec<f64>,
    sz: Vec<f64>,
    sxx: Vec<f64>,
    sxz: Vec<f64>,
    total: f64,
}

impl Sums {
    fn new(v: &[f64]) -> Self {
        let c = v.iter().sum::<f64>() / v.len() as f64;
        let n = v.len();
        let mut s = Sums {
            sx: vec![0.0; n + 1],
            sz: vec![0.0; n + 1],
            sxx: vec![0.0; n + 1],
            sxz: vec![0.0; n + 1],
            total: 0.0,
        };
        // entry b holds sums over rows t = 2..=b
        for t in 2..=n {
            let x = v[t - 2] - c;
            let z = v[t - 1] - v[t - 2];
            s.sx[t] = s.sx[t - 1] + x;
            s.sz[t] = s.sz[t - 1] + z;
            s.sxx[t] = s.sxx[t - 1] + x * x;
            s.sxz[t] = s.sxz[t - 1] + x * z;
            s.total += z * z;
        }
        s.sx[1] = 0.0;
        s
    }

    /// Change in SSR from fitting a regime intercept and slope on rows
    /// `a+1..=b` instead of leaving them as pure increments; `None` if the
    /// regressor is constant there.
    fn gain(&self, a: usize, b: usize) -> Option<f64> {
        let n = (b - a) as f64;
        let sx = self.sx[b] - self.sx[a];
        let sz = self.sz[b] - self.sz[a];
        let sxx = self.sxx[b] - self.sxx[a] - sx * sx / n;
        let sxz = self.sxz[b] - self.sxz[a] - sx * sz / n;
        let scale = self.sxx[b] - self.sxx[a];
        (sxx > 1e-12 * scale && sxx > 0.0).then(|| -(sz * sz / n + sxz * sxz / sxx))
    }
}

/// Lowest-SSR admissible dates for `model`, ties broken by `(t1, t2, t3)`.
/// Returns `None` when no candidate satisfies the constraints.
pub fn search_model(series: &Series, model: BubbleModel, min_seg: usize) -> Option<(f64, BubbleDates)> {
    let v = series.values();
    let n = v.len();
    let s = Sums::new(v);
    let y = |i: usize| v[i - 1];
    let ms = min_seg.max(1);
    // best t1 for a given t2
    let left = |t2: usize| -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for t1 in (1 + ms)..=t2.checked_sub(ms)? {
            if !(y(t1) < y(t2)) {
                continue;
            }
            if let Some(g) = s.gain(t1, t2) {
                if best.is_none_or(|(b, _)| g < b) {
                    best = Some((g, t1));
                }
            }
        }
        best
    };
    let candidates: Vec<(f64, BubbleDates)> = match model {
        BubbleModel::M1 => left(n)
            .map(|(g, t1)| (s.total + g, BubbleDates { t1, t2: n, t3: n }))
            .into_iter()
            .collect(),
        BubbleModel::M2 => (1..n.saturating_sub(ms) + 1)
            .into_par_iter()
            .filter_map(|t2| left(t2).map(|(g, t1)| (s.total + g, BubbleDates { t1, t2, t3: t2 })))
            .collect(),
        BubbleModel::M3 | BubbleModel::M4 => (1..n)
            .into_par_iter()
            .filter_map(|t2| {
                let (gl, t1) = left(t2)?;
                let right = if model == BubbleModel::M3 {
                    if n - t2 < ms || !(y(t2) > y(n)) {
                        return None;
                    }
                    (s.gain(t2, n)?, n)
                } else {
                    let mut best: Option<(f64, usize)> = None;
                    for t3 in (t2 + ms)..=n.checked_sub(ms)? {
                        if !(y(t2) > y(t3)) {
                            continue;
                        }
                        if let Some(g) = s.gain(t2, t3) {
                            if best.is_none_or(|(b, _)| g < b) {
                                best = Some((g, t3));
                            }
                        }
                    }
                    best?
                };
                Some((s.total + gl + right.0, BubbleDates { t1, t2, t3: right.1 }))
            })
            .collect(),
    };
    candidates
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(ssr, d)| (ssr.max(0.0), d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCandidate {
    pub model: BubbleModel,
    pub ssr: f64,
    pub bic: f64,
    pub dates: BubbleDates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSelection {
    pub model: BubbleModel,
    pub episode: Episode,
    /// Best fit per model that has an admissible candidate.
    pub candidates: Vec<ModelCandidate>,
}

/// Minimises SSR per model and picks the smallest
/// `BIC = T log(SSR / T) + k log T`. SSR is floored at `1e-12 sum dy^2` so
/// exact fits compare through their penalties.
pub fn select_model_bic(series: &Series, min_seg: usize) -> Result<ModelSelection> {
    let n = series.len();
    let total: f64 = series.diff().iter().map(|d| d * d).sum();
    if !(total > 0.0) {
        return Err(Error::degenerate("flat series"));
    }
    let floor = 1e-12 * total;
    let tf = n as f64;
    let candidates: Vec<ModelCandidate> = BubbleModel::ALL
        .into_iter()
        .filter_map(|model| {
            search_model(series, model, min_seg).map(|(ssr, dates)| ModelCandidate {
                model,
                ssr,
                bic: tf * (ssr.max(floor) / tf).ln() + model.bic_penalty() as f64 * tf.ln(),
                dates,
            })
        })
        .collect();
    let best = candidates
        .iter()
        .min_by(|a, b| a.bic.total_cmp(&b.bic).then(a.model.cmp(&b.model)))
        .ok_or(Error::AllDegenerate)?;
    let d = best.dates;
    let (collapse, recovery) = match best.model {
        BubbleModel::M1 => (n, None),
        BubbleModel::M2 => (d.t2, None),
        BubbleModel::M3 | BubbleModel::M4 => (d.t2, Some(d.t3)),
    };
    let mut episode = Episode::new(d.t1, collapse, recovery, n);
    episode.model = Some(best.model.number());
    Ok(ModelSelection {
        model: best.model,
        episode,
        candidates,
    })
}
