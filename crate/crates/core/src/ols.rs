//! Windowed Dickey-Fuller regressions.
//!
//! For a window `(s, e]` the regression is
//! `dy_t = mu + gamma t + delta y_{t-1} + sum_j phi_j dy_{t-j} + e_t` over
//! `t = s+k+2..=e`; lagged differences only use observations inside the
//! window, so `nobs = e - s - k - 1`.
//!
//! Every fit goes through [`WindowQr`], a Givens row-updating QR factor of
//! the design. Rows are always added backwards from the window end, so a
//! scan that grows a window towards its start visits exactly the same
//! floating-point states as a fresh fit of each window. Internally the
//! lagged level is measured from `y_e` and the trend from `e`, which makes
//! the statistic exactly invariant to representable level shifts.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{DetSpec, Series};

/// Condition-number ceiling for the incremental factor.
pub const COND_LIMIT: f64 = 1e12;
/// Relative pivot tolerance of the dense fallback.
const DENSE_RANK_TOL: f64 = 1e-10;

/// Deterministic terms and lag order of the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdfConfig {
    pub det: DetSpec,
    pub k: usize,
}

impl Default for AdfConfig {
    fn default() -> Self {
        AdfConfig {
            det: DetSpec::Constant,
            k: 0,
        }
    }
}

impl AdfConfig {
    pub fn new(det: DetSpec, k: usize) -> Self {
        AdfConfig { det, k }
    }

    /// Number of regressors, the lagged level included.
    pub fn n_params(&self) -> usize {
        self.det.n_terms() + self.k + 1
    }

    /// Shortest window `e - s` that leaves at least one residual degree of freedom.
    pub fn min_window(&self) -> usize {
        self.n_params() + self.k + 2
    }
}

/// Result of a single window regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfFit {
    pub delta_hat: f64,
    pub rho_hat: f64,
    pub t_stat: f64,
    pub sigma2_hat: f64,
    /// Residuals in time order.
    pub residuals: Vec<f64>,
    pub nobs: usize,
    pub ssr: f64,
    /// `[mu?, gamma?, phi_1..phi_k]`; the trend is per unit of `t` (1-based).
    pub coeffs: Vec<f64>,
}

/// Design rows of the window regression ending at `end`.
#[derive(Clone, Copy)]
pub(crate) struct Rows<'a> {
    v: &'a [f64],
    det: DetSpec,
    k: usize,
    end: usize,
    y_ref: f64,
}

impl<'a> Rows<'a> {
    pub(crate) fn new(v: &'a [f64], cfg: AdfConfig, end: usize) -> Self {
        let y_ref = if cfg.det.has_constant() {
            v[end - 1]
        } else {
            0.0
        };
        Rows {
            v,
            det: cfg.det,
            k: cfg.k,
            end,
            y_ref,
        }
    }

    /// Fills the regressors of row `r` (0-based position of `y_t`) and
    /// returns the response `dy_t`.
    #[inline]
    pub(crate) fn fill(&self, r: usize, x: &mut [f64]) -> f64 {
        let v = self.v;
        let mut c = 0;
        if self.det.has_constant() {
            x[0] = 1.0;
            c = 1;
        }
        if self.det == DetSpec::Trend {
            x[1] = (r + 1) as f64 - self.end as f64;
            c = 2;
        }
        for j in 1..=self.k {
            x[c + j - 1] = v[r - j] - v[r - j - 1];
        }
        x[c + self.k] = v[r - 1] - self.y_ref;
        v[r] - v[r - 1]
    }
}

pub(crate) enum QrIssue {
    Degenerate(&'static str),
    IllConditioned,
}

#[derive(Debug, Clone, Copy)]
enum Rot {
    Skip,
    Take,
    Rotate { c: f64, s: f64, h: f64 },
}

/// Rotations applied to the deterministic columns by the `n`-th row of a
/// backward accumulation. They depend on `n` only, so a scan can replay
/// them instead of recomputing square roots; the replay is bitwise
/// identical to the generic update.
pub(crate) struct DetPlan {
    nd: usize,
    steps: Vec<[Rot; 2]>,
}

impl DetPlan {
    pub(crate) fn new(det: DetSpec, nmax: usize) -> Self {
        let nd = det.n_terms();
        let mut steps = Vec::with_capacity(nmax);
        if nd > 0 {
            let mut qr = WindowQr::new(nd);
            let mut x = [0.0; 2];
            for n in 1..=nmax {
                x[0] = 1.0;
                if nd == 2 {
                    x[1] = 1.0 - n as f64;
                }
                let mut rec = [Rot::Skip; 2];
                qr.add_row_rec(&mut x[..nd], 0.0, Some(&mut rec));
                steps.push(rec);
            }
        }
        DetPlan { nd, steps }
    }
}

/// Givens row-updating QR factor `R` of the design with `Q'y` and the
/// running residual sum of squares.
#[derive(Clone)]
pub(crate) struct WindowQr {
    p: usize,
    r: Vec<f64>,
    z: Vec<f64>,
    ssr: f64,
    nobs: usize,
    colsq: Vec<f64>,
    row: Vec<f64>,
}

impl WindowQr {
    pub(crate) fn new(p: usize) -> Self {
        WindowQr {
            p,
            r: vec![0.0; p * p],
            z: vec![0.0; p],
            ssr: 0.0,
            nobs: 0,
            colsq: vec![0.0; p],
            row: vec![0.0; p],
        }
    }

    pub(crate) fn reset(&mut self) {
        self.r.iter_mut().for_each(|x| *x = 0.0);
        self.z.iter_mut().for_each(|x| *x = 0.0);
        self.colsq.iter_mut().for_each(|x| *x = 0.0);
        self.ssr = 0.0;
        self.nobs = 0;
    }

    pub(crate) fn ssr(&self) -> f64 {
        self.ssr
    }

    /// Adds design row `r` of `rows`.
    #[inline]
    pub(crate) fn add(&mut self, rows: &Rows<'_>, r: usize) {
        let mut row = std::mem::take(&mut self.row);
        let y = rows.fill(r, &mut row);
        self.add_row(&mut row, y);
        self.row = row;
    }

    /// As [`WindowQr::add`], replaying the deterministic rotations from `plan`.
    #[inline]
    pub(crate) fn add_planned(&mut self, rows: &Rows<'_>, r: usize, plan: &DetPlan) {
        let mut row = std::mem::take(&mut self.row);
        let mut y = rows.fill(r, &mut row);
        let x = &mut row[..];
        let p = self.p;
        self.nobs += 1;
        for (cs, xi) in self.colsq.iter_mut().zip(x.iter()) {
            *cs += xi * xi;
        }
        let step = plan.steps.get(self.nobs - 1).map_or(&[][..], |s| &s[..plan.nd]);
        for (i, rot) in step.iter().enumerate() {
            let base = i * p;
            match *rot {
                Rot::Skip => {}
                Rot::Take => {
                    self.r[base + i..base + p].copy_from_slice(&x[i..p]);
                    self.z[i] = y;
                    self.row = row;
                    return;
                }
                Rot::Rotate { c, s, h } => {
                    self.r[base + i] = h;
                    for j in i + 1..p {
                        let a = self.r[base + j];
                        let b = x[j];
                        self.r[base + j] = c * a + s * b;
                        x[j] = c * b - s * a;
                    }
                    let a = self.z[i];
                    self.z[i] = c * a + s * y;
                    y = c * y - s * a;
                }
            }
        }
        self.rotate_from(x, y, plan.nd, None);
        self.row = row;
    }

    #[inline]
    pub(crate) fn add_row(&mut self, x: &mut [f64], y: f64) {
        self.add_row_rec(x, y, None);
    }

    fn add_row_rec(&mut self, x: &mut [f64], y: f64, rec: Option<&mut [Rot; 2]>) {
        self.nobs += 1;
        for (cs, xi) in self.colsq.iter_mut().zip(x.iter()) {
            *cs += xi * xi;
        }
        self.rotate_from(x, y, 0, rec);
    }

    #[inline]
    fn rotate_from(&mut self, x: &mut [f64], mut y: f64, from: usize, mut rec: Option<&mut [Rot; 2]>) {
        let p = self.p;
        for i in from..p {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let base = i * p;
            let rii = self.r[base + i];
            if rii == 0.0 {
                self.r[base + i..base + p].copy_from_slice(&x[i..p]);
                self.z[i] = y;
                if let Some(rec) = rec.as_deref_mut() {
                    rec[i] = Rot::Take;
                }
                return;
            }
            let h = (rii * rii + xi * xi).sqrt();
            let inv = 1.0 / h;
            let c = rii * inv;
            let s = xi * inv;
            if let Some(rec) = rec.as_deref_mut() {
                rec[i] = Rot::Rotate { c, s, h };
            }
            self.r[base + i] = h;
            for j in i + 1..p {
                let a = self.r[base + j];
                let b = x[j];
                self.r[base + j] = c * a + s * b;
                x[j] = c * b - s * a;
            }
            let a = self.z[i];
            self.z[i] = c * a + s * y;
            y = c * y - s * a;
        }
        self.ssr += y * y;
    }

    fn check(&self) -> std::result::Result<(), QrIssue> {
        let p = self.p;
        if self.nobs <= p {
            return Err(QrIssue::Degenerate("no residual degrees of freedom"));
        }
        for i in 0..p {
            let cs = self.colsq[i];
            if cs == 0.0 {
                return Err(QrIssue::Degenerate("regressor identically zero"));
            }
            let rii = self.r[i * p + i];
            if rii * rii * COND_LIMIT < cs {
                return Err(QrIssue::IllConditioned);
            }
        }
        if !(self.ssr > 0.0) {
            return Err(QrIssue::Degenerate("perfect fit"));
        }
        Ok(())
    }

    /// t-ratio of the last regressor.
    #[inline]
    pub(crate) fn t_last(&self) -> std::result::Result<f64, QrIssue> {
        self.check()?;
        let df = (self.nobs - self.p) as f64;
        Ok(self.z[self.p - 1] / (self.ssr / df).sqrt())
    }

    /// Coefficients when the factor is full rank and well conditioned.
    pub(crate) fn solve(&self) -> Option<Vec<f64>> {
        let p = self.p;
        if self.nobs < p {
            return None;
        }
        for i in 0..p {
            let cs = self.colsq[i];
            let rii = self.r[i * p + i];
            if cs == 0.0 || rii * rii * COND_LIMIT < cs {
                return None;
            }
        }
        Some(self.coefficients())
    }

    /// Back-substituted coefficients.
    fn coefficients(&self) -> Vec<f64> {
        let p = self.p;
        let mut b = vec![0.0; p];
        for i in (0..p).rev() {
            let mut acc = self.z[i];
            for j in i + 1..p {
                acc -= self.r[i * p + j] * b[j];
            }
            b[i] = acc / self.r[i * p + i];
        }
        b
    }
}

fn check_window(n: usize, start: usize, end: usize, cfg: AdfConfig) -> Result<()> {
    if end > n || start >= end {
        return Err(Error::invalid(format!(
            "window ({start}, {end}] outside 1..={n}"
        )));
    }
    if end - start < cfg.min_window() {
        return Err(Error::WindowTooShort(format!(
            "window of {} observations, need {} for {} lag(s) and {} deterministic term(s)",
            end - start,
            cfg.min_window(),
            cfg.k,
            cfg.det.n_terms()
        )));
    }
    Ok(())
}

/// Exact least-squares fit of the window regression on `(start, end]`.
pub fn fit_adf_window(series: &Series, start: usize, end: usize, cfg: AdfConfig) -> Result<AdfFit> {
    fit_values(series.values(), start, end, cfg)
}

pub(crate) fn fit_values(v: &[f64], start: usize, end: usize, cfg: AdfConfig) -> Result<AdfFit> {
    check_window(v.len(), start, end, cfg)?;
    let rows = Rows::new(v, cfg, end);
    let p = cfg.n_params();
    let mut qr = WindowQr::new(p);
    let first = start + cfg.k + 1;
    for r in (first..end).rev() {
        qr.add(&rows, r);
    }
    let (beta, t_stat, ssr) = match qr.t_last() {
        Ok(t) => (qr.coefficients(), t, qr.ssr()),
        Err(QrIssue::Degenerate(m)) => return Err(Error::degenerate(m)),
        Err(QrIssue::IllConditioned) => {
            let d = dense_window(&rows, first, end, cfg)?;
            (d.beta, d.t_last, d.ssr)
        }
    };

    let mut x = vec![0.0; p];
    let mut residuals = Vec::with_capacity(end - first);
    for r in first..end {
        let y = rows.fill(r, &mut x);
        let fitted: f64 = x.iter().zip(&beta).map(|(a, b)| a * b).sum();
        residuals.push(y - fitted);
    }
    let nobs = end - first;
    let delta_hat = beta[p - 1];
    let nd = cfg.det.n_terms();
    let mut coeffs = beta[..p - 1].to_vec();
    if cfg.det.has_constant() {
        coeffs[0] -= delta_hat * rows.y_ref;
    }
    if cfg.det == DetSpec::Trend {
        coeffs[0] -= beta[1] * end as f64;
    }
    debug_assert_eq!(coeffs.len(), nd + cfg.k);
    Ok(AdfFit {
        delta_hat,
        rho_hat: 1.0 + delta_hat,
        t_stat,
        sigma2_hat: ssr / (nobs - p) as f64,
        residuals,
        nobs,
        ssr,
        coeffs,
    })
}

/// ADF t-ratio on `(start, end]`.
pub fn adf_stat(series: &Series, start: usize, end: usize, cfg: AdfConfig) -> Result<f64> {
    fit_adf_window(series, start, end, cfg).map(|f| f.t_stat)
}

/// Evaluates the factor, falling back to a dense fit when it is ill-conditioned.
#[inline]
pub(crate) fn window_t(
    qr: &WindowQr,
    rows: &Rows<'_>,
    first: usize,
    end: usize,
    cfg: AdfConfig,
) -> Option<f64> {
    match qr.t_last() {
        Ok(t) => Some(t),
        Err(QrIssue::Degenerate(_)) => None,
        Err(QrIssue::IllConditioned) => dense_window(rows, first, end, cfg).ok().map(|d| d.t_last),
    }
}

struct DenseWindow {
    beta: Vec<f64>,
    t_last: f64,
    ssr: f64,
}

fn dense_window(rows: &Rows<'_>, first: usize, end: usize, cfg: AdfConfig) -> Result<DenseWindow> {
    let p = cfg.n_params();
    let n = end - first;
    let has_c = cfg.det.has_constant();
    let off = usize::from(has_c);
    let mut cols = vec![Vec::with_capacity(n); p - off];
    let mut y = Vec::with_capacity(n);
    let mut x = vec![0.0; p];
    for r in first..end {
        y.push(rows.fill(r, &mut x));
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(x[c + off]);
        }
    }
    let fit = least_squares(&cols, &y, has_c)?;
    let mut beta = Vec::with_capacity(p);
    if has_c {
        beta.push(fit.intercept);
    }
    beta.extend_from_slice(&fit.beta);
    let last = fit.beta.len() - 1;
    Ok(DenseWindow {
        beta,
        t_last: fit.t(last),
        ssr: fit.ssr,
    })
}

/// Dense least-squares fit.
#[derive(Debug, Clone)]
pub struct LsFit {
    pub intercept: f64,
    pub beta: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    pub nobs: usize,
    pub has_intercept: bool,
    /// Diagonal of `(X'X)^{-1}` for the slope columns (intercept partialled out).
    pub xtx_inv_diag: Vec<f64>,
}

impl LsFit {
    pub fn df(&self) -> usize {
        self.nobs - self.beta.len() - usize::from(self.has_intercept)
    }

    pub fn sigma2(&self) -> f64 {
        self.ssr / self.df() as f64
    }

    pub fn se(&self, j: usize) -> f64 {
        (self.sigma2() * self.xtx_inv_diag[j]).sqrt()
    }

    pub fn t(&self, j: usize) -> f64 {
        self.beta[j] / self.se(j)
    }
}

/// Householder least squares of `y` on the columns `cols` (plus an implicit
/// intercept when `intercept` is set, handled by centering).
pub fn least_squares(cols: &[Vec<f64>], y: &[f64], intercept: bool) -> Result<LsFit> {
    let n = y.len();
    let p = cols.len();
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::invalid("regressor length mismatch"));
    }
    if n <= p + usize::from(intercept) {
        return Err(Error::degenerate("no residual degrees of freedom"));
    }
    let mean = |v: &[f64]| -> f64 {
        if intercept {
            v.iter().sum::<f64>() / n as f64
        } else {
            0.0
        }
    };
    let ym = mean(y);
    let xm: Vec<f64> = cols.iter().map(|c| mean(c)).collect();
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - ym));
    let mut beta = Vec::new();
    let mut diag = Vec::new();
    if p > 0 {
        let x = DMatrix::from_fn(n, p, |i, j| cols[j][i] - xm[j]);
        let norms: Vec<f64> = (0..p).map(|j| x.column(j).norm()).collect();
        let qr = x.qr();
        let r = qr.r();
        for j in 0..p {
            if norms[j] == 0.0 || r[(j, j)].abs() <= DENSE_RANK_TOL * norms[j] {
                return Err(Error::degenerate("singular design"));
            }
        }
        let mut qty = yc.clone();
        qr.q_tr_mul(&mut qty);
        let mut b = vec![0.0; p];
        for i in (0..p).rev() {
            let mut acc = qty[i];
            for j in i + 1..p {
                acc -= r[(i, j)] * b[j];
            }
            b[i] = acc / r[(i, i)];
        }
        let rinv = r
            .try_inverse()
            .ok_or_else(|| Error::degenerate("singular design"))?;
        diag = (0..p).map(|i| rinv.row(i).norm_squared()).collect();
        beta = b;
    }
    let intercept_value = if intercept {
        ym - xm.iter().zip(&beta).map(|(m, b)| m * b).sum::<f64>()
    } else {
        0.0
    };
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = cols.iter().zip(&beta).map(|(c, b)| c[i] * b).sum();
            y[i] - intercept_value - fitted
        })
        .collect();
    let ssr = residuals.iter().map(|e| e * e).sum();
    Ok(LsFit {
        intercept: intercept_value,
        beta,
        residuals,
        ssr,
        nobs: n,
        xtx_inv_diag: diag,
        has_intercept: intercept,
    })
}

/// Lag-order strategy for the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LagSelection {
    Fixed { k: usize },
    Bic { max: usize },
}

impl Default for LagSelection {
    fn default() -> Self {
        LagSelection::Fixed { k: 0 }
    }
}

/// Picks `k <= kmax` minimising BIC on the window, all orders fitted on the
/// common sample implied by `kmax`.
pub fn select_lag_bic(series: &Series, start: usize, end: usize, det: DetSpec, kmax: usize) -> Result<usize> {
    let v = series.values();
    check_window(v.len(), start, end, AdfConfig::new(det, kmax))?;
    let first = start + kmax + 1;
    let n = (end - first) as f64;
    let mut best = (f64::INFINITY, 0);
    for k in 0..=kmax {
        let cfg = AdfConfig::new(det, k);
        let rows = Rows::new(v, cfg, end);
        let mut qr = WindowQr::new(cfg.n_params());
        for r in (first..end).rev() {
            qr.add(&rows, r);
        }
        if qr.t_last().is_err() {
            continue;
        }
        let bic = n * (qr.ssr() / n).ln() + cfg.n_params() as f64 * n.ln();
        if bic < best.0 {
            best = (bic, k);
        }
    }
    if best.0.is_infinite() {
        return Err(Error::degenerate("no lag order gives a valid fit"));
    }
    Ok(best.1)
}

/// Default localizing constant for GLS adjustment.
pub fn default_c_bar(det: DetSpec) -> Result<f64> {
    match det {
        DetSpec::Constant => Ok(GLS_C_BAR_CONSTANT),
        DetSpec::Trend => Ok(GLS_C_BAR_TREND),
        DetSpec::None => Err(Error::invalid("GLS adjustment needs a constant or a trend")),
    }
}

pub const GLS_C_BAR_CONSTANT: f64 = 1.6;
pub const GLS_C_BAR_TREND: f64 = 2.4;

/// Quasi-differenced GLS demeaning/detrending with `rho_bar = 1 + c_bar / T`.
pub fn gls_adjust(series: &Series, det: DetSpec, c_bar: f64) -> Result<Series> {
    let u = gls_adjust_values(series.values(), det, c_bar)?;
    let mut out = Series::new(u)?;
    if let Some(l) = series.labels() {
        out = Series::with_labels(out.values().to_vec(), l.to_vec())?;
    }
    Ok(out.named(series.name()))
}

pub(crate) fn gls_adjust_values(y: &[f64], det: DetSpec, c_bar: f64) -> Result<Vec<f64>> {
    let n = y.len();
    if n < 3 {
        return Err(Error::invalid("GLS adjustment needs T >= 3"));
    }
    if !c_bar.is_finite() {
        return Err(Error::invalid("c_bar must be finite"));
    }
    if det == DetSpec::None {
        return Err(Error::invalid("GLS adjustment needs a constant or a trend"));
    }
    let rho = 1.0 + c_bar / n as f64;
    let qd = |f: &dyn Fn(usize) -> f64| -> Vec<f64> {
        (0..n)
            .map(|i| if i == 0 { f(0) } else { f(i) - rho * f(i - 1) })
            .collect()
    };
    let yc = qd(&|i| y[i]);
    let mut cols = vec![qd(&|_| 1.0)];
    if det == DetSpec::Trend {
        cols.push(qd(&|i| (i + 1) as f64));
    }
    let fit = least_squares(&cols, &yc, false)?;
    Ok((0..n)
        .map(|i| {
            let mut z = fit.beta[0];
            if det == DetSpec::Trend {
                z += fit.beta[1] * (i + 1) as f64;
            }
            y[i] - z
        })
        .collect())
}
