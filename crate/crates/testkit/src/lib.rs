//! Slow, direct reference implementations for cross-checking the library.
//!
//! Everything here is written from the textbook definitions with dense
//! normal equations and exhaustive loops; nothing is shared with the
//! library code.

/// Dense least-squares solution.
#[derive(Debug, Clone)]
pub struct Ols {
    pub beta: Vec<f64>,
    pub ssr: f64,
    /// `sqrt(s^2 [(X'X)^{-1}]_jj)` with `s^2 = SSR / (n - p)`.
    pub se: Vec<f64>,
    pub n: usize,
}

impl Ols {
    pub fn t(&self, j: usize) -> f64 {
        self.beta[j] / self.se[j]
    }
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let p = a.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..p).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..p {
        let piv = (c..p).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[piv][c].abs() <= 1e-13 * scale {
            return None;
        }
        m.swap(c, piv);
        let d = m[c][c];
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..p {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for j in 0..2 * p {
                        m[r][j] -= f * m[c][j];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[p..].to_vec()).collect())
}

/// OLS of `y` on the rows `x` (no implicit intercept) via `(X'X)^{-1} X'y`.
pub fn ols(x: &[Vec<f64>], y: &[f64]) -> Option<Ols> {
    let n = y.len();
    let p = x.first()?.len();
    if n <= p {
        return None;
    }
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, yi) in x.iter().zip(y) {
        for i in 0..p {
            xty[i] += row[i] * yi;
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let inv = invert(&xtx)?;
    let beta: Vec<f64> = (0..p).map(|i| (0..p).map(|j| inv[i][j] * xty[j]).sum()).collect();
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let f: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            (yi - f).powi(2)
        })
        .sum();
    let s2 = ssr / (n - p) as f64;
    let se = (0..p).map(|j| (s2 * inv[j][j]).sqrt()).collect();
    Some(Ols { beta, ssr, se, n })
}

/// `floor(tau T)` with the same rounding slack as the library.
pub fn floor_frac(tau: f64, t: usize) -> usize {
    (tau * t as f64 + 1e-9).floor() as usize
}

/// Running maximum with ties to the smallest `(s, e)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArgMax(pub Option<(f64, usize, usize)>);

impl ArgMax {
    pub fn offer(&mut self, v: f64, s: usize, e: usize) {
        let better = match self.0 {
            None => true,
            Some((bv, bs, be)) => v > bv || (v == bv && (s, e) < (bs, be)),
        };
        if better {
            self.0 = Some((v, s, e));
        }
    }
}

/// ADF t-ratio on window `(s, e]` of `y` (1-based observations at `y[t-1]`):
/// `dy_t` on `[1] [t] y_{t-1} dy_{t-1}..dy_{t-k}`, `t = s+k+2..=e`.
/// `det`: 0 none, 1 constant, 2 constant and trend.
pub fn adf_t(y: &[f64], s: usize, e: usize, det: usize, k: usize) -> Option<f64> {
    let mut x = Vec::new();
    let mut d = Vec::new();
    for t in s + k + 2..=e {
        let mut row = Vec::new();
        if det >= 1 {
            row.push(1.0);
        }
        if det == 2 {
            row.push(t as f64);
        }
        row.push(y[t - 2]);
        for j in 1..=k {
            row.push(y[t - 1 - j] - y[t - 2 - j]);
        }
        x.push(row);
        d.push(y[t - 1] - y[t - 2]);
    }
    let f = ols(&x, &d)?;
    if !(f.ssr > 0.0) {
        return None;
    }
    Some(f.t(det.min(2)))
}

/// `(SADF, argmax end)` over `(0, e]`, `e >= floor(tau0 T)`.
pub fn sadf(y: &[f64], tau0: f64, det: usize, k: usize) -> Option<(f64, usize)> {
    let n = y.len();
    let w0 = floor_frac(tau0, n);
    let mut best = ArgMax::default();
    for e in w0..=n {
        if let Some(t) = adf_t(y, 0, e, det, k) {
            best.offer(t, 0, e);
        }
    }
    best.0.map(|b| (b.0, b.2))
}

/// `(GSADF, s, e)` over all windows `(s, e]` with `e - s >= floor(tau0 T)`,
/// and the BSADF value for every end.
pub fn gsadf(y: &[f64], tau0: f64, det: usize, k: usize) -> Option<((f64, usize, usize), Vec<Option<f64>>)> {
    let n = y.len();
    let w0 = floor_frac(tau0, n);
    let mut best = ArgMax::default();
    let mut bsadf = Vec::new();
    for e in w0..=n {
        let mut end = ArgMax::default();
        for s in 0..=e - w0 {
            if let Some(t) = adf_t(y, s, e, det, k) {
                best.offer(t, s, e);
                end.offer(t, s, e);
            }
        }
        bsadf.push(end.0.map(|b| b.0));
    }
    best.0.map(|b| (b, bsadf))
}

/// Sup-Chow: for each break `b <= floor((1 - tau0) T)`, the t-ratio of
/// `phi` in `dz_t = phi 1(t > b) z_{t-1} + sum_j phi_j dz_{t-j} + e_t`,
/// `z = y - mean(y)`, `t = k+2..=T`. Returns `(value, b)`.
pub fn hb(y: &[f64], tau0: f64, k: usize) -> Option<(f64, usize)> {
    let n = y.len();
    let m = y.iter().sum::<f64>() / n as f64;
    let z: Vec<f64> = y.iter().map(|v| v - m).collect();
    let bmax = floor_frac(1.0 - tau0, n);
    let mut best = ArgMax::default();
    for b in 0..=bmax {
        let mut x = Vec::new();
        let mut d = Vec::new();
        for t in k + 2..=n {
            let mut row = vec![if t > b { z[t - 2] } else { 0.0 }];
            for j in 1..=k {
                row.push(z[t - 1 - j] - z[t - 2 - j]);
            }
            x.push(row);
            d.push(z[t - 1] - z[t - 2]);
        }
        if let Some(f) = ols(&x, &d) {
            if f.ssr > 0.0 && f.se[0] > 0.0 {
                best.offer(f.t(0), b, 0);
            }
        }
    }
    best.0.map(|b| (b.0, b.1))
}

/// Quasi-difference GLS detrending with `rho = 1 + c / T`; `det` 1 or 2.
pub fn gls_detrend(y: &[f64], det: usize, c: f64) -> Option<Vec<f64>> {
    let n = y.len();
    let rho = 1.0 + c / n as f64;
    let z = |t: usize| -> Vec<f64> {
        if det == 2 {
            vec![1.0, t as f64]
        } else {
            vec![1.0]
        }
    };
    let mut x = Vec::new();
    let mut q = Vec::new();
    for t in 1..=n {
        if t == 1 {
            x.push(z(1));
            q.push(y[0]);
        } else {
            x.push(z(t).iter().zip(z(t - 1)).map(|(a, b)| a - rho * b).collect());
            q.push(y[t - 1] - rho * y[t - 2]);
        }
    }
    // exact fit possible on tiny samples; ols() needs n > p
    let f = ols(&x, &q)?;
    Some(
        (1..=n)
            .map(|t| y[t - 1] - z(t).iter().zip(&f.beta).map(|(a, b)| a * b).sum::<f64>())
            .collect(),
    )
}

/// SADF-GLS: each prefix `(0, e]` detrended on its own, then the
/// no-deterministics ADF t-ratio. Returns `(value, e)`.
pub fn sadf_gls(y: &[f64], tau0: f64, det: usize, c: f64, k: usize) -> Option<(f64, usize)> {
    let n = y.len();
    let w0 = floor_frac(tau0, n);
    let mut best = ArgMax::default();
    for e in w0..=n {
        let u = gls_detrend(&y[..e], det, c)?;
        if let Some(t) = adf_t(&u, 0, e, 0, k) {
            best.offer(t, 0, e);
        }
    }
    best.0.map(|b| (b.0, b.2))
}

fn gauss(u: f64) -> f64 {
    (-0.5 * u * u).exp()
}

/// Gaussian-kernel local mean of `x` on its own grid, argument `(i - t) / scale`.
pub fn kernel_mean(x: &[f64], scale: f64) -> Vec<f64> {
    (0..x.len())
        .map(|t| {
            let (mut a, mut b) = (0.0, 0.0);
            for (i, xi) in x.iter().enumerate() {
                let w = gauss((i as f64 - t as f64) / scale);
                a += w * xi;
                b += w;
            }
            a / b
        })
        .collect()
}

/// SBZ with kernel variances of `dy^2` at bandwidth `T^{-1/5}` (scale `T h`).
/// Returns `(value, e)`.
pub fn sbz(y: &[f64], tau0: f64) -> Option<(f64, usize)> {
    let n = y.len();
    let h = (n as f64).powf(-0.2);
    let dy: Vec<f64> = (1..n).map(|i| y[i] - y[i - 1]).collect();
    let sq: Vec<f64> = dy.iter().map(|d| d * d).collect();
    let s2 = kernel_mean(&sq, n as f64 * h);
    let w0 = floor_frac(tau0, n);
    let mut best = ArgMax::default();
    for e in w0.max(2)..=n {
        let (mut num, mut den) = (0.0, 0.0);
        for t in 2..=e {
            let l = y[t - 2] - y[0];
            num += dy[t - 2] * l / s2[t - 2];
            den += l * l / s2[t - 2];
        }
        if den > 0.0 {
            best.offer(num / den.sqrt(), 0, e);
        }
    }
    best.0.map(|b| (b.0, b.2))
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

/// `dC_t`, `t = 1..=T` (`dC_1 = 0`), optionally with recursive demeaning.
/// With `k > 0` the sign of `dy_t` net of the fitted lag terms from the
/// regression of `dy_i` on `1, y_{i-1}, dy_{i-1..i-k}` over `i = k+5..=t`.
pub fn sign_increments(y: &[f64], demean: bool, k: usize) -> Vec<f64> {
    let n = y.len();
    let dy = |t: usize| y[t - 1] - y[t - 2];
    let mut sg: Vec<f64> = (2..=n).map(|t| sgn(dy(t))).collect();
    if k > 0 {
        for t in k + 5..=n {
            let mut x = Vec::new();
            let mut d = Vec::new();
            for i in k + 5..=t {
                let mut row = vec![1.0, y[i - 2]];
                for j in 1..=k {
                    row.push(dy(i - j));
                }
                x.push(row);
                d.push(dy(i));
            }
            if let Some(f) = ols_exact(&x, &d) {
                let fitted: f64 = (1..=k).map(|j| f[1 + j] * dy(t - j)).sum();
                sg[t - 2] = sgn(dy(t) - fitted);
            }
        }
    }
    let mut out = vec![0.0];
    let mut acc = 0.0;
    for (i, s) in sg.iter().enumerate() {
        acc += s;
        out.push(if demean { s - acc / (i + 1) as f64 } else { *s });
    }
    out
}

/// Coefficients when `X'X` is invertible, including exactly identified fits.
fn ols_exact(x: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let p = x.first()?.len();
    if x.len() < p {
        return None;
    }
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, yi) in x.iter().zip(y) {
        for i in 0..p {
            xty[i] += row[i] * yi;
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let inv = invert(&xtx)?;
    Some((0..p).map(|i| (0..p).map(|j| inv[i][j] * xty[j]).sum()).collect())
}

/// `(delta, SSR, sum C^2)` of `dC_t = delta C_{t-1}` over `t = s+1..=e`.
pub fn sign_window(d: &[f64], s: usize, e: usize) -> Option<(f64, f64, f64)> {
    let c: Vec<f64> = std::iter::once(0.0)
        .chain(d.iter().scan(0.0, |a, x| {
            *a += x;
            Some(*a)
        }))
        .collect();
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for t in s + 1..=e {
        sxx += c[t - 1] * c[t - 1];
        sxy += c[t - 1] * d[t - 1];
    }
    if !(sxx > 0.0) {
        return None;
    }
    let delta = sxy / sxx;
    let ssr: f64 = (s + 1..=e).map(|t| (d[t - 1] - delta * c[t - 1]).powi(2)).sum();
    Some((delta, ssr, sxx))
}

/// `(sSADF, e)` and `(sGSADF, s, e)` on cumulated signs.
pub fn sign_sups(y: &[f64], tau0: f64, demean: bool, k: usize) -> (Option<(f64, usize)>, Option<(f64, usize, usize)>) {
    let d = sign_increments(y, demean, k);
    let n = y.len();
    let w0 = floor_frac(tau0, n);
    let mut sup = ArgMax::default();
    let mut gsup = ArgMax::default();
    for e in w0..=n {
        for s in 0..=e - w0 {
            if let Some((delta, ssr, sxx)) = sign_window(&d, s, e) {
                if ssr > 0.0 {
                    let v = delta / (ssr / (e - s - 1) as f64 / sxx).sqrt();
                    gsup.offer(v, s, e);
                    if s == 0 {
                        sup.offer(v, 0, e);
                    }
                }
            }
        }
    }
    (sup.0.map(|b| (b.0, b.2)), gsup.0)
}

/// Corrected sign dating: argmax of `delta sqrt(sum C^2) / (s~^2)^(eps/2)`.
pub fn sign_stamp(y: &[f64], tau0: f64, eps: f64) -> Option<(f64, usize, usize)> {
    let d = sign_increments(y, false, 0);
    let n = y.len();
    let w0 = floor_frac(tau0, n);
    // m s^2(0, m)
    let ms2 = |m: usize| -> f64 {
        if m < 2 {
            return 0.0;
        }
        let ssr = match sign_window(&d, 0, m) {
            Some((_, ssr, _)) => ssr,
            None => d[..m].iter().map(|x| x * x).sum(),
        };
        m as f64 * ssr / (m - 1) as f64
    };
    let mut best = ArgMax::default();
    for e in w0..=n {
        for s in 0..=e - w0 {
            let st = (ms2(e) - ms2(s)) / (e - s - 1) as f64;
            if let Some((delta, _, sxx)) = sign_window(&d, s, e) {
                if st > 0.0 {
                    best.offer(delta * sxx.sqrt() / st.powf(eps / 2.0), s, e);
                }
            }
        }
    }
    best.0
}

/// Time-transformed statistics. Returns `((STADF, e), (GSTADF, s, e))`.
pub fn tadf(y: &[f64], tau0: f64) -> (Option<(f64, usize)>, Option<(f64, usize, usize)>) {
    let dy: Vec<f64> = (1..y.len()).map(|i| y[i] - y[i - 1]).collect();
    let n = dy.len();
    let h = (n as f64).powf(-0.2);
    let mu = kernel_mean(&dy, n as f64 * h);
    let e2: Vec<f64> = dy.iter().zip(&mu).map(|(a, b)| (a - b).powi(2)).collect();
    let total: f64 = e2.iter().sum();
    let om2 = total / n as f64;
    let eta: Vec<f64> = (0..=n).map(|j| e2[..j].iter().sum::<f64>() / total).collect();
    // left-most preimage of j/n under the piecewise-linear profile
    let idx: Vec<usize> = (0..=n)
        .map(|j| {
            if j == 0 {
                return 0;
            }
            let r = j as f64 / n as f64;
            let i = (1..=n).find(|&i| eta[i] >= r || i == n).unwrap();
            let (lo, hi) = (eta[i - 1], eta[i]);
            let frac = if hi > lo { (r - lo) / (hi - lo) } else { 1.0 };
            if frac >= 1.0 {
                i
            } else {
                i - 1
            }
        })
        .collect();
    let z: Vec<f64> = idx.iter().map(|&i| y[i] - y[0]).collect();
    let w0 = floor_frac(tau0, n);
    let mut sup = ArgMax::default();
    let mut gsup = ArgMax::default();
    for e in w0..=n {
        for s in 0..=e - w0 {
            let den: f64 = (s..e).map(|j| z[j] * z[j]).sum();
            if den > 0.0 {
                let v = (z[e] * z[e] - z[s] * z[s] - om2 * (e - s) as f64) / (2.0 * om2.sqrt() * den.sqrt());
                gsup.offer(v, s, e);
                if s == 0 {
                    sup.offer(v, 0, e);
                }
            }
        }
    }
    (sup.0.map(|b| (b.0, b.2)), gsup.0)
}

/// SSR of the regime regression in differences with dummies
/// `D_t(a, b) = 1(a < t <= b)`: regressors `D(t1,t2)`, `D(t1,t2) y_{t-1}`
/// and, with a collapse, `D(t2,t3)`, `D(t2,t3) y_{t-1}`; `t = 2..=T`.
pub fn bubble_ssr(y: &[f64], t1: usize, t2: usize, t3: usize, collapse: bool) -> Option<f64> {
    let n = y.len();
    let mut x = Vec::new();
    let mut d = Vec::new();
    for t in 2..=n {
        let a = if t1 < t && t <= t2 { 1.0 } else { 0.0 };
        let mut row = vec![a, a * y[t - 2]];
        if collapse {
            let b = if t2 < t && t <= t3 { 1.0 } else { 0.0 };
            row.extend([b, b * y[t - 2]]);
        }
        x.push(row);
        d.push(y[t - 1] - y[t - 2]);
    }
    ols_exact(&x, &d).map(|beta| {
        x.iter()
            .zip(&d)
            .map(|(row, di)| (di - row.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>()).powi(2))
            .sum()
    })
}

/// Exhaustive search for model `m` (1 to 4). Returns `(ssr, t1, t2, t3)`
/// with ties broken by `(ssr, t1, t2, t3)`.
pub fn bubble_search(y: &[f64], m: u8, min_seg: usize) -> Option<(f64, usize, usize, usize)> {
    let n = y.len();
    let yy = |i: usize| y[i - 1];
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for t1 in 1..=n {
        for t2 in t1 + 1..=n {
            for t3 in t2..=n {
                let ok = match m {
                    1 => t2 == n && t3 == n,
                    2 => t3 == t2 && t2 < n,
                    3 => t3 == n && t2 < n,
                    _ => t2 < t3 && t3 < n,
                };
                if !ok {
                    continue;
                }
                let collapse = m >= 3;
                let mut segs = vec![t1 - 1, t2 - t1];
                if collapse {
                    segs.push(t3 - t2);
                }
                if t3 < n {
                    segs.push(n - t3);
                }
                if segs.iter().any(|&s| s < min_seg) {
                    continue;
                }
                if !(yy(t1) < yy(t2)) || (collapse && !(yy(t2) > yy(t3))) {
                    continue;
                }
                if let Some(ssr) = bubble_ssr(y, t1, t2, t3, collapse) {
                    let cand = (ssr, t1, t2, t3);
                    let better = match best {
                        None => true,
                        Some(b) => cand.0 < b.0 || (cand.0 == b.0 && (t1, t2, t3) < (b.1, b.2, b.3)),
                    };
                    if better {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_recovers_line() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, i as f64]).collect();
        let y: Vec<f64> = (0..6).map(|i| 2.0 + 3.0 * i as f64).collect();
        let f = ols(&x, &y).unwrap();
        assert!((f.beta[0] - 2.0).abs() < 1e-12 && (f.beta[1] - 3.0).abs() < 1e-12);
        assert!(f.ssr < 1e-20);
    }

    #[test]
    fn invert_singular() {
        assert!(invert(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_none());
    }
}
