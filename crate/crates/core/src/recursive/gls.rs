use super::sequence::{Best, StatSequence, SupResult};
use super::sup::check_min_window;
use crate::error::{Error, Result};
use crate::ols::{default_c_bar, fit_values, gls_adjust_values, AdfConfig};
use crate::series::{DetSpec, Series};
use crate::statistic::StatKind;

/// Sup of the GLS-ADF t-ratio over expanding windows; each prefix is
/// GLS-adjusted on its own with `rho_bar = 1 + c_bar / n`.
pub fn sadf_gls(series: &Series, tau0: f64, det: DetSpec, c_bar: Option<f64>) -> Result<SupResult> {
    sadf_gls_with(series, tau0, det, c_bar, 0)
}

/// As [`sadf_gls`] with `k` lagged differences in the GLS-ADF regression.
pub fn sadf_gls_with(
    series: &Series,
    tau0: f64,
    det: DetSpec,
    c_bar: Option<f64>,
    k: usize,
) -> Result<SupResult> {
    let c_bar = match c_bar {
        Some(c) => c,
        None => default_c_bar(det)?,
    };
    let v = series.values();
    let n = v.len();
    let cfg = AdfConfig::new(DetSpec::None, k);
    let w0 = check_min_window(n, tau0, cfg.min_window().max(3))?;
    let mut seq = StatSequence::new(StatKind::SadfGls, tau0, n);
    let mut best = Best::default();
    let mut skipped = 0;
    for e in w0..=n {
        let t = gls_adjust_values(&v[..e], det, c_bar)
            .and_then(|u| fit_values(&u, 0, e, cfg))
            .map(|f| f.t_stat);
        match t {
            Ok(t) => {
                seq.push(e, Some(t));
                best.offer(t, 0, e);
            }
            Err(Error::Degenerate(_)) => {
                seq.push(e, None);
                skipped += 1;
            }
            Err(e) => return Err(e),
        }
    }
    SupResult::new(best, n, Some(seq), skipped)
}
