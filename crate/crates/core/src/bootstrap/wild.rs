use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bootstrap_pvalue, check_level, collect_replicates, upper_critical_value, MultiplierKind};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::series::Series;
use crate::statistic::{compute_value, StatConfig, StatKind};

/// Smallest replication count accepted.
pub const MIN_REPLICATES: usize = 99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub kind: StatKind,
    pub observed: f64,
    /// Non-degenerate replicate statistics in replicate order.
    pub replicates: Vec<f64>,
    pub p_value: f64,
    #[serde(rename = "B")]
    pub b: usize,
    pub seed: u64,
    pub multiplier: MultiplierKind,
    /// Degenerate replicates dropped before computing the p-value.
    pub failed: usize,
}

impl BootstrapReport {
    pub fn critical_value(&self, xi: f64) -> f64 {
        upper_critical_value(&self.replicates, xi)
    }

    /// `observed > cv(xi)`, equivalently `p <= xi`.
    pub fn reject(&self, xi: f64) -> bool {
        self.observed > self.critical_value(xi)
    }
}

/// `y*_1 = 0`, `y*_t = y*_{t-1} + w_t dy_t`.
pub fn wild_sample<R: Rng + ?Sized>(series: &Series, multiplier: MultiplierKind, rng: &mut R) -> Series {
    let v = series.values();
    let mut out = Vec::with_capacity(v.len());
    out.push(0.0);
    let mut acc = 0.0;
    for w in v.windows(2) {
        acc += multiplier.draw(rng) * (w[1] - w[0]);
        out.push(acc);
    }
    Series::new(out).expect("same length as the input")
}

/// Wild-bootstrap p-value of `kind`. Replicates use lag order 0; replicate
/// `r` draws from stream `r` of `seed`.
pub fn wild_bootstrap_pvalue(
    series: &Series,
    kind: StatKind,
    cfg: &StatConfig,
    b: usize,
    multiplier: MultiplierKind,
    seed: u64,
) -> Result<BootstrapReport> {
    if b < MIN_REPLICATES {
        return Err(Error::invalid(format!("B = {b}; at least {MIN_REPLICATES} replicates are required")));
    }
    cfg.validate(kind)?;
    let observed = compute_value(kind, series, cfg)?;
    let rep_cfg = cfg.with_k(0);
    let outcomes: Vec<Option<f64>> = (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, r as u64);
            let ys = wild_sample(series, multiplier, &mut rng);
            compute_value(kind, &ys, &rep_cfg).ok()
        })
        .collect();
    let (replicates, failed) = collect_replicates(outcomes)?;
    Ok(BootstrapReport {
        kind,
        observed,
        p_value: bootstrap_pvalue(observed, &replicates),
        replicates,
        b,
        seed,
        multiplier,
        failed,
    })
}

/// Checks shared by the bootstrap entry points.
pub(crate) fn check_bootstrap_args(b: usize, xi: f64) -> Result<()> {
    if b < MIN_REPLICATES {
        return Err(Error::invalid(format!("B = {b}; at least {MIN_REPLICATES} replicates are required")));
    }
    check_level(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistic::Tau0;

    fn walk(n: usize) -> Series {
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * 0.9).sin() * 2.0 + (i as f64 * 0.13).cos() * i as f64 * 0.1).collect();
        Series::new(v).unwrap()
    }

    #[test]
    fn reproducible() {
        let y = walk(60);
        let cfg = StatConfig {
            tau0: Tau0::Value(0.3),
            ..StatConfig::default()
        };
        let a = wild_bootstrap_pvalue(&y, StatKind::Sadf, &cfg, 99, MultiplierKind::Gaussian, 9).unwrap();
        let b = wild_bootstrap_pvalue(&y, StatKind::Sadf, &cfg, 99, MultiplierKind::Gaussian, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.replicates.len(), 99);
        assert!(a.p_value >= 0.01 && a.p_value <= 1.0);
        assert_eq!(a.reject(0.05), a.p_value <= 0.05);
        assert!(wild_bootstrap_pvalue(&y, StatKind::Sadf, &cfg, 50, MultiplierKind::Gaussian, 9).is_err());
    }

    #[test]
    fn sample_starts_at_zero() {
        let y = walk(10);
        let mut rng = stream(1, 0);
        let ys = wild_sample(&y, MultiplierKind::Rademacher, &mut rng);
        assert_eq!(ys.values()[0], 0.0);
        for (a, b) in ys.diff().iter().zip(y.diff()) {
            assert_eq!(a.abs(), b.abs());
        }
    }

    #[test]
    fn rademacher_sign_flip_invariance() {
        // Flipping dy only flips the multipliers, whose law is symmetric;
        // with identical draws the replicate of -y equals minus the replicate of y.
        let y = walk(30);
        let neg = y.map(|v| -v).unwrap();
        let a = wild_sample(&y, MultiplierKind::Rademacher, &mut stream(3, 1));
        let b = wild_sample(&neg, MultiplierKind::Rademacher, &mut stream(3, 1));
        for (x, z) in a.values().iter().zip(b.values()) {
            assert_eq!(*x, -z);
        }
    }
}
