//! Wild, composite and subsampling resampling schemes.

mod composite;
mod multiplier;
mod subsample;
mod union;
mod wild;

pub use composite::{composite_monitor_cv, CompositeReport, DEFAULT_TB};
pub use multiplier::MultiplierKind;
pub use subsample::{subsampling_cv, SubsampleCv, MIN_SUBSAMPLES};
pub use union::{bootstrap_union, BootstrapUnion};
pub use wild::{wild_bootstrap_pvalue, wild_sample, BootstrapReport, MIN_REPLICATES};

use crate::error::{Error, Result};

/// Largest share of degenerate replicates tolerated.
pub const MAX_DEGENERATE_SHARE: f64 = 0.10;

/// Right-tail critical value at level `xi`: the `floor(xi (B + 1))`-th
/// largest replicate, so that `observed > cv` iff `p <= xi`. Returns
/// `+inf` when `B` is too small for the level.
pub fn upper_critical_value(replicates: &[f64], xi: f64) -> f64 {
    let b = replicates.len();
    let j = ((xi * (b + 1) as f64) + 1e-9).floor() as usize;
    if j == 0 {
        return f64::INFINITY;
    }
    let mut v = replicates.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v[j.min(b) - 1]
}

/// `(1 + #{r >= observed}) / (B + 1)`.
pub fn bootstrap_pvalue(observed: f64, replicates: &[f64]) -> f64 {
    let count = replicates.iter().filter(|r| **r >= observed).count();
    (1 + count) as f64 / (replicates.len() + 1) as f64
}

/// Empirical `p`-quantile: the `ceil(p n)`-th smallest value (`p = 0` gives
/// the minimum).
pub fn empirical_quantile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("no values"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("quantile level {p} outside [0, 1]")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let r = ((p * n as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(v[r.min(n) - 1])
}

fn check_level(xi: f64) -> Result<()> {
    if xi > 0.0 && xi < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("significance level {xi} outside (0, 1)")))
    }
}

/// Splits replicate outcomes into values, failing when more than
/// [`MAX_DEGENERATE_SHARE`] are degenerate.
pub(crate) fn collect_replicates(outcomes: Vec<Option<f64>>) -> Result<(Vec<f64>, usize)> {
    let total = outcomes.len();
    let values: Vec<f64> = outcomes.into_iter().flatten().collect();
    let failed = total - values.len();
    if failed as f64 > MAX_DEGENERATE_SHARE * total as f64 {
        return Err(Error::BootstrapDegenerate { failed, total });
    }
    Ok((values, failed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_value_matches_pvalue_rule() {
        let reps: Vec<f64> = (0..399).map(|i| ((i * 37) % 399) as f64).collect();
        let cv = upper_critical_value(&reps, 0.05);
        assert_eq!(cv, 379.0);
        for obs in [378.5, 379.0, 379.5, 380.0] {
            assert_eq!(obs > cv, bootstrap_pvalue(obs, &reps) <= 0.05);
        }
        assert_eq!(upper_critical_value(&reps[..10], 0.05), f64::INFINITY);
    }

    #[test]
    fn quantile_rule() {
        let v = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(empirical_quantile(&v, 1.0).unwrap(), 4.0);
        assert_eq!(empirical_quantile(&v, 0.0).unwrap(), 1.0);
        assert_eq!(empirical_quantile(&v, 0.5).unwrap(), 2.0);
        assert_eq!(empirical_quantile(&v, 0.51).unwrap(), 3.0);
    }

    proptest::proptest! {
        #[test]
        fn pvalue_bounds_and_monotone(
            reps in proptest::collection::vec(-5.0f64..5.0, 1..60),
            a in -6.0f64..6.0, b in -6.0f64..6.0,
        ) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p_lo = bootstrap_pvalue(lo, &reps);
            let p_hi = bootstrap_pvalue(hi, &reps);
            let floor = 1.0 / (reps.len() + 1) as f64;
            proptest::prop_assert!(p_hi <= p_lo);
            proptest::prop_assert!(p_hi >= floor && p_lo <= 1.0);
        }
    }
}
