use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::wild::check_bootstrap_args;
use super::{upper_critical_value, wild_sample, MultiplierKind, MAX_DEGENERATE_SHARE};
use crate::error::{Error, Result};
use crate::recursive::{union_of_rejections, UnionDecision};
use crate::rng::stream;
use crate::series::Series;
use crate::statistic::{compute_value, StatConfig, StatKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapUnion {
    pub kinds: Vec<StatKind>,
    pub stats: Vec<f64>,
    /// Member bootstrap critical values `q*_i`.
    pub member_cvs: Vec<f64>,
    /// Scaling `psi`: the bootstrap critical value of `max_i stat_i / q*_i`.
    pub psi: f64,
    pub decision: UnionDecision,
    #[serde(rename = "B")]
    pub b: usize,
    pub seed: u64,
    pub failed: usize,
}

/// Union of rejections calibrated on a single replicate set.
///
/// Each member is normalised by its own bootstrap critical value, so the
/// decision does not depend on the order of `members`.
pub fn bootstrap_union(
    series: &Series,
    members: &[(StatKind, StatConfig)],
    b: usize,
    level: f64,
    multiplier: MultiplierKind,
    seed: u64,
) -> Result<BootstrapUnion> {
    check_bootstrap_args(b, level)?;
    if members.is_empty() {
        return Err(Error::invalid("a union needs at least one test"));
    }
    let mut stats = Vec::with_capacity(members.len());
    for (kind, cfg) in members {
        cfg.validate(*kind)?;
        stats.push(compute_value(*kind, series, cfg)?);
    }
    let outcomes: Vec<Option<Vec<f64>>> = (0..b)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, r as u64);
            let ys = wild_sample(series, multiplier, &mut rng);
            members
                .iter()
                .map(|(kind, cfg)| compute_value(*kind, &ys, &cfg.with_k(0)).ok())
                .collect()
        })
        .collect();
    let reps: Vec<Vec<f64>> = outcomes.into_iter().flatten().collect();
    let failed = b - reps.len();
    if failed as f64 > MAX_DEGENERATE_SHARE * b as f64 {
        return Err(Error::BootstrapDegenerate { failed, total: b });
    }
    let member_cvs: Vec<f64> = (0..members.len())
        .map(|i| {
            let col: Vec<f64> = reps.iter().map(|r| r[i]).collect();
            upper_critical_value(&col, level)
        })
        .collect();
    if member_cvs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(Error::invalid(
            "member critical values must be positive and finite to scale the union",
        ));
    }
    let u: Vec<f64> = reps
        .iter()
        .map(|r| {
            r.iter()
                .zip(&member_cvs)
                .map(|(s, c)| s / c)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let psi = upper_critical_value(&u, level);
    let decision = if members.len() == 1 {
        UnionDecision {
            reject: stats[0] > psi * member_cvs[0],
            u: stats[0],
            threshold: psi * member_cvs[0],
            rejecting: if stats[0] > psi * member_cvs[0] { vec![0] } else { vec![] },
        }
    } else {
        union_of_rejections(&stats, &member_cvs, psi)?
    };
    Ok(BootstrapUnion {
        kinds: members.iter().map(|m| m.0).collect(),
        stats,
        member_cvs,
        psi,
        decision,
        b,
        seed,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::wild_bootstrap_pvalue;
    use crate::statistic::Tau0;

    fn data() -> Series {
        let v: Vec<f64> = (0..80)
            .map(|i| (i as f64 * 0.61).sin() * 3.0 + (1.03f64).powi(i.max(50) - 50))
            .collect();
        Series::new(v).unwrap()
    }

    fn cfg() -> StatConfig {
        StatConfig {
            tau0: Tau0::Value(0.25),
            ..StatConfig::default()
        }
    }

    #[test]
    fn single_member_matches_member_test() {
        let y = data();
        let u = bootstrap_union(&y, &[(StatKind::Gsadf, cfg())], 99, 0.05, MultiplierKind::Gaussian, 2).unwrap();
        let w = wild_bootstrap_pvalue(&y, StatKind::Gsadf, &cfg(), 99, MultiplierKind::Gaussian, 2).unwrap();
        assert_eq!(u.psi, 1.0);
        assert_eq!(u.member_cvs[0], w.critical_value(0.05));
        assert_eq!(u.decision.reject, w.reject(0.05));
    }

    #[test]
    fn order_free() {
        let y = data();
        let m1 = [(StatKind::Gsadf, cfg()), (StatKind::Sgsadf, cfg())];
        let m2 = [(StatKind::Sgsadf, cfg()), (StatKind::Gsadf, cfg())];
        let a = bootstrap_union(&y, &m1, 99, 0.05, MultiplierKind::Gaussian, 8).unwrap();
        let b = bootstrap_union(&y, &m2, 99, 0.05, MultiplierKind::Gaussian, 8).unwrap();
        assert_eq!(a.decision.reject, b.decision.reject);
        assert_eq!(a.psi, b.psi);
    }
}
