use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_with, DgpSpec, VolPath};
use crate::bootstrap::{wild_bootstrap_pvalue, MultiplierKind};
use crate::error::{Error, Result};
use crate::rng::{child_seed, stream};
use crate::statistic::{compute_value, StatConfig, StatKind};

/// How a replication decides rejection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decision {
    /// Reject when the statistic exceeds `cv`.
    CriticalValue { cv: f64 },
    /// Reject when the wild-bootstrap p-value is at most the level.
    Bootstrap {
        #[serde(rename = "B")]
        b: usize,
        #[serde(default)]
        multiplier: MultiplierKind,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub kind: StatKind,
    pub cfg: StatConfig,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub dgp: DgpSpec,
    #[serde(default)]
    pub vol: VolPath,
}

impl Scenario {
    pub fn new(dgp: DgpSpec, vol: VolPath) -> Self {
        Scenario { dgp, vol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectionRate {
    pub rate: f64,
    /// Binomial standard error `sqrt(rate (1 - rate) / n)`.
    pub se: f64,
    pub rejections: usize,
    /// Replications that produced a decision.
    pub n: usize,
    /// Replications whose statistic was degenerate.
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub size: RejectionRate,
    pub power: RejectionRate,
    pub level: f64,
    pub replications: usize,
    pub seed: u64,
}

/// Rejection frequency of `test` over `replications` draws of `scenario`.
/// Replication `r` simulates from stream `r` of `seed` and bootstraps with
/// `child_seed(seed, r)`.
pub fn rejection_rate(test: &TestSpec, scenario: &Scenario, replications: usize, level: f64, seed: u64) -> Result<RejectionRate> {
    if replications == 0 {
        return Err(Error::invalid("at least one replication is required"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!("level {level} outside (0, 1)")));
    }
    test.cfg.validate(test.kind)?;
    scenario.dgp.validate()?;
    scenario.vol.validate()?;
    let outcomes: Vec<Option<bool>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let y = simulate_with(&scenario.dgp, &scenario.vol, &mut stream(seed, r as u64)).ok()?;
            match test.decision {
                Decision::CriticalValue { cv } => compute_value(test.kind, &y, &test.cfg).ok().map(|s| s > cv),
                Decision::Bootstrap { b, multiplier } => {
                    wild_bootstrap_pvalue(&y, test.kind, &test.cfg, b, multiplier, child_seed(seed, r as u64))
                        .ok()
                        .map(|rep| rep.p_value <= level)
                }
            }
        })
        .collect();
    let n = outcomes.iter().flatten().count();
    let rejections = outcomes.iter().flatten().filter(|x| **x).count();
    if n == 0 {
        return Err(Error::AllDegenerate);
    }
    let rate = rejections as f64 / n as f64;
    Ok(RejectionRate {
        rate,
        se: (rate * (1.0 - rate) / n as f64).sqrt(),
        rejections,
        n,
        failed: replications - n,
    })
}

/// Size under `null` and power under `alt`; the two use separate seed streams.
pub fn size_power_study(
    test: &TestSpec,
    null: &Scenario,
    alt: &Scenario,
    replications: usize,
    level: f64,
    seed: u64,
) -> Result<StudyReport> {
    Ok(StudyReport {
        size: rejection_rate(test, null, replications, level, child_seed(seed, 0))?,
        power: rejection_rate(test, alt, replications, level, child_seed(seed, 1))?,
        level,
        replications,
        seed,
    })
}
