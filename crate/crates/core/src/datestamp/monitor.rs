use serde::{Deserialize, Serialize};

use super::stamp::{default_min_duration, psy_stamp, CvSequence, CvSource, Episode};
use crate::bootstrap::{composite_monitor_cv, CompositeReport, MultiplierKind};
use crate::error::{Error, Result};
use crate::ols::AdfConfig;
use crate::recursive::{bsadf_sequence, StatSequence};
use crate::series::Series;

/// First position in `monitor` whose statistic strictly exceeds the largest
/// training statistic. Missing values never trigger.
pub fn training_max_monitor(training: &StatSequence, monitor: &StatSequence) -> Result<Option<usize>> {
    let max = training
        .max()
        .ok_or_else(|| Error::invalid("training sequence has no values"))?;
    Ok(monitor.values().position(|v| v.is_some_and(|v| v > max)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub bsadf: StatSequence,
    pub composite: CompositeReport,
    /// Sample-end indices where BSADF exceeds the composite critical value.
    pub alarms: Vec<usize>,
    pub first_alarm: Option<usize>,
    pub episodes: Vec<Episode>,
}

/// Sequential PSY pass with the composite bootstrap critical value.
#[allow(clippy::too_many_arguments)]
pub fn psy_monitor(
    series: &Series,
    tau0: f64,
    tb: usize,
    b: usize,
    level: f64,
    multiplier: MultiplierKind,
    seed: u64,
    cfg: AdfConfig,
) -> Result<MonitorReport> {
    let composite = composite_monitor_cv(series, tau0, tb, b, level, multiplier, seed, cfg)?;
    let bsadf = bsadf_sequence(series, tau0, cfg)?;
    let alarms: Vec<usize> = bsadf
        .entries
        .iter()
        .filter(|e| e.value.is_some_and(|v| v > composite.cv))
        .map(|e| e.index)
        .collect();
    let cv = CvSequence::constant(composite.cv, bsadf.len(), CvSource::Bootstrap);
    let episodes = psy_stamp(&bsadf, &cv, default_min_duration(series.len(), 1.0))?;
    Ok(MonitorReport {
        first_alarm: alarms.first().copied(),
        bsadf,
        composite,
        alarms,
        episodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistic::StatKind;

    fn seq(v: &[f64]) -> StatSequence {
        StatSequence::from_values(StatKind::Sadf, 0.1, 100, v.iter().enumerate().map(|(i, x)| (i + 1, *x))).unwrap()
    }

    #[test]
    fn training_max_rules() {
        let train = seq(&[0.5, 1.5, 1.0]);
        assert_eq!(training_max_monitor(&train, &seq(&[0.1, 1.2])).unwrap(), None);
        assert_eq!(training_max_monitor(&train, &seq(&[2.0, 0.0])).unwrap(), Some(0));
        assert_eq!(training_max_monitor(&train, &seq(&[1.5, 1.6])).unwrap(), Some(1));
        let empty = StatSequence::from_values(StatKind::Sadf, 0.1, 100, []).unwrap();
        assert!(training_max_monitor(&empty, &train).is_err());
    }
}
