use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recursive::StatSequence;
use crate::series::Series;

/// Dated explosive episode; fractions are `index / T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub origin: f64,
    pub collapse: f64,
    pub recovery: Option<f64>,
    /// Bubble model (1 to 4) when dated by SSR fitting.
    pub model: Option<u8>,
    pub origin_index: usize,
    pub collapse_index: usize,
    pub recovery_index: Option<usize>,
    /// No collapse before the end of the sample; `collapse_index` is `T`.
    #[serde(default)]
    pub ongoing: bool,
}

impl Episode {
    pub fn new(origin: usize, collapse: usize, recovery: Option<usize>, t: usize) -> Self {
        let f = |i: usize| i as f64 / t as f64;
        Episode {
            origin: f(origin),
            collapse: f(collapse),
            recovery: recovery.map(f),
            model: None,
            origin_index: origin,
            collapse_index: collapse,
            recovery_index: recovery,
            ongoing: false,
        }
    }

    /// Duration in observations.
    pub fn len(&self) -> usize {
        self.collapse_index - self.origin_index
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Where a critical value sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CvSource {
    AsymptoticRule,
    Simulated,
    Bootstrap,
    Table,
}

/// Critical values aligned with a statistic sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSequence {
    pub values: Vec<f64>,
    pub source: CvSource,
}

impl CvSequence {
    /// `cv_rule(T)` at every point of `seq`.
    pub fn rule(seq: &StatSequence) -> Self {
        CvSequence::constant(cv_rule(seq.t), seq.len(), CvSource::AsymptoticRule)
    }

    pub fn constant(value: f64, len: usize, source: CvSource) -> Self {
        CvSequence {
            values: vec![value; len],
            source,
        }
    }
}

/// `(2/3) log((log T)^2)`.
pub fn cv_rule(t: usize) -> f64 {
    let l = (t as f64).ln();
    2.0 / 3.0 * (l * l).ln()
}

/// `delta log(T) / T`.
pub fn default_min_duration(t: usize, delta: f64) -> f64 {
    delta * (t as f64).ln() / t as f64
}

/// Origins are the first strict up-crossings of `cv`; collapses the first
/// strict down-crossings at least `min_duration` after the origin. Search
/// restarts after each collapse. `None` entries never cross.
pub fn pwy_stamp(seq: &StatSequence, cv: &CvSequence, min_duration: f64) -> Result<Vec<Episode>> {
    if seq.len() != cv.values.len() {
        return Err(Error::invalid(format!(
            "{} statistics but {} critical values",
            seq.len(),
            cv.values.len()
        )));
    }
    if !(min_duration >= 0.0) {
        return Err(Error::invalid("min_duration must be non-negative"));
    }
    let t = seq.t;
    let gap = ((min_duration * t as f64) - 1e-9).ceil().max(0.0) as usize;
    let above = |i: usize| seq.entries[i].value.is_some_and(|v| v > cv.values[i]);
    let below = |i: usize| seq.entries[i].value.is_some_and(|v| v < cv.values[i]);
    let mut out = Vec::new();
    let mut i = 0;
    let n = seq.len();
    while i < n {
        if !above(i) {
            i += 1;
            continue;
        }
        let origin = seq.entries[i].index;
        let mut j = i + 1;
        while j < n && !(seq.entries[j].index >= origin + gap && below(j)) {
            j += 1;
        }
        if j == n {
            let mut ep = Episode::new(origin, t, None, t);
            ep.ongoing = true;
            out.push(ep);
            break;
        }
        out.push(Episode::new(origin, seq.entries[j].index, None, t));
        i = j + 1;
    }
    Ok(out)
}

/// The crossing rule of [`pwy_stamp`] applied to a backward sup sequence.
pub fn psy_stamp(bsadf: &StatSequence, cv: &CvSequence, min_duration: f64) -> Result<Vec<Episode>> {
    pwy_stamp(bsadf, cv, min_duration)
}

/// Writes episodes as CSV with labels taken from `series` when it has them.
pub fn write_episodes_csv<W: Write>(episodes: &[Episode], series: Option<&Series>, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Format(e.to_string());
    wr.write_record([
        "origin",
        "collapse",
        "recovery",
        "model",
        "origin_index",
        "collapse_index",
        "recovery_index",
        "origin_label",
        "collapse_label",
        "ongoing",
    ])
    .map_err(err)?;
    let label = |i: usize| {
        series
            .and_then(|s| if i >= 1 { s.label(i) } else { None })
            .unwrap_or("")
            .to_string()
    };
    let opt = |x: Option<String>| x.unwrap_or_default();
    for e in episodes {
        wr.write_record([
            e.origin.to_string(),
            e.collapse.to_string(),
            opt(e.recovery.map(|r| r.to_string())),
            opt(e.model.map(|m| m.to_string())),
            e.origin_index.to_string(),
            e.collapse_index.to_string(),
            opt(e.recovery_index.map(|r| r.to_string())),
            label(e.origin_index),
            label(e.collapse_index),
            e.ongoing.to_string(),
        ])
        .map_err(err)?;
    }
    wr.flush().map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistic::StatKind;

    fn seq(vals: &[f64], t: usize) -> StatSequence {
        let start = t - vals.len() + 1;
        StatSequence::from_values(StatKind::Gsadf, 0.1, t, vals.iter().enumerate().map(|(i, v)| (start + i, *v))).unwrap()
    }

    #[test]
    fn rule_value() {
        let l = 400f64.ln();
        assert_eq!(cv_rule(400), 2.0 / 3.0 * (l * l).ln());
        assert!((cv_rule(400) - 2.3875).abs() < 1e-3);
    }

    #[test]
    fn single_hump() {
        // indices 1..=100; above cv on 40..=59
        let v: Vec<f64> = (1..=100).map(|i| if (40..60).contains(&i) { 3.0 } else { 0.0 }).collect();
        let s = seq(&v, 100);
        let cv = CvSequence::constant(1.0, 100, CvSource::AsymptoticRule);
        let ep = pwy_stamp(&s, &cv, 0.02).unwrap();
        assert_eq!(ep.len(), 1);
        assert_eq!((ep[0].origin, ep[0].collapse), (0.4, 0.6));
        assert!(pwy_stamp(&s, &CvSequence::constant(5.0, 100, CvSource::AsymptoticRule), 0.02).unwrap().is_empty());
    }

    #[test]
    fn restart_and_duration() {
        let v: Vec<f64> = (1..=100)
            .map(|i| if (20..30).contains(&i) || (50..52).contains(&i) || (54..70).contains(&i) { 2.0 } else { 0.0 })
            .collect();
        let s = seq(&v, 100);
        let cv = CvSequence::constant(1.0, 100, CvSource::AsymptoticRule);
        let ep = psy_stamp(&s, &cv, 0.05).unwrap();
        assert_eq!(ep.len(), 2);
        assert_eq!((ep[0].origin_index, ep[0].collapse_index), (20, 30));
        // the dip at 52 comes before the minimum duration and is ignored
        assert_eq!((ep[1].origin_index, ep[1].collapse_index), (50, 70));
        assert!(ep[1].origin_index >= ep[0].collapse_index);
    }

    #[test]
    fn ties_do_not_cross_and_open_end() {
        let v = [1.0, 1.0, 2.0, 2.0, 1.0, 2.0];
        let s = seq(&v, 30);
        let cv = CvSequence::constant(1.0, 6, CvSource::AsymptoticRule);
        let ep = pwy_stamp(&s, &cv, 0.0).unwrap();
        assert_eq!(ep.len(), 1);
        assert!(ep[0].ongoing);
        assert_eq!(ep[0].collapse_index, 30);
        assert!(pwy_stamp(&s, &CvSequence::constant(1.0, 5, CvSource::AsymptoticRule), 0.0).is_err());
    }
}
