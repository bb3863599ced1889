use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statistic::StatKind;

/// One point of a recursive statistic sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqEntry {
    /// Sample-end index `floor(tau2 T)` (break point for the sup-Chow scan).
    pub index: usize,
    pub tau2: f64,
    /// `None` when every window ending here was degenerate.
    pub value: Option<f64>,
}

/// Statistic values indexed by sample-end fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSequence {
    pub kind: StatKind,
    pub tau0: f64,
    /// Sample size the fractions refer to.
    pub t: usize,
    pub entries: Vec<SeqEntry>,
}

impl StatSequence {
    pub(crate) fn new(kind: StatKind, tau0: f64, t: usize) -> Self {
        StatSequence {
            kind,
            tau0,
            t,
            entries: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, index: usize, value: Option<f64>) {
        self.entries.push(SeqEntry {
            index,
            tau2: index as f64 / self.t as f64,
            value,
        });
    }

    /// Builds a sequence from explicit `(index, value)` pairs.
    pub fn from_values(
        kind: StatKind,
        tau0: f64,
        t: usize,
        values: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let mut s = StatSequence::new(kind, tau0, t);
        for (i, v) in values {
            if let Some(last) = s.entries.last() {
                if i <= last.index {
                    return Err(Error::invalid("sequence indices must increase"));
                }
            }
            s.push(i, Some(v));
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn max(&self) -> Option<f64> {
        self.values().flatten().fold(None, |m, v| match m {
            Some(m) if m >= v => Some(m),
            _ => Some(v),
        })
    }

    /// Number of skipped (degenerate) entries.
    pub fn skipped(&self) -> usize {
        self.entries.iter().filter(|e| e.value.is_none()).count()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Format(e.to_string());
        wr.write_record(["index", "tau2", "value"]).map_err(err)?;
        for e in &self.entries {
            let v = e.value.map(|v| v.to_string()).unwrap_or_default();
            wr.write_record([e.index.to_string(), e.tau2.to_string(), v])
                .map_err(err)?;
        }
        wr.flush().map_err(|e| Error::Format(e.to_string()))
    }
}

/// Supremum statistic with its maximising window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    pub value: f64,
    /// `(tau1, tau2)` of the maximising window.
    pub argmax: (f64, f64),
    /// `(s, e)` of the maximising window `(s, e]`.
    pub argmax_index: (usize, usize),
    pub sequence: Option<StatSequence>,
    /// Degenerate windows skipped during the scan.
    pub skipped: usize,
}

impl SupResult {
    pub(crate) fn new(best: Best, t: usize, sequence: Option<StatSequence>, skipped: usize) -> Result<Self> {
        let (value, s, e) = best.get().ok_or(Error::AllDegenerate)?;
        Ok(SupResult {
            value,
            argmax: (s as f64 / t as f64, e as f64 / t as f64),
            argmax_index: (s, e),
            sequence,
            skipped,
        })
    }
}

/// Running maximum with ties resolved to the smallest `(s, e)`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Best(Option<(f64, usize, usize)>);

impl Best {
    #[inline]
    pub(crate) fn offer(&mut self, v: f64, s: usize, e: usize) {
        match self.0 {
            Some((bv, bs, be)) if bv > v || (bv == v && (bs, be) <= (s, e)) => {}
            _ => self.0 = Some((v, s, e)),
        }
    }

    pub(crate) fn merge(&mut self, other: Best) {
        if let Some((v, s, e)) = other.0 {
            self.offer(v, s, e);
        }
    }

    pub(crate) fn get(&self) -> Option<(f64, usize, usize)> {
        self.0
    }

    pub(crate) fn value(&self) -> Option<f64> {
        self.0.map(|b| b.0)
    }
}
