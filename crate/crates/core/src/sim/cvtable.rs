use std::fs::OpenOptions;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate_with, DgpSpec, VolPath};
use crate::bootstrap::{collect_replicates, empirical_quantile};
use crate::datestamp::{CvSequence, CvSource};
use crate::error::{Error, Result};
use crate::rng::{child_seed, stream};
use crate::series::DetSpec;
use crate::statistic::{compute, compute_value, StatConfig, StatKind};

/// Generator recorded in table metadata.
pub const GENERATOR_ID: &str = "chacha8";

/// Replications below which a table carries a warning.
pub const TABLE_GRADE_REPS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRecord {
    pub stat: StatKind,
    #[serde(rename = "T")]
    pub t: usize,
    pub tau0: f64,
    pub det: DetSpec,
    pub k: usize,
    /// Quantile probability, e.g. 0.95.
    pub prob: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvMeta {
    pub replications: usize,
    pub seed: u64,
    pub generator: String,
    /// Null process the table was simulated under.
    pub null: String,
    /// Degenerate replications dropped, per sample size in table order.
    #[serde(default)]
    pub failed: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Finite-sample quantiles keyed by `(stat, T, tau0, det, k, prob)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvTable {
    pub meta: CvMeta,
    pub records: Vec<CvRecord>,
}

const KEY_TOL: f64 = 1e-9;

impl CvTable {
    /// Value for an exact key; fractions match within `1e-9`.
    pub fn lookup(&self, stat: StatKind, t: usize, tau0: f64, det: DetSpec, k: usize, prob: f64) -> Option<f64> {
        self.records
            .iter()
            .find(|r| {
                r.stat == stat
                    && r.t == t
                    && (r.tau0 - tau0).abs() < KEY_TOL
                    && r.det == det
                    && r.k == k
                    && (r.prob - prob).abs() < KEY_TOL
            })
            .map(|r| r.value)
    }

    /// Checks that quantiles do not decrease with the probability level.
    pub fn check_monotone(&self) -> Result<()> {
        for w in self.records.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let same = a.stat == b.stat && a.t == b.t && a.tau0 == b.tau0 && a.det == b.det && a.k == b.k;
            if same && b.prob > a.prob && b.value < a.value {
                return Err(Error::Format(format!(
                    "{} at T = {}: quantile {} below quantile {}",
                    a.stat, a.t, b.prob, a.prob
                )));
            }
        }
        Ok(())
    }

    /// Writes JSON to a new file; existing tables are never overwritten.
    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io = |e: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let f = OpenOptions::new().write(true).create_new(true).open(path).map_err(io)?;
        let mut w = BufWriter::new(f);
        serde_json::to_writer_pretty(&mut w, self).map_err(|e| Error::Format(e.to_string()))?;
        w.flush().map_err(io)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let table: CvTable =
            serde_json::from_reader(BufReader::new(f)).map_err(|e| Error::Format(e.to_string()))?;
        table.check_monotone()?;
        Ok(table)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Format(e.to_string());
        wr.write_record(["stat", "T", "tau0", "det", "k", "prob", "value"]).map_err(err)?;
        for r in &self.records {
            wr.write_record([
                r.stat.to_string(),
                r.t.to_string(),
                r.tau0.to_string(),
                r.det.to_string(),
                r.k.to_string(),
                r.prob.to_string(),
                r.value.to_string(),
            ])
            .map_err(err)?;
        }
        wr.flush().map_err(|e| Error::Format(e.to_string()))
    }
}

fn check_probs(probs: &[f64]) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(Error::invalid("no quantile levels"));
    }
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::invalid(format!("quantile level {p} outside (0, 1)")));
    }
    let mut v = probs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

/// Quantiles of `kind` under a driftless Gaussian random walk, for each `T`.
/// Replication `r` at size `T` draws from stream `r` of `child_seed(seed, T)`.
pub fn tabulate_critical_values(
    kind: StatKind,
    ts: &[usize],
    cfg: &StatConfig,
    probs: &[f64],
    replications: usize,
    seed: u64,
) -> Result<CvTable> {
    cfg.validate(kind)?;
    let probs = check_probs(probs)?;
    if replications < 2 {
        return Err(Error::invalid("at least 2 replications are required"));
    }
    let mut ts = ts.to_vec();
    ts.sort_unstable();
    ts.dedup();
    if ts.is_empty() {
        return Err(Error::invalid("no sample sizes"));
    }
    let mut records = Vec::new();
    let mut failed = Vec::new();
    for &t in &ts {
        let tau0 = cfg.tau0.resolve(t)?;
        let spec = DgpSpec::random_walk(t);
        spec.validate()?;
        let s = child_seed(seed, t as u64);
        let outcomes: Vec<Option<f64>> = (0..replications)
            .into_par_iter()
            .map(|r| {
                let y = simulate_with(&spec, &VolPath::Constant, &mut stream(s, r as u64)).ok()?;
                compute_value(kind, &y, cfg).ok()
            })
            .collect();
        let (values, nfail) = collect_replicates(outcomes)?;
        failed.push((t, nfail));
        for &p in &probs {
            records.push(CvRecord {
                stat: kind,
                t,
                tau0,
                det: cfg.adf.det,
                k: cfg.adf.k,
                prob: p,
                value: empirical_quantile(&values, p)?,
            });
        }
    }
    let warning = (replications < TABLE_GRADE_REPS).then(|| {
        format!("{replications} replications; tables normally use at least {TABLE_GRADE_REPS}")
    });
    Ok(CvTable {
        meta: CvMeta {
            replications,
            seed,
            generator: GENERATOR_ID.into(),
            null: "driftless Gaussian random walk, y_0 = 0".into(),
            failed,
            warning,
        },
        records,
    })
}

/// Pointwise `prob`-quantiles of the recursive sequence emitted by `kind`
/// (the forward ADF sequence for SADF, BSADF for GSADF) under the null.
pub fn simulate_cv_sequence(
    kind: StatKind,
    t: usize,
    cfg: &StatConfig,
    prob: f64,
    replications: usize,
    seed: u64,
) -> Result<CvSequence> {
    cfg.validate(kind)?;
    check_probs(&[prob])?;
    let spec = DgpSpec::random_walk(t);
    spec.validate()?;
    let runs: Vec<Option<Vec<Option<f64>>>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let y = simulate_with(&spec, &VolPath::Constant, &mut stream(seed, r as u64)).ok()?;
            let seq = compute(kind, &y, cfg).ok()?.sequence?;
            Some(seq.values().collect())
        })
        .collect();
    let runs: Vec<Vec<Option<f64>>> = runs.into_iter().flatten().collect();
    let failed = replications - runs.len();
    if runs.is_empty() || failed as f64 > 0.1 * replications as f64 {
        return Err(Error::BootstrapDegenerate {
            failed,
            total: replications,
        });
    }
    let len = runs[0].len();
    let values = (0..len)
        .map(|i| {
            let col: Vec<f64> = runs.iter().filter_map(|r| r[i]).collect();
            empirical_quantile(&col, prob)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CvSequence {
        values,
        source: CvSource::Simulated,
    })
}
