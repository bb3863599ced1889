use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use exuberance::{Episode, StatSequence};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Command;
use crate::error::CliError;

/// Bumped on breaking changes to the report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub seed: u64,
    pub config: Command,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PlotData>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(config: Command, seed: u64, result: Value, plot: Option<PlotData>, warnings: Vec<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            seed,
            config,
            result,
            plot,
            warnings,
        }
    }

    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Data(e.to_string()))?;
        text.push('\n');
        match out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Data(e.to_string())),
        }
    }
}

/// Sequence, critical values and episodes for plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub sequence: Option<StatSequence>,
    /// Aligned with `sequence`.
    #[serde(default)]
    pub cv: Option<Vec<f64>>,
    #[serde(default)]
    pub episodes: Vec<Episode>,
}

/// Reads the run config from a bare config file or from a report.
pub fn read_config(path: &Path) -> Result<Command, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: not valid JSON: {e}", path.display())))?;
    if let Some(c) = v.get_mut("config") {
        v = c.take();
    }
    serde_json::from_value(v).map_err(|e| CliError::Usage(format!("{}: not a run config: {e}", path.display())))
}

/// Writes one row per sequence point, or per observation when the report
/// holds episodes only. `in_episode` is 1 for `origin_index <= index <=
/// collapse_index`.
pub fn write_plot_csv<W: Write>(plot: &PlotData, w: W) -> Result<usize, CliError> {
    let data = |e: csv::Error| CliError::Data(e.to_string());
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["index", "label", "statistic", "cv", "in_episode", "episode"])
        .map_err(data)?;
    let label = |i: usize| {
        plot.labels
            .as_ref()
            .and_then(|l| i.checked_sub(1).and_then(|j| l.get(j)))
            .cloned()
            .unwrap_or_default()
    };
    let episode = |i: usize| {
        plot.episodes
            .iter()
            .position(|e| e.origin_index <= i && i <= e.collapse_index)
    };
    let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    let rows: Vec<(usize, Option<f64>, Option<f64>)> = match &plot.sequence {
        Some(seq) => seq
            .entries
            .iter()
            .enumerate()
            .map(|(j, e)| (e.index, e.value, plot.cv.as_ref().and_then(|c| c.get(j).copied())))
            .collect(),
        None => (1..=plot.t).map(|i| (i, None, None)).collect(),
    };
    for &(i, v, c) in &rows {
        let ep = episode(i);
        wr.write_record([
            i.to_string(),
            label(i),
            fmt(v),
            fmt(c),
            u8::from(ep.is_some()).to_string(),
            ep.map(|k| (k + 1).to_string()).unwrap_or_default(),
        ])
        .map_err(data)?;
    }
    wr.flush().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(rows.len())
}
