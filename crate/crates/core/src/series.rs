//! Core data types and fractional-index arithmetic.
//!
//! Observations are numbered `1..=T`; observation `t` is stored at
//! `values[t - 1]`. A window `(s, e]` holds observations `s+1..=e`, i.e. the
//! slice `values[s..e]`. Fractions map to indices through `floor(tau * T)`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered real-valued observations with optional labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    values: Vec<f64>,
    labels: Option<Vec<String>>,
    name: String,
}

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::build(values, None, String::new())
    }

    pub fn with_labels(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        Self::build(values, Some(labels), String::new())
    }

    fn build(values: Vec<f64>, labels: Option<Vec<String>>, name: String) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "observation {} is not finite",
                i + 1
            )));
        }
        if let Some(l) = &labels {
            if l.len() != values.len() {
                return Err(Error::invalid(format!(
                    "{} labels for {} values",
                    l.len(),
                    values.len()
                )));
            }
        }
        Ok(Series {
            values,
            labels,
            name,
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of observation `t` (1-based).
    pub fn label(&self, t: usize) -> Option<&str> {
        let l = self.labels.as_ref()?;
        if t == 0 {
            return None;
        }
        l.get(t - 1).map(String::as_str)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// First differences `y_t - y_{t-1}`, `t = 2..=T`.
    pub fn diff(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Observations `start+1..=end` as a new series (labels carried over).
    pub fn window(&self, start: usize, end: usize) -> Result<Series> {
        if end > self.len() || start >= end {
            return Err(Error::invalid(format!(
                "window ({start}, {end}] outside 1..={}",
                self.len()
            )));
        }
        Self::build(
            self.values[start..end].to_vec(),
            self.labels.as_ref().map(|l| l[start..end].to_vec()),
            self.name.clone(),
        )
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Series> {
        Self::build(
            self.values.iter().map(|&v| f(v)).collect(),
            self.labels.clone(),
            self.name.clone(),
        )
    }
}

/// `floor(tau * T)`.
///
/// Products that land within a few ulps below an integer (e.g. `0.29 * 100`)
/// snap to that integer so that decimal fractions map as written.
pub fn frac_to_index(tau: f64, t: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::invalid(format!("fraction {tau} outside [0, 1]")));
    }
    if t == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    Ok(floor_index(tau * t as f64))
}

pub(crate) fn floor_index(x: f64) -> usize {
    let r = x.round();
    if r > x && r - x <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// Minimum window fraction `0.01 + 1.8 / sqrt(T)`, capped at 1.
pub fn default_min_window(t: usize) -> Result<f64> {
    if t < 4 {
        return Err(Error::invalid(format!("T = {t} < 4")));
    }
    Ok((0.01 + 1.8 / (t as f64).sqrt()).min(1.0))
}

/// Smallest admissible window length in observations for `tau0`.
pub fn min_window_len(tau0: f64, t: usize) -> Result<usize> {
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return Err(Error::invalid(format!("tau0 = {tau0} outside (0, 1)")));
    }
    frac_to_index(tau0, t)
}

/// Window `(floor(tau1 T), floor(tau2 T)]` with minimum length fraction `tau0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub tau1: f64,
    pub tau2: f64,
    pub tau0: f64,
}

impl WindowSpec {
    pub fn new(tau1: f64, tau2: f64, tau0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau1) || !(tau2 > 0.0 && tau2 <= 1.0) {
            return Err(Error::invalid(format!(
                "window fractions ({tau1}, {tau2}) out of range"
            )));
        }
        if !(tau0 > 0.0 && tau0 < 1.0) {
            return Err(Error::invalid(format!("tau0 = {tau0} outside (0, 1)")));
        }
        if tau1 >= tau2 || tau2 - tau1 < tau0 - 1e-12 {
            return Err(Error::invalid(format!(
                "window ({tau1}, {tau2}] shorter than tau0 = {tau0}"
            )));
        }
        Ok(WindowSpec { tau1, tau2, tau0 })
    }

    /// Integer bounds `(s, e)` of the window for sample size `t`.
    pub fn indices(&self, t: usize) -> Result<(usize, usize)> {
        Ok((frac_to_index(self.tau1, t)?, frac_to_index(self.tau2, t)?))
    }
}

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum DetSpec {
    #[serde(rename = "none")]
    None,
    #[default]
    #[serde(rename = "const")]
    Constant,
    #[serde(rename = "trend")]
    Trend,
}

impl DetSpec {
    pub fn n_terms(self) -> usize {
        match self {
            DetSpec::None => 0,
            DetSpec::Constant => 1,
            DetSpec::Trend => 2,
        }
    }

    pub fn has_constant(self) -> bool {
        self != DetSpec::None
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DetSpec::None => "none",
            DetSpec::Constant => "const",
            DetSpec::Trend => "trend",
        }
    }
}

impl fmt::Display for DetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(DetSpec::None),
            "const" | "constant" => Ok(DetSpec::Constant),
            "trend" | "constant+trend" => Ok(DetSpec::Trend),
            _ => Err(Error::invalid(format!(
                "unknown deterministic spec {s:?} (expected none, const or trend)"
            ))),
        }
    }
}

/// Which CSV column holds the values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnSpec {
    /// Header name.
    Name(String),
    /// 1-based column position.
    Position(usize),
}

impl Default for ColumnSpec {
    fn default() -> Self {
        ColumnSpec::Position(0)
    }
}

impl FromStr for ColumnSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<usize>() {
            Ok(0) => Err(Error::invalid("column positions are 1-based")),
            Ok(p) => Ok(ColumnSpec::Position(p)),
            Err(_) => Ok(ColumnSpec::Name(s.to_string())),
        }
    }
}

impl fmt::Display for ColumnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSpec::Name(n) => f.write_str(n),
            ColumnSpec::Position(0) => f.write_str("last"),
            ColumnSpec::Position(p) => write!(f, "{p}"),
        }
    }
}

fn parse_value(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads one column of a CSV file.
///
/// `ColumnSpec::Position(0)` selects the last column. The header row is
/// optional unless the column is selected by name; when the file has more
/// than one column and the value column is not the first, the first column
/// is used as labels. Line numbers in errors count the header.
pub fn load_series(path: impl AsRef<Path>, column: &ColumnSpec) -> Result<Series> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows: Vec<(usize, csv::StringRecord)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let line = rec.position().map_or(rows.len() + 1, |p| p.line() as usize);
        rows.push((line, rec));
    }
    if rows.is_empty() {
        return Err(Error::TooShort);
    }

    let width = rows[0].1.len();
    let (col, has_header) = match column {
        ColumnSpec::Name(name) => {
            let idx = rows[0]
                .1
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.clone()))?;
            (idx, true)
        }
        ColumnSpec::Position(p) => {
            let idx = if *p == 0 { width - 1 } else { p - 1 };
            if idx >= width {
                return Err(Error::MissingColumn(p.to_string()));
            }
            let first = rows[0].1.get(idx).unwrap_or("");
            (idx, parse_value(first).is_none())
        }
    };
    let column_name = if has_header {
        rows[0].1.get(col).unwrap_or("").to_string()
    } else {
        (col + 1).to_string()
    };
    let body = if has_header { &rows[1..] } else { &rows[..] };
    let with_labels = width > 1 && col != 0;

    let mut values = Vec::with_capacity(body.len());
    let mut labels = Vec::with_capacity(body.len());
    for (line, rec) in body {
        let cell = rec.get(col).unwrap_or("");
        let v = parse_value(cell).ok_or_else(|| Error::Parse {
            row: *line,
            column: column_name.clone(),
            value: cell.to_string(),
        })?;
        values.push(v);
        if with_labels {
            labels.push(rec.get(0).unwrap_or("").to_string());
        }
    }
    if values.len() < 2 {
        return Err(Error::TooShort);
    }
    let name = if has_header {
        column_name
    } else {
        String::new()
    };
    Series::build(values, with_labels.then_some(labels), name)
}

/// Writes `label,value` (or `value`) rows in shortest round-trip precision.
pub fn save_series(series: &Series, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Format(e.to_string()))?;
    let name = if series.name.is_empty() {
        "value"
    } else {
        series.name.as_str()
    };
    let res = (|| -> std::result::Result<(), csv::Error> {
        match &series.labels {
            Some(l) => {
                w.write_record(["label", name])?;
                for (lab, v) in l.iter().zip(&series.values) {
                    w.write_record([lab.as_str(), &v.to_string()])?;
                }
            }
            None => {
                w.write_record([name])?;
                for v in &series.values {
                    w.write_record([v.to_string()])?;
                }
            }
        }
        Ok(())
    })();
    res.map_err(|e| Error::Format(e.to_string()))?;
    w.flush().map_err(io)
}
