use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exuberance::bootstrap::DEFAULT_TB;
use exuberance::datestamp::{DEFAULT_MIN_SEGMENT, DEFAULT_SIGN_EPSILON};
use exuberance::inference::DEFAULT_MAX_DELAY;
use exuberance::recursive::DEFAULT_END_WINDOW;
use exuberance::sim::{Scenario, TestSpec};
use exuberance::{ColumnSpec, DetSpec, MultiplierKind, StatKind, Tau0};
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "EXUBERANCE_SEED";

#[derive(Debug, Parser)]
#[command(name = "exuberance", version, about = "Right-tailed unit-root tests and bubble date-stamping")]
pub struct Cli {
    /// Worker threads for the parallel engines (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Replay a run from a config file or from the config embedded in a report.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Everything needed to reproduce a run. Serialized into every report.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Compute a statistic and decide against a critical value.
    Test(TestArgs),
    /// Date explosive episodes.
    Datestamp(DatestampArgs),
    /// Sequential monitoring pass.
    Monitor(MonitorArgs),
    /// Tabulate null critical values by simulation.
    SimulateCv(SimulateCvArgs),
    /// Size and power of a test under two simulated scenarios.
    Study(StudyArgs),
    /// Relations between two series.
    Relate(RelateArgs),
    /// Tidy CSV of the sequence, critical values and episodes in a report.
    #[serde(skip)]
    PlotData(PlotDataArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Test(_) => "test",
            Command::Datestamp(_) => "datestamp",
            Command::Monitor(_) => "monitor",
            Command::SimulateCv(_) => "simulate-cv",
            Command::Study(_) => "study",
            Command::Relate(_) => "relate",
            Command::PlotData(_) => "plot-data",
        }
    }

    pub fn seed_mut(&mut self) -> Option<&mut Option<u64>> {
        match self {
            Command::Test(a) => Some(&mut a.seed),
            Command::Datestamp(a) => Some(&mut a.seed),
            Command::Monitor(a) => Some(&mut a.seed),
            Command::SimulateCv(a) => Some(&mut a.seed),
            Command::Study(a) => Some(&mut a.seed),
            Command::Relate(a) => Some(&mut a.seed),
            Command::PlotData(_) => None,
        }
    }
}

/// Input series and regression settings.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DataArgs {
    /// CSV file with the series.
    #[arg(long)]
    pub input: PathBuf,
    /// Column name or 1-based position (default: last column).
    #[arg(long, default_value = "last", value_parser = parse_column)]
    pub column: ColumnSpec,
    /// Minimum window fraction or "auto" for 0.01 + 1.8/sqrt(T).
    #[arg(long, default_value = "auto")]
    pub tau0: Tau0,
    /// Deterministic terms: none, const or trend.
    #[arg(long, default_value = "const")]
    pub det: DetSpec,
    /// Lag order (filter order for sign statistics).
    #[arg(long, default_value_t = 0)]
    pub k: usize,
}

fn parse_column(s: &str) -> Result<ColumnSpec, String> {
    if s == "last" {
        return Ok(ColumnSpec::Position(0));
    }
    s.parse().map_err(|e: exuberance::Error| e.to_string())
}

/// Bootstrap replication settings.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BootArgs {
    /// Bootstrap replications.
    #[arg(long = "B", default_value_t = 499)]
    #[serde(rename = "B")]
    pub b: usize,
    /// Wild-bootstrap multiplier: gaussian, rademacher or skewed.
    #[arg(long, default_value = "gaussian")]
    pub multiplier: MultiplierKind,
}

/// Critical value source.
#[derive(Debug, Clone, PartialEq)]
pub enum CvChoice {
    /// `(2/3) log((log T)^2)`.
    Rule,
    Bootstrap,
    /// Pointwise null quantiles simulated at the sample size.
    Simulated,
    Table(PathBuf),
}

impl FromStr for CvChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rule" => Ok(CvChoice::Rule),
            "bootstrap" => Ok(CvChoice::Bootstrap),
            "simulated" => Ok(CvChoice::Simulated),
            _ => match s.strip_prefix("table:") {
                Some(p) if !p.is_empty() => Ok(CvChoice::Table(PathBuf::from(p))),
                _ => Err(format!(
                    "unknown critical value source {s:?}; expected rule, bootstrap, simulated or table:<path>"
                )),
            },
        }
    }
}

impl fmt::Display for CvChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CvChoice::Rule => f.write_str("rule"),
            CvChoice::Bootstrap => f.write_str("bootstrap"),
            CvChoice::Simulated => f.write_str("simulated"),
            CvChoice::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl Serialize for CvChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CvChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Statistic selection for `test`: any sup statistic, the end-of-sample
/// test or a union of rejections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestStat {
    Kind(StatKind),
    EndSample,
    Union,
}

impl FromStr for TestStat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "end-sample" => Ok(TestStat::EndSample),
            "union" => Ok(TestStat::Union),
            _ => s.parse().map(TestStat::Kind).map_err(|e: exuberance::Error| e.to_string()),
        }
    }
}

impl fmt::Display for TestStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestStat::Kind(k) => f.write_str(k.as_str()),
            TestStat::EndSample => f.write_str("end-sample"),
            TestStat::Union => f.write_str("union"),
        }
    }
}

impl Serialize for TestStat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TestStat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub data: DataArgs,
    /// Statistic: adf, sadf, gsadf, hb, sadf-gls, sbz, ssadf, sgsadf, stadf,
    /// gstadf, end-sample or union.
    #[arg(long, default_value = "gsadf")]
    pub stat: TestStat,
    /// Members of a union test.
    #[arg(long, value_delimiter = ',', required_if_eq("stat", "union"))]
    #[serde(default)]
    pub members: Vec<StatKind>,
    /// End-of-sample window length.
    #[arg(long, default_value_t = DEFAULT_END_WINDOW)]
    pub m: usize,
    /// Critical values: bootstrap, simulated or table:<path>.
    #[arg(long, default_value = "bootstrap")]
    pub cv: CvChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub boot: BootArgs,
    /// Replications for simulated critical values.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Write the bootstrap replicate statistics to this CSV file.
    #[arg(long)]
    #[serde(default)]
    pub dump_replicates: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StampMethod {
    Pwy,
    Psy,
    TwoStep,
    Sign,
    SsrBic,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DatestampArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "psy")]
    pub method: StampMethod,
    /// Critical values for pwy and psy: rule, bootstrap, simulated or table:<path>.
    #[arg(long, default_value = "rule")]
    pub cv: CvChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub boot: BootArgs,
    /// Size-control window of the composite bootstrap.
    #[arg(long = "Tb", default_value_t = DEFAULT_TB)]
    #[serde(rename = "Tb")]
    pub tb: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    /// Minimum duration `delta log(T) / T`.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Sign-statistic exponent.
    #[arg(long, default_value_t = DEFAULT_SIGN_EPSILON)]
    pub epsilon: f64,
    /// Shortest regime for SSR dating.
    #[arg(long, default_value_t = DEFAULT_MIN_SEGMENT)]
    pub min_seg: usize,
    /// Search for the initial condition of each detected origin.
    #[arg(long)]
    #[serde(default)]
    pub bic_init: bool,
    /// Confidence level for per-episode intervals on the explosive root.
    #[arg(long)]
    #[serde(default)]
    pub ci: Option<f64>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonitorMethod {
    /// BSADF against the composite bootstrap critical value.
    Composite,
    /// First BSADF beyond the largest value over the training span.
    TrainingMax,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MonitorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "composite")]
    pub method: MonitorMethod,
    #[arg(long = "Tb", default_value_t = DEFAULT_TB)]
    #[serde(rename = "Tb")]
    pub tb: usize,
    /// Last training observation for training-max.
    #[arg(long, required_if_eq("method", "training-max"))]
    #[serde(default)]
    pub train: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub boot: BootArgs,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateCvArgs {
    #[arg(long, default_value = "gsadf")]
    pub stat: StatKind,
    /// Sample sizes.
    #[arg(long = "T", value_delimiter = ',', required = true)]
    #[serde(rename = "T")]
    pub ts: Vec<usize>,
    #[arg(long, default_value = "auto")]
    pub tau0: Tau0,
    #[arg(long, default_value = "const")]
    pub det: DetSpec,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Quantile levels.
    #[arg(long, value_delimiter = ',', default_value = "0.9,0.95,0.99")]
    pub probs: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    /// Write the table as JSON; an existing file is never replaced.
    #[arg(long)]
    #[serde(default)]
    pub table: Option<PathBuf>,
    /// Also export the table as CSV.
    #[arg(long)]
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

/// Contents of a study specification file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    pub test: TestSpec,
    pub null: Scenario,
    pub alt: Scenario,
    pub replications: usize,
    #[serde(default = "default_level")]
    pub level: f64,
}

fn default_level() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct StudyArgs {
    /// JSON file with `test`, `null`, `alt`, `replications` and `level`.
    #[arg(long = "spec", required = true)]
    #[serde(skip)]
    pub spec_file: Option<PathBuf>,
    /// Loaded specification; recorded so replays do not depend on the file.
    #[arg(skip)]
    pub spec: Option<StudySpec>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelateMethod {
    Migration,
    Contagion,
    Cobubble,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RelateArgs {
    #[arg(long, value_enum)]
    pub method: RelateMethod,
    /// First series: source market, core market, or regressor of the co-bubble regression.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "last", value_parser = parse_column)]
    pub column: ColumnSpec,
    /// Second series: destination, target, or dependent variable.
    #[arg(long)]
    pub input_y: PathBuf,
    #[arg(long, default_value = "last", value_parser = parse_column)]
    pub column_y: ColumnSpec,
    #[arg(long, default_value = "auto")]
    pub tau0: Tau0,
    #[arg(long, default_value = "const")]
    pub det: DetSpec,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Rolling window for contagion (default: floor(tau0 T)).
    #[arg(long)]
    #[serde(default)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_DELAY)]
    pub max_delay: usize,
    /// Peak of the first series (default: largest recursive coefficient).
    #[arg(long)]
    #[serde(default)]
    pub tpx: Option<usize>,
    #[arg(long)]
    #[serde(default)]
    pub tpy: Option<usize>,
    /// Rate exponent of the migration statistic.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Co-bubble lag `i` in `y_t - mu - beta x_{t-i}`.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub delay: i64,
    #[command(flatten)]
    #[serde(flatten)]
    pub boot: BootArgs,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct PlotDataArgs {
    /// Report produced by test, datestamp or monitor.
    #[arg(long)]
    pub report: PathBuf,
}
