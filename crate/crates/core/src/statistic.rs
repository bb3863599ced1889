//! Uniform dispatch over the sup-type statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ols::{fit_adf_window, AdfConfig};
use crate::recursive::{
    gsadf, hb_sup_chow, sadf, sadf_gls_with, sbz, sign_statistics, SignMode, SupResult,
};
use crate::series::{default_min_window, DetSpec, Series};

/// Statistic identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatKind {
    #[serde(rename = "adf")]
    Adf,
    #[serde(rename = "sadf")]
    Sadf,
    #[serde(rename = "gsadf")]
    Gsadf,
    #[serde(rename = "hb")]
    Hb,
    #[serde(rename = "sadf-gls")]
    SadfGls,
    #[serde(rename = "sbz")]
    Sbz,
    #[serde(rename = "ssadf")]
    Ssadf,
    #[serde(rename = "sgsadf")]
    Sgsadf,
    #[serde(rename = "stadf")]
    Stadf,
    #[serde(rename = "gstadf")]
    Gstadf,
}

impl StatKind {
    pub const ALL: [StatKind; 10] = [
        StatKind::Adf,
        StatKind::Sadf,
        StatKind::Gsadf,
        StatKind::Hb,
        StatKind::SadfGls,
        StatKind::Sbz,
        StatKind::Ssadf,
        StatKind::Sgsadf,
        StatKind::Stadf,
        StatKind::Gstadf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::Adf => "adf",
            StatKind::Sadf => "sadf",
            StatKind::Gsadf => "gsadf",
            StatKind::Hb => "hb",
            StatKind::SadfGls => "sadf-gls",
            StatKind::Sbz => "sbz",
            StatKind::Ssadf => "ssadf",
            StatKind::Sgsadf => "sgsadf",
            StatKind::Stadf => "stadf",
            StatKind::Gstadf => "gstadf",
        }
    }

    pub fn is_sign(self) -> bool {
        matches!(self, StatKind::Ssadf | StatKind::Sgsadf)
    }

    /// Whether `cfg.adf.det` enters the statistic.
    pub fn uses_det(self) -> bool {
        matches!(self, StatKind::Adf | StatKind::Sadf | StatKind::Gsadf | StatKind::SadfGls)
    }

    /// Whether `cfg.adf.k` enters the statistic (lag augmentation or sign filter).
    pub fn uses_k(self) -> bool {
        !matches!(self, StatKind::Sbz | StatKind::Stadf | StatKind::Gstadf)
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace('_', "-");
        StatKind::ALL
            .into_iter()
            .find(|k| k.as_str() == lower)
            .or(match lower.as_str() {
                "gls" | "sadfgls" => Some(StatKind::SadfGls),
                "hb-sup-chow" => Some(StatKind::Hb),
                _ => None,
            })
            .ok_or_else(|| Error::invalid(format!("unknown statistic {s:?}")))
    }
}

/// Minimum window fraction, either fixed or `0.01 + 1.8 / sqrt(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Tau0 {
    #[default]
    Auto,
    Value(f64),
}

impl Tau0 {
    pub fn resolve(self, t: usize) -> Result<f64> {
        match self {
            Tau0::Auto => default_min_window(t),
            Tau0::Value(v) if v > 0.0 && v < 1.0 => Ok(v),
            Tau0::Value(v) => Err(Error::invalid(format!("tau0 = {v} outside (0, 1)"))),
        }
    }
}

impl FromStr for Tau0 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Tau0::Auto);
        }
        s.parse::<f64>()
            .map_err(|_| Error::invalid(format!("tau0 must be \"auto\" or a fraction, got {s:?}")))
            .and_then(|v| {
                Tau0::Value(v).resolve(100)?;
                Ok(Tau0::Value(v))
            })
    }
}

impl fmt::Display for Tau0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau0::Auto => f.write_str("auto"),
            Tau0::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Tau0 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tau0::Auto => s.serialize_str("auto"),
            Tau0::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Tau0 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Tau0::Value(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Settings shared by every statistic. `adf.k` is the lag order for the
/// ADF family and the sup-Chow scan, and the filter order for sign statistics.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StatConfig {
    pub tau0: Tau0,
    pub adf: AdfConfig,
    /// GLS localizing constant; `None` uses the default for `adf.det`.
    #[serde(default)]
    pub c_bar: Option<f64>,
    /// Kernel bandwidth for SBZ and the variance profile; `None` is `T^{-1/5}`.
    #[serde(default)]
    pub bandwidth: Option<f64>,
    #[serde(default)]
    pub sign_mode: SignMode,
}

impl StatConfig {
    pub fn with_k(mut self, k: usize) -> Self {
        self.adf.k = k;
        self
    }

    /// Rejects settings the statistic cannot honour.
    pub fn validate(&self, kind: StatKind) -> Result<()> {
        if kind == StatKind::SadfGls && self.adf.det == DetSpec::None {
            return Err(Error::invalid(
                "sadf-gls needs --det const or --det trend for the GLS adjustment",
            ));
        }
        if !kind.uses_k() && self.adf.k > 0 {
            return Err(Error::invalid(format!(
                "{kind} has no lag augmentation; use k = 0"
            )));
        }
        if kind != StatKind::SadfGls && self.c_bar.is_some() {
            return Err(Error::invalid(format!("c_bar only applies to sadf-gls, not {kind}")));
        }
        if !kind.is_sign() && self.sign_mode != SignMode::Raw {
            return Err(Error::invalid(format!(
                "sign demeaning only applies to sign statistics, not {kind}"
            )));
        }
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h < 1.0) {
                return Err(Error::invalid(format!("bandwidth {h} outside (0, 1)")));
            }
            if !matches!(kind, StatKind::Sbz | StatKind::Stadf | StatKind::Gstadf) {
                return Err(Error::invalid(format!("bandwidth does not apply to {kind}")));
            }
        }
        Ok(())
    }
}

/// Computes `kind` on `series`.
pub fn compute(kind: StatKind, series: &Series, cfg: &StatConfig) -> Result<SupResult> {
    let n = series.len();
    let tau0 = cfg.tau0.resolve(n)?;
    match kind {
        StatKind::Adf => {
            let f = fit_adf_window(series, 0, n, cfg.adf)?;
            Ok(SupResult {
                value: f.t_stat,
                argmax: (0.0, 1.0),
                argmax_index: (0, n),
                sequence: None,
                skipped: 0,
            })
        }
        StatKind::Sadf => sadf(series, tau0, cfg.adf),
        StatKind::Gsadf => gsadf(series, tau0, cfg.adf),
        StatKind::Hb => hb_sup_chow(series, tau0, cfg.adf.k),
        StatKind::SadfGls => sadf_gls_with(series, tau0, cfg.adf.det, cfg.c_bar, cfg.adf.k),
        StatKind::Sbz => sbz(series, tau0, cfg.bandwidth),
        StatKind::Ssadf | StatKind::Sgsadf => {
            let r = sign_statistics(series, tau0, cfg.sign_mode, cfg.adf.k)?;
            Ok(if kind == StatKind::Ssadf { r.ssadf } else { r.sgsadf })
        }
        StatKind::Stadf | StatKind::Gstadf => {
            let p = crate::recursive::variance_profile_with(series, cfg.bandwidth)?;
            let r = crate::recursive::time_transformed_with(series, tau0, &p)?;
            Ok(if kind == StatKind::Stadf { r.stadf } else { r.gstadf })
        }
    }
}

/// Value only.
pub fn compute_value(kind: StatKind, series: &Series, cfg: &StatConfig) -> Result<f64> {
    compute(kind, series, cfg).map(|r| r.value)
}
