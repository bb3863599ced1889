use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// External multiplier distribution for the wild bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    #[default]
    Gaussian,
    Rademacher,
    /// `u / sqrt(2) + (v^2 - 1) / 2`, `u, v` independent N(0, 1): mean 0,
    /// variance 1, third moment 1.
    Skewed,
}

impl MultiplierKind {
    #[inline]
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            MultiplierKind::Gaussian => rng.sample(StandardNormal),
            MultiplierKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            MultiplierKind::Skewed => {
                let u: f64 = rng.sample(StandardNormal);
                let v: f64 = rng.sample(StandardNormal);
                u / std::f64::consts::SQRT_2 + (v * v - 1.0) / 2.0
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MultiplierKind::Gaussian => "gaussian",
            MultiplierKind::Rademacher => "rademacher",
            MultiplierKind::Skewed => "skewed",
        }
    }
}

impl fmt::Display for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MultiplierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(MultiplierKind::Gaussian),
            "rademacher" => Ok(MultiplierKind::Rademacher),
            "skewed" => Ok(MultiplierKind::Skewed),
            _ => Err(Error::invalid(format!("unknown multiplier {s:?}"))),
        }
    }
}
