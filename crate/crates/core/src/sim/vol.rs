use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic volatility function `omega(s)` on `[0, 1]`; the innovation
/// scale at date `t` is `omega(t / T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VolPath {
    #[default]
    Constant,
    /// `1` before `at`, `ratio` from `at` on.
    SingleBreak { at: f64, ratio: f64 },
    /// `ratio` on `[at1, at2)`, `1` elsewhere.
    DoubleBreak { at1: f64, at2: f64, ratio: f64 },
    /// Linear from `start` at `s = 0` to `end` at `s = 1`.
    Trend { start: f64, end: f64 },
}

impl VolPath {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64, what: &str| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("volatility {what} must be positive and finite, got {x}")))
            }
        };
        let frac = |x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::invalid(format!("break fraction {x} outside [0, 1]")))
            }
        };
        match *self {
            VolPath::Constant => Ok(()),
            VolPath::SingleBreak { at, ratio } => {
                frac(at)?;
                pos(ratio, "ratio")
            }
            VolPath::DoubleBreak { at1, at2, ratio } => {
                frac(at1)?;
                frac(at2)?;
                if at1 > at2 {
                    return Err(Error::invalid("double break needs at1 <= at2"));
                }
                pos(ratio, "ratio")
            }
            VolPath::Trend { start, end } => {
                pos(start, "start")?;
                pos(end, "end")
            }
        }
    }

    pub fn omega(&self, s: f64) -> f64 {
        match *self {
            VolPath::Constant => 1.0,
            VolPath::SingleBreak { at, ratio } => {
                if s < at {
                    1.0
                } else {
                    ratio
                }
            }
            VolPath::DoubleBreak { at1, at2, ratio } => {
                if s >= at1 && s < at2 {
                    ratio
                } else {
                    1.0
                }
            }
            VolPath::Trend { start, end } => start + (end - start) * s,
        }
    }

    /// `sigma_t = omega(t / T)`, `t = 1..=T`.
    pub fn sigmas(&self, t: usize) -> Result<Vec<f64>> {
        self.validate()?;
        Ok((1..=t).map(|i| self.omega(i as f64 / t as f64)).collect())
    }
}
