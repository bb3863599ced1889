use serde::{Deserialize, Serialize};

use super::coef::CoefSequence;
use super::normal_upper_tail;
use crate::error::{Error, Result};
use crate::ols::least_squares;

/// Fewest regression points accepted.
pub const MIN_MIGRATION_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigrationResult {
    pub beta0: f64,
    pub beta1: f64,
    pub se_beta1: f64,
    /// `-beta1 / (a log m)`; large values indicate migration.
    pub z_beta: f64,
    /// `1 - Phi(z_beta)`.
    pub p_value: f64,
    /// `T_pY - T_pX`.
    pub m: usize,
    /// Points used.
    pub n: usize,
    pub a: f64,
}

/// Regresses `theta_Y - 1` on an intercept and
/// `(theta_X - 1)(t - T_pX) / m` over `t = T_pX+1..=T_pY` and scales the
/// slope by `L(m) = a log m`.
pub fn migration_test(theta_x: &CoefSequence, theta_y: &CoefSequence, t_px: usize, t_py: usize, a: f64) -> Result<MigrationResult> {
    if t_py <= t_px {
        return Err(Error::invalid(format!("T_pY = {t_py} must exceed T_pX = {t_px}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::invalid("scale a must be positive"));
    }
    let m = t_py - t_px;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for t in t_px + 1..=t_py {
        if let (Some(x), Some(y)) = (theta_x.get(t), theta_y.get(t)) {
            xs.push((x - 1.0) * (t - t_px) as f64 / m as f64);
            ys.push(y - 1.0);
        }
    }
    let n = ys.len();
    if n < MIN_MIGRATION_POINTS {
        return Err(Error::WindowTooShort(format!(
            "{n} aligned coefficients between T_pX and T_pY; at least {MIN_MIGRATION_POINTS} needed"
        )));
    }
    let fit = least_squares(&[xs], &ys, true)?;
    let beta1 = fit.beta[0];
    let z = -beta1 / (a * (m as f64).ln());
    Ok(MigrationResult {
        beta0: fit.intercept,
        beta1,
        se_beta1: fit.se(0),
        z_beta: z,
        p_value: normal_upper_tail(z),
        m,
        n,
        a,
    })
}
