use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftExponent {
    /// `sum t y_t / sum t^2`.
    pub mu_hat: f64,
    /// Same with demeaned `t`.
    pub mu_tilde: f64,
    pub eta_hat: f64,
    pub eta_tilde: f64,
}

/// `eta = -log|mu| / log T` for both drift estimators.
pub fn drift_exponent(series: &Series) -> Result<DriftExponent> {
    let v = series.values();
    let n = v.len();
    if n < 10 {
        return Err(Error::WindowTooShort(format!("T = {n}; at least 10 observations needed")));
    }
    let tbar = (n + 1) as f64 / 2.0;
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for (i, y) in v.iter().enumerate() {
        let t = (i + 1) as f64;
        let tt = t - tbar;
        a += t * y;
        b += t * t;
        c += tt * y;
        d += tt * tt;
    }
    let (mu_hat, mu_tilde) = (a / b, c / d);
    if mu_hat == 0.0 || mu_tilde == 0.0 {
        return Err(Error::degenerate("estimated drift is exactly zero"));
    }
    let lt = (n as f64).ln();
    Ok(DriftExponent {
        mu_hat,
        mu_tilde,
        eta_hat: -mu_hat.abs().ln() / lt,
        eta_tilde: -mu_tilde.abs().ln() / lt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_trend() {
        let s = Series::new((1..=50).map(|t| t as f64).collect()).unwrap();
        let d = drift_exponent(&s).unwrap();
        assert!((d.mu_hat - 1.0).abs() < 1e-14);
        assert!(d.eta_hat.abs() < 1e-14);
        assert!(d.eta_tilde.abs() < 1e-13);
        assert!(drift_exponent(&Series::new(vec![0.0; 20]).unwrap()).is_err());
    }
}
