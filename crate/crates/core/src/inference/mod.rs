//! Inference on the explosive root and cross-series bubble relationships.

mod ci;
mod cobubble;
mod coef;
mod contagion;
mod drift;
mod migration;

pub use ci::{cauchy_ci, cauchy_half_width, cauchy_percentile, no_intercept_rho, t_ci, CiMethod, MildlyExplosiveCI};
pub use cobubble::{cobubble_stat, cobubble_test, CobubbleResult, MIN_OVERLAP};
pub use coef::{recursive_coefficients, rolling_coefficients, CoefSequence};
pub use contagion::{contagion_delay, ContagionResult, DEFAULT_MAX_DELAY};
pub use drift::{drift_exponent, DriftExponent};
pub use migration::{migration_test, MigrationResult, MIN_MIGRATION_POINTS};

use statrs::distribution::{ContinuousCDF, Normal};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// `Phi^{-1}(p)`.
pub(crate) fn normal_quantile(p: f64) -> f64 {
    std_normal().inverse_cdf(p)
}

/// `1 - Phi(z)`.
pub(crate) fn normal_upper_tail(z: f64) -> f64 {
    std_normal().sf(z)
}
