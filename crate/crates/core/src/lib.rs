//! Right-tailed recursive unit-root tests for explosive behaviour, bootstrap
//! inference under nonstationary volatility, bubble date-stamping and
//! post-detection inference.

pub mod bootstrap;
pub mod datestamp;
pub mod error;
pub mod inference;
pub mod ols;
pub mod recursive;
pub mod rng;
pub mod series;
pub mod sim;
pub mod statistic;

pub use error::{Error, Result};
pub use ols::{adf_stat, fit_adf_window, gls_adjust, AdfConfig, AdfFit};
pub use recursive::{StatSequence, SupResult};
pub use series::{
    default_min_window, frac_to_index, load_series, save_series, ColumnSpec, DetSpec, Series,
    WindowSpec,
};
pub use statistic::{compute, StatConfig, StatKind, Tau0};
pub use bootstrap::{BootstrapReport, MultiplierKind};
pub use datestamp::{CvSequence, Episode};
pub use inference::{CoefSequence, MildlyExplosiveCI};
pub use sim::{CvTable, DgpSpec, VolPath};
