//! Sup-type and end-of-sample bubble statistics.

mod endsample;
mod gls;
mod hb;
mod profile;
mod sbz;
mod sequence;
mod sign;
mod sup;
mod union;

pub use endsample::{end_of_sample_stats, EndSampleStats, DEFAULT_END_WINDOW};
pub use gls::{sadf_gls, sadf_gls_with};
pub use hb::hb_sup_chow;
pub use profile::{
    time_transformed_tests, time_transformed_with, variance_profile, variance_profile_with,
    TimeTransformed, VarianceProfile,
};
pub use sbz::{default_bandwidth, kernel_variance, sbz, sbz_with};
pub use sequence::{SeqEntry, StatSequence, SupResult};
pub use sign::{sign_statistics, SignMode, SignStatistics};
pub use sup::{adf_sequence, bsadf_sequence, gsadf, sadf};
pub use union::{union_of_rejections, UnionDecision};

pub(crate) use endsample::end_stats_diff;
pub(crate) use sign::SignScan;
pub(crate) use sup::{check_min_window, double_scan};
