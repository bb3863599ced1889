//! Bubble origination, collapse and recovery dates.

mod bic_init;
mod models;
mod monitor;
mod sign_stamp;
mod stamp;
mod twostep;

pub use bic_init::{bic_init, default_n_min, BicInit};
pub use models::{
    fit_bubble_model, search_model, select_model_bic, BubbleDates, BubbleFit, BubbleModel,
    ModelCandidate, ModelSelection, DEFAULT_MIN_SEGMENT,
};
pub use monitor::{psy_monitor, training_max_monitor, MonitorReport};
pub use sign_stamp::{sign_stamp, sign_stamp_with, SignStamp, DEFAULT_SIGN_EPSILON};
pub use stamp::{
    cv_rule, default_min_duration, psy_stamp, pwy_stamp, write_episodes_csv, CvSequence, CvSource,
    Episode,
};
pub use twostep::two_step_stamp;
