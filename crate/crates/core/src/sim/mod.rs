//! Simulators for the null and bubble processes and Monte Carlo tooling.

mod cvtable;
mod dgp;
mod study;
mod vol;

pub use cvtable::{simulate_cv_sequence, tabulate_critical_values, CvMeta, CvRecord, CvTable, GENERATOR_ID, TABLE_GRADE_REPS};
pub use dgp::{innovations, path, simulate, simulate_with, BubbleWindow, Dgp, DgpSpec, Innovations};
pub use study::{rejection_rate, size_power_study, Decision, RejectionRate, Scenario, StudyReport, TestSpec};
pub use vol::VolPath;
