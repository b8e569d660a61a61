//! Channel attacks and leakage measurement.

mod attack;
mod stats;
mod tp_view;

pub(crate) use attack::intercept_in_lab;
pub use attack::{intercept_resend, AttackConfig, AttackKind, BasisStrategy, Interception};
pub use stats::{
    analytic_abort_rate, detection_stats, eve_guesses, per_check_detection, DetectionExperiment,
    LeakageReport, TrialSummary,
};
pub use tp_view::{tp_view_analysis, BitUniformity, ProtocolView, TpViewSummary};
