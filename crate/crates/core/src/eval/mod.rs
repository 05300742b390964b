//! Confusion matrices, the reported statistics, holdout and stratified
//! k-fold evaluation.

mod cv;
mod metrics;
mod report;
mod split;

pub use cv::{
    cross_validate, evaluate_holdout, evaluate_model, grid_search, Classifier, CvOutcome, GridPoint, Learner,
    NbLearner, SvmLearner,
};
pub use metrics::{
    as_indicator, basic_metrics, confusion, error_metrics, error_metrics_with_priors, kappa, mcc, BasicMetrics,
    ConfusionMatrix, ErrorMetrics, Flagged,
};
pub use report::{EvaluationReport, InstanceRecord};
pub use split::{holdout_indices, holdout_split, stratified_folds};

pub const DEFAULT_FOLDS: usize = 10;
