//! Binary soft-margin SVM with an RBF kernel, trained by SMO.

mod kernel;
mod model;
mod smo;

pub use kernel::rbf_kernel;
pub use model::{load_model, save_model, SvmModel, MODEL_SCHEMA};
pub use smo::{ExitReason, SolverOutput};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{Dataset, NormalizeMode, Normalizer};
use crate::seqio::Label;

pub const DEFAULT_GAMMA: f64 = 10.0;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_KKT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    pub gamma: f64,
    pub c: f64,
    pub kkt_tolerance: f64,
    /// Consecutive non-improving updates before giving up; `None` means
    /// ten times the training-set size.
    pub max_passes: Option<usize>,
    /// Pair selection breaks ties by lowest index, so the seed does not
    /// currently influence training.
    pub seed: u64,
    /// Kernel rows kept in the cache; `None` keeps the full Gram matrix
    /// for up to 2000 points.
    pub cache_rows: Option<usize>,
    /// Record the dual objective after every update.
    pub track_objective: bool,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            gamma: DEFAULT_GAMMA,
            c: DEFAULT_C,
            kkt_tolerance: DEFAULT_KKT_TOLERANCE,
            max_passes: None,
            seed: 42,
            cache_rows: None,
            track_objective: false,
        }
    }
}

impl SvmConfig {
    pub fn new(gamma: f64, c: f64) -> Self {
        SvmConfig {
            gamma,
            c,
            ..SvmConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be a positive finite number, got {v}"
                )))
            }
        };
        positive("gamma", self.gamma)?;
        positive("c", self.c)?;
        positive("kkt_tolerance", self.kkt_tolerance)?;
        if self.max_passes == Some(0) {
            return Err(Error::Config("max_passes must be positive".into()));
        }
        Ok(())
    }
}

/// Everything the solver knows at completion, before zero multipliers
/// are pruned from the model.
#[derive(Debug, Clone)]
pub struct TrainingReport {
    pub solver: SolverOutput,
    /// `sum_i a_i y_i` over all training points.
    pub equality_residual: f64,
    /// Largest KKT violation on the training set, in functional-margin units.
    pub max_kkt_violation: f64,
}

/// Trains on already-scaled points. The returned model carries no
/// normalizer.
pub fn train<P: AsRef<[f64]>>(points: &[P], labels: &[Label], config: &SvmConfig) -> Result<SvmModel> {
    train_with_report(points, labels, config).map(|(m, _)| m)
}

pub fn train_with_report<P: AsRef<[f64]>>(
    points: &[P],
    labels: &[Label],
    config: &SvmConfig,
) -> Result<(SvmModel, TrainingReport)> {
    config.validate()?;
    if points.len() != labels.len() {
        return Err(Error::Contract(format!(
            "{} points but {} labels",
            points.len(),
            labels.len()
        )));
    }
    let rows: Vec<&[f64]> = points.iter().map(AsRef::as_ref).collect();
    let dim = rows.first().map_or(0, |r| r.len());
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            actual: bad.len(),
        });
    }
    if rows.iter().flat_map(|r| r.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("non-finite feature value".into()));
    }
    let positives = labels.iter().filter(|l| l.is_positive()).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::Degenerate("training data must contain both classes".into()));
    }

    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let solver = smo::solve(&rows, &y, config);

    let equality_residual = solver.alphas.iter().zip(&y).map(|(a, yi)| a * yi).sum();
    let mut support_vectors = Vec::new();
    let mut dual_coeffs = Vec::new();
    for (k, &a) in solver.alphas.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(rows[k].to_vec());
            dual_coeffs.push(a * y[k]);
        }
    }
    let model = SvmModel {
        gamma: config.gamma,
        c: config.c,
        bias: solver.bias,
        positive_label: Label::Human,
        normalizer: None,
        training_prior: Some(positives as f64 / labels.len() as f64),
        support_vectors,
        dual_coeffs,
    };
    let max_kkt_violation = rows
        .iter()
        .zip(&y)
        .zip(&solver.alphas)
        .map(|((x, &yi), &a)| {
            let margin = yi * model.decision_value_scaled(x) - 1.0;
            kkt_violation(a, config.c, margin)
        })
        .fold(0.0, f64::max);
    Ok((
        model,
        TrainingReport {
            solver,
            equality_residual,
            max_kkt_violation,
        },
    ))
}

/// Violation of the optimality condition for one multiplier given its
/// functional margin `y f(x) - 1`.
pub fn kkt_violation(alpha: f64, c: f64, margin: f64) -> f64 {
    if alpha <= 0.0 {
        (-margin).max(0.0)
    } else if alpha >= c {
        margin.max(0.0)
    } else {
        margin.abs()
    }
}

/// Fits scaling on `dataset` per `mode`, trains, and stores the scaling
/// inside the model so it can be applied to raw features.
pub fn fit(dataset: &Dataset, config: &SvmConfig, mode: NormalizeMode) -> Result<SvmModel> {
    let normalizer = match mode {
        NormalizeMode::Minmax => Some(Normalizer::fit_vectors(&dataset.vectors)?),
        NormalizeMode::None => None,
    };
    let rows = match &normalizer {
        Some(n) => dataset
            .vectors
            .iter()
            .map(|v| n.apply(&v.values))
            .collect::<Result<Vec<_>>>()?,
        None => dataset.vectors.iter().map(|v| v.values.clone()).collect(),
    };
    let mut model = train(&rows, &dataset.labels(), config)?;
    model.normalizer = normalizer;
    Ok(model)
}
