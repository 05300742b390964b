use std::fmt::Write as _;

use serde::Serialize;

use super::cv::indicator_vectors;
use super::metrics::{basic_metrics, error_metrics_with_priors, kappa, mcc, ConfusionMatrix, Flagged};
use crate::error::Result;
use crate::seqio::Label;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub id: String,
    pub actual: Label,
    pub predicted: Label,
}

/// Confusion matrix plus every derived statistic. Rates are fractions
/// in `[0, 1]`; `rae` and `rrse` are percentages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub matrix: ConfusionMatrix,
    pub accuracy: f64,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub mcc: Flagged,
    pub kappa: Flagged,
    pub mae: f64,
    pub rmse: f64,
    pub rae: f64,
    pub rrse: f64,
    /// Training positive-class fraction behind `rae`/`rrse` (the mean over
    /// instances when pooled across folds).
    pub baseline_prior: f64,
    pub instances: Vec<InstanceRecord>,
}

impl EvaluationReport {
    pub fn from_instances(instances: Vec<InstanceRecord>, baseline_prior: f64) -> Result<Self> {
        let priors = vec![baseline_prior; instances.len()];
        Self::from_instances_with_priors(instances, &priors)
    }

    pub fn from_instances_with_priors(instances: Vec<InstanceRecord>, priors: &[f64]) -> Result<Self> {
        let (actual, predicted) = indicator_vectors(&instances);
        let errors = error_metrics_with_priors(&actual, &predicted, priors)?;
        let mut matrix = ConfusionMatrix::default();
        for r in &instances {
            matrix.record(r.actual, r.predicted);
        }
        let basic = basic_metrics(&matrix);
        Ok(EvaluationReport {
            matrix,
            accuracy: basic.accuracy.unwrap_or(0.0) / 100.0,
            sensitivity: basic.sensitivity.map(|v| v / 100.0),
            specificity: basic.specificity.map(|v| v / 100.0),
            mcc: mcc(&matrix),
            kappa: kappa(&matrix),
            mae: errors.mae,
            rmse: errors.rmse,
            rae: errors.rae,
            rrse: errors.rrse,
            baseline_prior: priors.iter().sum::<f64>() / priors.len() as f64,
            instances,
        })
    }

    /// Human-readable summary in the classic toolkit layout.
    pub fn to_text(&self, title: &str) -> String {
        let n = self.matrix.total();
        let pct = |count: u64| 100.0 * count as f64 / n as f64;
        let opt = |v: Option<f64>| v.map_or("UNDEFINED".to_string(), |v| format!("{:.4} %", 100.0 * v));
        let flag = |f: &Flagged| {
            if f.degenerate {
                format!("{:.4} (degenerate)", f.value)
            } else {
                format!("{:.4}", f.value)
            }
        };
        let mut out = String::new();
        let _ = writeln!(out, "=== {title} ===");
        let _ = writeln!(out);
        let rows: Vec<(&str, String)> = vec![
            (
                "Correctly Classified Instances",
                format!("{:<10}{:>10.4} %", self.matrix.correct(), pct(self.matrix.correct())),
            ),
            (
                "Incorrectly Classified Instances",
                format!(
                    "{:<10}{:>10.4} %",
                    self.matrix.incorrect(),
                    pct(self.matrix.incorrect())
                ),
            ),
            ("Kappa statistic", flag(&self.kappa)),
            ("Mean absolute error", format!("{:.4}", self.mae)),
            ("Root mean squared error", format!("{:.4}", self.rmse)),
            ("Relative absolute error", format!("{:.4} %", self.rae)),
            ("Root relative squared error", format!("{:.4} %", self.rrse)),
            ("Total Number of Instances", n.to_string()),
        ];
        for (name, value) in rows {
            let _ = writeln!(out, "{name:<36}{value}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<36}{}", "Sensitivity", opt(self.sensitivity));
        let _ = writeln!(out, "{:<36}{}", "Specificity", opt(self.specificity));
        let _ = writeln!(out, "{:<36}{:.4} %", "Accuracy", 100.0 * self.accuracy);
        let _ = writeln!(out, "{:<36}{}", "MCC", flag(&self.mcc));
        let _ = writeln!(out, "{:<36}{:.4}", "Baseline prior (rae/rrse)", self.baseline_prior);
        let _ = writeln!(out);
        let _ = writeln!(out, "=== Confusion Matrix ===");
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>6}{:>6}   <-- classified as", "human", "other");
        let _ = writeln!(out, "{:>6}{:>6} |  human", self.matrix.tp, self.matrix.fn_);
        let _ = writeln!(out, "{:>6}{:>6} |  other", self.matrix.fp, self.matrix.tn);
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
