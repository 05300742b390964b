//! Gaussian Naive Bayes comparison classifier.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqio::Label;

pub const NB_SCHEMA: &str = "gpcr-nb/1";
pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub prior: f64,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

impl ClassStats {
    fn log_score(&self, x: &[f64]) -> f64 {
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        self.prior.ln()
            + x.iter()
                .zip(self.mean.iter().zip(&self.variance))
                .map(|(&v, (&mu, &var))| -0.5 * (ln_2pi + var.ln() + (v - mu) * (v - mu) / var))
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub schema: String,
    pub human: ClassStats,
    pub other: ClassStats,
}

impl NbModel {
    pub fn dim(&self) -> usize {
        self.human.mean.len()
    }

    /// Per-class log prior plus summed log Gaussian densities.
    pub fn log_scores(&self, x: &[f64]) -> Result<(f64, f64)> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok((self.human.log_score(x), self.other.log_score(x)))
    }

    pub fn stats(&self, label: Label) -> &ClassStats {
        match label {
            Label::Human => &self.human,
            Label::Other => &self.other,
        }
    }
}

pub fn nb_train<P: AsRef<[f64]>>(points: &[P], labels: &[Label]) -> Result<NbModel> {
    if points.len() != labels.len() {
        return Err(Error::Contract(format!(
            "{} points but {} labels",
            points.len(),
            labels.len()
        )));
    }
    let dim = points.first().map_or(0, |p| p.as_ref().len());
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            actual: p.as_ref().len(),
        });
    }
    let n = points.len() as f64;
    let class_stats = |label: Label| -> Result<ClassStats> {
        let rows: Vec<&[f64]> = points
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == label)
            .map(|(p, _)| p.as_ref())
            .collect();
        if rows.is_empty() {
            return Err(Error::Degenerate(format!("no training examples of class '{label}'")));
        }
        let m = rows.len() as f64;
        let mean: Vec<f64> = (0..dim).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / m).collect();
        let variance = (0..dim)
            .map(|j| {
                let var = rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / m;
                var.max(VARIANCE_FLOOR)
            })
            .collect();
        Ok(ClassStats {
            prior: m / n,
            mean,
            variance,
        })
    };
    Ok(NbModel {
        schema: NB_SCHEMA.to_string(),
        human: class_stats(Label::Human)?,
        other: class_stats(Label::Other)?,
    })
}

/// Highest posterior class; exact ties go to the positive class.
pub fn nb_predict(model: &NbModel, x: &[f64]) -> Result<Label> {
    let (human, other) = model.log_scores(x)?;
    Ok(if human >= other { Label::Human } else { Label::Other })
}

pub fn save_nb<W: Write>(model: &NbModel, mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, model)?;
    sink.write_all(b"\n").map_err(|e| Error::io("<model sink>", e))
}

pub fn load_nb<R: Read>(source: R) -> Result<NbModel> {
    let model: NbModel = serde_json::from_reader(source).map_err(|e| Error::model("$", e.to_string()))?;
    if model.schema != NB_SCHEMA {
        return Err(Error::SchemaVersion {
            found: model.schema,
            expected: NB_SCHEMA.into(),
        });
    }
    Ok(model)
}
