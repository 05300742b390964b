use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqio::Label;

/// Binary confusion counts with `Human` as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn correct(&self) -> u64 {
        self.tp + self.tn
    }

    pub fn incorrect(&self) -> u64 {
        self.fp + self.fn_
    }

    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual.is_positive(), predicted.is_positive()) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    /// Same predictions scored with the other class treated as positive.
    pub fn swapped(&self) -> Self {
        ConfusionMatrix {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }
}

pub fn confusion(actuals: &[Label], predictions: &[Label]) -> Result<ConfusionMatrix> {
    if actuals.len() != predictions.len() {
        return Err(Error::Contract(format!(
            "{} actual labels but {} predictions",
            actuals.len(),
            predictions.len()
        )));
    }
    if actuals.is_empty() {
        return Err(Error::Contract("no instances to evaluate".into()));
    }
    let mut m = ConfusionMatrix::default();
    for (&a, &p) in actuals.iter().zip(predictions) {
        m.record(a, p);
    }
    Ok(m)
}

/// Percentages; `None` marks a metric whose denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasicMetrics {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

fn percent(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

pub fn basic_metrics(m: &ConfusionMatrix) -> BasicMetrics {
    BasicMetrics {
        accuracy: percent(m.correct(), m.total()),
        sensitivity: percent(m.tp, m.tp + m.fn_),
        specificity: percent(m.tn, m.tn + m.fp),
    }
}

/// A statistic that falls back to 0 when its formula degenerates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flagged {
    pub value: f64,
    pub degenerate: bool,
}

impl Flagged {
    fn ok(value: f64) -> Self {
        Flagged {
            value,
            degenerate: false,
        }
    }

    fn degenerate() -> Self {
        Flagged {
            value: 0.0,
            degenerate: true,
        }
    }
}

/// Matthews correlation coefficient.
pub fn mcc(m: &ConfusionMatrix) -> Flagged {
    let (tp, fp, fn_, tn) = (m.tp as f64, m.fp as f64, m.fn_ as f64, m.tn as f64);
    let factors = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    if factors.contains(&0.0) {
        return Flagged::degenerate();
    }
    let den = factors.iter().product::<f64>().sqrt();
    Flagged::ok((tp * tn - fp * fn_) / den)
}

/// Cohen's kappa.
pub fn kappa(m: &ConfusionMatrix) -> Flagged {
    let n = m.total() as f64;
    if n == 0.0 {
        return Flagged::degenerate();
    }
    let observed = m.correct() as f64 / n;
    let pred_pos = (m.tp + m.fp) as f64;
    let act_pos = (m.tp + m.fn_) as f64;
    let pred_neg = (m.fn_ + m.tn) as f64;
    let act_neg = (m.fp + m.tn) as f64;
    let expected = (pred_pos * act_pos + pred_neg * act_neg) / (n * n);
    if expected >= 1.0 {
        return Flagged::degenerate();
    }
    Flagged::ok((observed - expected) / (1.0 - expected))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub mae: f64,
    pub rmse: f64,
    /// Percent, relative to the constant-prior predictor.
    pub rae: f64,
    /// Percent, relative to the constant-prior predictor.
    pub rrse: f64,
}

/// Error metrics for 0/1 actuals, with the training positive-class
/// fraction as the constant baseline prediction.
pub fn error_metrics(actuals: &[f64], predictions: &[f64], baseline_prior: f64) -> Result<ErrorMetrics> {
    let priors = vec![baseline_prior; actuals.len()];
    error_metrics_with_priors(actuals, predictions, &priors)
}

/// As [`error_metrics`], with a baseline prior per instance (pooled
/// cross-validation, where each fold has its own training prior).
pub fn error_metrics_with_priors(actuals: &[f64], predictions: &[f64], priors: &[f64]) -> Result<ErrorMetrics> {
    if actuals.len() != predictions.len() || actuals.len() != priors.len() {
        return Err(Error::Contract("error metric inputs differ in length".into()));
    }
    if actuals.is_empty() {
        return Err(Error::Contract("no instances to evaluate".into()));
    }
    if let Some(p) = priors.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::Degenerate(format!("baseline prior {p} is outside (0, 1)")));
    }
    let n = actuals.len() as f64;
    let (mut abs, mut sq, mut base_abs, mut base_sq) = (0.0, 0.0, 0.0, 0.0);
    for ((&a, &p), &prior) in actuals.iter().zip(predictions).zip(priors) {
        abs += (p - a).abs();
        sq += (p - a) * (p - a);
        base_abs += (prior - a).abs();
        base_sq += (prior - a) * (prior - a);
    }
    Ok(ErrorMetrics {
        mae: abs / n,
        rmse: (sq / n).sqrt(),
        rae: 100.0 * abs / base_abs,
        rrse: 100.0 * (sq / base_sq).sqrt(),
    })
}

pub fn as_indicator(label: Label) -> f64 {
    if label.is_positive() {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::*;

    const PAPER: ConfusionMatrix = ConfusionMatrix {
        tp: 14,
        fp: 2,
        fn_: 0,
        tn: 20,
    };

    #[test]
    fn confusion_counts() {
        let m = confusion(&[Human; 5], &[Human; 5]).unwrap();
        assert_eq!(m, ConfusionMatrix::new(5, 0, 0, 0));
        let m = confusion(&[Human; 3], &[Other; 3]).unwrap();
        assert_eq!(m, ConfusionMatrix::new(0, 0, 3, 0));
        assert!(confusion(&[Human], &[]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn paper_matrix_statistics() {
        let b = basic_metrics(&PAPER);
        assert!((b.accuracy.unwrap() - 94.4444).abs() < 5e-5);
        assert_eq!(b.sensitivity, Some(100.0));
        assert!((b.specificity.unwrap() - 90.9091).abs() < 5e-5);
        let mcc = mcc(&PAPER);
        assert!(!mcc.degenerate);
        assert!((mcc.value - 280.0 / (16.0f64 * 14.0 * 22.0 * 20.0).sqrt()).abs() < 1e-15);
        assert_eq!(format!("{:.2}", mcc.value), "0.89");
        assert!((kappa(&PAPER).value - 0.8861).abs() < 5e-5);
    }

    #[test]
    fn undefined_and_degenerate() {
        let b = basic_metrics(&ConfusionMatrix::new(0, 0, 0, 10));
        assert_eq!(b.sensitivity, None);
        assert_eq!(b.specificity, Some(100.0));
        assert!(mcc(&ConfusionMatrix::new(0, 0, 0, 10)).degenerate);
        assert_eq!(
            kappa(&ConfusionMatrix::new(0, 0, 0, 10)),
            Flagged {
                value: 0.0,
                degenerate: true
            }
        );
    }

    #[test]
    fn extremes() {
        let perfect = ConfusionMatrix::new(7, 0, 0, 9);
        let b = basic_metrics(&perfect);
        assert_eq!(
            (b.accuracy, b.sensitivity, b.specificity),
            (Some(100.0), Some(100.0), Some(100.0))
        );
        assert_eq!(mcc(&perfect).value, 1.0);
        assert_eq!(kappa(&perfect).value, 1.0);
        assert_eq!(mcc(&ConfusionMatrix::new(0, 4, 4, 0)).value, -1.0);
        // constant predictions on a balanced set
        assert_eq!(kappa(&ConfusionMatrix::new(5, 5, 0, 0)).value, 0.0);
    }

    #[test]
    fn error_metric_examples() {
        let actual: Vec<f64> = (0..36).map(|i| if i < 14 { 1.0 } else { 0.0 }).collect();
        let mut pred = actual.clone();
        pred[20] = 1.0;
        pred[21] = 1.0;
        let e = error_metrics(&actual, &pred, 90.0 / 188.0).unwrap();
        assert!((e.mae - 0.0556).abs() < 5e-5);
        assert!((e.rmse - 0.2357).abs() < 5e-5);
        assert!((e.rae - 11.214).abs() < 0.5);

        let zero = error_metrics(&actual, &actual, 0.4).unwrap();
        assert_eq!((zero.mae, zero.rmse, zero.rae, zero.rrse), (0.0, 0.0, 0.0, 0.0));

        assert!(error_metrics(&actual, &actual, 0.0).is_err());
        assert!(error_metrics(&actual, &actual, 1.0).is_err());
    }
}
