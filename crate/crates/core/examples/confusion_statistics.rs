// Every statistic the evaluator reports, computed from a known confusion
// matrix: 14 true positives, 2 false positives, 0 false negatives and
// 20 true negatives.
//
// ```text
// cargo run --example confusion_statistics
// ```

use gpcr_svm::eval::{basic_metrics, kappa, mcc, ConfusionMatrix, EvaluationReport, InstanceRecord};
use gpcr_svm::Label;

pub fn run() -> gpcr_svm::Result<String> {
    let m = ConfusionMatrix::new(14, 2, 0, 20);
    let b = basic_metrics(&m);
    let mut out = format!(
        "accuracy {:.4} %, sensitivity {:.4} %, specificity {:.4} %, MCC {:.4}, kappa {:.4}\n\n",
        b.accuracy.unwrap_or(0.0),
        b.sensitivity.unwrap_or(0.0),
        b.specificity.unwrap_or(0.0),
        mcc(&m).value,
        kappa(&m).value
    );

    // The full report works from per-instance predictions.
    let instances: Vec<InstanceRecord> = (0..36)
        .map(|i| InstanceRecord {
            id: format!("R{i:02}"),
            actual: if i < 14 { Label::Human } else { Label::Other },
            predicted: if i < 16 { Label::Human } else { Label::Other },
        })
        .collect();
    // rae and rrse compare against always predicting the training prior
    let report = EvaluationReport::from_instances(instances, 90.0 / 188.0)?;
    out.push_str(&report.to_text("Evaluation on test set"));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}
