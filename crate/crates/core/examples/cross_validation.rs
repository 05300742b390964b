// Stratified 10-fold cross-validation with per-fold scaling. The same
// seed always yields the same folds and the same report.
//
// ```text
// cargo run --example cross_validation
// ```

use gpcr_svm::eval::{cross_validate, SvmLearner, DEFAULT_FOLDS};
use gpcr_svm::features::{assemble_dataset, NormalizeMode};
use gpcr_svm::seqio::assign_labels;
use gpcr_svm::svm::SvmConfig;
use gpcr_svm::synthetic::generate_corpus;

pub fn run() -> gpcr_svm::Result<String> {
    let corpus = generate_corpus(50, 50, 7);
    let records = assign_labels(corpus.records, None).records;
    let dataset = assemble_dataset(&records, &corpus.topologies)?;

    let learner = SvmLearner(SvmConfig::default());
    let outcome = cross_validate(&dataset, DEFAULT_FOLDS, &learner, NormalizeMode::Minmax, 42)?;

    let mut out = outcome
        .pooled
        .to_text(&format!("Stratified {DEFAULT_FOLDS}-fold cross-validation"));
    out.push_str("\nper-fold accuracy:");
    for fold in &outcome.folds {
        out.push_str(&format!(" {:.2}", fold.accuracy));
    }
    out.push('\n');
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}
