// Compare the SVM against a Gaussian Naive Bayes baseline on the same
// stratified holdout split.
//
// ```text
// cargo run --example naive_bayes_baseline
// ```

use gpcr_svm::baseline::{load_nb, nb_train, save_nb};
use gpcr_svm::eval::{evaluate_holdout, Learner, NbLearner, SvmLearner};
use gpcr_svm::features::{assemble_dataset, NormalizeMode};
use gpcr_svm::seqio::assign_labels;
use gpcr_svm::svm::SvmConfig;
use gpcr_svm::synthetic::generate_corpus;

pub fn run() -> gpcr_svm::Result<String> {
    let corpus = generate_corpus(40, 40, 3);
    let records = assign_labels(corpus.records, None).records;
    let dataset = assemble_dataset(&records, &corpus.topologies)?;

    let learners: [&dyn Learner; 2] = [&SvmLearner(SvmConfig::default()), &NbLearner];
    let mut out = format!(
        "{:<14}{:>12}{:>12}{:>12}{:>8}\n",
        "Method", "Sensitivity", "Specificity", "Accuracy", "MCC"
    );
    for learner in learners {
        // 60 training receptors, 20 held out, same split for both
        let r = evaluate_holdout(&dataset, 60, learner, NormalizeMode::Minmax, 42)?;
        out.push_str(&format!(
            "{:<14}{:>12.2}{:>12.2}{:>12.2}{:>8.2}\n",
            learner.name(),
            100.0 * r.sensitivity.unwrap_or(0.0),
            100.0 * r.specificity.unwrap_or(0.0),
            100.0 * r.accuracy,
            r.mcc.value
        ));
    }

    // The baseline has its own model file format.
    let scaled = dataset.normalized()?;
    let nb = nb_train(&scaled.rows(), &scaled.labels())?;
    let mut json = Vec::new();
    save_nb(&nb, &mut json)?;
    let reloaded = load_nb(json.as_slice())?;
    out.push_str(&format!(
        "\nnaive bayes model: {} features, {} bytes\n",
        reloaded.dim(),
        json.len()
    ));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}
