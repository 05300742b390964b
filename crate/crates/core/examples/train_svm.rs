// Train the RBF SVM with SMO, save the model as JSON, reload it and
// classify new receptors.
//
// ```text
// cargo run --example train_svm
// ```

use gpcr_svm::features::{assemble_dataset, NormalizeMode};
use gpcr_svm::seqio::assign_labels;
use gpcr_svm::svm::{fit, load_model, save_model, SvmConfig};
use gpcr_svm::synthetic::generate_corpus;

pub fn run() -> gpcr_svm::Result<String> {
    let train = generate_corpus(30, 30, 11);
    let records = assign_labels(train.records, None).records;
    let dataset = assemble_dataset(&records, &train.topologies)?;

    // gamma = 10, C = 1, KKT tolerance 1e-3; min-max scaling is fitted on
    // the training set and stored inside the model.
    let config = SvmConfig::default();
    let model = fit(&dataset, &config, NormalizeMode::Minmax)?;

    let mut json = Vec::new();
    save_model(&model, &mut json)?;
    let reloaded = load_model(json.as_slice())?;

    let mut out = format!(
        "trained on {} receptors: {} support vectors, bias {:.4}, model file {} bytes\n",
        dataset.len(),
        model.n_support(),
        model.bias,
        json.len()
    );

    let fresh = generate_corpus(4, 4, 12);
    let fresh = assemble_dataset(&assign_labels(fresh.records, None).records, &fresh.topologies)?;
    for v in &fresh.vectors {
        let f = reloaded.decision_raw(&v.values)?;
        out.push_str(&format!(
            "{:<16} actual {:<6} predicted {:<6} decision {:+.4}\n",
            v.source_id,
            v.label,
            reloaded.predict(&v.values)?,
            f
        ));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}
