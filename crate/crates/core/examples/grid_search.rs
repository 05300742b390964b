// Rank (gamma, C) pairs by cross-validated accuracy. Ties go to the
// smaller C, then the smaller gamma.
//
// ```text
// cargo run --example grid_search
// ```

use gpcr_svm::eval::grid_search;
use gpcr_svm::features::{assemble_dataset, NormalizeMode};
use gpcr_svm::seqio::assign_labels;
use gpcr_svm::svm::SvmConfig;
use gpcr_svm::synthetic::generate_corpus;

pub fn run() -> gpcr_svm::Result<String> {
    let corpus = generate_corpus(25, 25, 5);
    let records = assign_labels(corpus.records, None).records;
    let dataset = assemble_dataset(&records, &corpus.topologies)?;

    let gammas = [0.1, 1.0, 10.0, 100.0];
    let cs = [0.1, 1.0, 10.0];
    let ranked = grid_search(
        &dataset,
        &gammas,
        &cs,
        &SvmConfig::default(),
        5,
        NormalizeMode::Minmax,
        42,
    )?;

    let mut out = format!("{:<6}{:>8}{:>8}{:>14}\n", "rank", "gamma", "C", "cv accuracy");
    for (i, p) in ranked.iter().enumerate() {
        out.push_str(&format!(
            "{:<6}{:>8}{:>8}{:>12.2} %\n",
            i + 1,
            p.gamma,
            p.c,
            100.0 * p.accuracy
        ));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}
