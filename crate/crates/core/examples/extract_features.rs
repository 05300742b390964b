// Build the 24-column feature table from FASTA and TMHMM text.
//
// ```text
// cargo run --example extract_features
// ```

use gpcr_svm::features::{assemble_dataset, feature_names, write_arff, write_feature_table};
use gpcr_svm::seqio::{assign_labels, parse_fasta};
use gpcr_svm::synthetic::generate_corpus;
use gpcr_svm::topology::parse_topology;

pub fn run() -> gpcr_svm::Result<String> {
    // Any FASTA + TMHMM long-format pair works; a small synthetic one keeps
    // the example self-contained.
    let corpus = generate_corpus(3, 3, 1);
    let fasta = corpus.fasta();
    let tmhmm = corpus.tmhmm();

    let records = parse_fasta(&fasta)?;
    let labeled = assign_labels(records, None).records; // *_HUMAN ids are human
    let maps = parse_topology(&tmhmm)?;
    let dataset = assemble_dataset(&labeled, &maps)?;

    let mut out = String::new();
    out.push_str(&dataset.provenance.summary());
    out.push_str(&format!("features: {}\n\n", feature_names().join(" ")));
    out.push_str(&write_feature_table(&dataset.vectors)?);
    let arff = write_arff(&dataset.vectors, "gpcr");
    out.push_str(&format!(
        "\nARFF header:\n{}\n",
        arff.lines().take(3).collect::<Vec<_>>().join("\n")
    ));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}
