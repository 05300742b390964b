//! Human vs non-human GPCR classification.
//!
//! The pipeline reads receptor sequences (FASTA) and TMHMM topology
//! predictions, builds 24-dimensional feature vectors (amino acid
//! composition plus N-terminal and extracellular loop lengths), trains an
//! RBF-kernel SVM with sequential minimal optimization, and evaluates it
//! with the usual binary statistics. A Gaussian Naive Bayes model serves
//! as the comparison baseline.
//!
//! ```no_run
//! use gpcr_svm::{features, seqio, svm, topology};
//!
//! let records = seqio::parse_fasta(&std::fs::read_to_string("gpcr.fasta")?)?;
//! let records = seqio::assign_labels(records, None).records;
//! let maps = topology::parse_topology(&std::fs::read_to_string("gpcr.tmhmm")?)?;
//! let dataset = features::assemble_dataset(&records, &maps)?;
//! let model = svm::fit(&dataset, &svm::SvmConfig::default(), features::NormalizeMode::Minmax)?;
//! println!("{} support vectors", model.n_support());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod baseline;
pub mod cli;
pub mod error;
pub mod eval;
pub mod features;
pub mod seqio;
pub mod svm;
pub mod synthetic;
pub mod topology;

pub use error::{Error, Result};
pub use seqio::Label;
