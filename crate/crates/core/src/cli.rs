//! Command-line front end. `run` parses arguments, executes one command
//! and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | argument validation |
//! | 2 | I/O or malformed input file |
//! | 3 | empty result |
//! | 4 | degenerate data |
//! | 5 | model mismatch |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baseline::{nb_predict, nb_train, save_nb};
use crate::error::Error;
use crate::eval::{
    self, cross_validate, evaluate_holdout, evaluate_model, grid_search, EvaluationReport, Learner, NbLearner,
    SvmLearner,
};
use crate::features::{assemble_dataset, read_feature_table, write_arff, write_feature_table, Dataset, NormalizeMode};
use crate::seqio::{assign_labels, parse_fasta, parse_label_overrides, Label};
use crate::svm::{self, load_model, save_model, SvmConfig, SvmModel};
use crate::topology::parse_topology;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;
pub const EXIT_MODEL_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "gpcr",
    version,
    about = "Human vs non-human GPCR classification with an SMO-trained RBF SVM"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the 24-column feature table from FASTA and TMHMM files.
    ExtractFeatures {
        #[command(flatten)]
        input: InputArgs,
        /// Feature table (CSV) destination.
        #[arg(long)]
        out: PathBuf,
        /// Also write an attribute-relation (ARFF) export.
        #[arg(long)]
        arff: Option<PathBuf>,
    },
    /// Train an SVM (or the Naive Bayes baseline) and write the model file.
    Train {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        svm: SvmArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
    },
    /// Evaluate a saved model on a labeled table, or run a holdout / CV
    /// experiment from raw inputs.
    Evaluate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        svm: SvmArgs,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Stratified holdout with this many training instances.
        #[arg(long, conflicts_with = "cv")]
        holdout: Option<usize>,
        /// Stratified k-fold cross-validation.
        #[arg(long)]
        cv: Option<usize>,
        /// Add a comparison row for this baseline (holdout / CV modes).
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the structured (JSON) report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict labels for every row of a table with a saved SVM.
    Predict {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified k-fold cross-validation of the SVM.
    CrossValidate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        svm: SvmArgs,
        #[arg(long, default_value_t = eval::DEFAULT_FOLDS)]
        cv: usize,
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank (gamma, C) pairs by cross-validated accuracy.
    GridSearch {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        svm: SvmArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        gammas: Vec<f64>,
        #[arg(long = "cs", value_delimiter = ',', required = true)]
        cs: Vec<f64>,
        #[arg(long, default_value_t = eval::DEFAULT_FOLDS)]
        cv: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    #[arg(long)]
    pub fasta: Option<PathBuf>,
    /// TMHMM long-format predictions.
    #[arg(long)]
    pub topology: Option<PathBuf>,
    /// Label overrides: id<TAB>human|other per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Feature table produced by extract-features (instead of raw inputs).
    #[arg(long, conflicts_with_all = ["fasta", "topology", "labels"])]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct SvmArgs {
    #[arg(long, default_value_t = svm::DEFAULT_GAMMA)]
    pub gamma: f64,
    #[arg(long, default_value_t = svm::DEFAULT_C)]
    pub c: f64,
    #[arg(long = "kkt-tol", default_value_t = svm::DEFAULT_KKT_TOLERANCE)]
    pub kkt_tol: f64,
    #[arg(long, value_enum, default_value_t = NormalizeArg::Minmax)]
    pub normalize: NormalizeArg,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizeArg {
    None,
    Minmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Nb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Validated numeric options shared by the training commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub svm: SvmConfig,
    pub normalize: NormalizeMode,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: &SvmArgs) -> Result<Self, CliError> {
        let svm = SvmConfig {
            gamma: args.gamma,
            c: args.c,
            kkt_tolerance: args.kkt_tol,
            seed: args.seed,
            ..SvmConfig::default()
        };
        svm.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(RunConfig {
            svm,
            normalize: match args.normalize {
                NormalizeArg::None => NormalizeMode::None,
                NormalizeArg::Minmax => NormalizeMode::Minmax,
            },
            seed: args.seed,
        })
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError::new(EXIT_USAGE, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_) => EXIT_USAGE,
            Error::Io { .. }
            | Error::Fasta { .. }
            | Error::Labels { .. }
            | Error::Topology { .. }
            | Error::Table { .. }
            | Error::DuplicateId(_)
            | Error::Sequence(_) => EXIT_IO,
            Error::Degenerate(_) => EXIT_DEGENERATE,
            Error::Dimension { .. } | Error::ModelFormat { .. } | Error::SchemaVersion { .. } => EXIT_MODEL_MISMATCH,
            Error::Contract(_) | Error::Json(_) => EXIT_DEGENERATE,
        };
        CliError::new(code, e.to_string())
    }
}

type CmdResult = Result<(), CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::ExtractFeatures { input, out: path, arff } => {
            cmd_extract_features(&input, &path, arff.as_deref(), out)
        }
        Command::Train {
            input,
            svm,
            out: path,
            baseline,
        } => cmd_train(&input, &RunConfig::from_args(&svm)?, &path, baseline, out),
        Command::Evaluate {
            input,
            svm,
            model,
            holdout,
            cv,
            baseline,
            format,
            out: path,
        } => {
            let config = RunConfig::from_args(&svm)?;
            cmd_evaluate(
                &input,
                &config,
                model.as_deref(),
                holdout,
                cv,
                baseline,
                format,
                path.as_deref(),
                out,
            )
        }
        Command::Predict {
            input,
            model,
            format,
            out: path,
        } => cmd_predict(&input, &model, format, path.as_deref(), out),
        Command::CrossValidate {
            input,
            svm,
            cv,
            baseline,
            format,
            out: path,
        } => {
            let config = RunConfig::from_args(&svm)?;
            cmd_evaluate(
                &input,
                &config,
                None,
                None,
                Some(cv),
                baseline,
                format,
                path.as_deref(),
                out,
            )
        }
        Command::GridSearch {
            input,
            svm,
            gammas,
            cs,
            cv,
            format,
        } => cmd_grid_search(&input, &RunConfig::from_args(&svm)?, &gammas, &cs, cv, format, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e).into())
}

fn write_file(path: &Path, contents: &[u8]) -> CmdResult {
    fs::write(path, contents).map_err(|e| Error::io(path, e).into())
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot write output: {e}")))
}

/// Loads a dataset from a feature table or from FASTA + topology.
pub fn load_dataset(input: &InputArgs) -> Result<Dataset, CliError> {
    if let Some(table) = &input.table {
        return Ok(read_feature_table(&read(table)?)?);
    }
    let (Some(fasta), Some(topology)) = (&input.fasta, &input.topology) else {
        return Err(CliError::usage("provide --table, or both --fasta and --topology"));
    };
    let records = parse_fasta(&read(fasta)?)?;
    let overrides = match &input.labels {
        Some(p) => Some(parse_label_overrides(&read(p)?)?),
        None => None,
    };
    let labeled = assign_labels(records, overrides.as_ref());
    if labeled.unmatched_overrides > 0 {
        log::warn!("{} label override(s) matched no sequence", labeled.unmatched_overrides);
    }
    let maps = parse_topology(&read(topology)?)?;
    Ok(assemble_dataset(&labeled.records, &maps)?)
}

fn non_empty(dataset: Dataset) -> Result<Dataset, CliError> {
    if dataset.is_empty() {
        Err(CliError::new(EXIT_EMPTY, "no feature vectors retained"))
    } else {
        Ok(dataset)
    }
}

pub fn cmd_extract_features(input: &InputArgs, path: &Path, arff: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    if input.table.is_some() {
        return Err(CliError::usage("extract-features needs --fasta and --topology"));
    }
    let dataset = load_dataset(input)?;
    emit(out, &dataset.provenance.summary())?;
    let dataset = non_empty(dataset)?;
    write_file(path, write_feature_table(&dataset.vectors)?.as_bytes())?;
    if let Some(arff) = arff {
        write_file(arff, write_arff(&dataset.vectors, "gpcr").as_bytes())?;
    }
    emit(out, &format!("wrote {} rows to {}\n", dataset.len(), path.display()))
}

pub fn cmd_train(
    input: &InputArgs,
    config: &RunConfig,
    path: &Path,
    baseline: Option<Baseline>,
    out: &mut dyn Write,
) -> CmdResult {
    let dataset = non_empty(load_dataset(input)?)?;
    let mut buf = Vec::new();
    let mut text = String::new();
    match baseline {
        Some(Baseline::Nb) => {
            let scaled = match config.normalize {
                NormalizeMode::Minmax => dataset.normalized()?,
                NormalizeMode::None => dataset.clone(),
            };
            let model = nb_train(&scaled.rows(), &scaled.labels())?;
            save_nb(&model, &mut buf)?;
            let correct = scaled
                .vectors
                .iter()
                .map(|v| nb_predict(&model, &v.values).map(|p| p == v.label))
                .collect::<crate::Result<Vec<_>>>()?
                .into_iter()
                .filter(|&ok| ok)
                .count();
            let _ = writeln!(text, "model: naive bayes ({} features)", model.dim());
            let _ = writeln!(
                text,
                "training accuracy: {:.4} %",
                100.0 * correct as f64 / dataset.len() as f64
            );
        }
        None => {
            let model = svm::fit(&dataset, &config.svm, config.normalize)?;
            save_model(&model, &mut buf)?;
            let correct = dataset
                .vectors
                .iter()
                .map(|v| model.predict(&v.values).map(|p| p == v.label))
                .collect::<crate::Result<Vec<_>>>()?
                .into_iter()
                .filter(|&ok| ok)
                .count();
            let _ = writeln!(
                text,
                "model: svm (rbf, gamma = {}, C = {})",
                config.svm.gamma, config.svm.c
            );
            let _ = writeln!(text, "support vectors: {}", model.n_support());
            let _ = writeln!(
                text,
                "training accuracy: {:.4} %",
                100.0 * correct as f64 / dataset.len() as f64
            );
        }
    }
    write_file(path, &buf)?;
    let _ = writeln!(text, "wrote {}", path.display());
    emit(out, &text)
}

fn load_svm(path: &Path) -> Result<SvmModel, CliError> {
    let text = read(path)?;
    Ok(load_model(text.as_bytes())?)
}

fn check_model_dim(model: &SvmModel, dataset: &Dataset) -> CmdResult {
    match (model.dim(), dataset.dim()) {
        (Some(m), Some(d)) if m != d => Err(CliError::new(
            EXIT_MODEL_MISMATCH,
            format!("model expects {m} features but the data has {d}"),
        )),
        _ => Ok(()),
    }
}

fn comparison_table(rows: &[(&str, &EvaluationReport)]) -> String {
    let pct = |v: Option<f64>| v.map_or("UNDEFINED".to_string(), |v| format!("{:.2}", 100.0 * v));
    let mut s = format!(
        "{:<14}{:>12}{:>12}{:>12}{:>8}\n",
        "Method", "Sensitivity", "Specificity", "Accuracy", "MCC"
    );
    for (name, r) in rows {
        let _ = writeln!(
            s,
            "{:<14}{:>12}{:>12}{:>12.2}{:>8.2}",
            name,
            pct(r.sensitivity),
            pct(r.specificity),
            100.0 * r.accuracy,
            r.mcc.value
        );
    }
    s
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_evaluate(
    input: &InputArgs,
    config: &RunConfig,
    model_path: Option<&Path>,
    holdout: Option<usize>,
    cv: Option<usize>,
    baseline: Option<Baseline>,
    format: Format,
    report_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    if cv.is_some_and(|k| k < 2) {
        return Err(CliError::usage("--cv must be at least 2"));
    }
    if holdout == Some(0) {
        return Err(CliError::usage("--holdout must be positive"));
    }
    let modes = [model_path.is_some(), holdout.is_some(), cv.is_some()];
    if modes.iter().filter(|&&m| m).count() != 1 {
        return Err(CliError::usage("choose exactly one of --model, --holdout N, --cv K"));
    }
    if model_path.is_some() && baseline.is_some() {
        return Err(CliError::usage("--baseline applies to --holdout and --cv runs"));
    }

    let (primary, comparison, title, folds) = if let Some(path) = model_path {
        let model = load_svm(path)?;
        let dataset = non_empty(load_dataset(input)?)?;
        check_model_dim(&model, &dataset)?;
        let prior = model
            .training_prior
            .unwrap_or_else(|| dataset.count_label(Label::Human) as f64 / dataset.len() as f64);
        let report = evaluate_model(&model, &dataset, prior)?;
        (report, None, "Evaluation on test set".to_string(), None)
    } else {
        let dataset = non_empty(load_dataset(input)?)?;
        let svm_learner = SvmLearner(config.svm.clone());
        let run = |learner: &dyn Learner| -> Result<(EvaluationReport, Option<Vec<EvaluationReport>>), CliError> {
            if let Some(train_count) = holdout {
                Ok((
                    evaluate_holdout(&dataset, train_count, learner, config.normalize, config.seed)?,
                    None,
                ))
            } else {
                let k = cv.expect("one mode selected");
                let outcome = cross_validate(&dataset, k, learner, config.normalize, config.seed)?;
                Ok((outcome.pooled, Some(outcome.folds)))
            }
        };
        let (report, folds) = run(&svm_learner)?;
        let comparison = match baseline {
            Some(Baseline::Nb) => Some(run(&NbLearner)?.0),
            None => None,
        };
        let title = match holdout {
            Some(n) => format!("Stratified holdout ({n} train / {} test)", dataset.len() - n),
            None => format!("Stratified {}-fold cross-validation", cv.unwrap_or_default()),
        };
        (report, comparison, title, folds)
    };

    let json = {
        let mut v = serde_json::json!({ "title": title, "svm": primary });
        if let Some(nb) = &comparison {
            v["naive_bayes"] = serde_json::to_value(nb).map_err(Error::from)?;
        }
        if let Some(folds) = &folds {
            v["folds"] = serde_json::to_value(folds).map_err(Error::from)?;
        }
        serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n"
    };
    if let Some(path) = report_path {
        write_file(path, json.as_bytes())?;
    }
    match format {
        Format::Json => emit(out, &json),
        Format::Text => {
            let mut text = primary.to_text(&title);
            let mut rows = vec![("SVM", &primary)];
            if let Some(nb) = &comparison {
                rows.push(("Naive Bayes", nb));
            }
            text.push('\n');
            text.push_str(&comparison_table(&rows));
            emit(out, &text)
        }
    }
}

pub fn cmd_predict(
    input: &InputArgs,
    model_path: &Path,
    format: Format,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let model = load_svm(model_path)?;
    let dataset = non_empty(load_dataset(input)?)?;
    check_model_dim(&model, &dataset)?;
    let mut rows = Vec::with_capacity(dataset.len());
    for v in &dataset.vectors {
        let f = model.decision_raw(&v.values)?;
        let predicted = if f >= 0.0 {
            model.positive_label
        } else {
            model.positive_label.flipped()
        };
        rows.push((v.source_id.clone(), predicted, f));
    }
    let text = match format {
        Format::Text => {
            let mut s = String::from("id\tpredicted\tdecision\n");
            for (id, p, f) in &rows {
                let _ = writeln!(s, "{id}\t{p}\t{f:.6}");
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(id, p, f)| serde_json::json!({"id": id, "predicted": p, "decision": f}))
                .collect();
            serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n"
        }
    };
    match path {
        Some(p) => write_file(p, text.as_bytes()),
        None => emit(out, &text),
    }
}

pub fn cmd_grid_search(
    input: &InputArgs,
    config: &RunConfig,
    gammas: &[f64],
    cs: &[f64],
    k: usize,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    for &g in gammas {
        SvmConfig {
            gamma: g,
            ..config.svm.clone()
        }
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    }
    for &c in cs {
        SvmConfig {
            c,
            ..config.svm.clone()
        }
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    }
    if k < 2 {
        return Err(CliError::usage("--cv must be at least 2"));
    }
    let dataset = non_empty(load_dataset(input)?)?;
    let ranked = grid_search(&dataset, gammas, cs, &config.svm, k, config.normalize, config.seed)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&ranked).map_err(Error::from)? + "\n",
        Format::Text => {
            let mut s = format!("{:<6}{:>12}{:>12}{:>14}\n", "rank", "gamma", "C", "cv accuracy");
            for (i, p) in ranked.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{:<6}{:>12}{:>12}{:>12.4} %",
                    i + 1,
                    p.gamma,
                    p.c,
                    100.0 * p.accuracy
                );
            }
            let best = &ranked[0];
            let _ = writeln!(s, "best: gamma = {}, C = {}", best.gamma, best.c);
            s
        }
    };
    emit(out, &text)
}
