use serde::Serialize;

use super::metrics::{as_indicator, ConfusionMatrix};
use super::report::{EvaluationReport, InstanceRecord};
use super::split::{holdout_split, stratified_folds};
use crate::baseline::{nb_predict, nb_train, NbModel};
use crate::error::{Error, Result};
use crate::features::{Dataset, NormalizeMode, Normalizer};
use crate::seqio::Label;
use crate::svm::{self, SvmConfig, SvmModel};

/// A trained binary classifier over already-scaled features.
pub trait Classifier {
    fn classify(&self, x: &[f64]) -> Result<Label>;
}

impl Classifier for SvmModel {
    fn classify(&self, x: &[f64]) -> Result<Label> {
        self.predict_scaled(x)
    }
}

impl Classifier for NbModel {
    fn classify(&self, x: &[f64]) -> Result<Label> {
        nb_predict(self, x)
    }
}

/// Something that can be fitted on a (scaled) training set.
pub trait Learner {
    fn name(&self) -> &str;
    fn fit(&self, train: &Dataset) -> Result<Box<dyn Classifier>>;
}

#[derive(Debug, Clone)]
pub struct SvmLearner(pub SvmConfig);

impl Learner for SvmLearner {
    fn name(&self) -> &str {
        "SVM"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn Classifier>> {
        let rows = train.rows();
        Ok(Box::new(svm::train(&rows, &train.labels(), &self.0)?))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NbLearner;

impl Learner for NbLearner {
    fn name(&self) -> &str {
        "Naive Bayes"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(nb_train(&train.rows(), &train.labels())?))
    }
}

fn positive_fraction(ds: &Dataset) -> f64 {
    ds.count_label(Label::Human) as f64 / ds.len() as f64
}

struct FoldResult {
    instances: Vec<InstanceRecord>,
    prior: f64,
}

/// Scales with a normalizer fitted on `train` only, fits, predicts `test`.
fn run_fold(train: &Dataset, test: &Dataset, learner: &dyn Learner, mode: NormalizeMode) -> Result<FoldResult> {
    let (train, test) = match mode {
        NormalizeMode::Minmax => {
            let n = Normalizer::fit_vectors(&train.vectors)?;
            (train.normalized_with(n.clone())?, test.normalized_with(n)?)
        }
        NormalizeMode::None => (train.clone(), test.clone()),
    };
    let model = learner.fit(&train)?;
    let instances = test
        .vectors
        .iter()
        .map(|v| {
            Ok(InstanceRecord {
                id: v.source_id.clone(),
                actual: v.label,
                predicted: model.classify(&v.values)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FoldResult {
        instances,
        prior: positive_fraction(&train),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CvOutcome {
    pub k: usize,
    pub seed: u64,
    /// All held-out predictions pooled into one report.
    pub pooled: EvaluationReport,
    pub folds: Vec<EvaluationReport>,
}

/// Stratified k-fold cross-validation with per-fold scaling.
pub fn cross_validate(
    dataset: &Dataset,
    k: usize,
    learner: &dyn Learner,
    mode: NormalizeMode,
    seed: u64,
) -> Result<CvOutcome> {
    let folds = stratified_folds(&dataset.labels(), k, seed)?;
    let mut pooled_instances = Vec::with_capacity(dataset.len());
    let mut pooled_priors = Vec::with_capacity(dataset.len());
    let mut reports = Vec::with_capacity(k);
    for (f, test_idx) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, idx)| idx.iter().copied())
            .collect();
        let fold = run_fold(&dataset.subset(&train_idx), &dataset.subset(test_idx), learner, mode)?;
        reports.push(EvaluationReport::from_instances(fold.instances.clone(), fold.prior)?);
        pooled_priors.extend(std::iter::repeat_n(fold.prior, fold.instances.len()));
        pooled_instances.extend(fold.instances);
    }
    let pooled = EvaluationReport::from_instances_with_priors(pooled_instances, &pooled_priors)?;
    Ok(CvOutcome {
        k,
        seed,
        pooled,
        folds: reports,
    })
}

/// Stratified holdout: train on `train_count` instances, report on the rest.
pub fn evaluate_holdout(
    dataset: &Dataset,
    train_count: usize,
    learner: &dyn Learner,
    mode: NormalizeMode,
    seed: u64,
) -> Result<EvaluationReport> {
    let (train, test) = holdout_split(dataset, train_count, seed)?;
    let fold = run_fold(&train, &test, learner, mode)?;
    EvaluationReport::from_instances(fold.instances, fold.prior)
}

/// Scores a trained SVM on raw features; the model applies its own scaling.
pub fn evaluate_model(model: &SvmModel, test: &Dataset, baseline_prior: f64) -> Result<EvaluationReport> {
    let instances = test
        .vectors
        .iter()
        .map(|v| {
            Ok(InstanceRecord {
                id: v.source_id.clone(),
                actual: v.label,
                predicted: model.predict(&v.values)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    EvaluationReport::from_instances(instances, baseline_prior)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub gamma: f64,
    pub c: f64,
    pub accuracy: f64,
    pub matrix: ConfusionMatrix,
}

/// Scores every (gamma, C) pair by pooled CV accuracy. The result is
/// ranked best first; ties go to smaller C, then smaller gamma.
pub fn grid_search(
    dataset: &Dataset,
    gammas: &[f64],
    cs: &[f64],
    base: &SvmConfig,
    k: usize,
    mode: NormalizeMode,
    seed: u64,
) -> Result<Vec<GridPoint>> {
    if gammas.is_empty() || cs.is_empty() {
        return Err(Error::Config("grid search needs at least one gamma and one C".into()));
    }
    let configs: Vec<SvmConfig> = gammas
        .iter()
        .flat_map(|&gamma| cs.iter().map(move |&c| (gamma, c)))
        .map(|(gamma, c)| SvmConfig {
            gamma,
            c,
            ..base.clone()
        })
        .collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    let mut points = configs
        .into_iter()
        .map(|cfg| {
            let (gamma, c) = (cfg.gamma, cfg.c);
            let cv = cross_validate(dataset, k, &SvmLearner(cfg), mode, seed)?;
            Ok(GridPoint {
                gamma,
                c,
                accuracy: cv.pooled.accuracy,
                matrix: cv.pooled.matrix,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| {
        b.accuracy
            .total_cmp(&a.accuracy)
            .then(a.c.total_cmp(&b.c))
            .then(a.gamma.total_cmp(&b.gamma))
    });
    Ok(points)
}

pub(crate) fn indicator_vectors(instances: &[InstanceRecord]) -> (Vec<f64>, Vec<f64>) {
    instances
        .iter()
        .map(|r| (as_indicator(r.actual), as_indicator(r.predicted)))
        .unzip()
}
