use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::Dataset;
use crate::seqio::Label;

const CLASSES: [Label; 2] = [Label::Human, Label::Other];

fn shuffled_class_indices(labels: &[Label], seed: u64) -> [Vec<usize>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CLASSES.map(|class| {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        idx
    })
}

/// Stratified train/test split. Per-class train counts follow the class
/// proportions, with the rounding remainder going to the class with the
/// largest fractional share.
pub fn holdout_indices(labels: &[Label], train_count: usize, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = labels.len();
    if train_count == 0 || train_count >= n {
        return Err(Error::Config(format!(
            "train count must lie in 1..{n}, got {train_count}"
        )));
    }
    let classes = shuffled_class_indices(labels, seed);
    let quotas: Vec<f64> = classes
        .iter()
        .map(|c| c.len() as f64 * train_count as f64 / n as f64)
        .collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut remainder = train_count - counts.iter().sum::<usize>();
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &c in order.iter().cycle() {
        if remainder == 0 {
            break;
        }
        if counts[c] < classes[c].len() {
            counts[c] += 1;
            remainder -= 1;
        }
    }
    for (c, class) in classes.iter().enumerate() {
        if counts[c] == 0 || counts[c] == class.len() {
            return Err(Error::Degenerate(format!(
                "class '{}' cannot contribute to both parts ({} instances, {} for training)",
                CLASSES[c],
                class.len(),
                counts[c]
            )));
        }
    }
    let mut train = Vec::with_capacity(train_count);
    let mut test = Vec::with_capacity(n - train_count);
    for (c, class) in classes.iter().enumerate() {
        train.extend_from_slice(&class[..counts[c]]);
        test.extend_from_slice(&class[counts[c]..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn holdout_split(dataset: &Dataset, train_count: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    let (train, test) = holdout_indices(&dataset.labels(), train_count, seed)?;
    Ok((dataset.subset(&train), dataset.subset(&test)))
}

/// Stratified k-fold partition: each class is shuffled and dealt
/// round-robin, continuing across classes so fold sizes differ by at
/// most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Config(format!("k must be at least 2, got {k}")));
    }
    if k > labels.len() {
        return Err(Error::Config(format!(
            "k = {k} exceeds the {} available instances",
            labels.len()
        )));
    }
    let classes = shuffled_class_indices(labels, seed);
    // every training part must still see both classes
    for (c, class) in classes.iter().enumerate() {
        if class.len() < 2 {
            return Err(Error::Degenerate(format!(
                "class '{}' has {} instance(s); cross-validation needs at least 2",
                CLASSES[c],
                class.len()
            )));
        }
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in &classes {
        for &i in class {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}
