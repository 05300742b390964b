use std::collections::HashMap;

use crate::error::{Error, Result};

/// `exp(-gamma * ||x - y||^2)`.
pub fn rbf_kernel(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(rbf_unchecked(x, y, gamma))
}

#[inline]
pub(crate) fn rbf_unchecked(x: &[f64], y: &[f64], gamma: f64) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

/// Kernel rows over the training set, kept in a least-recently-used cache
/// holding at most `capacity` rows.
pub(crate) struct KernelCache<'a> {
    points: &'a [&'a [f64]],
    gamma: f64,
    capacity: usize,
    rows: HashMap<usize, (u64, Vec<f64>)>,
    tick: u64,
}

impl<'a> KernelCache<'a> {
    pub fn new(points: &'a [&'a [f64]], gamma: f64, capacity: usize) -> Self {
        KernelCache {
            points,
            gamma,
            capacity: capacity.max(2),
            rows: HashMap::new(),
            tick: 0,
        }
    }

    pub fn row(&mut self, i: usize) -> &[f64] {
        self.tick += 1;
        let tick = self.tick;
        if !self.rows.contains_key(&i) {
            if self.rows.len() >= self.capacity {
                let oldest = self
                    .rows
                    .iter()
                    .min_by_key(|(_, (t, _))| *t)
                    .map(|(&k, _)| k)
                    .expect("cache is non-empty");
                self.rows.remove(&oldest);
            }
            let xi = self.points[i];
            let row = self.points.iter().map(|xj| rbf_unchecked(xi, xj, self.gamma)).collect();
            self.rows.insert(i, (tick, row));
        }
        let entry = self.rows.get_mut(&i).expect("row just inserted");
        entry.0 = tick;
        &entry.1
    }

    /// Two rows at once; both stay resident.
    pub fn row_pair(&mut self, i: usize, j: usize) -> (Vec<f64>, Vec<f64>) {
        let ri = self.row(i).to_vec();
        let rj = self.row(j).to_vec();
        (ri, rj)
    }
}
