//! Test-only oracles, independent of the library's solver and metrics.
#![allow(dead_code)]

use gpcr_svm::Label;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gram(points: &[Vec<f64>], gamma: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
                    (-gamma * d2).exp()
                })
                .collect()
        })
        .collect()
}

/// Dual objective `sum a - 1/2 a^T Q a` evaluated directly.
pub fn dual_objective(k: &[Vec<f64>], y: &[f64], alpha: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Euclidean projection onto `{0 <= a <= c, y^T a = 0}` by bisection on
/// the multiplier of the equality constraint.
pub fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let clip = |lambda: f64| -> Vec<f64> {
        v.iter()
            .zip(y)
            .map(|(&vi, &yi)| (vi + lambda * yi).clamp(0.0, c))
            .collect()
    };
    let residual = |a: &[f64]| a.iter().zip(y).map(|(ai, yi)| ai * yi).sum::<f64>();
    let bound = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(&clip(mid)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    clip(0.5 * (lo + hi))
}

fn largest_eigenvalue(q: &[Vec<f64>]) -> f64 {
    let n = q.len();
    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| q[i][j] * v[j]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 1.0;
        }
        lambda = norm / v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w.iter().map(|x| x / norm).collect();
    }
    lambda
}

pub struct QpSolution {
    pub alpha: Vec<f64>,
    pub objective: f64,
    pub bias: f64,
    pub iterations: usize,
}

/// Accelerated projected-gradient ascent on the dual with adaptive
/// restart, run until successive iterates move less than `tol`.
pub fn solve_dual_qp(points: &[Vec<f64>], labels: &[Label], gamma: f64, c: f64, tol: f64) -> QpSolution {
    let n = points.len();
    let k = gram(points, gamma);
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * k[i][j]).collect())
        .collect();
    let step = 1.0 / (1.01 * largest_eigenvalue(&q));
    let grad = |a: &[f64]| -> Vec<f64> {
        // gradient of the (maximized) dual: 1 - Q a
        (0..n)
            .map(|i| 1.0 - (0..n).map(|j| q[i][j] * a[j]).sum::<f64>())
            .collect()
    };

    let mut alpha = vec![0.0; n];
    let mut momentum_point = alpha.clone();
    let mut t = 1.0f64;
    let mut iterations = 0;
    for it in 0..3_000_000 {
        iterations = it + 1;
        let g = grad(&momentum_point);
        let stepped: Vec<f64> = momentum_point.iter().zip(&g).map(|(a, gi)| a + step * gi).collect();
        let next = project(&stepped, &y, c);
        let moved = next.iter().zip(&alpha).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // restart when the momentum direction stops helping
        let restart = g
            .iter()
            .zip(next.iter().zip(&alpha))
            .map(|(gi, (a, b))| gi * (a - b))
            .sum::<f64>()
            < 0.0;
        let t_next = if restart {
            1.0
        } else {
            0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt())
        };
        momentum_point = if restart {
            next.clone()
        } else {
            next.iter()
                .zip(&alpha)
                .map(|(a, b)| a + (t - 1.0) / t_next * (a - b))
                .collect()
        };
        alpha = next;
        t = t_next;
        if moved < tol && it > 10 {
            break;
        }
    }
    let objective = dual_objective(&k, &y, &alpha);
    let bias = oracle_bias(&k, &y, &alpha, c);
    QpSolution {
        alpha,
        objective,
        bias,
        iterations,
    }
}

/// Bias from margin conditions on free multipliers (midpoint of the
/// feasible interval when none are free).
fn oracle_bias(k: &[Vec<f64>], y: &[f64], alpha: &[f64], c: f64) -> f64 {
    let n = alpha.len();
    let u: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| alpha[j] * y[j] * k[j][i]).sum())
        .collect();
    let eps = 1e-7 * c;
    let free: Vec<f64> = (0..n)
        .filter(|&i| alpha[i] > eps && alpha[i] < c - eps)
        .map(|i| y[i] - u[i])
        .collect();
    if !free.is_empty() {
        return free.iter().sum::<f64>() / free.len() as f64;
    }
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for i in 0..n {
        let b = y[i] - u[i];
        let at_zero = alpha[i] <= eps;
        // a = 0 needs y f >= 1, a = C needs y f <= 1
        if (y[i] > 0.0) == at_zero {
            lo = lo.max(b);
        } else {
            hi = hi.min(b);
        }
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo,
        (false, true) => hi,
        _ => 0.0,
    }
}

pub fn oracle_decision(points: &[Vec<f64>], labels: &[Label], sol: &QpSolution, gamma: f64, x: &[f64]) -> f64 {
    points
        .iter()
        .zip(labels)
        .zip(&sol.alpha)
        .map(|((p, l), a)| {
            let d2: f64 = p.iter().zip(x).map(|(u, v)| (u - v).powi(2)).sum();
            a * l.sign() * (-gamma * d2).exp()
        })
        .sum::<f64>()
        + sol.bias
}

/// Symmetric eigenvalues by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a = m.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// One random problem of the SMO-vs-oracle corpus.
pub struct RandomProblem {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub gamma: f64,
    pub c: f64,
}

/// 108 problems: every (gamma, C) in {0.1, 1, 10}^2, twelve each, with
/// n in 4..=20 and d in 1..=5.
pub fn random_corpus(seed: u64) -> Vec<RandomProblem> {
    let grid = [0.1, 1.0, 10.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..108)
        .map(|t| {
            let n = rng.random_range(4..=20);
            let d = rng.random_range(1..=5);
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(0.0..1.0)).collect())
                .collect();
            let mut labels: Vec<Label> = (0..n)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        Label::Human
                    } else {
                        Label::Other
                    }
                })
                .collect();
            labels[0] = Label::Human;
            labels[1] = Label::Other;
            RandomProblem {
                points,
                labels,
                gamma: grid[t % 3],
                c: grid[(t / 3) % 3],
            }
        })
        .collect()
}

/// Confusion counts computed by hand, for cross-checking the library.
pub fn count_matrix(actual: &[Label], predicted: &[Label]) -> (u64, u64, u64, u64) {
    let mut m = (0, 0, 0, 0);
    for (a, p) in actual.iter().zip(predicted) {
        match (a, p) {
            (Label::Human, Label::Human) => m.0 += 1,
            (Label::Other, Label::Human) => m.1 += 1,
            (Label::Human, Label::Other) => m.2 += 1,
            (Label::Other, Label::Other) => m.3 += 1,
        }
    }
    m
}
