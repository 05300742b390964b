//! Sequential minimal optimization for the soft-margin dual
//!
//! ```text
//! max  W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
//! s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0
//! ```
//!
//! The solver keeps the gradient `G = Q a - 1` of the equivalent
//! minimization problem, where `Q_ij = y_i y_j K_ij`. With `u` the
//! bias-free decision value, the prediction error is `E_i = u_i - y_i =
//! y_i G_i`. Each step takes the maximal violating pair: the first index
//! is the worst violator that may move up, the second maximizes the error
//! difference among indices that may move down.

use super::kernel::KernelCache;
use super::SvmConfig;

/// Curvature floor for pairs whose kernel rows coincide.
const TAU: f64 = 1e-12;
const HARD_ITERATION_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitReason {
    Converged,
    /// `max_passes` consecutive updates without increasing the objective.
    Stalled,
    IterationCap,
}

#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub objective: f64,
    pub exit: ExitReason,
    /// Final `m - M` optimality gap.
    pub gap: f64,
    /// Dual objective after every pair update, when tracking is enabled.
    pub objective_history: Option<Vec<f64>>,
}

pub(crate) fn solve(points: &[&[f64]], y: &[f64], config: &SvmConfig) -> SolverOutput {
    let n = points.len();
    let c = config.c;
    let capacity = config.cache_rows.unwrap_or(if n <= 2000 { n } else { 2000 });
    let mut cache = KernelCache::new(points, config.gamma, capacity);

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut objective = 0.0;
    let mut history = config.track_objective.then(Vec::new);
    let stall_limit = config.max_passes.unwrap_or(10 * n).max(1);
    let mut stalled = 0;
    let mut iterations = 0;

    let exit = loop {
        let (i, j, gap) = match select_pair(&alpha, &grad, y, c) {
            Some(sel) => sel,
            None => break ExitReason::Converged,
        };
        if gap <= config.kkt_tolerance {
            break ExitReason::Converged;
        }
        if iterations >= HARD_ITERATION_CAP {
            break ExitReason::IterationCap;
        }
        iterations += 1;

        let (ki, kj) = cache.row_pair(i, j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (new_i, new_j) = solve_pair(old_i, old_j, y[i], y[j], grad[i], grad[j], ki[i], kj[j], ki[j], c);
        alpha[i] = new_i;
        alpha[j] = new_j;

        let di = (new_i - old_i) * y[i];
        let dj = (new_j - old_j) * y[j];
        for (k, g) in grad.iter_mut().enumerate() {
            *g += y[k] * (ki[k] * di + kj[k] * dj);
        }

        let next = dual_objective_from_grad(&alpha, &grad);
        if next > objective {
            stalled = 0;
        } else {
            stalled += 1;
        }
        if let Some(h) = history.as_mut() {
            debug_assert!(
                next >= objective - 1e-12 * (1.0 + objective.abs()),
                "dual objective decreased: {objective} -> {next}"
            );
            h.push(next);
        }
        objective = next;
        if stalled >= stall_limit {
            break ExitReason::Stalled;
        }
    };

    let gap = select_pair(&alpha, &grad, y, c).map_or(0.0, |(_, _, g)| g);
    let bias = compute_bias(&alpha, &grad, y, c);
    SolverOutput {
        alphas: alpha,
        bias,
        iterations,
        objective,
        exit,
        gap: gap.max(0.0),
        objective_history: history,
    }
}

fn in_up(a: f64, y: f64, c: f64) -> bool {
    (y > 0.0 && a < c) || (y < 0.0 && a > 0.0)
}

fn in_low(a: f64, y: f64, c: f64) -> bool {
    (y > 0.0 && a > 0.0) || (y < 0.0 && a < c)
}

/// Maximal violating pair `(i, j, m - M)`; ties go to the lowest index.
fn select_pair(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> Option<(usize, usize, f64)> {
    let mut best_up: Option<(usize, f64)> = None;
    let mut best_low: Option<(usize, f64)> = None;
    for k in 0..alpha.len() {
        let score = -y[k] * grad[k];
        if in_up(alpha[k], y[k], c) && best_up.is_none_or(|(_, s)| score > s) {
            best_up = Some((k, score));
        }
        if in_low(alpha[k], y[k], c) && best_low.is_none_or(|(_, s)| score < s) {
            best_low = Some((k, score));
        }
    }
    let ((i, m), (j, big_m)) = (best_up?, best_low?);
    Some((i, j, m - big_m))
}

/// Analytic optimum of the two-variable subproblem, clipped to the box.
#[allow(clippy::too_many_arguments)]
fn solve_pair(
    ai: f64,
    aj: f64,
    yi: f64,
    yj: f64,
    gi: f64,
    gj: f64,
    kii: f64,
    kjj: f64,
    kij: f64,
    c: f64,
) -> (f64, f64) {
    let s = yi * yj;
    let (lo, hi) = if s < 0.0 {
        ((aj - ai).max(0.0), (c + aj - ai).min(c))
    } else {
        ((ai + aj - c).max(0.0), (ai + aj).min(c))
    };
    let eta = (kii + kjj - 2.0 * kij).max(TAU);
    let (ei, ej) = (yi * gi, yj * gj);
    let new_j = (aj + yj * (ei - ej) / eta).clamp(lo, hi);
    let new_i = snap(ai + s * (aj - new_j), c);
    (new_i, snap(new_j, c))
}

fn snap(a: f64, c: f64) -> f64 {
    let eps = 1e-12 * c;
    if a <= eps {
        0.0
    } else if a >= c - eps {
        c
    } else {
        a
    }
}

/// `W(a) = -1/2 sum_i a_i (G_i - 1)` since `G = Q a - 1`.
fn dual_objective_from_grad(alpha: &[f64], grad: &[f64]) -> f64 {
    -0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>()
}

/// Bias from the margin conditions: the mean over free multipliers, or
/// the midpoint of the feasible interval when every multiplier is at a
/// bound.
fn compute_bias(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    for k in 0..alpha.len() {
        // b = -E_k for a free multiplier
        let value = -y[k] * grad[k];
        if alpha[k] > 0.0 && alpha[k] < c {
            free_sum += value;
            free_count += 1;
        }
        if in_up(alpha[k], y[k], c) {
            lower = lower.max(value);
        }
        if in_low(alpha[k], y[k], c) {
            upper = upper.min(value);
        }
    }
    if free_count > 0 {
        free_sum / free_count as f64
    } else if lower.is_finite() && upper.is_finite() {
        0.5 * (lower + upper)
    } else if lower.is_finite() {
        lower
    } else if upper.is_finite() {
        upper
    } else {
        0.0
    }
}
