//! Adaptive composite 5-point Gauss–Legendre quadrature, computing the mean
//! value of a vector-valued function over an interval.
//!
//! Working with means rather than integrals keeps the estimate free of any
//! division by the interval length, so it stays accurate as `b − a → 0`.

use crate::error::{Error, Result};
use crate::model::{norm_vec, VectorValue};

/// Nodes of the 5-point rule on `[-1, 1]`, paired with their weights.
const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Default cap on the number of subintervals.
pub const SUBINTERVAL_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub mean: Vec<f64>,
    /// Weighted sum of the two-level differences of the accepted pieces.
    pub error: f64,
    pub subintervals: usize,
}

fn gauss5_mean<F>(f: &F, a: f64, b: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<VectorValue>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc: Vec<f64> = Vec::new();
    for (node, weight) in GAUSS5 {
        // Clamp so rounding never leaves [a, b].
        let x = (mid + half * node).clamp(a, b);
        let v = f(x)?;
        if acc.is_empty() {
            acc = vec![0.0; v.dim()];
        }
        for (s, c) in acc.iter_mut().zip(v.iter()) {
            *s += 0.5 * weight * c;
        }
    }
    Ok(acc)
}

/// Mean value of `f` over `[a, b]` (`a < b`), bisecting each piece until its
/// one-rule and two-rule estimates differ by at most `tol·(1 + ‖estimate‖)`.
pub fn adaptive_mean<F>(f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<MeanEstimate>
where
    F: Fn(f64) -> Result<VectorValue>,
{
    debug_assert!(a < b);
    let length = b - a;
    // Pending pieces carry the two-level difference measured on their parent.
    let mut stack = vec![(a, b, gauss5_mean(&f, a, b)?, 0.0)];
    let mut mean: Vec<f64> = vec![0.0; stack[0].2.len()];
    let mut error = 0.0;
    let mut pieces = 1usize;

    while let Some((lo, hi, coarse, _)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let weight = (hi - lo) / length;
        if !(lo < mid && mid < hi) {
            for (m, c) in mean.iter_mut().zip(&coarse) {
                *m += weight * c;
            }
            continue;
        }
        let left = gauss5_mean(&f, lo, mid)?;
        let right = gauss5_mean(&f, mid, hi)?;
        let refined: Vec<f64> = left.iter().zip(&right).map(|(l, r)| 0.5 * (l + r)).collect();
        let diff: Vec<f64> = refined.iter().zip(&coarse).map(|(r, c)| r - c).collect();
        let diff = norm_vec(&diff);
        if diff <= tol * (1.0 + norm_vec(&refined)) {
            for (m, r) in mean.iter_mut().zip(&refined) {
                *m += weight * r;
            }
            error += weight * diff;
            continue;
        }
        pieces += 1;
        if pieces > budget {
            // Partial estimate: accepted pieces plus the best pending estimates.
            let mut estimate = mean.clone();
            for (m, r) in estimate.iter_mut().zip(&refined) {
                *m += weight * r;
            }
            let mut pending_error = weight * diff;
            for (plo, phi, pc, inherited) in &stack {
                let w = (phi - plo) / length;
                for (m, c) in estimate.iter_mut().zip(pc) {
                    *m += w * c;
                }
                pending_error += w * inherited;
            }
            return Err(Error::QuadratureBudget {
                estimate,
                error_estimate: error + pending_error,
                subintervals: pieces,
            });
        }
        stack.push((mid, hi, right, diff));
        stack.push((lo, mid, left, diff));
    }
    Ok(MeanEstimate {
        mean,
        error,
        subintervals: pieces,
    })
}
