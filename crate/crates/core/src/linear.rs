//! Matrices `Rⁿ → Rᵐ`: the morphisms of the probe category.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Row-major `rows × cols` real matrix, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl LinearMap {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Usage("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Usage("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from nested rows, e.g. `from_rows(&[&[1.0, 1.0]])`.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Usage("ragged matrix rows".into()));
        }
        Self::new(rows.len(), cols, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Entries drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &LinearMap) -> Result<LinearMap> {
        if self.cols != first.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: first.rows,
            });
        }
        let mut data = vec![0.0; self.rows * first.cols];
        for i in 0..self.rows {
            for j in 0..first.cols {
                data[i * first.cols + j] = (0..self.cols)
                    .map(|k| self.entry(i, k) * first.entry(k, j))
                    .sum();
            }
        }
        Ok(LinearMap {
            rows: self.rows,
            cols: first.cols,
            data,
        })
    }

    /// Largest absolute entry difference; dimensions must agree.
    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm, an upper bound on the operator norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}
