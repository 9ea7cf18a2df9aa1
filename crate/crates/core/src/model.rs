//! Value types shared by every module: intervals, vectors in Rⁿ, sampling
//! grids, norms and the tolerance configuration.

use std::ops::Deref;

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::SquareFn;

/// A nondegenerate compact interval `[lo, hi]` with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Usage(format!(
                "interval endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo >= hi {
            return Err(Error::Usage(format!(
                "interval must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Returns `Ok(())` when `x` is in the interval, an out-of-domain error otherwise.
    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

/// An element of Rⁿ (n ≥ 1) with finite components.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct VectorValue(Vec<f64>);

impl VectorValue {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Usage("vector must have at least one component".into()));
        }
        if let Some(bad) = components.iter().find(|c| !c.is_finite()) {
            return Err(Error::Usage(format!("vector component {bad} is not finite")));
        }
        Ok(Self(components))
    }

    /// Wraps components already known to be finite and nonempty.
    pub(crate) fn from_raw(components: Vec<f64>) -> Self {
        debug_assert!(!components.is_empty());
        Self(components)
    }

    pub fn scalar(value: f64) -> Self {
        Self(vec![value])
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm_vec(self)
    }

    /// Euclidean distance to `other`; dimensions must agree.
    pub fn distance(&self, other: &VectorValue) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: f64) -> VectorValue {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn sub(&self, other: &VectorValue) -> VectorValue {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &VectorValue) -> VectorValue {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Deref for VectorValue {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Euclidean norm on Rⁿ.
pub fn norm_vec(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Strictly increasing sample points covering an interval, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    interval: Interval,
    points: Vec<f64>,
}

impl Grid {
    /// Validates arbitrary sample points against `interval`.
    pub fn from_points(interval: Interval, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Usage("a grid needs at least two points".into()));
        }
        if points[0] != interval.lo() || points[points.len() - 1] != interval.hi() {
            return Err(Error::Usage("grid must include both interval endpoints".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage("grid points must be strictly increasing".into()));
        }
        Ok(Self { interval, points })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest gap between consecutive points.
    pub fn spacing(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Inserts the midpoint of every cell. The result contains every original point.
    pub fn refine(&self) -> Grid {
        let mut points = Vec::with_capacity(2 * self.points.len() - 1);
        for w in self.points.windows(2) {
            points.push(w[0]);
            let mid = 0.5 * (w[0] + w[1]);
            if mid > w[0] && mid < w[1] {
                points.push(mid);
            }
        }
        points.push(self.interval.hi());
        Grid {
            interval: self.interval,
            points,
        }
    }
}

/// `n` uniformly spaced points on `iv`, both endpoints exact.
pub fn make_grid(iv: Interval, n: usize) -> Result<Grid> {
    if n < 2 {
        return Err(Error::Usage(format!("grid size must be at least 2, got {n}")));
    }
    let step = iv.width() / (n - 1) as f64;
    let mut points: Vec<f64> = (0..n).map(|i| iv.lo() + i as f64 * step).collect();
    points[n - 1] = iv.hi();
    Grid::from_points(iv, points)
}

/// Tolerances threaded explicitly through every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual_tol: f64,
    pub quadrature_tol: f64,
    pub path_detect_tol: f64,
    pub grid_default: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            quadrature_tol: 1e-10,
            path_detect_tol: 1e-6,
            grid_default: 201,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let reals = [
            ("residual_tol", self.residual_tol),
            ("quadrature_tol", self.quadrature_tol),
            ("path_detect_tol", self.path_detect_tol),
        ];
        for (name, value) in reals {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Usage(format!("{name} must be positive, got {value}")));
            }
        }
        if self.grid_default < 2 {
            return Err(Error::Usage("grid_default must be at least 2".into()));
        }
        Ok(())
    }
}

/// Grid approximation of the sup norm of a curve.
pub fn sup_norm_curve(f: &Curve, g: &Grid) -> Result<f64> {
    let mut sup = 0.0_f64;
    for &x in g.points() {
        sup = sup.max(f.eval(x)?.norm());
    }
    Ok(sup)
}

/// Grid approximation of the sup norm of a two-point function over `g × g`.
pub fn sup_norm_kernel<K: SquareFn + ?Sized>(h: &K, g: &Grid) -> Result<f64> {
    let mut sup = 0.0_f64;
    for &x in g.points() {
        for &y in g.points() {
            sup = sup.max(h.eval(x, y)?.norm());
        }
    }
    Ok(sup)
}
